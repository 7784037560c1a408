#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>

#include "soilanom/geodata.hpp"

namespace soilanom {

enum class Receptor { Adult, Child };
enum class Pathway { Ingestion, Dermal, Inhalation };

const char* to_string(Receptor r);
const char* to_string(Pathway p);

/// Exposure parameters for one receptor. Defaults follow USEPA
/// residential soil screening assumptions; everything is overridable
/// through the flat config.
struct ReceptorParams {
    double ing_rate = 100.0;    // IngR, mg/day
    double inh_rate = 20.0;     // InhR, m3/day
    double skin_area = 5700.0;  // SA, cm2
    double adherence = 0.07;    // AF, mg/(cm2*day)
    double exposure_freq = 350.0;  // EF, days/yr
    double exposure_dur = 24.0;    // ED, yr
    double body_weight = 70.0;     // BW, kg
    double at_carcinogenic = 25550.0;  // AT_ca, days (70 yr lifetime)

    double at_noncarcinogenic() const { return exposure_dur * 365.0; }
};

struct ExposureParams {
    ReceptorParams adult;
    ReceptorParams child;
    double pef = 1.36e9;  // particulate emission factor, m3/kg
    static constexpr double kConversion = 1e-6;  // kg/mg

    ExposureParams();
    const ReceptorParams& receptor(Receptor r) const {
        return r == Receptor::Adult ? adult : child;
    }
    /// Dermal absorption fraction per metal (RAGS Part E style).
    std::array<double, kNumMetals> abs_dermal{};
};

/// Per-metal toxicity values. RfDs in mg/(kg*day), slope factors in
/// (mg/(kg*day))^-1. Dermal RfD defaults to RfD_ing * GIABS.
struct MetalToxicity {
    double rfd_ing = 0.0;
    double rfd_derm = 0.0;
    double rfd_inh = 0.0;
    bool carcinogen = false;
    double sf_ing = 0.0;
    double sf_derm = 0.0;
    double sf_inh = 0.0;
};

struct ToxicityTable {
    std::array<MetalToxicity, kNumMetals> metals{};

    /// USEPA IRIS/RSL-style defaults for the eight metals; carcinogens
    /// {As, Cd, Cr, Ni, Pb} via ingestion slope factors.
    static ToxicityTable defaults();
    const MetalToxicity& of(std::size_t metal_idx) const { return metals[metal_idx]; }
};

/// Chronic daily intake for one concentration and pathway, mg/(kg*day).
/// `carcinogenic` selects AT_ca instead of AT_nc.
double cdi(double conc, Pathway pathway, std::size_t metal_idx, const ExposureParams& p,
           Receptor receptor, bool carcinogenic = false);

struct HazardResult {
    std::array<double, kNumMetals> hq{};
    double hi = 0.0;
};

HazardResult hazard_index(const SampleRecord& sample, const ToxicityTable& t,
                          const ExposureParams& p, Receptor receptor,
                          Warnings* warnings = nullptr);

enum class IlcrBand { Negligible, Acceptable, Unacceptable };

const char* to_string(IlcrBand b);

struct IlcrResult {
    double ilcr = 0.0;
    IlcrBand band = IlcrBand::Negligible;
};

/// ILCR = sum over carcinogenic metals and pathways of CDI_ca * SF.
/// Bands: < 1e-6 negligible, 1e-6..1e-4 acceptable, > 1e-4 unacceptable.
IlcrResult ilcr(const SampleRecord& sample, const ToxicityTable& t, const ExposureParams& p,
                Receptor receptor, Warnings* warnings = nullptr);

/// Full per-sample risk profile for both receptors.
struct RiskProfile {
    HazardResult hazard_adult;
    HazardResult hazard_child;
    IlcrResult ilcr_adult;
    IlcrResult ilcr_child;
};

RiskProfile risk_profile(const SampleRecord& sample, const ToxicityTable& t,
                         const ExposureParams& p, Warnings* warnings = nullptr);

}  // namespace soilanom
