#include "soilanom/risk.hpp"

#include <stdexcept>

namespace soilanom {

const char* to_string(Receptor r) { return r == Receptor::Adult ? "adult" : "child"; }

const char* to_string(Pathway p) {
    switch (p) {
        case Pathway::Ingestion: return "ingestion";
        case Pathway::Dermal: return "dermal";
        case Pathway::Inhalation: return "inhalation";
    }
    return "?";
}

const char* to_string(IlcrBand b) {
    switch (b) {
        case IlcrBand::Negligible: return "negligible";
        case IlcrBand::Acceptable: return "acceptable";
        case IlcrBand::Unacceptable: return "unacceptable";
    }
    return "?";
}

ExposureParams::ExposureParams() {
    child.ing_rate = 200.0;
    child.inh_rate = 10.0;
    child.skin_area = 2800.0;
    child.adherence = 0.2;
    child.exposure_freq = 350.0;
    child.exposure_dur = 6.0;
    child.body_weight = 15.0;
    child.at_carcinogenic = 25550.0;
    // dermal absorption fractions: As 0.03, 0.001 otherwise
    abs_dermal = {0.03, 0.001, 0.001, 0.001, 0.001, 0.001, 0.001, 0.001};
}

ToxicityTable ToxicityTable::defaults() {
    // metal order: As, Cd, Cr, Cu, Hg, Ni, Pb, Zn
    ToxicityTable t;
    auto set = [&](std::size_t i, double rfd_ing, double giabs, double rfd_inh, bool carc,
                   double sf_ing) {
        t.metals[i].rfd_ing = rfd_ing;
        t.metals[i].rfd_derm = rfd_ing * giabs;
        t.metals[i].rfd_inh = rfd_inh;
        t.metals[i].carcinogen = carc;
        t.metals[i].sf_ing = sf_ing;
    };
    set(0, 3.0e-4, 1.0, 3.01e-4, true, 1.5);     // As
    set(1, 1.0e-3, 0.025, 1.0e-3, true, 6.1);    // Cd
    set(2, 3.0e-3, 0.025, 2.86e-5, true, 0.5);   // Cr
    set(3, 4.0e-2, 1.0, 4.02e-2, false, 0.0);    // Cu
    set(4, 3.0e-4, 0.07, 8.57e-5, false, 0.0);   // Hg
    set(5, 2.0e-2, 0.04, 2.06e-2, true, 0.84);   // Ni
    set(6, 3.5e-3, 1.0, 3.52e-3, true, 8.5e-3);  // Pb
    set(7, 3.0e-1, 1.0, 3.0e-1, false, 0.0);     // Zn
    return t;
}

double cdi(double conc, Pathway pathway, std::size_t metal_idx, const ExposureParams& p,
           Receptor receptor, bool carcinogenic) {
    if (conc < 0) throw std::runtime_error("cdi: negative concentration");
    if (metal_idx >= kNumMetals) throw std::runtime_error("cdi: bad metal index");
    const ReceptorParams& r = p.receptor(receptor);
    const double at = carcinogenic ? r.at_carcinogenic : r.at_noncarcinogenic();
    if (at <= 0 || r.body_weight <= 0) throw std::runtime_error("cdi: invalid BW or AT");
    const double ef_ed = r.exposure_freq * r.exposure_dur;
    switch (pathway) {
        case Pathway::Ingestion:
            return conc * r.ing_rate * ef_ed * ExposureParams::kConversion / (r.body_weight * at);
        case Pathway::Dermal:
            return conc * r.skin_area * r.adherence * p.abs_dermal[metal_idx] * ef_ed *
                   ExposureParams::kConversion / (r.body_weight * at);
        case Pathway::Inhalation:
            if (p.pef <= 0) throw std::runtime_error("cdi: missing parameter PEF");
            return conc * r.inh_rate * ef_ed / (p.pef * r.body_weight * at);
    }
    return 0.0;
}

HazardResult hazard_index(const SampleRecord& sample, const ToxicityTable& t,
                          const ExposureParams& p, Receptor receptor, Warnings* warnings) {
    HazardResult out;
    constexpr Pathway kPathways[] = {Pathway::Ingestion, Pathway::Dermal, Pathway::Inhalation};
    for (std::size_t j = 0; j < kNumMetals; ++j) {
        const MetalToxicity& tox = t.of(j);
        double hq = 0;
        for (Pathway pw : kPathways) {
            double rfd = pw == Pathway::Ingestion ? tox.rfd_ing
                       : pw == Pathway::Dermal    ? tox.rfd_derm
                                                  : tox.rfd_inh;
            if (rfd <= 0) {
                if (warnings)
                    warnings->push_back(std::string("hazard_index: no RfD for ") + kMetals[j] +
                                        " " + to_string(pw) + ", pathway skipped");
                continue;
            }
            hq += cdi(sample.conc[j], pw, j, p, receptor) / rfd;
        }
        out.hq[j] = hq;
        out.hi += hq;
    }
    return out;
}

IlcrResult ilcr(const SampleRecord& sample, const ToxicityTable& t, const ExposureParams& p,
                Receptor receptor, Warnings* warnings) {
    IlcrResult out;
    bool any_carcinogen = false;
    constexpr Pathway kPathways[] = {Pathway::Ingestion, Pathway::Dermal, Pathway::Inhalation};
    for (std::size_t j = 0; j < kNumMetals; ++j) {
        const MetalToxicity& tox = t.of(j);
        if (!tox.carcinogen) continue;
        any_carcinogen = true;
        for (Pathway pw : kPathways) {
            double sf = pw == Pathway::Ingestion ? tox.sf_ing
                      : pw == Pathway::Dermal    ? tox.sf_derm
                                                 : tox.sf_inh;
            if (sf <= 0) continue;
            out.ilcr += cdi(sample.conc[j], pw, j, p, receptor, /*carcinogenic=*/true) * sf;
        }
    }
    if (!any_carcinogen && warnings)
        warnings->push_back("ilcr: no carcinogens configured, ILCR = 0");
    out.band = out.ilcr < 1e-6   ? IlcrBand::Negligible
             : out.ilcr <= 1e-4  ? IlcrBand::Acceptable
                                 : IlcrBand::Unacceptable;
    return out;
}

RiskProfile risk_profile(const SampleRecord& sample, const ToxicityTable& t,
                         const ExposureParams& p, Warnings* warnings) {
    RiskProfile r;
    r.hazard_adult = hazard_index(sample, t, p, Receptor::Adult, warnings);
    r.hazard_child = hazard_index(sample, t, p, Receptor::Child, warnings);
    r.ilcr_adult = ilcr(sample, t, p, Receptor::Adult, warnings);
    r.ilcr_child = ilcr(sample, t, p, Receptor::Child, warnings);
    return r;
}

}  // namespace soilanom
