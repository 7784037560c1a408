#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace soilanom {

/// Metals tracked by the pipeline, in fixed column order.
inline constexpr std::array<const char*, 8> kMetals = {
    "As", "Cd", "Cr", "Cu", "Hg", "Ni", "Pb", "Zn"};

inline constexpr std::size_t kNumMetals = kMetals.size();

/// Messages produced by operations that degrade gracefully
/// (zero-variance columns, skipped risk pathways, ...).
using Warnings = std::vector<std::string>;

struct RiskColumns {
    double hi_adult = 0.0;
    double hi_child = 0.0;
    double ilcr_adult = 0.0;
    double ilcr_child = 0.0;
};

/// One topsoil sample: identifiers, control flag, eight metal
/// concentrations in mg/kg, and optionally the risk indices that
/// came with the input file.
struct SampleRecord {
    std::string sample_id;
    std::string site;  // "S1".."S12" or "Residential"
    bool is_control = false;
    std::array<double, kNumMetals> conc{};  // mg/kg, kMetals order
    std::optional<RiskColumns> risk_given;

    double concentration(const std::string& metal) const;
};

struct Dataset {
    std::vector<SampleRecord> samples;

    std::size_t size() const { return samples.size(); }
};

/// n x d numeric matrix with column names and a row -> sample_id map.
/// When standardized, col_means/col_stds hold the population moments
/// needed for the inverse transform.
struct FeatureMatrix {
    std::vector<double> values;  // row-major, n*d
    std::vector<std::string> columns;
    std::vector<std::string> row_ids;
    bool standardized = false;
    std::vector<double> col_means;
    std::vector<double> col_stds;

    std::size_t rows() const { return row_ids.size(); }
    std::size_t cols() const { return columns.size(); }

    double at(std::size_t i, std::size_t j) const { return values[i * cols() + j]; }
    double& at(std::size_t i, std::size_t j) { return values[i * cols() + j]; }
    std::span<const double> row(std::size_t i) const {
        return {values.data() + i * cols(), cols()};
    }
};

struct MetalStats {
    std::size_t count = 0;
    double mean = 0.0;
    double stddev = 0.0;  // sample std, n-1 denominator
    double min = 0.0;
    double p25 = 0.0;
    double median = 0.0;
    double p75 = 0.0;
    double max = 0.0;
    bool std_defined = true;  // false when n == 1
};

struct DescriptiveStats {
    std::array<MetalStats, kNumMetals> per_metal{};
};

/// Parses the soil-sample CSV. Header must name sample_id, site,
/// is_control and the eight metals; risk columns are optional.
/// Malformed rows raise std::runtime_error naming row and column.
Dataset load_dataset(const std::string& path);

/// Parses CSV content already in memory (same contract as load_dataset).
Dataset parse_dataset_csv(const std::string& content, const std::string& origin = "<memory>");

/// Extracts the raw n x 8 concentration matrix from a dataset.
FeatureMatrix feature_matrix(const Dataset& d);

DescriptiveStats descriptive_stats(const Dataset& d);

/// Quantile by linear interpolation between order statistics ("type 7").
/// `sorted` must be ascending and non-empty; q in [0, 1].
double quantile_linear(std::span<const double> sorted, double q);

/// Pearson correlation matrix, d x d row-major. Zero-variance columns
/// get correlation 0 against everything (diagonal stays 1) with a warning.
std::vector<double> pearson_matrix(const FeatureMatrix& m, Warnings* warnings = nullptr);

/// Pearson r between two equal-length series; 0 if either has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

/// Per-column z-scores using population std (n denominator). Constant
/// columns become all zeros with a warning. Requires n >= 2 and an
/// unstandardized input.
FeatureMatrix standardize(const FeatureMatrix& m, Warnings* warnings = nullptr);

/// Inverse of standardize: z * std + mean per column.
FeatureMatrix destandardize(const FeatureMatrix& m);

}  // namespace soilanom
