#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "soilanom/geodata.hpp"

namespace soilanom {

struct ForestConfig {
    int n_trees = 200;
    double contamination = 0.15;  // fraction in (0, 0.5]
    int subsample = 256;          // psi; clamped to n at fit time
    std::uint64_t seed = 42;
};

/// Per-detector output: one score and one flag per sample.
struct DetectorResult {
    std::string detector_name;
    std::vector<double> scores;
    std::vector<bool> is_anomaly;
    std::string params_used;
};

/// Expected path length c(n) of an unsuccessful search in a binary
/// search tree of n points: 2H(n-1) - 2(n-1)/n. c(0) = c(1) = 0.
double expected_path_length(std::size_t n);

struct IsolationTree {
    // flat node array; leaves have feature == -1 and carry the leaf size
    struct Node {
        int feature = -1;
        double split = 0.0;
        int left = -1;
        int right = -1;
        std::size_t size = 0;
    };
    std::vector<Node> nodes;

    double path_length(std::span<const double> x) const;
};

struct Forest {
    std::vector<IsolationTree> trees;
    std::size_t subsample_used = 0;  // psi after clamping
    int height_limit = 0;
    std::vector<std::string> columns;  // training column set
    ForestConfig config;
};

/// Grows n_trees isolation trees, each on a fresh psi-subsample drawn
/// without replacement, height limit ceil(log2 psi). Deterministic for
/// a given seed; per-tree RNG streams are derived from the master seed.
Forest fit_forest(const FeatureMatrix& m, const ForestConfig& cfg, Warnings* warnings = nullptr);

/// Anomaly scores s = 2^(-E[h]/c(psi)), higher = more anomalous; all in (0,1).
std::vector<double> score_samples(const Forest& f, const FeatureMatrix& m);

/// Flags the ceil(contamination * n) largest scores, ties broken by
/// lower row index.
std::vector<bool> label_anomalies(const std::vector<double>& scores, double contamination);

/// Flags the k largest values, ties by lower index. Shared by the
/// isolation-forest and reconstruction-error labeling rules.
std::vector<bool> flag_top_k(const std::vector<double>& values, std::size_t k);

DetectorResult run_iforest(const FeatureMatrix& m, const ForestConfig& cfg,
                           Warnings* warnings = nullptr);

}  // namespace soilanom
