#pragma once

#include <map>
#include <string>
#include <vector>

#include "soilanom/geodata.hpp"
#include "soilanom/iforest.hpp"
#include "soilanom/risk.hpp"

namespace soilanom {

struct SiteCounts {
    int iforest = 0;
    int dbscan = 0;
    int pca = 0;
    int consensus = 0;
};

struct ConsensusReport {
    std::vector<int> votes;            // per sample, 0..3
    std::vector<bool> consensus_flag;  // votes >= threshold
    int vote_threshold = 2;
    std::map<std::string, SiteCounts> count_matrix;  // keyed by site label
    SiteCounts totals;
};

/// Majority vote over the three detector results. All results must
/// cover the same samples in the same order as the dataset.
ConsensusReport vote(const DetectorResult& iforest, const DetectorResult& dbscan,
                     const DetectorResult& pca, const Dataset& dataset,
                     int vote_threshold = 2);

struct MetalDeviation {
    std::string metal;
    double z = 0.0;
};

/// Metals of one sample ranked by |z| descending, sign retained.
/// Zero z-scores are dropped.
std::vector<MetalDeviation> characterize_anomaly(std::span<const double> sample_z,
                                                 std::span<const std::string> columns);

struct GroupRiskStats {
    std::size_t count = 0;
    double mean_hi = 0.0;
    double median_hi = 0.0;
    double mean_ilcr = 0.0;
    double median_ilcr = 0.0;
};

struct ValidationSummary {
    GroupRiskStats anomalous;  // consensus anomalies
    GroupRiskStats normal;
    bool hi_ratio_defined = false;
    double hi_ratio = 0.0;  // anomalous mean HI / normal mean HI (child)
    // same ratio for the per-method union, reported alongside
    bool hi_ratio_union_defined = false;
    double hi_ratio_union = 0.0;
    double recon_error_hi_r = 0.0;  // Pearson r(PCA recon error, child HI)
    int control_consensus_count = 0;
    // per consensus anomaly: sample_id -> ranked metal deviations
    std::vector<std::pair<std::string, std::vector<MetalDeviation>>> attributions;
};

/// Multi-factor validation: group risk statistics, HI ratio,
/// reconstruction-error/HI correlation, control check, and per-anomaly
/// metal attribution from the standardized matrix.
ValidationSummary validate(const ConsensusReport& report, const std::vector<RiskProfile>& risks,
                           const Dataset& dataset, const std::vector<double>& recon_errors,
                           const FeatureMatrix& standardized);

}  // namespace soilanom
