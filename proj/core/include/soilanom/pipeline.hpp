#pragma once

#include <string>
#include <vector>

#include "soilanom/config.hpp"
#include "soilanom/consensus.hpp"
#include "soilanom/dbscan.hpp"
#include "soilanom/geodata.hpp"
#include "soilanom/iforest.hpp"
#include "soilanom/pca.hpp"
#include "soilanom/risk.hpp"

namespace soilanom {

/// Everything one pipeline run produces, in execution order.
struct RunReport {
    std::string timestamp;
    std::string config_digest;
    PipelineConfig config;
    Dataset dataset;
    DescriptiveStats stats;
    std::vector<double> correlation;  // d x d
    FeatureMatrix standardized;
    DetectorResult iforest;
    DetectorResult dbscan;
    DetectorResult pca;
    PcaModel pca_model;
    std::vector<double> pca_coords;  // n x k
    std::vector<double> kdistance;   // sorted profile
    double suggested_eps = 0.0;
    ConsensusReport consensus;
    std::vector<RiskProfile> risks;
    bool risks_recomputed = false;
    ValidationSummary validation;
    Warnings warnings;
};

/// load -> standardize -> three detectors -> vote -> risk -> validate.
RunReport run_pipeline(const PipelineConfig& cfg);

/// Same, for a dataset already in memory.
RunReport run_pipeline(const PipelineConfig& cfg, Dataset dataset);

/// Writes summary.json, anomalies.csv, count_matrix.csv, kdistance.csv,
/// pca_scatter.csv and stats.csv into `dir` (created if absent).
void emit_report(const RunReport& r, const std::string& dir);

}  // namespace soilanom
