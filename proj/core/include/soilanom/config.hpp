#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "soilanom/dbscan.hpp"
#include "soilanom/iforest.hpp"
#include "soilanom/risk.hpp"

namespace soilanom {

struct PcaConfig {
    int k = 2;
    double quantile = 0.85;
};

/// Everything a full pipeline run needs. Populated from defaults, then
/// a flat dotted-key config file, then CLI overrides (in that order).
struct PipelineConfig {
    std::string input_path;
    std::string output_dir = ".";
    ForestConfig iforest;
    DbscanConfig dbscan;
    PcaConfig pca;
    int vote_threshold = 2;
    bool recompute_risk = false;
    ExposureParams exposure;
    ToxicityTable toxicity = ToxicityTable::defaults();

    /// Applies one dotted key, e.g. "iforest.n_trees = 200" or
    /// "risk.tox.As.rfd_ing = 3e-4". Unknown keys raise.
    void apply(const std::string& key, const std::string& value);

    /// Effective settings as sorted key/value pairs (for --print-config
    /// and the config digest).
    std::map<std::string, std::string> flatten() const;

    /// FNV-1a digest of the flattened config; stable under key reordering.
    std::string digest() const;
};

/// Reads a flat "key = value" config file ('#' starts a comment).
void load_config_file(PipelineConfig& cfg, const std::string& path);

}  // namespace soilanom
