#include "soilanom/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace soilanom {

namespace {

using nlohmann::json;

std::string iso_timestamp() {
    auto now = std::chrono::system_clock::now();
    auto t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

template <class Fn>
auto stage(const std::string& name, Fn&& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        throw std::runtime_error(name + ": " + e.what());
    }
}

json detector_json(const DetectorResult& r) {
    json j;
    j["detector"] = r.detector_name;
    j["params"] = r.params_used;
    j["scores"] = r.scores;
    j["is_anomaly"] = std::vector<int>(r.is_anomaly.begin(), r.is_anomaly.end());
    int total = 0;
    for (bool b : r.is_anomaly) total += b;
    j["total_flags"] = total;
    return j;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream f(p);
    if (!f) throw std::runtime_error("emit_report: cannot write " + p.string());
    f << content;
}

}  // namespace

RunReport run_pipeline(const PipelineConfig& cfg, Dataset dataset) {
    RunReport r;
    r.timestamp = iso_timestamp();
    r.config = cfg;
    r.config_digest = cfg.digest();
    r.dataset = std::move(dataset);

    r.stats = stage("geodata.stats", [&] { return descriptive_stats(r.dataset); });
    auto raw = feature_matrix(r.dataset);
    r.correlation = stage("geodata.pearson", [&] { return pearson_matrix(raw, &r.warnings); });
    r.standardized = stage("geodata.standardize", [&] { return standardize(raw, &r.warnings); });

    r.iforest = stage("iforest", [&] { return run_iforest(r.standardized, cfg.iforest, &r.warnings); });
    r.dbscan = stage("dbscan", [&] { return run_dbscan(r.standardized, cfg.dbscan); });
    r.pca_model = stage("pca.fit", [&] {
        return fit_pca(r.standardized, static_cast<std::size_t>(cfg.pca.k));
    });
    r.pca_coords = project(r.pca_model, r.standardized);
    auto errors = stage("pca.errors", [&] {
        return reconstruction_errors(r.pca_model, r.standardized);
    });
    auto recon = stage("pca.threshold", [&] {
        return threshold_labels(errors, cfg.pca.quantile, r.pca_model);
    });
    r.pca = DetectorResult{"pca_recon", errors, recon.is_anomaly,
                           "k=" + std::to_string(cfg.pca.k) +
                               " quantile=" + std::to_string(cfg.pca.quantile)};

    r.kdistance = stage("dbscan.kdist", [&] {
        return k_distance_profile(r.standardized, cfg.dbscan.min_samples);
    });
    r.suggested_eps = suggest_eps(r.kdistance, &r.warnings);

    r.consensus = stage("consensus.vote", [&] {
        return vote(r.iforest, r.dbscan, r.pca, r.dataset, cfg.vote_threshold);
    });

    bool have_given = true;
    for (const auto& s : r.dataset.samples) have_given = have_given && s.risk_given.has_value();
    r.risks_recomputed = cfg.recompute_risk || !have_given;
    r.risks = stage("risk", [&] {
        std::vector<RiskProfile> out;
        out.reserve(r.dataset.size());
        for (const auto& s : r.dataset.samples) {
            if (!r.risks_recomputed) {
                RiskProfile rp;
                rp.hazard_adult.hi = s.risk_given->hi_adult;
                rp.hazard_child.hi = s.risk_given->hi_child;
                rp.ilcr_adult.ilcr = s.risk_given->ilcr_adult;
                rp.ilcr_child.ilcr = s.risk_given->ilcr_child;
                out.push_back(rp);
            } else {
                out.push_back(risk_profile(s, cfg.toxicity, cfg.exposure, &r.warnings));
            }
        }
        return out;
    });

    r.validation = stage("consensus.validate", [&] {
        return validate(r.consensus, r.risks, r.dataset, r.pca.scores, r.standardized);
    });
    return r;
}

RunReport run_pipeline(const PipelineConfig& cfg) {
    auto dataset = stage("geodata.load", [&] { return load_dataset(cfg.input_path); });
    return run_pipeline(cfg, std::move(dataset));
}

void emit_report(const RunReport& r, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const std::size_t n = r.dataset.size();

    // stats.csv
    {
        std::ostringstream out;
        out.precision(10);
        out << "metal,count,mean,std,min,p25,median,p75,max\n";
        for (std::size_t m = 0; m < kNumMetals; ++m) {
            const auto& s = r.stats.per_metal[m];
            out << kMetals[m] << ',' << s.count << ',' << s.mean << ',' << s.stddev << ','
                << s.min << ',' << s.p25 << ',' << s.median << ',' << s.p75 << ',' << s.max
                << '\n';
        }
        write_file(fs::path(dir) / "stats.csv", out.str());
    }

    // anomalies.csv
    {
        std::ostringstream out;
        out.precision(10);
        out << "sample_id,site,is_control,if_score,if_flag,db_score,db_flag,"
               "pca_error,pca_flag,votes,consensus,hi_adult,hi_child,ilcr_adult,ilcr_child\n";
        for (std::size_t i = 0; i < n; ++i) {
            const auto& s = r.dataset.samples[i];
            out << s.sample_id << ',' << s.site << ',' << (s.is_control ? "true" : "false") << ','
                << r.iforest.scores[i] << ',' << int(r.iforest.is_anomaly[i]) << ','
                << r.dbscan.scores[i] << ',' << int(r.dbscan.is_anomaly[i]) << ','
                << r.pca.scores[i] << ',' << int(r.pca.is_anomaly[i]) << ','
                << r.consensus.votes[i] << ',' << int(r.consensus.consensus_flag[i]) << ','
                << r.risks[i].hazard_adult.hi << ',' << r.risks[i].hazard_child.hi << ','
                << r.risks[i].ilcr_adult.ilcr << ',' << r.risks[i].ilcr_child.ilcr << '\n';
        }
        write_file(fs::path(dir) / "anomalies.csv", out.str());
    }

    // count_matrix.csv
    {
        std::ostringstream out;
        out << "site,iforest,dbscan,pca,consensus\n";
        for (const auto& [site, c] : r.consensus.count_matrix)
            out << site << ',' << c.iforest << ',' << c.dbscan << ',' << c.pca << ','
                << c.consensus << '\n';
        out << "TOTAL," << r.consensus.totals.iforest << ',' << r.consensus.totals.dbscan << ','
            << r.consensus.totals.pca << ',' << r.consensus.totals.consensus << '\n';
        write_file(fs::path(dir) / "count_matrix.csv", out.str());
    }

    // kdistance.csv
    {
        std::ostringstream out;
        out.precision(10);
        out << "rank,distance\n";
        for (std::size_t i = 0; i < r.kdistance.size(); ++i)
            out << i << ',' << r.kdistance[i] << '\n';
        write_file(fs::path(dir) / "kdistance.csv", out.str());
    }

    // pca_scatter.csv
    {
        std::ostringstream out;
        out.precision(10);
        const auto k = static_cast<std::size_t>(r.config.pca.k);
        out << "sample_id,site,pc1,pc2,error,if_flag,db_flag,pca_flag,consensus\n";
        for (std::size_t i = 0; i < n; ++i) {
            double pc1 = k > 0 ? r.pca_coords[i * k] : 0.0;
            double pc2 = k > 1 ? r.pca_coords[i * k + 1] : 0.0;
            out << r.dataset.samples[i].sample_id << ',' << r.dataset.samples[i].site << ','
                << pc1 << ',' << pc2 << ',' << r.pca.scores[i] << ','
                << int(r.iforest.is_anomaly[i]) << ',' << int(r.dbscan.is_anomaly[i]) << ','
                << int(r.pca.is_anomaly[i]) << ',' << int(r.consensus.consensus_flag[i]) << '\n';
        }
        write_file(fs::path(dir) / "pca_scatter.csv", out.str());
    }

    // summary.json
    {
        json j;
        j["timestamp"] = r.timestamp;
        j["config_digest"] = r.config_digest;
        j["config"] = r.config.flatten();
        j["n_samples"] = n;
        j["std_conventions"] = {{"descriptive_stats", "sample (n-1)"},
                                {"standardization", "population (n)"}};
        json stats;
        for (std::size_t m = 0; m < kNumMetals; ++m) {
            const auto& s = r.stats.per_metal[m];
            stats[kMetals[m]] = {{"count", s.count},   {"mean", s.mean}, {"std", s.stddev},
                                 {"min", s.min},       {"p25", s.p25},   {"median", s.median},
                                 {"p75", s.p75},       {"max", s.max}};
        }
        j["stats"] = stats;
        j["correlation"] = r.correlation;
        j["detectors"] = {detector_json(r.iforest), detector_json(r.dbscan),
                          detector_json(r.pca)};
        j["pca"] = {{"eigenvalues", r.pca_model.eigenvalues},
                    {"explained_variance_ratio", r.pca_model.explained_variance_ratio()},
                    {"components", r.pca_model.components}};
        j["suggested_eps"] = r.suggested_eps;
        j["consensus"] = {{"votes", r.consensus.votes},
                          {"flags", std::vector<int>(r.consensus.consensus_flag.begin(),
                                                     r.consensus.consensus_flag.end())},
                          {"vote_threshold", r.consensus.vote_threshold},
                          {"total", r.consensus.totals.consensus}};
        json counts;
        for (const auto& [site, c] : r.consensus.count_matrix)
            counts[site] = {{"iforest", c.iforest},
                            {"dbscan", c.dbscan},
                            {"pca", c.pca},
                            {"consensus", c.consensus}};
        j["count_matrix"] = counts;
        j["risks_recomputed"] = r.risks_recomputed;
        const auto& v = r.validation;
        json attributions = json::array();
        for (const auto& [id, devs] : v.attributions) {
            json top = json::array();
            for (const auto& dv : devs) top.push_back({{"metal", dv.metal}, {"z", dv.z}});
            attributions.push_back({{"sample_id", id}, {"deviations", top}});
        }
        j["validation"] = {
            {"anomalous",
             {{"count", v.anomalous.count},
              {"mean_hi", v.anomalous.mean_hi},
              {"median_hi", v.anomalous.median_hi},
              {"mean_ilcr", v.anomalous.mean_ilcr},
              {"median_ilcr", v.anomalous.median_ilcr}}},
            {"normal",
             {{"count", v.normal.count},
              {"mean_hi", v.normal.mean_hi},
              {"median_hi", v.normal.median_hi},
              {"mean_ilcr", v.normal.mean_ilcr},
              {"median_ilcr", v.normal.median_ilcr}}},
            {"hi_ratio", v.hi_ratio_defined ? json(v.hi_ratio) : json()},
            {"hi_ratio_union", v.hi_ratio_union_defined ? json(v.hi_ratio_union) : json()},
            {"recon_error_hi_r", v.recon_error_hi_r},
            {"control_consensus_count", v.control_consensus_count},
            {"attributions", attributions}};
        j["warnings"] = r.warnings;
        write_file(fs::path(dir) / "summary.json", j.dump(2) + "\n");
    }
}

}  // namespace soilanom
