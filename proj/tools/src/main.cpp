// Command-line surface for the soil heavy-metal anomaly pipeline.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "soilanom/pipeline.hpp"
#include "soilanom/synthgen.hpp"

namespace {

using namespace soilanom;

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> overrides;  // key=value
    bool print_config = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "flat key=value config file");
    cmd->add_option("--set", opts.overrides, "override a config key, e.g. --set dbscan.eps=1.2");
    cmd->add_flag("--print-config", opts.print_config, "dump effective config and exit");
}

PipelineConfig build_config(const CommonOpts& opts) {
    PipelineConfig cfg;
    if (!opts.config_path.empty()) load_config_file(cfg, opts.config_path);
    for (const auto& kv : opts.overrides) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("--set expects key=value, got: " + kv);
        cfg.apply(kv.substr(0, eq), kv.substr(eq + 1));
    }
    return cfg;
}

bool maybe_print_config(const CommonOpts& opts, const PipelineConfig& cfg) {
    if (!opts.print_config) return false;
    for (const auto& [k, v] : cfg.flatten()) std::cout << k << " = " << v << "\n";
    return true;
}

void print_warnings(const Warnings& w) {
    for (const auto& msg : w) std::cerr << "warning: " << msg << "\n";
}

int cmd_stats(const PipelineConfig& cfg) {
    auto d = load_dataset(cfg.input_path);
    auto s = descriptive_stats(d);
    std::printf("%-6s %5s %10s %10s %10s %10s %10s %10s %10s\n", "metal", "count", "mean", "std",
                "min", "p25", "median", "p75", "max");
    for (std::size_t m = 0; m < kNumMetals; ++m) {
        const auto& v = s.per_metal[m];
        std::printf("%-6s %5zu %10.3f %10.3f %10.3f %10.3f %10.3f %10.3f %10.3f\n", kMetals[m],
                    v.count, v.mean, v.stddev, v.min, v.p25, v.median, v.p75, v.max);
    }
    return 0;
}

int cmd_correlate(const PipelineConfig& cfg) {
    auto d = load_dataset(cfg.input_path);
    Warnings w;
    auto r = pearson_matrix(feature_matrix(d), &w);
    print_warnings(w);
    std::printf("%-6s", "");
    for (auto m : kMetals) std::printf(" %7s", m);
    std::printf("\n");
    for (std::size_t a = 0; a < kNumMetals; ++a) {
        std::printf("%-6s", kMetals[a]);
        for (std::size_t b = 0; b < kNumMetals; ++b)
            std::printf(" %7.3f", r[a * kNumMetals + b]);
        std::printf("\n");
    }
    return 0;
}

int cmd_kdist(const PipelineConfig& cfg, const std::string& out_path) {
    auto d = load_dataset(cfg.input_path);
    Warnings w;
    auto z = standardize(feature_matrix(d), &w);
    auto profile = k_distance_profile(z, cfg.dbscan.min_samples);
    double eps = suggest_eps(profile, &w);
    print_warnings(w);
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw std::runtime_error("cannot write " + out_path);
        out = &file;
    }
    (*out) << "rank,distance\n";
    out->precision(10);
    for (std::size_t i = 0; i < profile.size(); ++i) (*out) << i << ',' << profile[i] << '\n';
    std::cerr << "suggested eps (knee): " << eps << " (advisory, not applied)\n";
    return 0;
}

int cmd_detect(const PipelineConfig& cfg) {
    auto report = run_pipeline(cfg);
    print_warnings(report.warnings);
    std::printf("samples: %zu\n", report.dataset.size());
    std::printf("iforest flags:   %d\n", report.consensus.totals.iforest);
    std::printf("dbscan noise:    %d\n", report.consensus.totals.dbscan);
    std::printf("pca flags:       %d\n", report.consensus.totals.pca);
    std::printf("consensus (>=%d): %d\n", report.consensus.vote_threshold,
                report.consensus.totals.consensus);
    for (std::size_t i = 0; i < report.dataset.size(); ++i) {
        if (!report.consensus.consensus_flag[i]) continue;
        const auto& s = report.dataset.samples[i];
        std::printf("  %-8s site=%-11s votes=%d hi_child=%.3f\n", s.sample_id.c_str(),
                    s.site.c_str(), report.consensus.votes[i],
                    report.risks[i].hazard_child.hi);
    }
    return 0;  // anomalies are findings, not errors
}

int cmd_risk(const PipelineConfig& cfg) {
    auto d = load_dataset(cfg.input_path);
    Warnings w;
    std::printf("%-10s %-11s %10s %10s %12s %12s\n", "sample", "site", "hi_adult", "hi_child",
                "ilcr_adult", "ilcr_child");
    for (const auto& s : d.samples) {
        auto rp = risk_profile(s, cfg.toxicity, cfg.exposure, &w);
        std::printf("%-10s %-11s %10.4f %10.4f %12.4e %12.4e  %s\n", s.sample_id.c_str(),
                    s.site.c_str(), rp.hazard_adult.hi, rp.hazard_child.hi, rp.ilcr_adult.ilcr,
                    rp.ilcr_child.ilcr, to_string(rp.ilcr_child.band));
    }
    print_warnings(w);
    return 0;
}

int cmd_synth(std::uint64_t seed, const std::string& out_path) {
    GeneratorConfig gc;
    gc.seed = seed;
    auto d = generate(gc);
    auto csv = to_csv(d);
    if (out_path.empty() || out_path == "-") {
        std::cout << csv;
    } else {
        std::ofstream f(out_path);
        if (!f) throw std::runtime_error("cannot write " + out_path);
        f << csv;
        std::cerr << "wrote " << d.size() << " samples to " << out_path << "\n";
    }
    return 0;
}

int cmd_report(const PipelineConfig& cfg) {
    auto report = run_pipeline(cfg);
    print_warnings(report.warnings);
    emit_report(report, cfg.output_dir);
    std::cout << "report written to " << cfg.output_dir << " (digest " << report.config_digest
              << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"consensus anomaly detection for soil heavy-metal surveys"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string input, out_path, out_dir;
    std::uint64_t seed = 42;

    auto* stats = app.add_subcommand("stats", "descriptive statistics per metal");
    stats->add_option("input", input, "input CSV")->required();
    add_common(stats, opts);

    auto* correlate = app.add_subcommand("correlate", "Pearson correlation matrix");
    correlate->add_option("input", input, "input CSV")->required();
    add_common(correlate, opts);

    auto* kdist = app.add_subcommand("kdist", "sorted k-distance profile (CSV)");
    kdist->add_option("input", input, "input CSV")->required();
    kdist->add_option("--out", out_path, "output CSV path (default stdout)");
    add_common(kdist, opts);

    auto* detect = app.add_subcommand("detect", "run detectors and consensus vote");
    detect->add_option("input", input, "input CSV")->required();
    add_common(detect, opts);

    auto* risk = app.add_subcommand("risk", "hazard index and ILCR per sample");
    risk->add_option("input", input, "input CSV")->required();
    bool recompute = false;
    risk->add_flag("--recompute-risk", recompute, "recompute instead of using given columns");
    add_common(risk, opts);

    auto* synth = app.add_subcommand("synth", "generate the calibrated synthetic dataset");
    synth->add_option("--seed", seed, "generator seed");
    synth->add_option("--out", out_path, "output CSV path (default stdout)");

    auto* report = app.add_subcommand("report", "full pipeline with file outputs");
    report->add_option("input", input, "input CSV")->required();
    report->add_option("--out", out_dir, "output directory");
    report->add_option("--seed", seed, "isolation forest seed override");
    bool report_recompute = false;
    report->add_flag("--recompute-risk", report_recompute, "recompute risk indices");
    add_common(report, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        PipelineConfig cfg = build_config(opts);
        if (!input.empty()) cfg.input_path = input;
        if (report->parsed()) {
            if (!out_dir.empty()) cfg.output_dir = out_dir;
            if (report->count("--seed")) cfg.iforest.seed = seed;
            if (report_recompute) cfg.recompute_risk = true;
        }
        if (risk->parsed() && recompute) cfg.recompute_risk = true;
        if (maybe_print_config(opts, cfg)) return 0;

        if (stats->parsed()) return cmd_stats(cfg);
        if (correlate->parsed()) return cmd_correlate(cfg);
        if (kdist->parsed()) return cmd_kdist(cfg, out_path);
        if (detect->parsed()) return cmd_detect(cfg);
        if (risk->parsed()) return cmd_risk(cfg);
        if (synth->parsed()) return cmd_synth(seed, out_path);
        if (report->parsed()) return cmd_report(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
