#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "soilanom/pipeline.hpp"
#include "soilanom/synthgen.hpp"

using namespace soilanom;
namespace fs = std::filesystem;

namespace {

PipelineConfig fixture_config() {
    PipelineConfig cfg;
    cfg.input_path = SOILANOM_FIXTURE_PATH;
    return cfg;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

std::string drop_timestamp(std::string s) {
    return std::regex_replace(s, std::regex("\"timestamp\": \"[^\"]*\""), "\"timestamp\": \"\"");
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag)
        : path(fs::temp_directory_path() / ("soilanom_test_" + tag)) {
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("fixture run reproduces the published detector counts") {
    auto rep = run_pipeline(fixture_config());
    CHECK(rep.consensus.totals.iforest == 12);
    CHECK(rep.consensus.totals.pca == 12);
    CHECK(rep.consensus.totals.dbscan == 0);
    CHECK(rep.consensus.totals.consensus == 6);
    for (std::size_t i = 0; i < rep.dataset.size(); ++i)
        if (rep.consensus.consensus_flag[i]) CHECK(rep.dataset.samples[i].site == "S3");
    CHECK(rep.validation.control_consensus_count == 0);
    CHECK_FALSE(rep.risks_recomputed);  // fixture carries its risk columns
}

TEST_CASE("tiny eps floods the noise class but the pipeline completes") {
    auto cfg = fixture_config();
    cfg.dbscan.eps = 0.1;
    auto rep = run_pipeline(cfg);
    int noise = 0;
    for (bool b : rep.dbscan.is_anomaly) noise += b;
    CHECK(noise > 50);
    CHECK(rep.consensus.votes.size() == 78);
}

TEST_CASE("a one-sample input fails cleanly at standardization") {
    Dataset d;
    SampleRecord s;
    s.sample_id = "only";
    s.site = "S1";
    s.conc = {1, 2, 3, 4, 5, 6, 7, 8};
    d.samples.push_back(s);
    CHECK_THROWS_WITH_AS(run_pipeline(PipelineConfig{}, d),
                         doctest::Contains("n >= 2"), std::runtime_error);
}

TEST_CASE("two identical runs produce identical reports") {
    auto a = run_pipeline(fixture_config());
    auto b = run_pipeline(fixture_config());
    CHECK(a.config_digest == b.config_digest);
    CHECK(a.iforest.scores == b.iforest.scores);
    CHECK(a.dbscan.scores == b.dbscan.scores);
    CHECK(a.pca.scores == b.pca.scores);
    CHECK(a.consensus.votes == b.consensus.votes);
    CHECK(a.validation.hi_ratio == b.validation.hi_ratio);
    CHECK(a.validation.recon_error_hi_r == b.validation.recon_error_hi_r);

    TempDir d1("det1"), d2("det2");
    emit_report(a, d1.path.string());
    emit_report(b, d2.path.string());
    CHECK(drop_timestamp(slurp(d1.path / "summary.json")) ==
          drop_timestamp(slurp(d2.path / "summary.json")));
}

TEST_CASE("emit_report writes the full artifact set") {
    auto rep = run_pipeline(fixture_config());
    TempDir dir("emit");
    emit_report(rep, dir.path.string());
    for (const char* name : {"summary.json", "anomalies.csv", "count_matrix.csv",
                             "kdistance.csv", "pca_scatter.csv", "stats.csv"})
        CHECK(fs::exists(dir.path / name));

    // anomalies.csv: header + one row per sample, flags reconstruct consensus
    std::istringstream in(slurp(dir.path / "anomalies.csv"));
    std::string line;
    std::getline(in, line);  // header
    int rows = 0, consensus = 0;
    while (std::getline(in, line)) {
        ++rows;
        std::vector<std::string> fields;
        std::istringstream ls(line);
        for (std::string f; std::getline(ls, f, ',');) fields.push_back(f);
        REQUIRE(fields.size() == 15);
        int votes = std::stoi(fields[9]);
        int flag = std::stoi(fields[10]);
        CHECK(flag == (votes >= 2 ? 1 : 0));
        consensus += flag;
    }
    CHECK(rows == 78);
    CHECK(consensus == rep.consensus.totals.consensus);
}

TEST_CASE("dotted config keys apply and unknown keys are rejected") {
    PipelineConfig cfg;
    cfg.apply("iforest.n_trees", "123");
    CHECK(cfg.iforest.n_trees == 123);
    cfg.apply("dbscan.eps", "2.5");
    CHECK(cfg.dbscan.eps == doctest::Approx(2.5));
    cfg.apply("pca.quantile", "0.9");
    CHECK(cfg.pca.quantile == doctest::Approx(0.9));
    CHECK_THROWS_AS(cfg.apply("nonsense.key", "1"), std::runtime_error);
}

TEST_CASE("config digest is stable under key reordering") {
    PipelineConfig a, b;
    a.apply("iforest.n_trees", "50");
    a.apply("dbscan.eps", "1.25");
    b.apply("dbscan.eps", "1.25");
    b.apply("iforest.n_trees", "50");
    CHECK(a.digest() == b.digest());
    PipelineConfig c;
    CHECK(a.digest() != c.digest());
}

TEST_CASE("config files parse flat keys and comments") {
    TempDir dir("cfg");
    fs::create_directories(dir.path);
    std::ofstream f(dir.path / "run.conf");
    f << "# comment line\n"
      << "iforest.n_trees = 99\n"
      << "dbscan.min_samples = 4\n";
    f.close();
    PipelineConfig cfg;
    load_config_file(cfg, (dir.path / "run.conf").string());
    CHECK(cfg.iforest.n_trees == 99);
    CHECK(cfg.dbscan.min_samples == 4);
}
