#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <random>
#include <set>

#include "soilanom/dbscan.hpp"
#include "soilanom/geodata.hpp"

using namespace soilanom;

namespace {

FeatureMatrix points(std::vector<std::vector<double>> rows) {
    FeatureMatrix m;
    for (std::size_t j = 0; j < rows.front().size(); ++j)
        m.columns.push_back("c" + std::to_string(j));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        m.row_ids.push_back("p" + std::to_string(i));
        for (double v : rows[i]) m.values.push_back(v);
    }
    return m;
}

// Independent reference: plain textbook DBSCAN on a precomputed
// adjacency list, BFS expansion. Structured differently from the
// library implementation on purpose.
std::vector<int> reference_dbscan(const FeatureMatrix& m, double eps, int min_samples) {
    const std::size_t n = m.rows(), d = m.cols();
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0;
            for (std::size_t c = 0; c < d; ++c) {
                double diff = m.at(i, c) - m.at(j, c);
                s += diff * diff;
            }
            if (std::sqrt(s) <= eps) adj[i].push_back(j);  // includes i itself
        }
    std::vector<bool> core(n);
    for (std::size_t i = 0; i < n; ++i) core[i] = (int)adj[i].size() >= min_samples;
    std::vector<int> label(n, -1);
    int next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!core[i] || label[i] != -1) continue;
        int cl = next++;
        std::queue<std::size_t> q;
        label[i] = cl;
        q.push(i);
        while (!q.empty()) {
            std::size_t p = q.front();
            q.pop();
            if (!core[p]) continue;
            for (std::size_t nb : adj[p])
                if (label[nb] == -1) {
                    label[nb] = cl;
                    q.push(nb);
                }
        }
    }
    return label;
}

// Checks two labelings describe the same partition (clusters may be
// numbered differently); noise sets must match exactly.
bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return false;
    std::map<int, int> fwd, rev;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if ((a[i] == -1) != (b[i] == -1)) return false;
        if (a[i] == -1) continue;
        auto [itf, newf] = fwd.emplace(a[i], b[i]);
        if (!newf && itf->second != b[i]) return false;
        auto [itr, newr] = rev.emplace(b[i], a[i]);
        if (!newr && itr->second != a[i]) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("k-distance of three collinear points") {
    auto m = points({{0}, {1}, {2}});
    auto prof = k_distance_profile(m, 1);
    REQUIRE(prof.size() == 3);
    CHECK(prof[0] == doctest::Approx(1.0));
    CHECK(prof[1] == doctest::Approx(1.0));
    CHECK(prof[2] == doctest::Approx(1.0));
    CHECK_THROWS_AS(k_distance_profile(m, 3), std::runtime_error);
}

TEST_CASE("a far outlier appends one large k-distance") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 0.05);
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < 8; ++i) rows.push_back({g(rng), g(rng)});
    for (int i = 0; i < 8; ++i) rows.push_back({10 + g(rng), g(rng)});
    auto base = k_distance_profile(points(rows), 1);
    CHECK(base.back() < 1.0);
    rows.push_back({500.0, 500.0});
    auto withfar = k_distance_profile(points(rows), 1);
    CHECK(withfar.back() > 100.0);
}

TEST_CASE("suggest_eps finds the knee before a jump") {
    CHECK(suggest_eps({1, 1, 1, 1, 10}) == doctest::Approx(1.0));
}

TEST_CASE("suggest_eps degenerate profiles warn") {
    Warnings w;
    double flat = suggest_eps({2, 2, 2, 2}, &w);
    CHECK(flat == doctest::Approx(2.0));
    CHECK(!w.empty());
    w.clear();
    double lin = suggest_eps({1, 2, 3, 4, 5}, &w);
    CHECK(lin == doctest::Approx(3.0));
    CHECK(!w.empty());
}

TEST_CASE("one dense group clusters with no noise") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g(0.0, 0.1);
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < 10; ++i) rows.push_back({g(rng), g(rng)});
    auto labels = cluster(points(rows), DbscanConfig{1.5, 5});
    CHECK(labels.n_clusters == 1);
    for (int l : labels.labels) CHECK(l == 0);
}

TEST_CASE("an isolated point is noise") {
    std::mt19937_64 rng(6);
    std::normal_distribution<double> g(0.0, 0.1);
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < 10; ++i) rows.push_back({g(rng), g(rng)});
    rows.push_back({100.0, 0.0});
    auto labels = cluster(points(rows), DbscanConfig{1.5, 5});
    CHECK(labels.n_clusters == 1);
    CHECK(labels.labels.back() == -1);
    CHECK(std::count(labels.labels.begin(), labels.labels.end(), -1) == 1);
}

TEST_CASE("matches a brute-force reference on 200 random instances") {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    for (int rep = 0; rep < 200; ++rep) {
        std::size_t n = 5 + rng() % 46, d = 1 + rng() % 8;
        std::vector<std::vector<double>> rows(n, std::vector<double>(d));
        for (auto& r : rows)
            for (auto& v : r) v = coord(rng);
        auto m = points(rows);
        double eps = 0.2 + 3.0 * std::generate_canonical<double, 53>(rng);
        int min_samples = 2 + int(rng() % 6);
        auto got = cluster(m, DbscanConfig{eps, min_samples});
        auto want = reference_dbscan(m, eps, min_samples);
        CHECK(same_partition(got.labels, want));
        int want_clusters = want.empty() ? 0 : *std::max_element(want.begin(), want.end()) + 1;
        CHECK(got.n_clusters == want_clusters);
    }
}

TEST_CASE("noise count is non-increasing in eps") {
    std::mt19937_64 rng(888);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    for (int rep = 0; rep < 10; ++rep) {
        std::size_t n = 20 + rng() % 30;
        std::vector<std::vector<double>> rows(n, std::vector<double>(3));
        for (auto& r : rows)
            for (auto& v : r) v = coord(rng);
        auto m = points(rows);
        long prev = long(n) + 1;
        for (double eps : {0.3, 0.8, 1.5, 3.0, 6.0}) {
            auto labels = cluster(m, DbscanConfig{eps, 4});
            long noise = std::count(labels.labels.begin(), labels.labels.end(), -1);
            CHECK(noise <= prev);
            prev = noise;
        }
    }
}

TEST_CASE("fixture: eps knee and noise-free clustering") {
    Dataset d = load_dataset(SOILANOM_FIXTURE_PATH);
    auto z = standardize(feature_matrix(d));
    auto prof = k_distance_profile(z, 5);
    double knee = suggest_eps(prof);
    CHECK(knee >= 1.0);
    CHECK(knee <= 2.0);
    auto labels = cluster(z, DbscanConfig{1.5, 5});
    CHECK(std::count(labels.labels.begin(), labels.labels.end(), -1) == 0);
    CHECK(labels.n_clusters >= 3);
    CHECK(labels.n_clusters <= 7);
}
