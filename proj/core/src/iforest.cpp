#include "soilanom/iforest.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace soilanom {

namespace {
constexpr double kEulerMascheroni = 0.57721566490153286;

double harmonic(double i) { return std::log(i) + kEulerMascheroni; }

struct TreeBuilder {
    const FeatureMatrix& m;
    std::mt19937_64& rng;
    int height_limit;
    IsolationTree tree;

    // rows: indices of samples reaching this node
    int build(std::vector<std::size_t>& rows, int depth) {
        int id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        if (rows.size() <= 1 || depth >= height_limit) {
            tree.nodes[id].size = rows.size();
            return id;
        }
        const std::size_t d = m.cols();
        // features with spread among the rows at this node
        std::vector<int> candidates;
        std::vector<std::pair<double, double>> ranges(d);
        for (std::size_t j = 0; j < d; ++j) {
            double lo = m.at(rows[0], j), hi = lo;
            for (std::size_t r : rows) {
                lo = std::min(lo, m.at(r, j));
                hi = std::max(hi, m.at(r, j));
            }
            ranges[j] = {lo, hi};
            if (hi > lo) candidates.push_back(static_cast<int>(j));
        }
        if (candidates.empty()) {  // all rows identical
            tree.nodes[id].size = rows.size();
            return id;
        }
        int feat = candidates[std::uniform_int_distribution<std::size_t>(
            0, candidates.size() - 1)(rng)];
        auto [lo, hi] = ranges[feat];
        double split = std::uniform_real_distribution<double>(lo, hi)(rng);
        if (split <= lo || split >= hi) split = std::nextafter(lo, hi);

        std::vector<std::size_t> left, right;
        for (std::size_t r : rows)
            (m.at(r, feat) < split ? left : right).push_back(r);
        rows.clear();
        rows.shrink_to_fit();

        int l = build(left, depth + 1);
        int r = build(right, depth + 1);
        tree.nodes[id].feature = feat;
        tree.nodes[id].split = split;
        tree.nodes[id].left = l;
        tree.nodes[id].right = r;
        return id;
    }
};

}  // namespace

double expected_path_length(std::size_t n) {
    if (n <= 1) return 0.0;
    if (n == 2) return 1.0;
    auto nd = static_cast<double>(n);
    return 2.0 * harmonic(nd - 1.0) - 2.0 * (nd - 1.0) / nd;
}

double IsolationTree::path_length(std::span<const double> x) const {
    int id = 0;
    double depth = 0;
    while (nodes[id].feature >= 0) {
        id = x[nodes[id].feature] < nodes[id].split ? nodes[id].left : nodes[id].right;
        depth += 1.0;
    }
    return depth + expected_path_length(nodes[id].size);
}

Forest fit_forest(const FeatureMatrix& m, const ForestConfig& cfg, Warnings* warnings) {
    if (!m.standardized) throw std::runtime_error("fit_forest: matrix must be standardized");
    const std::size_t n = m.rows();
    if (n < 2) throw std::runtime_error("fit_forest: need n >= 2");
    if (cfg.n_trees < 1) throw std::runtime_error("fit_forest: n_trees must be >= 1");
    if (cfg.contamination <= 0.0 || cfg.contamination > 0.5)
        throw std::runtime_error("fit_forest: contamination must be in (0, 0.5]");
    if (cfg.subsample < 2) throw std::runtime_error("fit_forest: subsample must be >= 2");

    std::size_t psi = static_cast<std::size_t>(cfg.subsample);
    if (psi > n) {
        if (warnings)
            warnings->push_back("fit_forest: subsample " + std::to_string(psi) +
                                " clamped to n = " + std::to_string(n));
        psi = n;
    }

    Forest f;
    f.config = cfg;
    f.columns = m.columns;
    f.subsample_used = psi;
    f.height_limit = static_cast<int>(std::ceil(std::log2(static_cast<double>(psi))));
    f.trees.resize(cfg.n_trees);

    // one RNG stream per tree, derived from the master seed, so results
    // do not depend on build order
    std::mt19937_64 seeder(cfg.seed);
    std::vector<std::uint64_t> tree_seeds(cfg.n_trees);
    for (auto& s : tree_seeds) s = seeder();

    for (int t = 0; t < cfg.n_trees; ++t) {
        std::mt19937_64 rng(tree_seeds[t]);
        // partial Fisher-Yates draw of psi indices without replacement
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        for (std::size_t i = 0; i < psi; ++i) {
            std::size_t j = std::uniform_int_distribution<std::size_t>(i, n - 1)(rng);
            std::swap(idx[i], idx[j]);
        }
        std::vector<std::size_t> rows(idx.begin(), idx.begin() + static_cast<long>(psi));
        TreeBuilder b{m, rng, f.height_limit, {}};
        b.build(rows, 0);
        f.trees[t] = std::move(b.tree);
    }
    return f;
}

std::vector<double> score_samples(const Forest& f, const FeatureMatrix& m) {
    if (m.columns != f.columns)
        throw std::runtime_error("score_samples: column set does not match training matrix");
    const std::size_t n = m.rows();
    const double c_psi = expected_path_length(f.subsample_used);
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0;
        for (const auto& t : f.trees) sum += t.path_length(m.row(i));
        double eh = sum / static_cast<double>(f.trees.size());
        scores[i] = std::pow(2.0, -eh / c_psi);
    }
    return scores;
}

std::vector<bool> flag_top_k(const std::vector<double>& values, std::size_t k) {
    const std::size_t n = values.size();
    k = std::min(k, n);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    std::vector<bool> flags(n, false);
    for (std::size_t i = 0; i < k; ++i) flags[order[i]] = true;
    return flags;
}

std::vector<bool> label_anomalies(const std::vector<double>& scores, double contamination) {
    if (scores.empty()) throw std::runtime_error("label_anomalies: empty score vector");
    auto k = static_cast<std::size_t>(
        std::ceil(contamination * static_cast<double>(scores.size())));
    return flag_top_k(scores, k);
}

DetectorResult run_iforest(const FeatureMatrix& m, const ForestConfig& cfg, Warnings* warnings) {
    Forest f = fit_forest(m, cfg, warnings);
    DetectorResult r;
    r.detector_name = "iforest";
    r.scores = score_samples(f, m);
    r.is_anomaly = label_anomalies(r.scores, cfg.contamination);
    std::ostringstream p;
    p << "n_trees=" << cfg.n_trees << " contamination=" << cfg.contamination
      << " subsample=" << f.subsample_used << " seed=" << cfg.seed;
    r.params_used = p.str();
    return r;
}

}  // namespace soilanom
