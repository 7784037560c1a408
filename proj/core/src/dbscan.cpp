#include "soilanom/dbscan.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace soilanom {

namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
    double s = 0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        double d = a[j] - b[j];
        s += d * d;
    }
    return s;
}

std::vector<std::size_t> neighbors_of(const FeatureMatrix& m, std::size_t i, double eps2) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < m.rows(); ++j)
        if (sq_dist(m.row(i), m.row(j)) <= eps2) out.push_back(j);  // includes i itself
    return out;
}

}  // namespace

std::vector<double> k_distance_profile(const FeatureMatrix& m, int k) {
    const std::size_t n = m.rows();
    if (k < 1 || static_cast<std::size_t>(k) >= n)
        throw std::runtime_error("k_distance_profile: need n > k >= 1");
    std::vector<double> profile(n);
    std::vector<double> dists(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t w = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) dists[w++] = sq_dist(m.row(i), m.row(j));
        std::nth_element(dists.begin(), dists.begin() + (k - 1), dists.end());
        profile[i] = std::sqrt(dists[k - 1]);
    }
    std::sort(profile.begin(), profile.end());
    return profile;
}

double suggest_eps(const std::vector<double>& profile, Warnings* warnings) {
    const std::size_t n = profile.size();
    if (n < 3) throw std::runtime_error("suggest_eps: need at least 3 profile points");
    double y0 = profile.front(), y1 = profile.back();
    if (y1 == y0) {
        if (warnings) warnings->push_back("suggest_eps: constant profile, no knee");
        return y0;
    }
    // chord from (0, y0) to (n-1, y1); knee = max perpendicular distance
    double dx = static_cast<double>(n - 1);
    double dy = y1 - y0;
    double norm = std::sqrt(dx * dx + dy * dy);
    double best = -1.0;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double dist = std::abs(dy * static_cast<double>(i) - dx * (profile[i] - y0)) / norm;
        if (dist > best) {
            best = dist;
            best_i = i;
        }
    }
    if (best < 1e-12 * norm) {
        if (warnings) warnings->push_back("suggest_eps: no clear knee (linear profile)");
        return profile[n / 2];
    }
    return profile[best_i];
}

ClusterLabels cluster(const FeatureMatrix& m, const DbscanConfig& cfg) {
    if (cfg.eps <= 0) throw std::runtime_error("cluster: eps must be > 0");
    if (cfg.min_samples < 1) throw std::runtime_error("cluster: min_samples must be >= 1");
    const std::size_t n = m.rows();
    const double eps2 = cfg.eps * cfg.eps;
    const auto min_pts = static_cast<std::size_t>(cfg.min_samples);

    constexpr int kUnvisited = -2;
    ClusterLabels out;
    out.labels.assign(n, kUnvisited);

    int next_cluster = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (out.labels[i] != kUnvisited) continue;
        auto nbrs = neighbors_of(m, i, eps2);
        if (nbrs.size() < min_pts) {
            out.labels[i] = -1;  // may be relabeled as border later
            continue;
        }
        int cid = next_cluster++;
        out.labels[i] = cid;
        std::deque<std::size_t> frontier(nbrs.begin(), nbrs.end());
        while (!frontier.empty()) {
            std::size_t q = frontier.front();
            frontier.pop_front();
            if (out.labels[q] == -1) out.labels[q] = cid;  // border point
            if (out.labels[q] != kUnvisited) continue;
            out.labels[q] = cid;
            auto qn = neighbors_of(m, q, eps2);
            if (qn.size() >= min_pts)
                frontier.insert(frontier.end(), qn.begin(), qn.end());
        }
    }
    out.n_clusters = next_cluster;
    return out;
}

DetectorResult run_dbscan(const FeatureMatrix& m, const DbscanConfig& cfg) {
    auto labels = cluster(m, cfg);
    DetectorResult r;
    r.detector_name = "dbscan";
    const std::size_t n = m.rows();
    r.is_anomaly.resize(n);
    for (std::size_t i = 0; i < n; ++i) r.is_anomaly[i] = labels.labels[i] == -1;
    // score: distance to the min_samples-th nearest neighbor (self excluded
    // when possible), so noise points carry large scores
    r.scores.assign(n, 0.0);
    if (n > 1) {
        int k = std::min<int>(cfg.min_samples, static_cast<int>(n) - 1);
        std::vector<double> dists(n - 1);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t w = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                double s = 0;
                for (std::size_t c = 0; c < m.cols(); ++c) {
                    double d = m.at(i, c) - m.at(j, c);
                    s += d * d;
                }
                dists[w++] = s;
            }
            std::nth_element(dists.begin(), dists.begin() + (k - 1), dists.end());
            r.scores[i] = std::sqrt(dists[k - 1]);
        }
    }
    std::ostringstream p;
    p << "eps=" << cfg.eps << " min_samples=" << cfg.min_samples
      << " n_clusters=" << labels.n_clusters;
    r.params_used = p.str();
    return r;
}

}  // namespace soilanom
