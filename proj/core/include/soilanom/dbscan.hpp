#pragma once

#include <vector>

#include "soilanom/geodata.hpp"
#include "soilanom/iforest.hpp"

namespace soilanom {

struct DbscanConfig {
    double eps = 1.5;
    int min_samples = 5;  // neighborhood count includes the point itself
};

struct ClusterLabels {
    std::vector<int> labels;  // -1 = noise, 0..k-1 = clusters
    int n_clusters = 0;
};

/// Sorted (ascending) distance from each sample to its k-th nearest
/// neighbor, self excluded. Euclidean metric. Requires n > k >= 1.
std::vector<double> k_distance_profile(const FeatureMatrix& m, int k);

/// Knee of the sorted profile: the point of maximum perpendicular
/// distance to the chord from first to last value. Advisory only.
double suggest_eps(const std::vector<double>& profile, Warnings* warnings = nullptr);

/// DBSCAN with deterministic row-index scan order for cluster seeding
/// and border assignment. Brute-force O(n^2) neighbor search.
ClusterLabels cluster(const FeatureMatrix& m, const DbscanConfig& cfg);

/// Detector adapter: noise points (label -1) are the anomalies; the
/// score is the distance to the min_samples-th nearest neighbor.
DetectorResult run_dbscan(const FeatureMatrix& m, const DbscanConfig& cfg);

}  // namespace soilanom
