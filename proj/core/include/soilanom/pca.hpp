#pragma once

#include <vector>

#include "soilanom/geodata.hpp"
#include "soilanom/iforest.hpp"

namespace soilanom {

/// PCA model from an eigendecomposition of the sample covariance
/// (n-1 denominator). Component rows are orthonormal, in descending
/// eigenvalue order, each with its largest-magnitude entry positive.
struct PcaModel {
    std::vector<double> mean;        // d
    std::vector<double> components;  // k x d row-major
    std::vector<double> eigenvalues; // k, descending, clamped at 0
    double total_variance = 0.0;     // trace of the covariance
    std::size_t k = 0;
    std::size_t d = 0;
    std::vector<std::string> columns;

    std::vector<double> explained_variance_ratio() const;
};

struct ReconResult {
    std::vector<double> errors;
    double threshold = 0.0;  // smallest flagged error
    std::vector<bool> is_anomaly;
    std::vector<double> explained_variance_ratio;
};

/// Symmetric eigendecomposition by cyclic Jacobi rotations. Returns all
/// d eigenpairs sorted descending (eigenvectors as rows of `vectors`).
/// Converges to off-diagonal Frobenius norm < 1e-12.
void jacobi_eigen_symmetric(std::vector<double> a, std::size_t d,
                            std::vector<double>& eigenvalues,
                            std::vector<double>& vectors);

PcaModel fit_pca(const FeatureMatrix& m, std::size_t k);

/// error_i = || x_i - (mean + ((x_i - mean) C^T) C) ||_2
std::vector<double> reconstruction_errors(const PcaModel& model, const FeatureMatrix& m);

/// Projection of each row onto the model's components, n x k row-major.
std::vector<double> project(const PcaModel& model, const FeatureMatrix& m);

/// Flags the ceil((1-q) * n) largest errors, ties by lower index.
ReconResult threshold_labels(const std::vector<double>& errors, double q,
                             const PcaModel& model);

DetectorResult run_pca_recon(const FeatureMatrix& m, std::size_t k, double q);

}  // namespace soilanom
