#include "soilanom/pca.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "soilanom/iforest.hpp"  // flag_top_k

namespace soilanom {

namespace {

double offdiag_norm(const std::vector<double>& a, std::size_t d) {
    double s = 0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) s += a[i * d + j] * a[i * d + j];
    return std::sqrt(2.0 * s);
}

}  // namespace

void jacobi_eigen_symmetric(std::vector<double> a, std::size_t d,
                            std::vector<double>& eigenvalues,
                            std::vector<double>& vectors) {
    // v starts as identity; rows of the final v^T are the eigenvectors
    std::vector<double> v(d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i) v[i * d + i] = 1.0;

    constexpr int kMaxSweeps = 100;
    constexpr double kTol = 1e-12;
    int sweep = 0;
    while (offdiag_norm(a, d) >= kTol) {
        if (++sweep > kMaxSweeps)
            throw std::runtime_error("jacobi_eigen_symmetric: no convergence after 100 sweeps");
        for (std::size_t p = 0; p < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                double apq = a[p * d + q];
                if (apq == 0.0) continue;
                double app = a[p * d + p], aqq = a[q * d + q];
                double theta = (aqq - app) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (std::size_t i = 0; i < d; ++i) {
                    double aip = a[i * d + p], aiq = a[i * d + q];
                    a[i * d + p] = c * aip - s * aiq;
                    a[i * d + q] = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < d; ++i) {
                    double api = a[p * d + i], aqi = a[q * d + i];
                    a[p * d + i] = c * api - s * aqi;
                    a[q * d + i] = s * api + c * aqi;
                }
                for (std::size_t i = 0; i < d; ++i) {
                    double vip = v[i * d + p], viq = v[i * d + q];
                    v[i * d + p] = c * vip - s * viq;
                    v[i * d + q] = s * vip + c * viq;
                }
            }
        }
    }

    // sort descending, index tie-break keeps it deterministic
    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a[x * d + x] > a[y * d + y]; });

    eigenvalues.resize(d);
    vectors.assign(d * d, 0.0);
    for (std::size_t r = 0; r < d; ++r) {
        std::size_t col = order[r];
        eigenvalues[r] = a[col * d + col];
        // sign convention: largest-magnitude entry positive
        std::size_t arg = 0;
        double best = 0;
        for (std::size_t i = 0; i < d; ++i) {
            double mag = std::abs(v[i * d + col]);
            if (mag > best) {
                best = mag;
                arg = i;
            }
        }
        double sign = v[arg * d + col] >= 0 ? 1.0 : -1.0;
        for (std::size_t i = 0; i < d; ++i) vectors[r * d + i] = sign * v[i * d + col];
    }
}

std::vector<double> PcaModel::explained_variance_ratio() const {
    std::vector<double> out(eigenvalues.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = total_variance > 0 ? eigenvalues[i] / total_variance : 0.0;
    return out;
}

PcaModel fit_pca(const FeatureMatrix& m, std::size_t k) {
    const std::size_t n = m.rows(), d = m.cols();
    if (k < 1 || k > d) throw std::runtime_error("fit_pca: need 1 <= k <= d");
    if (n < 2) throw std::runtime_error("fit_pca: need n >= 2");

    PcaModel model;
    model.k = k;
    model.d = d;
    model.columns = m.columns;
    model.mean.assign(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < n; ++i) model.mean[j] += m.at(i, j);
        model.mean[j] /= static_cast<double>(n);
    }

    std::vector<double> cov(d * d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < d; ++a) {
            double da = m.at(i, a) - model.mean[a];
            for (std::size_t b = a; b < d; ++b)
                cov[a * d + b] += da * (m.at(i, b) - model.mean[b]);
        }
    }
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a; b < d; ++b) {
            cov[a * d + b] /= static_cast<double>(n - 1);
            cov[b * d + a] = cov[a * d + b];
        }
    for (std::size_t a = 0; a < d; ++a) model.total_variance += cov[a * d + a];

    std::vector<double> evals, evecs;
    jacobi_eigen_symmetric(cov, d, evals, evecs);

    model.eigenvalues.assign(evals.begin(), evals.begin() + static_cast<long>(k));
    for (auto& e : model.eigenvalues) e = std::max(e, 0.0);
    model.components.assign(evecs.begin(), evecs.begin() + static_cast<long>(k * d));
    return model;
}

std::vector<double> project(const PcaModel& model, const FeatureMatrix& m) {
    if (m.columns != model.columns)
        throw std::runtime_error("project: column set does not match fitted model");
    const std::size_t n = m.rows(), d = model.d, k = model.k;
    std::vector<double> out(n * k, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < k; ++c) {
            double s = 0;
            for (std::size_t j = 0; j < d; ++j)
                s += (m.at(i, j) - model.mean[j]) * model.components[c * d + j];
            out[i * k + c] = s;
        }
    return out;
}

std::vector<double> reconstruction_errors(const PcaModel& model, const FeatureMatrix& m) {
    if (m.columns != model.columns)
        throw std::runtime_error("reconstruction_errors: column set does not match fitted model");
    const std::size_t n = m.rows(), d = model.d, k = model.k;
    auto coords = project(model, m);
    std::vector<double> errors(n, 0.0);
    std::vector<double> recon(d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            double r = model.mean[j];
            for (std::size_t c = 0; c < k; ++c)
                r += coords[i * k + c] * model.components[c * d + j];
            recon[j] = r;
        }
        double s = 0;
        for (std::size_t j = 0; j < d; ++j) {
            double diff = m.at(i, j) - recon[j];
            s += diff * diff;
        }
        errors[i] = std::sqrt(s);
    }
    return errors;
}

ReconResult threshold_labels(const std::vector<double>& errors, double q, const PcaModel& model) {
    if (errors.empty()) throw std::runtime_error("threshold_labels: empty error vector");
    if (q <= 0.0 || q >= 1.0) throw std::runtime_error("threshold_labels: need 0 < q < 1");
    auto k = static_cast<std::size_t>(
        std::ceil((1.0 - q) * static_cast<double>(errors.size())));
    ReconResult r;
    r.errors = errors;
    r.is_anomaly = flag_top_k(errors, k);
    r.threshold = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < errors.size(); ++i)
        if (r.is_anomaly[i]) r.threshold = std::min(r.threshold, errors[i]);
    if (!std::isfinite(r.threshold)) r.threshold = 0.0;
    r.explained_variance_ratio = model.explained_variance_ratio();
    return r;
}

DetectorResult run_pca_recon(const FeatureMatrix& m, std::size_t k, double q) {
    auto model = fit_pca(m, k);
    auto errors = reconstruction_errors(model, m);
    auto rr = threshold_labels(errors, q, model);
    DetectorResult r;
    r.detector_name = "pca_recon";
    r.scores = rr.errors;
    r.is_anomaly = rr.is_anomaly;
    std::ostringstream p;
    p << "k=" << k << " quantile=" << q << " threshold=" << rr.threshold;
    r.params_used = p.str();
    return r;
}

}  // namespace soilanom
