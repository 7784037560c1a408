#include "soilanom/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace soilanom {

namespace {

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

GroupRiskStats group_stats(const std::vector<double>& hi, const std::vector<double>& il) {
    GroupRiskStats g;
    g.count = hi.size();
    for (double v : hi) g.mean_hi += v;
    for (double v : il) g.mean_ilcr += v;
    if (g.count) {
        g.mean_hi /= static_cast<double>(g.count);
        g.mean_ilcr /= static_cast<double>(g.count);
    }
    g.median_hi = median_of(hi);
    g.median_ilcr = median_of(il);
    return g;
}

}  // namespace

ConsensusReport vote(const DetectorResult& iforest, const DetectorResult& dbscan,
                     const DetectorResult& pca, const Dataset& dataset, int vote_threshold) {
    const std::size_t n = dataset.size();
    if (iforest.is_anomaly.size() != n || dbscan.is_anomaly.size() != n ||
        pca.is_anomaly.size() != n)
        throw std::runtime_error("vote: detector results do not cover the same n samples");

    ConsensusReport r;
    r.vote_threshold = vote_threshold;
    r.votes.resize(n);
    r.consensus_flag.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        int v = static_cast<int>(iforest.is_anomaly[i]) + static_cast<int>(dbscan.is_anomaly[i]) +
                static_cast<int>(pca.is_anomaly[i]);
        r.votes[i] = v;
        r.consensus_flag[i] = v >= vote_threshold;
        SiteCounts& sc = r.count_matrix[dataset.samples[i].site];
        if (iforest.is_anomaly[i]) { ++sc.iforest; ++r.totals.iforest; }
        if (dbscan.is_anomaly[i]) { ++sc.dbscan; ++r.totals.dbscan; }
        if (pca.is_anomaly[i]) { ++sc.pca; ++r.totals.pca; }
        if (r.consensus_flag[i]) { ++sc.consensus; ++r.totals.consensus; }
    }
    return r;
}

std::vector<MetalDeviation> characterize_anomaly(std::span<const double> sample_z,
                                                 std::span<const std::string> columns) {
    if (sample_z.size() != columns.size())
        throw std::runtime_error("characterize_anomaly: size mismatch");
    std::vector<MetalDeviation> out;
    for (std::size_t j = 0; j < sample_z.size(); ++j)
        if (sample_z[j] != 0.0) out.push_back({columns[j], sample_z[j]});
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return std::abs(a.z) > std::abs(b.z);
    });
    return out;
}

ValidationSummary validate(const ConsensusReport& report, const std::vector<RiskProfile>& risks,
                           const Dataset& dataset, const std::vector<double>& recon_errors,
                           const FeatureMatrix& standardized) {
    const std::size_t n = dataset.size();
    if (risks.size() != n || report.consensus_flag.size() != n || recon_errors.size() != n ||
        standardized.rows() != n)
        throw std::runtime_error("validate: inputs do not cover the same n samples");

    ValidationSummary s;
    std::vector<double> hi_anom, il_anom, hi_norm, il_norm, hi_all;
    double hi_union_sum = 0, hi_nonunion_sum = 0;
    std::size_t union_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double hi = risks[i].hazard_child.hi;
        double il = risks[i].ilcr_child.ilcr;
        hi_all.push_back(hi);
        if (report.consensus_flag[i]) {
            hi_anom.push_back(hi);
            il_anom.push_back(il);
            if (dataset.samples[i].is_control) ++s.control_consensus_count;
            s.attributions.emplace_back(
                dataset.samples[i].sample_id,
                characterize_anomaly(standardized.row(i), standardized.columns));
        } else {
            hi_norm.push_back(hi);
            il_norm.push_back(il);
        }
        if (report.votes[i] >= 1) {
            hi_union_sum += hi;
            ++union_count;
        } else {
            hi_nonunion_sum += hi;
        }
    }

    s.anomalous = group_stats(hi_anom, il_anom);
    s.normal = group_stats(hi_norm, il_norm);
    if (!hi_norm.empty() && s.normal.mean_hi > 0 && !hi_anom.empty()) {
        s.hi_ratio_defined = true;
        s.hi_ratio = s.anomalous.mean_hi / s.normal.mean_hi;
    }
    std::size_t nonunion_count = n - union_count;
    if (union_count > 0 && nonunion_count > 0 && hi_nonunion_sum > 0) {
        s.hi_ratio_union_defined = true;
        s.hi_ratio_union = (hi_union_sum / static_cast<double>(union_count)) /
                           (hi_nonunion_sum / static_cast<double>(nonunion_count));
    }
    if (n >= 2) s.recon_error_hi_r = pearson(recon_errors, hi_all);
    return s;
}

}  // namespace soilanom
