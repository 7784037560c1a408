#include "soilanom/geodata.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace soilanom {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(line);
    while (std::getline(ss, cur, ',')) out.push_back(trim(cur));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

double parse_number(const std::string& s, std::size_t row, const std::string& col) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("row " + std::to_string(row) + ": non-numeric value '" + s +
                                 "' in column " + col);
    }
}

bool parse_bool(const std::string& s, std::size_t row) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw std::runtime_error("row " + std::to_string(row) + ": invalid is_control value '" + s + "'");
}

}  // namespace

double SampleRecord::concentration(const std::string& metal) const {
    for (std::size_t j = 0; j < kNumMetals; ++j)
        if (metal == kMetals[j]) return conc[j];
    throw std::runtime_error("unknown metal: " + metal);
}

Dataset parse_dataset_csv(const std::string& content, const std::string& origin) {
    std::stringstream in(content);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(origin + ": no data rows");
    auto header = split_csv_line(line);

    auto col_of = [&](const std::string& name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        return std::nullopt;
    };

    auto require = [&](const std::string& name) {
        auto c = col_of(name);
        if (!c) throw std::runtime_error(origin + ": missing column '" + name + "'");
        return *c;
    };

    std::size_t id_col = require("sample_id");
    std::size_t site_col = require("site");
    std::size_t ctrl_col = require("is_control");
    std::array<std::size_t, kNumMetals> metal_cols{};
    for (std::size_t j = 0; j < kNumMetals; ++j) metal_cols[j] = require(kMetals[j]);

    auto hi_a = col_of("hi_adult"), hi_c = col_of("hi_child");
    auto il_a = col_of("ilcr_adult"), il_c = col_of("ilcr_child");
    bool has_risk = hi_a && hi_c && il_a && il_c;

    Dataset d;
    std::set<std::string> seen_ids;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() < header.size())
            throw std::runtime_error("row " + std::to_string(row) + ": expected " +
                                     std::to_string(header.size()) + " fields, got " +
                                     std::to_string(fields.size()));
        SampleRecord r;
        r.sample_id = fields[id_col];
        r.site = fields[site_col];
        r.is_control = parse_bool(fields[ctrl_col], row);
        if (!seen_ids.insert(r.sample_id).second)
            throw std::runtime_error("row " + std::to_string(row) + ": duplicate sample_id '" +
                                     r.sample_id + "'");
        for (std::size_t j = 0; j < kNumMetals; ++j) {
            if (fields[metal_cols[j]].empty())
                throw std::runtime_error("row " + std::to_string(row) + ": blank value in column " +
                                         std::string(kMetals[j]));
            double v = parse_number(fields[metal_cols[j]], row, kMetals[j]);
            if (v < 0)
                throw std::runtime_error("row " + std::to_string(row) +
                                         ": negative concentration in column " +
                                         std::string(kMetals[j]));
            r.conc[j] = v;
        }
        if (has_risk && !fields[*hi_a].empty()) {
            RiskColumns rc;
            rc.hi_adult = parse_number(fields[*hi_a], row, "hi_adult");
            rc.hi_child = parse_number(fields[*hi_c], row, "hi_child");
            rc.ilcr_adult = parse_number(fields[*il_a], row, "ilcr_adult");
            rc.ilcr_child = parse_number(fields[*il_c], row, "ilcr_child");
            r.risk_given = rc;
        }
        d.samples.push_back(std::move(r));
    }
    if (d.samples.empty()) throw std::runtime_error(origin + ": no data rows");
    return d;
}

Dataset load_dataset(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_dataset_csv(ss.str(), path);
}

FeatureMatrix feature_matrix(const Dataset& d) {
    FeatureMatrix m;
    m.columns.assign(kMetals.begin(), kMetals.end());
    m.row_ids.reserve(d.size());
    m.values.reserve(d.size() * kNumMetals);
    for (const auto& s : d.samples) {
        m.row_ids.push_back(s.sample_id);
        m.values.insert(m.values.end(), s.conc.begin(), s.conc.end());
    }
    return m;
}

double quantile_linear(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw std::runtime_error("quantile of empty range");
    if (sorted.size() == 1) return sorted[0];
    double h = q * static_cast<double>(sorted.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(h));
    auto hi = std::min(lo + 1, sorted.size() - 1);
    double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

DescriptiveStats descriptive_stats(const Dataset& d) {
    if (d.samples.empty()) throw std::runtime_error("descriptive_stats: empty dataset");
    DescriptiveStats out;
    const std::size_t n = d.size();
    for (std::size_t j = 0; j < kNumMetals; ++j) {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = d.samples[i].conc[j];
        std::sort(col.begin(), col.end());
        MetalStats& s = out.per_metal[j];
        s.count = n;
        double sum = 0;
        for (double v : col) sum += v;
        s.mean = sum / static_cast<double>(n);
        if (n > 1) {
            double ss = 0;
            for (double v : col) ss += (v - s.mean) * (v - s.mean);
            s.stddev = std::sqrt(ss / static_cast<double>(n - 1));
        } else {
            s.stddev = 0.0;
            s.std_defined = false;
        }
        s.min = col.front();
        s.max = col.back();
        s.p25 = quantile_linear(col, 0.25);
        s.median = quantile_linear(col, 0.50);
        s.p75 = quantile_linear(col, 0.75);
    }
    return out;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::runtime_error("pearson: need two equal series of length >= 2");
    const auto n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

std::vector<double> pearson_matrix(const FeatureMatrix& m, Warnings* warnings) {
    const std::size_t n = m.rows(), d = m.cols();
    if (n < 2) throw std::runtime_error("pearson_matrix: need n >= 2");
    std::vector<double> means(d, 0.0), vars(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < n; ++i) means[j] += m.at(i, j);
        means[j] /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            double dv = m.at(i, j) - means[j];
            vars[j] += dv * dv;
        }
        if (vars[j] == 0.0 && warnings)
            warnings->push_back("pearson_matrix: zero-variance column " + m.columns[j] +
                                ", correlations set to 0");
    }
    std::vector<double> r(d * d, 0.0);
    for (std::size_t a = 0; a < d; ++a) {
        r[a * d + a] = 1.0;
        for (std::size_t b = a + 1; b < d; ++b) {
            double v = 0.0;
            if (vars[a] > 0.0 && vars[b] > 0.0) {
                double sxy = 0;
                for (std::size_t i = 0; i < n; ++i)
                    sxy += (m.at(i, a) - means[a]) * (m.at(i, b) - means[b]);
                v = sxy / std::sqrt(vars[a] * vars[b]);
            }
            r[a * d + b] = v;
            r[b * d + a] = v;
        }
    }
    return r;
}

FeatureMatrix standardize(const FeatureMatrix& m, Warnings* warnings) {
    if (m.standardized) throw std::runtime_error("standardize: matrix already standardized");
    const std::size_t n = m.rows(), d = m.cols();
    if (n < 2) throw std::runtime_error("standardize: need n >= 2");
    FeatureMatrix out = m;
    out.standardized = true;
    out.col_means.assign(d, 0.0);
    out.col_stds.assign(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        double mean = 0;
        for (std::size_t i = 0; i < n; ++i) mean += m.at(i, j);
        mean /= static_cast<double>(n);
        double ss = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double dv = m.at(i, j) - mean;
            ss += dv * dv;
        }
        double std = std::sqrt(ss / static_cast<double>(n));  // population std
        out.col_means[j] = mean;
        out.col_stds[j] = std;
        if (std == 0.0) {
            if (warnings)
                warnings->push_back("standardize: zero-variance column " + m.columns[j] +
                                    ", set to zeros");
            for (std::size_t i = 0; i < n; ++i) out.at(i, j) = 0.0;
        } else {
            for (std::size_t i = 0; i < n; ++i) out.at(i, j) = (m.at(i, j) - mean) / std;
        }
    }
    return out;
}

FeatureMatrix destandardize(const FeatureMatrix& m) {
    if (!m.standardized) throw std::runtime_error("destandardize: matrix is not standardized");
    FeatureMatrix out = m;
    out.standardized = false;
    const std::size_t n = m.rows(), d = m.cols();
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < n; ++i)
            out.at(i, j) = m.at(i, j) * m.col_stds[j] + m.col_means[j];
    out.col_means.clear();
    out.col_stds.clear();
    return out;
}

}  // namespace soilanom
