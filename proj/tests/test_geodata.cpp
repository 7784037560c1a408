#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "soilanom/geodata.hpp"

using namespace soilanom;

namespace {

FeatureMatrix make_matrix(std::vector<std::vector<double>> rows,
                          std::vector<std::string> cols) {
    FeatureMatrix m;
    m.columns = std::move(cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        m.row_ids.push_back("r" + std::to_string(i));
        for (double v : rows[i]) m.values.push_back(v);
    }
    return m;
}

FeatureMatrix random_matrix(std::mt19937_64& rng, std::size_t n, std::size_t d) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> shift(-5.0, 5.0);
    std::uniform_real_distribution<double> sc(0.1, 10.0);
    std::vector<double> mu(d), sigma(d);
    for (std::size_t j = 0; j < d; ++j) { mu[j] = shift(rng); sigma[j] = sc(rng); }
    FeatureMatrix m;
    for (std::size_t j = 0; j < d; ++j) m.columns.push_back("c" + std::to_string(j));
    for (std::size_t i = 0; i < n; ++i) {
        m.row_ids.push_back("r" + std::to_string(i));
        for (std::size_t j = 0; j < d; ++j) m.values.push_back(mu[j] + sigma[j] * g(rng));
    }
    return m;
}

const char* kHeader = "sample_id,site,is_control,As,Cd,Cr,Cu,Hg,Ni,Pb,Zn";

}  // namespace

TEST_CASE("load_dataset reads the bundled fixture") {
    Dataset d = load_dataset(SOILANOM_FIXTURE_PATH);
    CHECK(d.size() == 78);
    int controls = 0;
    for (const auto& s : d.samples) controls += s.is_control;
    CHECK(controls == 6);
    for (const auto& s : d.samples) {
        CHECK(s.risk_given.has_value());
        for (double v : s.conc) CHECK(v >= 0.0);
    }
}

TEST_CASE("parse errors name the offending row and column") {
    CHECK_THROWS_WITH_AS(parse_dataset_csv(std::string(kHeader) + "\n"),
                         doctest::Contains("no data rows"), std::runtime_error);
    std::string bad = std::string(kHeader) + "\nA-1,S1,false,1,2,3,abc,5,6,7,8\n";
    CHECK_THROWS_WITH_AS(parse_dataset_csv(bad), doctest::Contains("Cu"), std::runtime_error);
}

TEST_CASE("quantile_linear interpolates between order statistics") {
    std::vector<double> v = {1, 2, 3, 4};
    CHECK(quantile_linear(v, 0.25) == doctest::Approx(1.75));
    CHECK(quantile_linear(v, 0.5) == doctest::Approx(2.5));
    CHECK(quantile_linear(v, 0.75) == doctest::Approx(3.25));
    CHECK(quantile_linear(v, 0.0) == doctest::Approx(1.0));
    CHECK(quantile_linear(v, 1.0) == doctest::Approx(4.0));
}

TEST_CASE("descriptive_stats on [1,2,3,4]") {
    std::ostringstream csv;
    csv << kHeader << "\n";
    for (int i = 1; i <= 4; ++i)
        csv << "A-" << i << ",S1,false," << i << ",1,1,1,1,1,1,1\n";
    auto stats = descriptive_stats(parse_dataset_csv(csv.str()));
    const auto& as = stats.per_metal[0];
    CHECK(as.count == 4);
    CHECK(as.mean == doctest::Approx(2.5));
    CHECK(as.median == doctest::Approx(2.5));
    CHECK(as.p25 == doctest::Approx(1.75));
    CHECK(as.p75 == doctest::Approx(3.25));
}

TEST_CASE("descriptive_stats with a single sample") {
    std::string csv = std::string(kHeader) + "\nA-1,S1,false,4,1,1,1,1,1,1,1\n";
    auto stats = descriptive_stats(parse_dataset_csv(csv));
    const auto& as = stats.per_metal[0];
    CHECK(as.mean == doctest::Approx(4.0));
    CHECK(as.min == doctest::Approx(4.0));
    CHECK(as.max == doctest::Approx(4.0));
    CHECK_FALSE(as.std_defined);
    CHECK(as.stddev == 0.0);
}

TEST_CASE("pearson on exact linear relations") {
    std::vector<double> x = {1, 2, 3, 4, 5};
    std::vector<double> y, z;
    for (double v : x) { y.push_back(2 * v + 1); z.push_back(-v); }
    CHECK(pearson(x, y) == doctest::Approx(1.0));
    CHECK(pearson(x, z) == doctest::Approx(-1.0));
    std::vector<double> c = {7, 7, 7, 7, 7};
    CHECK(pearson(x, c) == 0.0);
}

TEST_CASE("fixture statistics and correlations match the published table") {
    Dataset d = load_dataset(SOILANOM_FIXTURE_PATH);
    auto stats = descriptive_stats(d);
    CHECK(stats.per_metal[0].mean == doctest::Approx(6.48).epsilon(0.15));   // As
    CHECK(stats.per_metal[3].max == doctest::Approx(611.76).epsilon(0.05));  // Cu
    auto m = feature_matrix(d);
    auto corr = pearson_matrix(m);
    auto r = [&](std::size_t a, std::size_t b) { return corr[a * kNumMetals + b]; };
    CHECK(r(2, 4) == doctest::Approx(0.82).epsilon(0.19));  // Cr-Hg, +-0.15 absolute
    CHECK(r(0, 6) == doctest::Approx(0.89).epsilon(0.17));  // As-Pb
    for (std::size_t a = 0; a < kNumMetals; ++a) {
        CHECK(r(a, a) == doctest::Approx(1.0));
        for (std::size_t b = 0; b < kNumMetals; ++b)
            CHECK(r(a, b) == doctest::Approx(r(b, a)));
    }
}

TEST_CASE("standardize matches the hand-computed column") {
    auto m = make_matrix({{1}, {2}, {3}}, {"x"});
    auto z = standardize(m);
    CHECK(z.at(0, 0) == doctest::Approx(-1.2247).epsilon(1e-4));
    CHECK(z.at(1, 0) == doctest::Approx(0.0));
    CHECK(z.at(2, 0) == doctest::Approx(1.2247).epsilon(1e-4));
    CHECK(z.standardized);
}

TEST_CASE("standardize zeroes constant columns with a warning") {
    auto m = make_matrix({{5, 1}, {5, 2}, {5, 3}}, {"c", "x"});
    Warnings w;
    auto z = standardize(m, &w);
    CHECK(z.at(0, 0) == 0.0);
    CHECK(z.at(1, 0) == 0.0);
    CHECK(z.at(2, 0) == 0.0);
    CHECK(!w.empty());
}

TEST_CASE("standardize requires at least two rows") {
    auto m = make_matrix({{1, 2}}, {"a", "b"});
    CHECK_THROWS_AS(standardize(m), std::runtime_error);
}

TEST_CASE("standardize post-conditions and round-trip on random matrices") {
    std::mt19937_64 rng(9001);
    for (int rep = 0; rep < 100; ++rep) {
        std::size_t n = 2 + rng() % 40, d = 1 + rng() % 8;
        auto m = random_matrix(rng, n, d);
        auto z = standardize(m);
        for (std::size_t j = 0; j < d; ++j) {
            double mean = 0, var = 0;
            for (std::size_t i = 0; i < n; ++i) mean += z.at(i, j);
            mean /= double(n);
            for (std::size_t i = 0; i < n; ++i) {
                double c = z.at(i, j) - mean;
                var += c * c;
            }
            var /= double(n);
            CHECK(std::abs(mean) < 1e-12);
            CHECK(std::abs(std::sqrt(var) - 1.0) < 1e-12);
        }
        auto back = destandardize(z);
        for (std::size_t i = 0; i < n * d; ++i)
            CHECK(back.values[i] == doctest::Approx(m.values[i]).epsilon(1e-9));
    }
}

TEST_CASE("correlation is invariant under per-column affine rescaling") {
    std::mt19937_64 rng(424242);
    for (int rep = 0; rep < 20; ++rep) {
        std::size_t n = 5 + rng() % 30, d = 2 + rng() % 6;
        auto m = random_matrix(rng, n, d);
        auto scaled = m;
        std::uniform_real_distribution<double> sc(0.5, 20.0), off(-100.0, 100.0);
        for (std::size_t j = 0; j < d; ++j) {
            double a = sc(rng), b = off(rng);
            for (std::size_t i = 0; i < n; ++i)
                scaled.at(i, j) = a * m.at(i, j) + b;
        }
        auto c1 = pearson_matrix(m), c2 = pearson_matrix(scaled);
        for (std::size_t i = 0; i < d * d; ++i)
            CHECK(std::abs(c1[i] - c2[i]) < 1e-9);
    }
}
