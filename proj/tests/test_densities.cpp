#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "phantomlab/densities.hpp"
#include "phantomlab/rng.hpp"
#include "phantomlab/stats.hpp"

using namespace phantomlab;
using namespace phantomlab::models;

namespace {

// midpoint-rule mass over [lo, hi]; the declared normalization check
double quadrature_mass(const TargetDensity& t, double lo, double hi, int cells) {
    double mass = 0.0;
    const double h = (hi - lo) / cells;
    for (int i = 0; i < cells; ++i) mass += t.density(lo + (i + 0.5) * h) * h;
    return mass;
}

}  // namespace

TEST_CASE("target densities are nonnegative and integrate to 1") {
    const auto pareto = TargetDensity::pareto(1.0, 1.0);
    const auto gauss = TargetDensity::gaussian(0.5, 2.0);
    const auto student = TargetDensity::student_t(3.0);
    // truncation masses are known in closed form: compare against them
    CHECK(quadrature_mass(pareto, 1.0, 1000.0, 2000000) ==
          doctest::Approx(0.999).epsilon(1e-6));
    CHECK(quadrature_mass(gauss, -20.0, 21.0, 400000) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(quadrature_mass(student, -200.0, 200.0, 800000) ==
          doctest::Approx(1.0).epsilon(1e-5));
    for (double x : {-3.0, 0.0, 0.5, 1.0, 2.0, 100.0}) {
        CHECK(pareto.density(x) >= 0.0);
        CHECK(gauss.density(x) >= 0.0);
        CHECK(student.density(x) >= 0.0);
    }
}

TEST_CASE("pareto closed forms") {
    const auto t = TargetDensity::pareto(1.0, 1.0);
    CHECK(t.density(2.0) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(t.density(0.5) == 0.0);
    CHECK(t.cdf(4.0) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(t.quantile(0.75) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(t.quantile(0.999) == doctest::Approx(1000.0).epsilon(1e-9));
    const auto t2 = TargetDensity::pareto(2.5, 3.0);
    for (double p : {0.1, 0.5, 0.99})
        CHECK(t2.cdf(t2.quantile(p)) == doctest::Approx(p).epsilon(1e-12));
}

TEST_CASE("custom_table validates normalization at construction") {
    // density 0.5 on [0,2): integrates to 1
    auto ok = TargetDensity::custom_table({0.0, 1.0, 2.0}, {0.5, 0.5, 0.0});
    CHECK(ok.density(0.5) == 0.5);
    CHECK(ok.density(2.5) == 0.0);
    CHECK(ok.cdf(1.5) == doctest::Approx(0.75));
    CHECK(ok.quantile(0.75) == doctest::Approx(1.5));
    CHECK_THROWS_AS(TargetDensity::custom_table({0.0, 1.0}, {0.7, 0.0}), ModelError);
    CHECK_THROWS_AS(TargetDensity::custom_table({1.0, 0.0}, {1.0, 1.0}), ModelError);
}

TEST_CASE("inverse-CDF samplers match their analytic CDFs (KS at 95%)") {
    const std::size_t n = 20000;
    const double threshold = 1.36 / std::sqrt(static_cast<double>(n));
    Xoshiro256pp rng(2024);

    const auto pareto = TargetDensity::pareto(1.5, 2.0);
    std::vector<double> xs(n);
    for (auto& x : xs) x = pareto.sample(rng);
    CHECK(ks_distance_to_cdf(xs, [&](double x) { return pareto.cdf(x); }) < threshold);

    const auto gauss = TargetDensity::gaussian(-1.0, 0.5);
    for (auto& x : xs) x = gauss.sample(rng);
    CHECK(ks_distance_to_cdf(xs, [&](double x) { return gauss.cdf(x); }) < threshold);

    const auto table = TargetDensity::custom_table({0.0, 1.0, 3.0, 4.0}, {0.25, 0.25, 0.25, 0.0});
    for (auto& x : xs) x = table.sample(rng);
    CHECK(ks_distance_to_cdf(xs, [&](double x) { return table.cdf(x); }) < threshold);

    const auto unif = Marginal::uniform(0.0, 1.0);
    for (auto& x : xs) x = unif.sample(rng);
    CHECK(ks_distance_to_cdf(xs, [&](double x) { return unif.cdf(x); }) < threshold);
}

TEST_CASE("proposal increments are symmetric about 0 (two-sample KS at 95%)") {
    const std::size_t n = 20000;
    const double threshold = 1.36 * std::sqrt(2.0 / static_cast<double>(n));
    for (const auto& prop : {ProposalDensity::gaussian(1.0), ProposalDensity::uniform(2.0),
                             ProposalDensity::cauchy(0.7)}) {
        Xoshiro256pp rng(99);
        std::vector<double> z(n), neg(n);
        for (std::size_t i = 0; i < n; ++i) {
            z[i] = prop.sample_increment(rng);
            neg[i] = -z[i];
        }
        CHECK(two_sample_ks(z, neg) < threshold);
    }
}

TEST_CASE("student_t closed forms for nu in {1,2}") {
    const auto t1 = TargetDensity::student_t(1.0);
    const auto t2 = TargetDensity::student_t(2.0);
    CHECK(t1.cdf(0.0) == doctest::Approx(0.5));
    CHECK(t1.quantile(0.75) == doctest::Approx(1.0).epsilon(1e-12));  // tan(pi/4)
    CHECK(t2.cdf(t2.quantile(0.9)) == doctest::Approx(0.9).epsilon(1e-12));
    CHECK_FALSE(TargetDensity::student_t(3.0).has_cdf());
    CHECK(TargetDensity::student_t(3.0).density(0.0) ==
          doctest::Approx(0.3675525969478613).epsilon(1e-12));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(TargetDensity::pareto(0.0, 1.0), ModelError);
    CHECK_THROWS_AS(TargetDensity::gaussian(0.0, 0.0), ModelError);
    CHECK_THROWS_AS(ProposalDensity::gaussian(-1.0), ModelError);
    CHECK_THROWS_AS(Marginal::uniform(1.0, 1.0), ModelError);
    CHECK_THROWS_AS(Marginal::pareto(1.0, -2.0), ModelError);
}
