#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "phantomlab/oracle.hpp"
#include "phantomlab/rng.hpp"

using namespace phantomlab;
using namespace phantomlab::oracle;

namespace {

FiniteChain two_state_fair() {
    return FiniteChain({{0.5, 0.5}, {0.5, 0.5}}, {0.0, 1.0}, {0.5, 0.5});
}

FiniteChain random_chain(Xoshiro256pp& rng, std::size_t m) {
    std::vector<std::vector<double>> p(m, std::vector<double>(m));
    for (std::size_t i = 0; i < m; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            p[i][j] = -std::log(rng.next_u01());  // exponential weights
            row_sum += p[i][j];
        }
        for (std::size_t j = 0; j < m; ++j) p[i][j] /= row_sum;
        // renormalize exactly so validation at 1e-12 is met
        double acc = 0.0;
        for (std::size_t j = 0; j + 1 < m; ++j) acc += p[i][j];
        p[i][m - 1] = 1.0 - acc;
    }
    std::vector<double> values(m), lambda(m, 1.0 / static_cast<double>(m));
    for (auto& v : values) v = rng.next_u01() * 10.0;
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < m; ++j) acc += lambda[j];
    lambda[m - 1] = 1.0 - acc;
    return FiniteChain(p, values, lambda);
}

}  // namespace

TEST_CASE("exact_max_cdf trivial and hand-computed cases") {
    const auto chain = two_state_fair();
    // x at or above the top observable value: probability exactly 1
    for (std::int64_t n : {1, 2, 5, 50}) CHECK(exact_max_cdf(chain, n, 1.0) == 1.0);
    // all rows equal lambda => iid, P(M_n <= x) = F(x)^n; here F(0.5) = 1/2
    CHECK(exact_max_cdf(chain, 3, 0.5) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(exact_max_cdf(chain, 10, 0.5) == doctest::Approx(std::pow(0.5, 10)).epsilon(1e-13));
    // below every observable value: 0
    CHECK(exact_max_cdf(chain, 4, -1.0) == 0.0);
}

TEST_CASE("exact_max_cdf iid-rows chains reproduce F(x)^n") {
    Xoshiro256pp rng(5);
    for (int rep = 0; rep < 5; ++rep) {
        const std::size_t m = 4;
        auto base = random_chain(rng, m);
        // make all rows equal to lambda
        std::vector<std::vector<double>> rows(m,
                                              std::vector<double>(base.lambda().begin(),
                                                                  base.lambda().end()));
        FiniteChain iid(rows, base.values(), base.lambda());
        const double x = base.values()[1];
        double f = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            if (iid.values()[i] <= x) f += iid.lambda()[i];
        for (std::int64_t n : {1, 2, 7})
            CHECK(exact_max_cdf(iid, n, x) ==
                  doctest::Approx(std::pow(f, static_cast<double>(n))).epsilon(1e-12));
    }
}

TEST_CASE("exact_max_cdf is monotone in n and x on random small chains") {
    Xoshiro256pp rng(17);
    for (int rep = 0; rep < 100; ++rep) {
        const auto chain = random_chain(rng, 2 + static_cast<std::size_t>(rng() % 5));
        const double x0 = rng.next_u01() * 10.0;
        const double x1 = x0 + rng.next_u01() * 5.0;
        double prev = 1.0;
        for (std::int64_t n = 1; n <= 20; ++n) {
            const double c = exact_max_cdf(chain, n, x0);
            CHECK(c <= prev + 1e-15);  // non-increasing in n
            CHECK(c <= exact_max_cdf(chain, n, x1) + 1e-15);  // non-decreasing in x
            prev = c;
        }
    }
}

TEST_CASE("stationary_distribution closed-form cases") {
    // doubly stochastic: uniform
    FiniteChain doubly({{0.1, 0.2, 0.3, 0.4},
                        {0.2, 0.3, 0.4, 0.1},
                        {0.3, 0.4, 0.1, 0.2},
                        {0.4, 0.1, 0.2, 0.3}},
                       {0, 1, 2, 3}, {0.25, 0.25, 0.25, 0.25});
    const auto pi_u = stationary_distribution(doubly);
    for (double w : pi_u) CHECK(w == doctest::Approx(0.25).epsilon(1e-12));

    // 2x2 balance equations by hand: pi = (2/3, 1/3)
    FiniteChain two({{0.9, 0.1}, {0.2, 0.8}}, {0.0, 1.0}, {0.5, 0.5});
    const auto pi = stationary_distribution(two);
    CHECK(pi[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(pi[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("stationary_distribution rejects degenerate chains by name") {
    FiniteChain identity({{1.0, 0.0}, {0.0, 1.0}}, {0.0, 1.0}, {0.5, 0.5});
    CHECK_THROWS_WITH_AS(stationary_distribution(identity),
                         doctest::Contains("not irreducible"), ModelError);
    FiniteChain periodic({{0.0, 1.0}, {1.0, 0.0}}, {0.0, 1.0}, {0.5, 0.5});
    CHECK_THROWS_WITH_AS(stationary_distribution(periodic), doctest::Contains("periodic"),
                         ModelError);
}

TEST_CASE("stationary_distribution residual on random chains") {
    Xoshiro256pp rng(23);
    for (int rep = 0; rep < 20; ++rep) {
        const auto chain = random_chain(rng, 2 + static_cast<std::size_t>(rng() % 30));
        const auto pi = stationary_distribution(chain);
        double total = 0.0, residual = 0.0;
        for (std::size_t j = 0; j < chain.size(); ++j) {
            total += pi[j];
            double pij = 0.0;
            for (std::size_t i = 0; i < chain.size(); ++i) pij += pi[i] * chain.p(i, j);
            residual = std::max(residual, std::abs(pij - pi[j]));
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(residual < 1e-10);
    }
}

TEST_CASE("exact_quenched_gap hand-computed cases") {
    const auto chain = two_state_fair();
    // stationary = (1/2, 1/2); from state 0 the first factor is 1 instead of 1/2
    const std::vector<double> grid{0.5};
    CHECK(exact_quenched_gap(chain, 0, 3, grid) == doctest::Approx(0.125).epsilon(1e-13));
    // grid above the top value: both probabilities 1
    const std::vector<double> high{2.0};
    CHECK(exact_quenched_gap(chain, 0, 3, high) == 0.0);
    CHECK(exact_quenched_gap(chain, 1, 3, grid) ==
          doctest::Approx(0.125).epsilon(1e-13));  // |0 - 1/8| from the high state
}

TEST_CASE("exact_quenched_gap iid-rows closed form at n >= 2") {
    // for iid rows the gap at horizon n is |1[f(s)<=x] - F(x)| * F(x)^{n-1}
    Xoshiro256pp rng(31);
    const auto base = random_chain(rng, 5);
    std::vector<std::vector<double>> rows(5, std::vector<double>(base.lambda().begin(),
                                                                 base.lambda().end()));
    FiniteChain iid(rows, base.values(), base.lambda());
    const double x = base.values()[2];
    double f = 0.0;
    for (std::size_t i = 0; i < 5; ++i)
        if (iid.values()[i] <= x) f += iid.lambda()[i];
    for (std::size_t s : {0u, 2u, 4u}) {
        const double ind = iid.values()[s] <= x ? 1.0 : 0.0;
        const double expected = std::abs(ind - f) * std::pow(f, 4.0);
        CHECK(exact_quenched_gap(iid, s, 5, std::vector<double>{x}) ==
              doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("finite chain validation") {
    CHECK_THROWS_AS(FiniteChain({{0.5, 0.4}, {0.5, 0.5}}, {0, 1}, {0.5, 0.5}), ModelError);
    CHECK_THROWS_AS(FiniteChain({{0.5, 0.5}, {0.5, 0.5}}, {0, 1}, {0.6, 0.5}), ModelError);
    CHECK_THROWS_AS(FiniteChain({{1.5, -0.5}, {0.5, 0.5}}, {0, 1}, {0.5, 0.5}), ModelError);
    CHECK_THROWS_AS(FiniteChain({{0.5, 0.5}}, {0, 1}, {1.0}), ModelError);
}
