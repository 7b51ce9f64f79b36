// Exact max-distribution quantities for finite-state chains.
//
// Everything here is closed-form linear algebra on small dense matrices;
// it is the ground truth every Monte Carlo estimator is checked against.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "phantomlab/errors.hpp"

namespace phantomlab::oracle {

inline constexpr std::size_t kMaxStates = 200;
inline constexpr double kStochasticTol = 1e-12;

/// Row-stochastic finite chain with an observable value per state and an
/// initial distribution lambda.
class FiniteChain {
public:
    FiniteChain(std::vector<std::vector<double>> transition, std::vector<double> observable,
                std::vector<double> initial)
        : values_(std::move(observable)), lambda_(std::move(initial)) {
        m_ = transition.size();
        if (m_ == 0 || m_ > kMaxStates)
            throw ModelError("finite chain: need 1.." + std::to_string(kMaxStates) + " states");
        if (values_.size() != m_ || lambda_.size() != m_)
            throw ModelError("finite chain: observable and initial vectors must have m entries");
        p_.assign(m_ * m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            if (transition[i].size() != m_)
                throw ModelError("finite chain: transition matrix must be square");
            double row_sum = 0.0;
            for (std::size_t j = 0; j < m_; ++j) {
                const double pij = transition[i][j];
                if (std::isnan(pij) || pij < 0.0)
                    throw ModelError("finite chain: transition entries must be >= 0");
                p_[i * m_ + j] = pij;
                row_sum += pij;
            }
            if (std::abs(row_sum - 1.0) > kStochasticTol)
                throw ModelError("finite chain: row " + std::to_string(i) + " sums to " +
                                 std::to_string(row_sum) + ", expected 1 within 1e-12");
        }
        double lambda_sum = 0.0;
        for (double w : lambda_) {
            if (std::isnan(w) || w < 0.0)
                throw ModelError("finite chain: initial distribution entries must be >= 0");
            lambda_sum += w;
        }
        if (std::abs(lambda_sum - 1.0) > kStochasticTol)
            throw ModelError("finite chain: initial distribution sums to " +
                             std::to_string(lambda_sum) + ", expected 1 within 1e-12");
    }

    std::size_t size() const { return m_; }
    double p(std::size_t i, std::size_t j) const { return p_[i * m_ + j]; }
    std::span<const double> row(std::size_t i) const { return {p_.data() + i * m_, m_}; }
    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& lambda() const { return lambda_; }

    FiniteChain with_initial(std::vector<double> initial) const {
        FiniteChain c(*this);
        if (initial.size() != m_)
            throw ModelError("finite chain: initial vector must have m entries");
        c.lambda_ = std::move(initial);
        return c;
    }

    static std::vector<double> point_mass(std::size_t m, std::size_t s) {
        std::vector<double> l(m, 0.0);
        l.at(s) = 1.0;
        return l;
    }

private:
    std::size_t m_ = 0;
    std::vector<double> p_;  // row-major m x m
    std::vector<double> values_;
    std::vector<double> lambda_;
};

/// Exact P_lambda(M_n <= x) by restriction to A = {i : values[i] <= x}:
/// the mass of paths that stay in A for n steps, computed as
/// lambda|_A (P|_A)^{n-1} 1 with iterated vector-matrix products.
inline double exact_max_cdf(const FiniteChain& chain, std::int64_t n, double x,
                            const std::vector<double>* initial = nullptr) {
    if (n < 1) throw std::invalid_argument("exact_max_cdf: n must be >= 1");
    const std::size_t m = chain.size();
    const std::vector<double>& lambda = initial ? *initial : chain.lambda();
    std::vector<char> in_a(m);
    bool all = true;
    for (std::size_t i = 0; i < m; ++i) {
        in_a[i] = chain.values()[i] <= x;
        all = all && in_a[i];
    }
    if (all) return 1.0;  // maximum always <= x

    std::vector<double> v(m, 0.0), w(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) v[i] = in_a[i] ? lambda[i] : 0.0;
    for (std::int64_t step = 1; step < n; ++step) {
        std::fill(w.begin(), w.end(), 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            if (v[i] == 0.0) continue;
            const auto row = chain.row(i);
            const double vi = v[i];
            for (std::size_t j = 0; j < m; ++j)
                if (in_a[j]) w[j] += vi * row[j];
        }
        v.swap(w);
    }
    double total = 0.0;
    for (double t : v) total += t;
    return std::min(total, 1.0);
}

namespace detail {

// Entrywise-positivity of some boolean power of P up to exponent m^2
// decides primitivity (irreducible + aperiodic). Positivity is preserved
// by further multiplication with a row-stochastic support pattern, so
// checking the repeated squares is enough.
inline bool primitive_support(const FiniteChain& chain) {
    const std::size_t m = chain.size();
    std::vector<char> b(m * m);
    for (std::size_t i = 0; i < m * m; ++i) b[i] = chain.p(i / m, i % m) > 0.0;
    auto all_positive = [&](const std::vector<char>& a) {
        return std::all_of(a.begin(), a.end(), [](char c) { return c != 0; });
    };
    std::size_t exponent = 1;
    std::vector<char> sq(m * m);
    while (exponent < m * m + 1) {
        if (all_positive(b)) return true;
        std::fill(sq.begin(), sq.end(), 0);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t k = 0; k < m; ++k)
                if (b[i * m + k])
                    for (std::size_t j = 0; j < m; ++j)
                        if (b[k * m + j]) sq[i * m + j] = 1;
        b.swap(sq);
        exponent *= 2;
    }
    return all_positive(b);
}

// Strong connectivity of the support graph via closure of (I + B)^m.
inline bool irreducible_support(const FiniteChain& chain) {
    const std::size_t m = chain.size();
    std::vector<char> reach(m * m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        // BFS from i
        std::vector<std::size_t> stack{i};
        reach[i * m + i] = 1;
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            for (std::size_t j = 0; j < m; ++j)
                if (chain.p(u, j) > 0.0 && !reach[i * m + j]) {
                    reach[i * m + j] = 1;
                    stack.push_back(j);
                }
        }
    }
    return std::all_of(reach.begin(), reach.end(), [](char c) { return c != 0; });
}

}  // namespace detail

/// Stationary distribution pi of an irreducible aperiodic row-stochastic
/// matrix, by dense solve of (P^T - I) pi = 0 with a normalization row.
/// Throws ModelError naming the failed validation for reducible or
/// periodic inputs. Residual ||pi P - pi||_inf is checked to 1e-10.
inline std::vector<double> stationary_distribution(const FiniteChain& chain) {
    const std::size_t m = chain.size();
    if (!detail::primitive_support(chain)) {
        if (!detail::irreducible_support(chain))
            throw ModelError("stationary_distribution: chain is not irreducible "
                             "(support graph is not strongly connected)");
        throw ModelError("stationary_distribution: chain is periodic "
                         "(no power of P is entrywise positive up to m^2)");
    }

    // Rows 0..m-2: (P^T - I) pi = 0; last row: sum pi = 1.
    std::vector<double> a(m * m, 0.0), rhs(m, 0.0);
    for (std::size_t r = 0; r + 1 < m; ++r)
        for (std::size_t c = 0; c < m; ++c) a[r * m + c] = chain.p(c, r) - (r == c ? 1.0 : 0.0);
    for (std::size_t c = 0; c < m; ++c) a[(m - 1) * m + c] = 1.0;
    rhs[m - 1] = 1.0;

    // Gaussian elimination with partial pivoting.
    std::vector<std::size_t> perm(m);
    for (std::size_t i = 0; i < m; ++i) perm[i] = i;
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t pivot = col;
        double best = std::abs(a[col * m + col]);
        for (std::size_t r = col + 1; r < m; ++r) {
            const double cand = std::abs(a[r * m + col]);
            if (cand > best) {
                best = cand;
                pivot = r;
            }
        }
        if (best == 0.0) throw ModelError("stationary_distribution: singular system");
        if (pivot != col) {
            for (std::size_t c = 0; c < m; ++c) std::swap(a[col * m + c], a[pivot * m + c]);
            std::swap(rhs[col], rhs[pivot]);
        }
        const double d = a[col * m + col];
        for (std::size_t r = col + 1; r < m; ++r) {
            const double f = a[r * m + col] / d;
            if (f == 0.0) continue;
            a[r * m + col] = 0.0;
            for (std::size_t c = col + 1; c < m; ++c) a[r * m + c] -= f * a[col * m + c];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<double> pi(m, 0.0);
    for (std::size_t ri = m; ri-- > 0;) {
        double s = rhs[ri];
        for (std::size_t c = ri + 1; c < m; ++c) s -= a[ri * m + c] * pi[c];
        pi[ri] = s / a[ri * m + ri];
    }

    double total = 0.0;
    for (double& w : pi) {
        w = std::max(w, 0.0);
        total += w;
    }
    for (double& w : pi) w /= total;

    double residual = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        double pij = 0.0;
        for (std::size_t i = 0; i < m; ++i) pij += pi[i] * chain.p(i, j);
        residual = std::max(residual, std::abs(pij - pi[j]));
    }
    if (residual > 1e-10)
        throw ModelError("stationary_distribution: residual " + std::to_string(residual) +
                         " exceeds 1e-10");
    return pi;
}

/// max over x_grid of |P_{delta_s}(M_n <= x) - P_pi(M_n <= x)|, both sides
/// computed exactly. The stationary side uses stationary_distribution.
inline double exact_quenched_gap(const FiniteChain& chain, std::size_t s, std::int64_t n,
                                 std::span<const double> x_grid) {
    if (x_grid.empty()) throw std::invalid_argument("exact_quenched_gap: empty x grid");
    if (s >= chain.size()) throw std::invalid_argument("exact_quenched_gap: bad state index");
    const std::vector<double> point = FiniteChain::point_mass(chain.size(), s);
    const std::vector<double> pi = stationary_distribution(chain);
    double gap = 0.0;
    for (double x : x_grid) {
        const double a = exact_max_cdf(chain, n, x, &point);
        const double b = exact_max_cdf(chain, n, x, &pi);
        gap = std::max(gap, std::abs(a - b));
    }
    return gap;
}

}  // namespace phantomlab::oracle
