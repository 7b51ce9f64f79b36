// Step distribution functions and the exact sup-norm distance of Eq.-type
// comparisons |a(x)^p - b(x)^q| between powered distribution functions.
#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <ranges>
#include <span>
#include <stdexcept>
#include <vector>

namespace phantomlab::empirics {

/// Anything that evaluates like a distribution function: right-continuous
/// value, left limit, and a finite grid of points outside of which the
/// function is monotone-simple (constant for step dfs, monotone
/// interpolation for continuous ones). The grid is what sup-norm
/// evaluation enumerates.
template <typename G>
concept DistributionFunction = requires(const G& g, double x) {
    { g.value(x) } -> std::convertible_to<double>;
    { g.left_value(x) } -> std::convertible_to<double>;
    { g.grid() } -> std::ranges::input_range;
};

/// Right-continuous step distribution function: value(x) = cdf_values[i]
/// for the largest jump point x_i <= x, and 0 below the first jump.
/// right_end() is G* = sup{x : G(x) < 1}, +inf when the stored values
/// never reach 1 (truncated tail objects).
class StepDF {
public:
    StepDF(std::vector<double> jump_points, std::vector<double> cdf_values)
        : x_(std::move(jump_points)), v_(std::move(cdf_values)) {
        if (x_.empty() || x_.size() != v_.size())
            throw std::invalid_argument("StepDF: need equal-length non-empty arrays");
        for (std::size_t i = 0; i + 1 < x_.size(); ++i)
            if (!(x_[i] < x_[i + 1]))
                throw std::invalid_argument("StepDF: jump points must be strictly increasing");
        for (std::size_t i = 0; i < v_.size(); ++i) {
            if (std::isnan(v_[i]) || v_[i] < 0.0 || v_[i] > 1.0)
                throw std::invalid_argument("StepDF: cdf values must lie in [0,1]");
            if (i > 0 && v_[i] < v_[i - 1])
                throw std::invalid_argument("StepDF: cdf values must be non-decreasing");
        }
    }

    /// Empirical CDF of a sample; jump of (multiplicity)/n at each distinct value.
    static StepDF from_samples(std::vector<double> samples) {
        if (samples.empty()) throw std::invalid_argument("StepDF: empty sample");
        std::sort(samples.begin(), samples.end());
        const double n = static_cast<double>(samples.size());
        std::vector<double> xs, vs;
        xs.reserve(samples.size());
        vs.reserve(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (!xs.empty() && samples[i] == xs.back())
                vs.back() = static_cast<double>(i + 1) / n;
            else {
                xs.push_back(samples[i]);
                vs.push_back(static_cast<double>(i + 1) / n);
            }
        }
        return StepDF(std::move(xs), std::move(vs));
    }

    double value(double x) const {
        const auto it = std::upper_bound(x_.begin(), x_.end(), x);
        if (it == x_.begin()) return 0.0;
        return v_[static_cast<std::size_t>(it - x_.begin()) - 1];
    }

    double left_value(double x) const {
        const auto it = std::lower_bound(x_.begin(), x_.end(), x);
        if (it == x_.begin()) return 0.0;
        return v_[static_cast<std::size_t>(it - x_.begin()) - 1];
    }

    const std::vector<double>& grid() const { return x_; }
    const std::vector<double>& values() const { return v_; }
    double top_value() const { return v_.back(); }

    double right_end() const {
        const auto it = std::lower_bound(v_.begin(), v_.end(), 1.0);
        if (it == v_.end()) return std::numeric_limits<double>::infinity();
        return x_[static_cast<std::size_t>(it - v_.begin())];
    }

private:
    std::vector<double> x_;
    std::vector<double> v_;
};

/// Distribution-function view of a closed-form CDF (no grid points of its
/// own; pair it with at least one step/continuized df in sup_distance).
template <typename F>
class AnalyticDF {
public:
    explicit AnalyticDF(F cdf, double right_end = std::numeric_limits<double>::infinity())
        : cdf_(std::move(cdf)), right_end_(right_end) {}

    double value(double x) const { return cdf_(x); }
    double left_value(double x) const { return cdf_(x); }
    std::span<const double> grid() const { return {}; }
    double right_end() const { return right_end_; }

private:
    F cdf_;
    double right_end_;
};

/// sup_x |a(x)^p - b(x)^q|, exact for piecewise-monotone dfs.
///
/// The supremum of a difference of two functions that are monotone between
/// consecutive grid points is attained at a grid point or its left limit,
/// so evaluating on the union of both grids is exact (no discretization).
template <DistributionFunction A, DistributionFunction B>
double sup_distance(const A& a, std::int64_t p, const B& b, std::int64_t q) {
    if (p < 1 || q < 1) throw std::invalid_argument("sup_distance: powers must be >= 1");
    const double dp = static_cast<double>(p);
    const double dq = static_cast<double>(q);
    double best = 0.0;
    auto probe = [&](double x) {
        const double d_right = std::abs(std::pow(a.value(x), dp) - std::pow(b.value(x), dq));
        const double d_left =
            std::abs(std::pow(a.left_value(x), dp) - std::pow(b.left_value(x), dq));
        best = std::max(best, std::max(d_right, d_left));
    };
    for (double x : a.grid()) probe(x);
    for (double x : b.grid()) probe(x);
    return best;
}

}  // namespace phantomlab::empirics
