// Phantom distribution functions built from calibrated level sequences.
//
// A level sequence {v_n} with G^n(v_n) = exp(-beta) pins down a step df
//
//         G(x) = 0            for x < v_1,
//         G(x) = exp(-beta/n) for v_n <= x < v_{n+1},
//
// which is the canonical phantom candidate for a maxima process. Levels
// are obtained either by inverting a known df or as empirical
// exp(-beta)-quantiles of simulated running maxima. A log-linear
// continuization smooths the staircase without moving the nodes.
#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "phantomlab/empirics.hpp"
#include "phantomlab/errors.hpp"
#include "phantomlab/step_df.hpp"

namespace phantomlab::phantom {

using empirics::MaxSampleMatrix;
using empirics::StepDF;

/// Non-decreasing levels v_n(beta) indexed by their horizons.
struct LevelSequence {
    enum class Source { from_df, from_samples };

    double beta = 1.0;
    std::vector<std::int64_t> horizons;
    std::vector<double> levels;
    Source source = Source::from_df;
};

template <typename G>
concept QuantileDF = requires(const G& g, double p) {
    { g.quantile(p) } -> std::convertible_to<double>;
};

namespace detail {

inline void check_beta_horizons(double beta, std::span<const std::int64_t> horizons) {
    if (!(beta > 0.0)) throw CalibrationError("levels: beta must be > 0");
    if (horizons.empty()) throw CalibrationError("levels: horizon list must be non-empty");
    for (std::size_t i = 0; i < horizons.size(); ++i) {
        if (horizons[i] < 1) throw CalibrationError("levels: horizons must be >= 1");
        if (i > 0 && horizons[i] <= horizons[i - 1])
            throw CalibrationError("levels: horizons must be strictly increasing");
    }
}

}  // namespace detail

/// Levels v_n = inf{x : g(x)^n >= exp(-beta)} from a step df, i.e. the
/// generalized inverse of g at the thresholds exp(-beta/n).
inline LevelSequence levels_from_df(const StepDF& g, double beta,
                                    std::span<const std::int64_t> horizons) {
    detail::check_beta_horizons(beta, horizons);
    LevelSequence seq{beta, {horizons.begin(), horizons.end()}, {}, LevelSequence::Source::from_df};
    seq.levels.reserve(horizons.size());
    const auto& xs = g.grid();
    const auto& vs = g.values();
    for (const std::int64_t n : horizons) {
        const double threshold = std::exp(-beta / static_cast<double>(n));
        const auto it = std::lower_bound(vs.begin(), vs.end(), threshold);
        if (it == vs.end())
            throw CalibrationError(
                "levels_from_df: df never reaches exp(-beta/n) = " + std::to_string(threshold) +
                " for n = " + std::to_string(n) + "; the df is 0 or too small on the "
                "representable range");
        seq.levels.push_back(xs[static_cast<std::size_t>(it - vs.begin())]);
    }
    return seq;
}

/// Same, for a df with a closed-form (or computable) quantile function.
template <QuantileDF G>
LevelSequence levels_from_df(const G& g, double beta, std::span<const std::int64_t> horizons) {
    detail::check_beta_horizons(beta, horizons);
    LevelSequence seq{beta, {horizons.begin(), horizons.end()}, {}, LevelSequence::Source::from_df};
    seq.levels.reserve(horizons.size());
    for (const std::int64_t n : horizons) {
        const double v = g.quantile(std::exp(-beta / static_cast<double>(n)));
        if (!std::isfinite(v))
            throw CalibrationError("levels_from_df: quantile is not finite at n = " +
                                   std::to_string(n));
        seq.levels.push_back(v);
    }
    return seq;
}

/// Empirical levels: per checkpoint n, the exp(-beta)-quantile of the M_n
/// column (left-continuous generalized inverse of the empirical CDF),
/// then made non-decreasing by cumulative maximum.
inline LevelSequence levels_from_samples(const MaxSampleMatrix& samples, double beta) {
    if (!(beta > 0.0)) throw CalibrationError("levels_from_samples: beta must be > 0");
    const std::size_t r = samples.replicas();
    if (r < 100) throw CalibrationError("levels_from_samples: need at least 100 replicas");
    const double q = std::exp(-beta);
    if (q < 1.0 / static_cast<double>(r))
        throw CalibrationError(
            "levels_from_samples: exp(-beta) = " + std::to_string(q) + " is below 1/R = " +
            std::to_string(1.0 / static_cast<double>(r)) +
            "; the quantile is unreliable -- increase replicas or decrease beta");

    LevelSequence seq{beta, samples.checkpoints(), {}, LevelSequence::Source::from_samples};
    seq.levels.reserve(seq.horizons.size());
    // smallest order statistic whose empirical CDF reaches q
    const auto rank = static_cast<std::size_t>(
        std::ceil(q * static_cast<double>(r) - 1e-9));
    for (std::size_t k = 0; k < seq.horizons.size(); ++k) {
        std::vector<double> col = samples.column(k);
        std::nth_element(col.begin(), col.begin() + static_cast<std::ptrdiff_t>(rank - 1),
                         col.end());
        double v = col[rank - 1];
        if (!seq.levels.empty()) v = std::max(v, seq.levels.back());
        seq.levels.push_back(v);
    }
    return seq;
}

/// Restrict a level sequence to a subset of its horizons.
inline LevelSequence restrict_levels(const LevelSequence& seq,
                                     std::span<const std::int64_t> horizons) {
    LevelSequence out{seq.beta, {}, {}, seq.source};
    for (const std::int64_t n : horizons) {
        const auto it = std::find(seq.horizons.begin(), seq.horizons.end(), n);
        if (it == seq.horizons.end())
            throw CalibrationError("restrict_levels: horizon " + std::to_string(n) +
                                   " is not calibrated");
        out.horizons.push_back(n);
        out.levels.push_back(seq.levels[static_cast<std::size_t>(it - seq.horizons.begin())]);
    }
    return out;
}

/// The step phantom df of a level sequence. Ties are merged keeping the
/// largest horizon, so G(v_n)^n = exp(-beta) holds exactly at every
/// provided n. The stored values stay strictly below 1 (the object is the
/// finite-horizon truncation of the limit df), hence right_end() = +inf.
inline StepDF phantom_from_levels(const LevelSequence& seq) {
    if (seq.horizons.empty() || seq.horizons.size() != seq.levels.size())
        throw std::invalid_argument("phantom_from_levels: malformed level sequence");
    if (!(seq.beta > 0.0)) throw std::invalid_argument("phantom_from_levels: beta must be > 0");
    for (std::size_t i = 1; i < seq.levels.size(); ++i)
        if (seq.levels[i] < seq.levels[i - 1])
            throw std::invalid_argument("phantom_from_levels: levels must be non-decreasing");

    std::vector<double> xs, vs;
    xs.reserve(seq.levels.size());
    vs.reserve(seq.levels.size());
    for (std::size_t i = 0; i < seq.levels.size(); ++i) {
        const double value = std::exp(-seq.beta / static_cast<double>(seq.horizons[i]));
        if (!xs.empty() && seq.levels[i] == xs.back())
            vs.back() = value;  // tie: keep the largest exponent
        else {
            xs.push_back(seq.levels[i]);
            vs.push_back(value);
        }
    }
    return StepDF(std::move(xs), std::move(vs));
}

/// Continuous phantom df: log-linear interpolation between the nodes of a
/// step phantom. Agrees with the step df at every node, is continuous on
/// [v_1, +inf), and equals the step df outside the level range (in
/// particular it keeps the step df's initial jump at v_1).
class ContinuizedDF {
public:
    ContinuizedDF(std::vector<double> nodes, std::vector<double> values, bool approximate)
        : x_(std::move(nodes)), logv_(x_.size()), v_(std::move(values)),
          approximate_(approximate) {
        for (std::size_t i = 0; i < v_.size(); ++i) logv_[i] = std::log(v_[i]);
    }

    double value(double x) const {
        if (x < x_.front()) return 0.0;
        if (x >= x_.back()) return v_.back();
        const auto it = std::upper_bound(x_.begin(), x_.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
        const double t = (x - x_[i]) / (x_[i + 1] - x_[i]);
        return std::exp(logv_[i] + t * (logv_[i + 1] - logv_[i]));
    }

    double left_value(double x) const { return (x <= x_.front()) ? 0.0 : value(x); }

    /// inf{x : H(x) >= p}; +inf when p exceeds the top value.
    double quantile(double p) const {
        if (p <= v_.front()) return x_.front();
        if (p > v_.back()) return std::numeric_limits<double>::infinity();
        const double lp = std::log(p);
        const auto it = std::lower_bound(logv_.begin(), logv_.end(), lp);
        const std::size_t j = static_cast<std::size_t>(it - logv_.begin());
        if (logv_[j] == lp) return x_[j];
        const std::size_t i = j - 1;
        const double t = (lp - logv_[i]) / (logv_[i + 1] - logv_[i]);
        return x_[i] + t * (x_[i + 1] - x_[i]);
    }

    const std::vector<double>& grid() const { return x_; }
    const std::vector<double>& node_values() const { return v_; }
    double top_value() const { return v_.back(); }
    double right_end() const {
        return v_.back() < 1.0 ? std::numeric_limits<double>::infinity() : x_.back();
    }
    /// True when the input was degenerate (single node) and the result is
    /// a ramp over an epsilon-widened interval.
    bool approximate() const { return approximate_; }

private:
    std::vector<double> x_;
    std::vector<double> logv_;
    std::vector<double> v_;
    bool approximate_ = false;
};

/// Continuize a step phantom df. Requires strictly positive node values.
/// A single-node df (all levels tied) has no range to interpolate over;
/// it degrades to a ramp over an epsilon-widened interval and is flagged.
inline ContinuizedDF continuize(const StepDF& g) {
    const auto& xs = g.grid();
    const auto& vs = g.values();
    for (double v : vs)
        if (!(v > 0.0))
            throw CalibrationError("continuize: step df must have positive values at all jumps");
    if (xs.size() == 1) {
        const double eps = 1e-9 * std::max(1.0, std::abs(xs.front()));
        return ContinuizedDF({xs.front() - eps, xs.front()}, {vs.front(), vs.front()}, true);
    }
    return ContinuizedDF(xs, vs, false);
}

struct ObrienRow {
    std::int64_t n = 0;       ///< calibration horizon
    double t = 0.0;           ///< time-scaling factor
    std::int64_t nt = 0;      ///< evaluated horizon [n t]
    double estimate = 0.0;    ///< empirical P(M_[nt] <= v_n)
    double target = 0.0;      ///< exp(-beta t)
};

/// Estimates of P(M_[nt] <= v_n(beta)) against the target exp(-beta t)
/// for every calibration horizon in `levels` and every t in `t_grid`.
/// Every required horizon [n t] must be a simulated checkpoint.
inline std::vector<ObrienRow> verify_obrien(const MaxSampleMatrix& samples,
                                            const LevelSequence& levels,
                                            std::span<const double> t_grid) {
    if (t_grid.empty()) throw ConfigError("verify_obrien: t grid must be non-empty");
    for (double t : t_grid)
        if (!(t > 0.0)) throw ConfigError("verify_obrien: t values must be > 0");

    // fail with the full list of missing horizons, not just the first
    std::vector<std::string> missing;
    for (const std::int64_t n : levels.horizons)
        for (const double t : t_grid) {
            const auto nt = static_cast<std::int64_t>(
                std::floor(static_cast<double>(n) * t + 1e-9));
            if (!samples.index_of_checkpoint(nt))
                missing.push_back(std::to_string(nt) + " (= [" + std::to_string(n) + " * " +
                                  std::to_string(t) + "])");
        }
    if (!missing.empty()) {
        std::string msg = "verify_obrien: required horizons missing from the checkpoint grid:";
        for (const auto& s : missing) msg += " " + s;
        throw ConfigError(msg);
    }

    std::vector<ObrienRow> rows;
    rows.reserve(levels.horizons.size() * t_grid.size());
    for (std::size_t i = 0; i < levels.horizons.size(); ++i) {
        const std::int64_t n = levels.horizons[i];
        const double v = levels.levels[i];
        for (const double t : t_grid) {
            const auto nt = static_cast<std::int64_t>(
                std::floor(static_cast<double>(n) * t + 1e-9));
            const std::size_t k = *samples.index_of_checkpoint(nt);
            std::size_t below = 0;
            for (std::size_t r_i = 0; r_i < samples.replicas(); ++r_i)
                if (samples.at(r_i, k) <= v) ++below;
            rows.push_back({n, t, nt,
                            static_cast<double>(below) /
                                static_cast<double>(samples.replicas()),
                            std::exp(-levels.beta * t)});
        }
    }
    return rows;
}

struct RegularityRatio {
    double x = 0.0;      ///< jump point
    double ratio = 0.0;  ///< (1 - G(x-)) / (1 - G(x))
};

/// O'Brien regularity diagnostics: the tail ratio at every jump point
/// where 1 - G(x) > 0. An empty result (all mass in one jump to 1) marks
/// a df that is not regular. For Eq.-(9)-style dfs the ratio at v_n is
/// (1 - e^{-beta/(n-1)})/(1 - e^{-beta/n}) and tends to 1.
inline std::vector<RegularityRatio> regularity_ratios(const StepDF& g) {
    const auto& xs = g.grid();
    const auto& vs = g.values();
    std::vector<RegularityRatio> out;
    out.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double right = vs[i];
        if (!(1.0 - right > 0.0)) continue;  // denominator 0: excluded
        const double left = (i == 0) ? 0.0 : vs[i - 1];
        out.push_back({xs[i], (1.0 - left) / (1.0 - right)});
    }
    return out;
}

}  // namespace phantomlab::phantom
