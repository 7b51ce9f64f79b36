// Quenched-start diagnostics: gap curves between point-started empirical
// max dfs and a stationary-calibrated phantom power, bad-set membership,
// and exact coupling times for finite chains.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "phantomlab/empirics.hpp"
#include "phantomlab/errors.hpp"
#include "phantomlab/models.hpp"
#include "phantomlab/oracle.hpp"
#include "phantomlab/step_df.hpp"

namespace phantomlab::quenched {

/// B_0 membership: the observable value meets or exceeds the right end G*
/// of the phantom df. Always false when G* = +inf (continuous unbounded
/// stationary marginals -- the regime where every start point works).
inline bool bad_set_member(double x_value, double g_star) {
    if (g_star == std::numeric_limits<double>::infinity()) return false;
    return x_value >= g_star;
}

/// S_0 for a finite chain: states in B_0 = {i : values[i] >= g_star}
/// together with every state from which B_0 is reachable along the
/// support graph of P.
inline std::vector<bool> bad_state_set(const oracle::FiniteChain& chain, double g_star) {
    const std::size_t m = chain.size();
    std::vector<bool> bad(m, false);
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < m; ++i)
        if (bad_set_member(chain.values()[i], g_star)) {
            bad[i] = true;
            stack.push_back(i);
        }
    // reverse reachability: j -> i edges with p(j, i) > 0
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        for (std::size_t j = 0; j < m; ++j)
            if (!bad[j] && chain.p(j, i) > 0.0) {
                bad[j] = true;
                stack.push_back(j);
            }
    }
    return bad;
}

struct QuenchedReport {
    std::vector<double> start_points;            ///< values, or state indices for finite chains
    std::vector<std::int64_t> horizons;
    std::vector<std::vector<double>> gap;        ///< gap[start][horizon index]
    std::vector<double> stationary_gap;          ///< reference curve, same horizons
    std::vector<bool> bad_set_hits;              ///< per start
};

/// Gap curves D_n(s) = sup_x |P_s(M_n <= x)^ - G(x)^n| for every start s,
/// plus a stationary-start reference run. The phantom must have been
/// calibrated beforehand on stationary-start samples of the same model.
/// Starts inside the bad set are flagged and the run proceeds.
template <empirics::DistributionFunction G>
QuenchedReport quenched_gap_curve(const models::ChainModel& model,
                                  std::span<const double> start_points,
                                  std::span<const std::int64_t> horizons, std::size_t replicas,
                                  std::uint64_t seed, const G& phantom, unsigned workers = 0) {
    if (start_points.empty()) throw ConfigError("quenched_gap_curve: no start points");
    QuenchedReport report;
    report.start_points.assign(start_points.begin(), start_points.end());
    report.horizons.assign(horizons.begin(), horizons.end());

    const double g_star = phantom.right_end();
    if (model.kind() == models::ChainModel::Kind::finite) {
        const auto bad = bad_state_set(model.as_finite().chain, g_star);
        for (const double s : start_points) {
            const auto idx = static_cast<std::size_t>(s);
            report.bad_set_hits.push_back(idx < bad.size() && bad[idx]);
        }
    } else {
        for (const double s : start_points)
            report.bad_set_hits.push_back(bad_set_member(s, g_star));
    }

    auto gap_curve = [&](const models::Start& start, std::uint64_t run_seed) {
        const auto samples =
            empirics::simulate_max_samples(model, start, horizons, replicas, run_seed, workers);
        std::vector<double> gaps(horizons.size());
        for (std::size_t k = 0; k < horizons.size(); ++k)
            gaps[k] = empirics::sup_distance(empirics::empirical_max_df(samples, k), 1, phantom,
                                             horizons[k]);
        return gaps;
    };

    for (std::size_t i = 0; i < start_points.size(); ++i)
        report.gap.push_back(
            gap_curve(models::Start::point(start_points[i]), derive_seed(seed, 0x100 + i)));
    report.stationary_gap = gap_curve(models::Start::stationary(), derive_seed(seed, 0x2));
    return report;
}

/// Independent coupling times for a finite chain: one copy starts from the
/// stationary law, the other from state s; both move independently until
/// they first occupy the same state (compared after each joint step).
/// All returned times are finite; exceeding max_steps is a diagnostic
/// failure naming the chain.
inline std::vector<std::int64_t> coupling_time_samples(const oracle::FiniteChain& chain,
                                                       std::size_t s, std::size_t replicas,
                                                       std::uint64_t seed, unsigned workers = 0,
                                                       std::int64_t max_steps = 10'000'000) {
    if (s >= chain.size()) throw ConfigError("coupling_time_samples: bad state index");
    const std::vector<double> pi = oracle::stationary_distribution(chain);
    std::vector<std::int64_t> taus(replicas);
    empirics::parallel_replicas(replicas, workers, [&](std::size_t r) {
        Xoshiro256pp rng = Xoshiro256pp::for_stream(seed, r);
        std::size_t a = models::detail::sample_pmf(pi, rng.next_u01());
        std::size_t b = s;
        for (std::int64_t step = 1; step <= max_steps; ++step) {
            a = models::detail::sample_pmf(chain.row(a), rng.next_u01());
            b = models::detail::sample_pmf(chain.row(b), rng.next_u01());
            if (a == b) {
                taus[r] = step;
                return;
            }
        }
        throw EstimationError("coupling_time_samples: chains (m = " +
                              std::to_string(chain.size()) + ", start = " + std::to_string(s) +
                              ") did not meet within " + std::to_string(max_steps) + " steps");
    });
    return taus;
}

}  // namespace phantomlab::quenched
