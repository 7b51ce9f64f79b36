// Chain models and the running-maxima simulator.
//
// Four kinds of chain share one observable-valued simulation interface:
//   metropolis  - random walk Metropolis kernel for a target density,
//                 X_{j+1} = X_j + Z 1{U <= psi(X_j, X_j + Z)};
//   lindley     - W_{j+1} = max(W_j + xi, 0);
//   iid         - independent draws (optionally blockwise maxima);
//   finite      - finite-state chain with an observable value per state.
//
// Stream contract (what a straight-line reimplementation must follow):
//   * metropolis: a stationary start consumes one draw; each step draws
//     Z first, then U -- exactly two stream values even on rejection.
//   * iid: one draw per index (block size k: k draws, in order).
//   * lindley: one innovation draw per step.
//   * finite: starts from the stationary law or the built-in initial law
//     consume one draw; each step consumes one draw (CDF scan of the row).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "phantomlab/densities.hpp"
#include "phantomlab/errors.hpp"
#include "phantomlab/oracle.hpp"
#include "phantomlab/rng.hpp"

namespace phantomlab::models {

/// Acceptance probability psi(x, y) = min(f(y)/f(x), 1), and 1 when
/// f(x) = 0. Rejects NaN or negative density evaluations as model errors.
inline double metropolis_acceptance(double x, double y, const TargetDensity& target) {
    const double fx = target.density(x);
    const double fy = target.density(y);
    if (std::isnan(fx) || fx < 0.0 || std::isnan(fy) || fy < 0.0)
        throw ModelError("metropolis_acceptance: target density returned NaN or negative");
    if (fx == 0.0) return 1.0;
    return std::min(fy / fx, 1.0);
}

/// One Metropolis transition given the proposed increment z and the
/// uniform draw u: returns x + z when u <= psi(x, x + z), else x.
inline double metropolis_step(double x, double z, double u, const TargetDensity& target) {
    if (u < 0.0 || u > 1.0) throw std::invalid_argument("metropolis_step: u must be in [0,1]");
    return (u <= metropolis_acceptance(x, x + z, target)) ? x + z : x;
}

/// Lindley recursion step: max(w + xi, 0).
inline double lindley_step(double w, double xi) {
    if (w < 0.0) throw std::invalid_argument("lindley_step: w must be >= 0");
    return std::max(w + xi, 0.0);
}

/// How a trajectory is started.
struct Start {
    enum class Mode {
        point,       ///< fixed start: observable value, or state index for finite chains
        stationary,  ///< exact draw from the stationary law (needs a sampler)
        initial_law  ///< finite chains only: draw from the chain's built-in lambda
    };

    static Start point(double value) { return {Mode::point, value}; }
    static Start stationary() { return {Mode::stationary, 0.0}; }
    static Start initial_law() { return {Mode::initial_law, 0.0}; }

    Mode mode = Mode::stationary;
    double value = 0.0;

    std::string describe() const {
        switch (mode) {
            case Mode::point: return "point(" + std::to_string(value) + ")";
            case Mode::stationary: return "stationary";
            case Mode::initial_law: return "initial_law";
        }
        return "?";
    }
};

struct MetropolisModel {
    TargetDensity target;
    ProposalDensity proposal;
};

struct LindleyModel {
    Marginal innovation;
};

struct IidModel {
    Marginal marginal;
    std::int64_t block = 1;  // X_n = max of `block` fresh draws
};

struct FiniteModel {
    oracle::FiniteChain chain;
    std::optional<std::vector<double>> pi;  // stationary law, when solvable
};

/// Immutable chain specification; safe to share across worker threads.
class ChainModel {
public:
    enum class Kind { metropolis, lindley, iid, finite };

    static ChainModel metropolis(TargetDensity target, ProposalDensity proposal) {
        return ChainModel(MetropolisModel{std::move(target), std::move(proposal)});
    }
    static ChainModel lindley(Marginal innovation) {
        return ChainModel(LindleyModel{std::move(innovation)});
    }
    static ChainModel iid(Marginal marginal, std::int64_t block = 1) {
        if (block < 1) throw ModelError("iid model: block size must be >= 1");
        return ChainModel(IidModel{std::move(marginal), block});
    }
    static ChainModel finite(oracle::FiniteChain chain) {
        FiniteModel fm{std::move(chain), std::nullopt};
        try {
            fm.pi = oracle::stationary_distribution(fm.chain);
        } catch (const ModelError&) {
            // reducible or periodic support: no exact stationary sampler,
            // point starts remain available
        }
        return ChainModel(std::move(fm));
    }

    Kind kind() const { return static_cast<Kind>(impl_.index()); }

    const MetropolisModel& as_metropolis() const { return std::get<MetropolisModel>(impl_); }
    const LindleyModel& as_lindley() const { return std::get<LindleyModel>(impl_); }
    const IidModel& as_iid() const { return std::get<IidModel>(impl_); }
    const FiniteModel& as_finite() const { return std::get<FiniteModel>(impl_); }

    bool has_stationary_sampler() const {
        switch (kind()) {
            case Kind::metropolis: return as_metropolis().target.has_sampler();
            case Kind::iid: return true;  // the marginal is the stationary law
            case Kind::lindley: return false;
            case Kind::finite: return as_finite().pi.has_value();
        }
        return false;
    }

    /// Marginal CDF of the stationary observable, where closed-form.
    bool has_marginal_cdf() const {
        switch (kind()) {
            case Kind::metropolis: return as_metropolis().target.has_cdf();
            case Kind::iid: return as_iid().block == 1;
            default: return false;
        }
    }

    double marginal_cdf(double x) const {
        switch (kind()) {
            case Kind::metropolis: return as_metropolis().target.cdf(x);
            case Kind::iid: return as_iid().marginal.cdf(x);
            default: throw ConfigError("model has no closed-form marginal CDF");
        }
    }

    double marginal_quantile(double p) const {
        switch (kind()) {
            case Kind::metropolis:
                if (!as_metropolis().target.has_cdf())
                    throw ConfigError("target marginal is not invertible in closed form");
                return as_metropolis().target.quantile(p);
            case Kind::iid:
                return as_iid().marginal.quantile(p);
            default:
                throw ConfigError("model has no closed-form marginal quantile");
        }
    }

    std::string describe() const {
        switch (kind()) {
            case Kind::metropolis:
                return "metropolis(target=" + as_metropolis().target.describe() +
                       ",proposal=" + as_metropolis().proposal.describe() + ")";
            case Kind::lindley:
                return "lindley(" + as_lindley().innovation.describe() + ")";
            case Kind::iid:
                return "iid(" + as_iid().marginal.describe() +
                       (as_iid().block > 1 ? ",block=" + std::to_string(as_iid().block) : "") +
                       ")";
            case Kind::finite:
                return "finite(m=" + std::to_string(as_finite().chain.size()) + ")";
        }
        return "?";
    }

private:
    using Impl = std::variant<MetropolisModel, LindleyModel, IidModel, FiniteModel>;
    explicit ChainModel(Impl impl) : impl_(std::move(impl)) {}
    Impl impl_;
};

namespace detail {

inline std::size_t sample_pmf(std::span<const double> pmf, double u) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < pmf.size(); ++i) {
        acc += pmf[i];
        if (u <= acc) return i;
    }
    return pmf.size() - 1;
}

inline void validate_checkpoints(std::span<const std::int64_t> checkpoints) {
    if (checkpoints.empty())
        throw std::invalid_argument("simulate_running_maxima: checkpoints must be non-empty");
    if (checkpoints.front() < 1)
        throw std::invalid_argument("simulate_running_maxima: first checkpoint must be >= 1");
    for (std::size_t i = 0; i + 1 < checkpoints.size(); ++i)
        if (!(checkpoints[i] < checkpoints[i + 1]))
            throw std::invalid_argument(
                "simulate_running_maxima: checkpoints must be strictly increasing");
}

}  // namespace detail

/// Simulate X_0, ..., X_{n_max - 1} and record M_n = max_{0<=j<=n-1} X_j at
/// each checkpoint n. The output is non-decreasing, and identical
/// (engine stream, model, start, checkpoints) give bit-identical output.
inline std::vector<double> simulate_running_maxima(const ChainModel& model, const Start& start,
                                                   std::span<const std::int64_t> checkpoints,
                                                   Xoshiro256pp& rng) {
    detail::validate_checkpoints(checkpoints);
    if (start.mode == Start::Mode::stationary && !model.has_stationary_sampler())
        throw ConfigError("stationary start requested but the model has no exact sampler");
    if (start.mode == Start::Mode::initial_law && model.kind() != ChainModel::Kind::finite)
        throw ConfigError("initial_law start is only defined for finite chains");

    const std::int64_t n_max = checkpoints.back();
    std::vector<double> out;
    out.reserve(checkpoints.size());

    switch (model.kind()) {
        case ChainModel::Kind::metropolis: {
            const auto& mm = model.as_metropolis();
            double x = (start.mode == Start::Mode::stationary) ? mm.target.sample(rng)
                                                               : start.value;
            double fx = mm.target.density(x);
            if (std::isnan(fx) || fx < 0.0)
                throw ModelError("metropolis: target density returned NaN or negative");
            double running = x;
            std::size_t k = 0;
            for (std::int64_t i = 1; i <= n_max; ++i) {
                while (k < checkpoints.size() && checkpoints[k] == i) {
                    out.push_back(running);
                    ++k;
                }
                if (i == n_max) break;
                const double z = mm.proposal.sample_increment(rng);
                const double u = rng.next_u01();
                const double y = x + z;
                const double fy = mm.target.density(y);
                if (std::isnan(fy) || fy < 0.0)
                    throw ModelError("metropolis: target density returned NaN or negative");
                const double acc = (fx == 0.0) ? 1.0 : std::min(fy / fx, 1.0);
                if (u <= acc) {
                    x = y;
                    fx = fy;
                    if (x > running) running = x;
                }
            }
            break;
        }
        case ChainModel::Kind::lindley: {
            const auto& lm = model.as_lindley();
            double w = start.value;  // only point starts reach here
            if (w < 0.0) throw ConfigError("lindley start must be >= 0");
            double running = w;
            std::size_t k = 0;
            for (std::int64_t i = 1; i <= n_max; ++i) {
                while (k < checkpoints.size() && checkpoints[k] == i) {
                    out.push_back(running);
                    ++k;
                }
                if (i == n_max) break;
                w = lindley_step(w, lm.innovation.sample(rng));
                if (w > running) running = w;
            }
            break;
        }
        case ChainModel::Kind::iid: {
            const auto& im = model.as_iid();
            auto draw = [&]() {
                double v = im.marginal.sample(rng);
                for (std::int64_t b = 1; b < im.block; ++b)
                    v = std::max(v, im.marginal.sample(rng));
                return v;
            };
            // the start is forgotten after X_0; a point start pins X_0 only
            double running = (start.mode == Start::Mode::point) ? start.value : draw();
            std::size_t k = 0;
            for (std::int64_t i = 1; i <= n_max; ++i) {
                while (k < checkpoints.size() && checkpoints[k] == i) {
                    out.push_back(running);
                    ++k;
                }
                if (i == n_max) break;
                running = std::max(running, draw());
            }
            break;
        }
        case ChainModel::Kind::finite: {
            const auto& fm = model.as_finite();
            const auto& chain = fm.chain;
            std::size_t state;
            if (start.mode == Start::Mode::point) {
                state = static_cast<std::size_t>(start.value);
                if (state >= chain.size() ||
                    static_cast<double>(state) != start.value)
                    throw ConfigError("finite chain point start must be a valid state index");
            } else if (start.mode == Start::Mode::stationary) {
                state = detail::sample_pmf(*fm.pi, rng.next_u01());
            } else {
                state = detail::sample_pmf(chain.lambda(), rng.next_u01());
            }
            double running = chain.values()[state];
            std::size_t k = 0;
            for (std::int64_t i = 1; i <= n_max; ++i) {
                while (k < checkpoints.size() && checkpoints[k] == i) {
                    out.push_back(running);
                    ++k;
                }
                if (i == n_max) break;
                state = detail::sample_pmf(chain.row(state), rng.next_u01());
                running = std::max(running, chain.values()[state]);
            }
            break;
        }
    }
    return out;
}

/// Seed-based convenience overload (one private stream for the whole run).
inline std::vector<double> simulate_running_maxima(const ChainModel& model, const Start& start,
                                                   std::span<const std::int64_t> checkpoints,
                                                   std::uint64_t seed) {
    Xoshiro256pp rng(seed);
    return simulate_running_maxima(model, start, checkpoints, rng);
}

}  // namespace phantomlab::models
