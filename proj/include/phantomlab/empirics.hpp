// Monte Carlo engine: replicated running-maxima samples, empirical max
// distribution functions, and the extremal-index-zero level check.
//
// Replica r always draws from stream(root_seed, r), so results are
// byte-identical no matter how replicas are scheduled across workers.
#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "phantomlab/errors.hpp"
#include "phantomlab/models.hpp"
#include "phantomlab/step_df.hpp"

namespace phantomlab::empirics {

struct Provenance {
    std::string model_id;
    std::string start;
    std::uint64_t root_seed = 0;
};

/// Replicated running maxima on a checkpoint grid (replicas x checkpoints).
class MaxSampleMatrix {
public:
    MaxSampleMatrix(std::vector<std::int64_t> checkpoints, std::size_t replicas,
                    std::vector<double> values, Provenance prov)
        : checkpoints_(std::move(checkpoints)), replicas_(replicas), values_(std::move(values)),
          prov_(std::move(prov)) {
        if (values_.size() != replicas_ * checkpoints_.size())
            throw std::invalid_argument("MaxSampleMatrix: value buffer has wrong size");
        for (std::size_t r = 0; r < replicas_; ++r)
            for (std::size_t k = 1; k < checkpoints_.size(); ++k)
                if (at(r, k) < at(r, k - 1))
                    throw std::invalid_argument("MaxSampleMatrix: row " + std::to_string(r) +
                                                " is not non-decreasing");
    }

    const std::vector<std::int64_t>& checkpoints() const { return checkpoints_; }
    std::size_t replicas() const { return replicas_; }
    const Provenance& provenance() const { return prov_; }
    double at(std::size_t replica, std::size_t checkpoint_index) const {
        return values_[replica * checkpoints_.size() + checkpoint_index];
    }
    const std::vector<double>& raw() const { return values_; }

    std::vector<double> column(std::size_t checkpoint_index) const {
        if (checkpoint_index >= checkpoints_.size())
            throw std::invalid_argument("MaxSampleMatrix: checkpoint index out of range");
        std::vector<double> col(replicas_);
        for (std::size_t r = 0; r < replicas_; ++r) col[r] = at(r, checkpoint_index);
        return col;
    }

    std::optional<std::size_t> index_of_checkpoint(std::int64_t n) const {
        for (std::size_t k = 0; k < checkpoints_.size(); ++k)
            if (checkpoints_[k] == n) return k;
        return std::nullopt;
    }

private:
    std::vector<std::int64_t> checkpoints_;
    std::size_t replicas_;
    std::vector<double> values_;  // row-major, one row per replica
    Provenance prov_;
};

/// Run `body(r)` for r in [0, count) on a fixed pool of `workers` threads.
/// workers == 0 picks the hardware concurrency.
inline void parallel_replicas(std::size_t count, unsigned workers,
                              const std::function<void(std::size_t)>& body) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    if (workers <= 1) {
        for (std::size_t r = 0; r < count; ++r) body(r);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mu;
    auto run = [&]() {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t r = next.fetch_add(1, std::memory_order_relaxed);
            if (r >= count) break;
            try {
                body(r);
            } catch (...) {
                std::scoped_lock lock(error_mu);
                if (!error) error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

/// Replicated simulation; replica r uses the derived stream (root, r).
inline MaxSampleMatrix simulate_max_samples(const models::ChainModel& model,
                                            const models::Start& start,
                                            std::span<const std::int64_t> checkpoints,
                                            std::size_t replicas, std::uint64_t root_seed,
                                            unsigned workers = 0) {
    if (replicas < 1) throw std::invalid_argument("simulate_max_samples: need replicas >= 1");
    const std::size_t k = checkpoints.size();
    std::vector<double> values(replicas * k);
    parallel_replicas(replicas, workers, [&](std::size_t r) {
        Xoshiro256pp rng = Xoshiro256pp::for_stream(root_seed, r);
        const auto row = models::simulate_running_maxima(model, start, checkpoints, rng);
        std::copy(row.begin(), row.end(), values.begin() + static_cast<std::ptrdiff_t>(r * k));
    });
    return MaxSampleMatrix({checkpoints.begin(), checkpoints.end()}, replicas, std::move(values),
                           Provenance{model.describe(), start.describe(), root_seed});
}

/// Empirical CDF of one checkpoint column; jump 1/R at each distinct value.
inline StepDF empirical_max_df(const MaxSampleMatrix& samples, std::size_t checkpoint_index) {
    return StepDF::from_samples(samples.column(checkpoint_index));
}

struct ExtremalZeroRow {
    std::int64_t n = 0;
    double level = 0.0;     ///< u_n(tau) = F^{-1}(1 - tau/n)
    double estimate = 0.0;  ///< empirical P(M_n <= u_n(tau))
};

/// Extremal-index-zero diagnostic: estimates P(M_n <= u_n(tau)) along the
/// horizon list, with levels u_n(tau) = F^{-1}(1 - tau/n) from the model's
/// closed-form marginal. An i.i.d. sequence converges to exp(-tau); chains
/// with extremal index zero drift toward 1.
inline std::vector<ExtremalZeroRow> extremal_index_zero_check(
    const models::ChainModel& model, double tau, std::span<const std::int64_t> horizons,
    std::size_t replicas, std::uint64_t seed, unsigned workers = 0) {
    if (!(tau > 0.0)) throw ConfigError("extremal_index_zero_check: tau must be > 0");
    if (!model.has_marginal_cdf())
        throw ConfigError("extremal_index_zero_check: marginal CDF not invertible in closed "
                          "form (use an iid or metropolis model with closed-form target)");
    const auto samples = simulate_max_samples(model, models::Start::stationary(), horizons,
                                              replicas, seed, workers);
    std::vector<ExtremalZeroRow> rows;
    rows.reserve(horizons.size());
    for (std::size_t k = 0; k < horizons.size(); ++k) {
        const double n = static_cast<double>(horizons[k]);
        const double u = model.marginal_quantile(1.0 - tau / n);
        std::size_t below = 0;
        for (std::size_t r = 0; r < replicas; ++r)
            if (samples.at(r, k) <= u) ++below;
        rows.push_back({horizons[k], u,
                        static_cast<double>(below) / static_cast<double>(replicas)});
    }
    return rows;
}

/// Geometric checkpoint grid n_k = ceil(n0 * rho^k), deduplicated, capped at n_max.
inline std::vector<std::int64_t> geometric_checkpoints(std::int64_t n0, double rho,
                                                       std::int64_t n_max) {
    if (n0 < 1 || !(rho > 1.0) || n_max < n0)
        throw ConfigError("geometric_checkpoints: need n0 >= 1, rho > 1, n_max >= n0");
    std::vector<std::int64_t> grid;
    double x = static_cast<double>(n0);
    while (true) {
        const auto n = static_cast<std::int64_t>(std::ceil(x - 1e-9));
        if (n > n_max) break;
        if (grid.empty() || n > grid.back()) grid.push_back(n);
        x *= rho;
    }
    if (grid.empty() || grid.back() != n_max) grid.push_back(n_max);
    return grid;
}

}  // namespace phantomlab::empirics
