// Relative extremal index estimation between two maxima samples.
//
// Two sequences are theta-related when P(M_n <= x) and P(M'_n <= x)^theta
// merge in sup norm. On samples this suggests the log-CDF ratio
//     log P_a(M_n <= x) / log P_b(M'_n <= x)
// evaluated where both empirical probabilities are moderate; the median
// over evaluation points is robust to band-edge instability.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "phantomlab/empirics.hpp"
#include "phantomlab/errors.hpp"
#include "phantomlab/stats.hpp"

namespace phantomlab::relext {

struct Band {
    double low = 0.05;
    double high = 0.95;
};

struct PointDiagnostic {
    double x = 0.0;
    double cdf_a = 0.0;
    double cdf_b = 0.0;
    double log_ratio = 0.0;  ///< log cdf_a / log cdf_b
};

struct ThetaEstimate {
    double theta_hat = 1.0;
    std::vector<PointDiagnostic> per_point;  ///< admissible points only
    double valid_fraction = 0.0;             ///< admissible / all evaluation points
    std::int64_t horizon = 0;
    std::size_t replicas_a = 0;
    std::size_t replicas_b = 0;
};

/// theta_hat = median over admissible evaluation points of the log-CDF
/// ratio. Evaluation points are the deduplicated union of both samples'
/// values at the shared checkpoint; a point is admissible when both
/// empirical CDFs lie inside the band. Needs >= 10 admissible points.
inline ThetaEstimate estimate_theta(const empirics::MaxSampleMatrix& a,
                                    const empirics::MaxSampleMatrix& b,
                                    std::size_t checkpoint_index, Band band = {}) {
    if (!(band.low > 0.0) || !(band.low < band.high) || !(band.high < 1.0))
        throw EstimationError("estimate_theta: band must satisfy 0 < low < high < 1");
    if (checkpoint_index >= a.checkpoints().size() ||
        checkpoint_index >= b.checkpoints().size())
        throw EstimationError("estimate_theta: checkpoint index out of range");
    if (a.checkpoints()[checkpoint_index] != b.checkpoints()[checkpoint_index])
        throw EstimationError("estimate_theta: the two sample matrices disagree on the "
                              "checkpoint horizon");

    std::vector<double> sa = a.column(checkpoint_index);
    std::vector<double> sb = b.column(checkpoint_index);
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());

    std::vector<double> points;
    points.reserve(sa.size() + sb.size());
    points.insert(points.end(), sa.begin(), sa.end());
    points.insert(points.end(), sb.begin(), sb.end());
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());

    auto ecdf = [](const std::vector<double>& sorted, double x) {
        const auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
        return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
    };

    ThetaEstimate est;
    est.horizon = a.checkpoints()[checkpoint_index];
    est.replicas_a = a.replicas();
    est.replicas_b = b.replicas();
    std::vector<double> ratios;
    for (const double x : points) {
        const double fa = ecdf(sa, x);
        const double fb = ecdf(sb, x);
        if (fa < band.low || fa > band.high || fb < band.low || fb > band.high) continue;
        const double ratio = std::log(fa) / std::log(fb);
        est.per_point.push_back({x, fa, fb, ratio});
        ratios.push_back(ratio);
    }
    est.valid_fraction =
        points.empty() ? 0.0
                       : static_cast<double>(ratios.size()) / static_cast<double>(points.size());
    if (ratios.size() < 10)
        throw EstimationError("estimate_theta: only " + std::to_string(ratios.size()) +
                              " admissible evaluation points (need >= 10); widen the band or "
                              "increase replicas");
    est.theta_hat = median(std::move(ratios));
    return est;
}

/// Quantile transfer along Eq.-(2)-related sequences: a level with
/// P(M_n <= v_n) -> alpha for the model sequence has
/// P(M'_n <= v_n) -> alpha^{1/theta} for the companion.
inline double theta_quantile_transfer(double theta, double alpha) {
    if (!(theta > 0.0)) throw EstimationError("theta_quantile_transfer: theta must be > 0");
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw EstimationError("theta_quantile_transfer: alpha must be in (0,1)");
    return std::pow(alpha, 1.0 / theta);
}

}  // namespace phantomlab::relext
