// Counter-seeded PRNG streams and the inverse normal CDF.
//
// Every replica of an experiment draws from its own xoshiro256++ stream,
// derived from (root seed, stream index) with splitmix64. Results are
// therefore independent of execution order and worker count.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace phantomlab {

// splitmix64 finalizer (Steele/Lea/Vigna).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed of the independent sub-stream `stream` under `root`.
constexpr std::uint64_t stream_seed(std::uint64_t root, std::uint64_t stream) noexcept {
    return mix64(root ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

/// Derive a seed for a named sub-run (calibration, reference, per-start).
constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t salt) noexcept {
    return mix64(mix64(root) ^ salt);
}

/// xoshiro256++ (Blackman/Vigna, public domain reference algorithm).
///
/// State is expanded from a 64-bit seed with splitmix64. One call to
/// next_u01() consumes exactly one 64-bit output; all samplers in this
/// project are inverse-CDF based, so "one draw = one stream value" holds
/// everywhere. next_u01() is strictly inside (0, 1).
class Xoshiro256pp {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256pp(std::uint64_t seed) noexcept {
        std::uint64_t x = seed;
        for (auto& w : state_) {
            x += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            w = z ^ (z >> 31);
        }
    }

    static Xoshiro256pp for_stream(std::uint64_t root, std::uint64_t stream) noexcept {
        return Xoshiro256pp(stream_seed(root, stream));
    }

    std::uint64_t operator()() noexcept {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform draw in the open interval (0, 1), 53-bit resolution.
    double next_u01() noexcept {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~static_cast<std::uint64_t>(0); }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_;
};

/// Inverse of the standard normal CDF (Acklam's rational approximation).
///
/// Absolute error below 2e-9 over (0,1), which is far inside every
/// statistical tolerance used here while keeping per-draw cost low.
/// p <= 0 maps to -inf, p >= 1 to +inf.
inline double inverse_normal_cdf(double p) noexcept {
    if (p <= 0.0) return -std::numeric_limits<double>::infinity();
    if (p >= 1.0) return std::numeric_limits<double>::infinity();

    static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
    static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

/// Standard normal CDF, used as the forward check for the inverse above.
inline double normal_cdf(double x) noexcept {
    return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

}  // namespace phantomlab
