// Target densities, symmetric proposal densities and sampleable marginals.
//
// All sampling is inverse-CDF based: one sample consumes exactly one
// uniform draw from the stream. This convention is what makes replicated
// runs reproducible draw-by-draw and lets tests replay a stream verbatim.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "phantomlab/errors.hpp"
#include "phantomlab/rng.hpp"

namespace phantomlab::models {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

namespace detail {

inline double pareto_density(double alpha, double x_min, double x) {
    if (x < x_min) return 0.0;
    return alpha * std::pow(x_min, alpha) * std::pow(x, -alpha - 1.0);
}

inline double pareto_cdf(double alpha, double x_min, double x) {
    if (x <= x_min) return 0.0;
    return 1.0 - std::pow(x_min / x, alpha);
}

inline double pareto_quantile(double alpha, double x_min, double p) {
    if (p >= 1.0) return kInf;
    if (p <= 0.0) return x_min;
    return x_min * std::pow(1.0 - p, -1.0 / alpha);
}

inline double gaussian_density(double mu, double sigma, double x) {
    const double z = (x - mu) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * 2.5066282746310005024);
}

inline double student_t_density(double nu, double x) {
    const double lognorm =
        std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) - 0.5 * std::log(nu * M_PI);
    return std::exp(lognorm - 0.5 * (nu + 1.0) * std::log1p(x * x / nu));
}

}  // namespace detail

/// Heavy- or light-tailed target density f for the Metropolis kernel.
///
/// Families: pareto(alpha, x_min) with f(x) = alpha x_min^alpha x^{-alpha-1}
/// on [x_min, inf); student_t(nu); gaussian(mu, sigma); custom_table, a
/// piecewise-constant density on a grid (value of cell [x_i, x_{i+1}) is
/// the i-th table entry). Closed-form CDF/quantile are exposed where they
/// exist; only then can a chain be started exactly from its target.
class TargetDensity {
public:
    enum class Family { pareto, student_t, gaussian, custom_table };

    static TargetDensity pareto(double alpha, double x_min) {
        if (!(alpha > 0.0)) throw ModelError("pareto: shape alpha must be > 0");
        if (!(x_min > 0.0)) throw ModelError("pareto: x_min must be > 0");
        TargetDensity t;
        t.family_ = Family::pareto;
        t.p1_ = alpha;
        t.p2_ = x_min;
        return t;
    }

    static TargetDensity student_t(double nu) {
        if (!(nu > 0.0)) throw ModelError("student_t: dof nu must be > 0");
        TargetDensity t;
        t.family_ = Family::student_t;
        t.p1_ = nu;
        return t;
    }

    static TargetDensity gaussian(double mu, double sigma) {
        if (!(sigma > 0.0)) throw ModelError("gaussian: sigma must be > 0");
        TargetDensity t;
        t.family_ = Family::gaussian;
        t.p1_ = mu;
        t.p2_ = sigma;
        return t;
    }

    /// Piecewise-constant density from (x, density) pairs. The grid must be
    /// strictly increasing and the midpoint-rule integral over the declared
    /// support must be 1 within 1e-6; the last pair closes the final cell.
    static TargetDensity custom_table(std::vector<double> xs, std::vector<double> fs) {
        if (xs.size() != fs.size() || xs.size() < 2)
            throw ModelError("custom_table: need >= 2 (x, density) pairs of equal length");
        for (std::size_t i = 0; i + 1 < xs.size(); ++i)
            if (!(xs[i] < xs[i + 1]))
                throw ModelError("custom_table: grid must be strictly increasing");
        double integral = 0.0;
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
            if (!(fs[i] >= 0.0) || std::isnan(fs[i]))
                throw ModelError("custom_table: densities must be >= 0");
            integral += fs[i] * (xs[i + 1] - xs[i]);
        }
        if (std::abs(integral - 1.0) > 1e-6)
            throw ModelError("custom_table: density integrates to " + std::to_string(integral) +
                             ", expected 1 within 1e-6");
        TargetDensity t;
        t.family_ = Family::custom_table;
        t.xs_ = std::move(xs);
        t.fs_ = std::move(fs);
        t.cum_.assign(t.xs_.size(), 0.0);
        for (std::size_t i = 0; i + 1 < t.xs_.size(); ++i)
            t.cum_[i + 1] = t.cum_[i] + t.fs_[i] * (t.xs_[i + 1] - t.xs_[i]);
        return t;
    }

    Family family() const { return family_; }

    double density(double x) const {
        switch (family_) {
            case Family::pareto:
                if (x < p2_) return 0.0;
                if (p1_ == 1.0) return p2_ / (x * x);
                return detail::pareto_density(p1_, p2_, x);
            case Family::student_t:
                return detail::student_t_density(p1_, x);
            case Family::gaussian:
                return detail::gaussian_density(p1_, p2_, x);
            case Family::custom_table: {
                if (x < xs_.front() || x >= xs_.back()) return 0.0;
                const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
                return fs_[static_cast<std::size_t>(it - xs_.begin()) - 1];
            }
        }
        return 0.0;
    }

    bool has_cdf() const {
        switch (family_) {
            case Family::pareto:
            case Family::gaussian:
            case Family::custom_table:
                return true;
            case Family::student_t:
                return p1_ == 1.0 || p1_ == 2.0;
        }
        return false;
    }

    double cdf(double x) const {
        switch (family_) {
            case Family::pareto:
                return detail::pareto_cdf(p1_, p2_, x);
            case Family::gaussian:
                return normal_cdf((x - p1_) / p2_);
            case Family::student_t:
                if (p1_ == 1.0) return 0.5 + std::atan(x) / M_PI;
                if (p1_ == 2.0) return 0.5 + x / (2.0 * std::sqrt(2.0 + x * x));
                throw ModelError("student_t: closed-form CDF only for nu in {1, 2}");
            case Family::custom_table: {
                if (x <= xs_.front()) return 0.0;
                if (x >= xs_.back()) return 1.0;
                const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
                const std::size_t i = static_cast<std::size_t>(it - xs_.begin()) - 1;
                return cum_[i] + fs_[i] * (x - xs_[i]);
            }
        }
        return 0.0;
    }

    /// Generalized inverse of the CDF; p <= 0 / p >= 1 map to the support
    /// endpoints (+-inf for unbounded families).
    double quantile(double p) const {
        switch (family_) {
            case Family::pareto:
                return detail::pareto_quantile(p1_, p2_, p);
            case Family::gaussian:
                return p1_ + p2_ * inverse_normal_cdf(p);
            case Family::student_t: {
                if (p <= 0.0) return -kInf;
                if (p >= 1.0) return kInf;
                if (p1_ == 1.0) return std::tan(M_PI * (p - 0.5));
                if (p1_ == 2.0) {
                    const double u = 2.0 * p - 1.0;
                    return u * std::sqrt(2.0 / (1.0 - u * u));
                }
                throw ModelError("student_t: closed-form quantile only for nu in {1, 2}");
            }
            case Family::custom_table: {
                if (p <= 0.0) return xs_.front();
                if (p >= cum_.back()) return xs_.back();
                // left-continuous generalized inverse of the piecewise-linear CDF
                const auto lb = std::lower_bound(cum_.begin(), cum_.end(), p);
                const std::size_t j = static_cast<std::size_t>(lb - cum_.begin());
                if (cum_[j] == p) return xs_[j];
                const std::size_t i = j - 1;  // cum_[i] < p < cum_[i+1], so fs_[i] > 0
                return xs_[i] + (p - cum_[i]) / fs_[i];
            }
        }
        return 0.0;
    }

    bool has_sampler() const { return has_cdf(); }

    /// Inverse-CDF sample; consumes exactly one stream value.
    double sample(Xoshiro256pp& rng) const { return quantile(rng.next_u01()); }

    std::string describe() const {
        switch (family_) {
            case Family::pareto:
                return "pareto(" + std::to_string(p1_) + "," + std::to_string(p2_) + ")";
            case Family::student_t:
                return "student_t(" + std::to_string(p1_) + ")";
            case Family::gaussian:
                return "gaussian(" + std::to_string(p1_) + "," + std::to_string(p2_) + ")";
            case Family::custom_table:
                return "custom_table[" + std::to_string(xs_.size()) + "]";
        }
        return "?";
    }

private:
    TargetDensity() = default;

    Family family_ = Family::gaussian;
    double p1_ = 0.0;  // alpha | nu | mu
    double p2_ = 1.0;  // x_min | sigma
    std::vector<double> xs_, fs_, cum_;
};

/// Symmetric-about-zero proposal for the random walk kernel.
class ProposalDensity {
public:
    enum class Family { gaussian, uniform, cauchy };

    static ProposalDensity gaussian(double sigma) {
        if (!(sigma > 0.0)) throw ModelError("proposal gaussian: sigma must be > 0");
        return ProposalDensity{Family::gaussian, sigma};
    }
    static ProposalDensity uniform(double half_width) {
        if (!(half_width > 0.0)) throw ModelError("proposal uniform: half_width must be > 0");
        return ProposalDensity{Family::uniform, half_width};
    }
    static ProposalDensity cauchy(double scale) {
        if (!(scale > 0.0)) throw ModelError("proposal cauchy: scale must be > 0");
        return ProposalDensity{Family::cauchy, scale};
    }

    Family family() const { return family_; }
    double scale() const { return scale_; }

    /// One increment Z; consumes exactly one stream value.
    double sample_increment(Xoshiro256pp& rng) const {
        const double u = rng.next_u01();
        switch (family_) {
            case Family::gaussian:
                return scale_ * inverse_normal_cdf(u);
            case Family::uniform:
                return scale_ * (2.0 * u - 1.0);
            case Family::cauchy:
                return scale_ * std::tan(M_PI * (u - 0.5));
        }
        return 0.0;
    }

    std::string describe() const {
        switch (family_) {
            case Family::gaussian:
                return "gaussian(" + std::to_string(scale_) + ")";
            case Family::uniform:
                return "uniform(" + std::to_string(scale_) + ")";
            case Family::cauchy:
                return "cauchy(" + std::to_string(scale_) + ")";
        }
        return "?";
    }

private:
    ProposalDensity(Family f, double s) : family_(f), scale_(s) {}
    Family family_;
    double scale_;
};

/// Sampleable scalar law used as an i.i.d. marginal or a Lindley
/// innovation. Unlike TargetDensity it always has a CDF and quantile.
class Marginal {
public:
    enum class Family { constant, uniform, gaussian, pareto };

    static Marginal constant(double c) { return Marginal{Family::constant, c, 0.0}; }
    static Marginal uniform(double a, double b) {
        if (!(a < b)) throw ModelError("marginal uniform: need a < b");
        return Marginal{Family::uniform, a, b};
    }
    static Marginal gaussian(double mu, double sigma) {
        if (!(sigma > 0.0)) throw ModelError("marginal gaussian: sigma must be > 0");
        return Marginal{Family::gaussian, mu, sigma};
    }
    static Marginal pareto(double alpha, double x_min) {
        if (!(alpha > 0.0) || !(x_min > 0.0))
            throw ModelError("marginal pareto: alpha and x_min must be > 0");
        return Marginal{Family::pareto, alpha, x_min};
    }

    Family family() const { return family_; }

    double cdf(double x) const {
        switch (family_) {
            case Family::constant:
                return x >= p1_ ? 1.0 : 0.0;
            case Family::uniform:
                if (x <= p1_) return 0.0;
                if (x >= p2_) return 1.0;
                return (x - p1_) / (p2_ - p1_);
            case Family::gaussian:
                return normal_cdf((x - p1_) / p2_);
            case Family::pareto:
                return detail::pareto_cdf(p1_, p2_, x);
        }
        return 0.0;
    }

    double quantile(double p) const {
        switch (family_) {
            case Family::constant:
                return p1_;
            case Family::uniform:
                if (p <= 0.0) return p1_;
                if (p >= 1.0) return p2_;
                return p1_ + p * (p2_ - p1_);
            case Family::gaussian:
                if (p <= 0.0) return -kInf;
                if (p >= 1.0) return kInf;
                return p1_ + p2_ * inverse_normal_cdf(p);
            case Family::pareto:
                return detail::pareto_quantile(p1_, p2_, p);
        }
        return 0.0;
    }

    double sample(Xoshiro256pp& rng) const { return quantile(rng.next_u01()); }

    std::string describe() const {
        switch (family_) {
            case Family::constant:
                return "constant(" + std::to_string(p1_) + ")";
            case Family::uniform:
                return "uniform(" + std::to_string(p1_) + "," + std::to_string(p2_) + ")";
            case Family::gaussian:
                return "gaussian(" + std::to_string(p1_) + "," + std::to_string(p2_) + ")";
            case Family::pareto:
                return "pareto(" + std::to_string(p1_) + "," + std::to_string(p2_) + ")";
        }
        return "?";
    }

private:
    Marginal(Family f, double a, double b) : family_(f), p1_(a), p2_(b) {}
    Family family_;
    double p1_, p2_;
};

}  // namespace phantomlab::models
