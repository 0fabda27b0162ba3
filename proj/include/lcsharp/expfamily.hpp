#pragma once

// Two-sided exponentials X_{a,b} = a(E - 1) - b(E' - 1) and the normalised
// one-parameter family |E_t| / mu_t, E_t = X_{1,t}.

#include <lcsharp/errors.hpp>
#include <lcsharp/roots.hpp>
#include <lcsharp/specfun.hpp>

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace lcsharp {

/// Scales of the positive (a) and negative (b) exponential branches. The mean
/// of X_{a,b} is zero for every admissible pair.
struct TwoSidedExpParams {
    double a = 1.0;
    double b = 0.0;

    void validate() const
    {
        detail::require(a >= 0.0 && b >= 0.0 && std::isfinite(a) && std::isfinite(b),
                        "two-sided exponential scales must be finite and >= 0");
        detail::require(a + b > 0.0, "two-sided exponential needs a + b > 0");
    }
    TwoSidedExpParams mirrored() const { return {b, a}; }
};

/// Density g_{a,b}. The mode sits at -(a - b); a branch with zero scale is
/// identically zero.
inline double density_xab(const TwoSidedExpParams& s, double x)
{
    s.validate();
    const double m = -(s.a - s.b);
    if (x >= m) return s.a > 0.0 ? std::exp(-(x - m) / s.a) / (s.a + s.b) : 0.0;
    return s.b > 0.0 ? std::exp((x - m) / s.b) / (s.a + s.b) : 0.0;
}

/// Increasing bijection u -> e^{u-1}/(1+u) from [0,1] onto [1/e, 1/2];
/// equals P(X_{a,b} > 0) at u = b/a <= 1.
inline double positive_mass_of_ratio(double u) { return std::exp(u - 1.0) / (1.0 + u); }

inline double prob_positive(const TwoSidedExpParams& s)
{
    s.validate();
    if (s.a >= s.b) return positive_mass_of_ratio(s.b / s.a);
    return 1.0 - positive_mass_of_ratio(s.a / s.b);
}

/// E|X_{a,b}| = 2 E[X_{a,b}^+]; with a >= b this is 2a P(X_{a,b} > 0).
inline double abs_mean_xab(const TwoSidedExpParams& s)
{
    s.validate();
    if (s.a < s.b) return abs_mean_xab(s.mirrored());
    return 2.0 * s.a * positive_mass_of_ratio(s.b / s.a);
}

/// E[X^p; X > 0] for X = X_{a,b}, in closed form.
inline double positive_half_moment(const TwoSidedExpParams& s, MomentOrder p, const QuadratureConfig& cfg = {});

/// E[(-X)^p; X < 0] for X = X_{a,b}, in closed form.
inline double negative_half_moment(const TwoSidedExpParams& s, MomentOrder p, const QuadratureConfig& cfg = {})
{
    s.validate();
    if (s.a < s.b) return positive_half_moment(s.mirrored(), p, cfg);
    const double u = s.b / s.a;
    // Mass to the left of zero: the rising part of the a-branch on [m, 0], then the b-branch.
    const double rising = std::exp(u - 1.0) * std::pow(s.a, p + 1.0) * exp_power_integral(p, 1.0 - u, cfg);
    const double falling = s.b > 0.0 ? s.b * std::pow(s.a, p.value()) * shifted_exp_moment(p, u, cfg) : 0.0;
    return (rising + falling) / (s.a + s.b);
}

inline double positive_half_moment(const TwoSidedExpParams& s, MomentOrder p, const QuadratureConfig& cfg)
{
    s.validate();
    if (s.a < s.b) return negative_half_moment(s.mirrored(), p, cfg);
    const double u = s.b / s.a;
    return std::exp(u - 1.0) * std::pow(s.a, p + 1.0) * gamma(p + 1.0) / (s.a + s.b);
}

inline double abs_moment_xab(const TwoSidedExpParams& s, MomentOrder p, const QuadratureConfig& cfg = {})
{
    return positive_half_moment(s, p, cfg) + negative_half_moment(s, p, cfg);
}

/// The unique (a, b) with P(X_{a,b} > 0) = alpha and E|X_{a,b}| = l1, for
/// alpha in [1/e, 1/2] (so that b <= a).
inline TwoSidedExpParams match_two_sided(double alpha, double l1)
{
    constexpr double lo_alpha = 1.0 / std::numbers::e;
    detail::require(alpha >= lo_alpha - 1e-15 && alpha <= 0.5 + 1e-15,
                    "match_two_sided: alpha must lie in [1/e, 1/2] (got " + std::to_string(alpha) + ")");
    detail::require(l1 > 0.0 && std::isfinite(l1), "match_two_sided: l1 must be positive");
    const double a = l1 / (2.0 * alpha);
    double u;
    if (alpha <= lo_alpha)
        u = 0.0;
    else if (alpha >= 0.5)
        u = 1.0;
    else
        u = bisect([&](double v) { return positive_mass_of_ratio(v) - alpha; }, 0.0, 1.0);
    return {a, u * a};
}

/// As match_two_sided, but for alpha in [1/e, 1 - 1/e]: values above 1/2 are
/// matched by the mirror image X_{b,a} = -X_{a,b}.
inline TwoSidedExpParams match_moments(double alpha, double l1)
{
    if (alpha > 0.5) return match_two_sided(1.0 - alpha, l1).mirrored();
    return match_two_sided(alpha, l1);
}

/// A point t in [0, 1] of the family E_t = X_{1,t}, carrying mu_t = E|E_t|.
class FamilyPoint {
public:
    explicit FamilyPoint(double t) : t_(t)
    {
        detail::require(t >= 0.0 && t <= 1.0, "family parameter t must lie in [0, 1] (got " +
                                                  std::to_string(t) + ")");
        mu_ = 2.0 * std::exp(t - 1.0) / (1.0 + t);
    }
    double t() const { return t_; }
    double mu() const { return mu_; }
    /// Where the density of |E_t| / mu_t switches formula: (1 - t) / mu_t.
    double breakpoint() const { return (1.0 - t_) / mu_; }

private:
    double t_;
    double mu_;
};

inline double family_scale(double t) { return FamilyPoint(t).mu(); }

/// E|E_t|^p = e^{t-1}/(1+t) (int_0^{1-t} x^p e^x dx + Gamma(p+1)) + t/(1+t) E(tE + 1 - t)^p.
inline double moment_et(MomentOrder p, double t, const QuadratureConfig& cfg = {})
{
    const FamilyPoint pt(t);
    const double lead = std::exp(t - 1.0) / (1.0 + t) * (exp_power_integral(p, 1.0 - t, cfg) + gamma(p + 1.0));
    const double rest = t > 0.0 ? t / (1.0 + t) * shifted_exp_moment(p, t, cfg) : 0.0;
    return lead + rest;
}

/// L_p norm of E_t / mu_t.
inline double norm_ebar(MomentOrder p, double t, const QuadratureConfig& cfg = {})
{
    detail::require(p.value() != 0.0, "norm_ebar: p = 0 (geometric mean) is not supported");
    const FamilyPoint pt(t);
    return std::pow(moment_et(p, t, cfg), 1.0 / p) / pt.mu();
}

/// Density of |E_t| / mu_t at x >= 0. At t = 0 the density jumps at 1/mu_0;
/// the breakpoint itself takes the left-hand value.
inline double density_abs_ebar(double t, double x)
{
    const FamilyPoint pt(t);
    detail::require(x >= 0.0, "density_abs_ebar: x must be >= 0");
    const double y = pt.mu() * x;
    double inner;
    if (y <= 1.0 - t)
        inner = std::exp(y) + std::exp(-y);
    else
        inner = std::exp(-y) + (t > 0.0 ? std::exp(-y / t + 1.0 / t - t) : 0.0);
    return pt.mu() * std::exp(t - 1.0) / (1.0 + t) * inner;
}

} // namespace lcsharp
