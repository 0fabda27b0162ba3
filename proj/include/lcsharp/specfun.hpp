#pragma once

// Gamma function and the two exponential-power integrals from which every
// closed-form moment of the two-sided exponential family is assembled.

#include <lcsharp/errors.hpp>
#include <lcsharp/quadrature.hpp>

#include <cmath>
#include <string>

namespace lcsharp {

/// A moment order p. Absolute moments E|X|^p of log-concave X are finite
/// exactly for p > -1.
class MomentOrder {
public:
    MomentOrder(double p) : p_(p)  // NOLINT(google-explicit-constructor)
    {
        detail::require(p > -1.0 && std::isfinite(p),
                        "moment order must satisfy p > -1 (got " + std::to_string(p) + ")");
    }
    double value() const { return p_; }
    operator double() const { return p_; }  // NOLINT(google-explicit-constructor)

private:
    double p_;
};

inline double gamma(double x)
{
    detail::require(x > 0.0, "gamma: argument must be positive (got " + std::to_string(x) + ")");
    return std::tgamma(x);
}

/// Integral of x^p e^x over [0, c].
inline double exp_power_integral(MomentOrder p, double c, const QuadratureConfig& cfg = {})
{
    detail::require(c >= 0.0 && std::isfinite(c), "exp_power_integral: upper limit must be >= 0");
    if (c == 0.0) return 0.0;
    return integrate_power_weighted(p, [](double x) { return std::exp(x); }, 0.0, c, cfg);
}

/// E(tE + 1 - t)^p for a standard exponential E, i.e. the integral of
/// (tx + 1 - t)^p e^{-x} over [0, inf).
inline double shifted_exp_moment(MomentOrder p, double t, const QuadratureConfig& cfg = {})
{
    detail::require(t >= 0.0 && t <= 1.0, "shifted_exp_moment: t must lie in [0, 1]");
    if (t == 0.0) return 1.0;
    if (t == 1.0) return gamma(p + 1.0);
    // With y = tx + 1 - t the integral becomes (1/t) * int_{1-t}^inf y^p e^{-(y-(1-t))/t} dy.
    const double shift = 1.0 - t;
    auto weight = [=](double y) { return std::exp(-(y - shift) / t) / t; };
    const double head = integrate_power_weighted(p, weight, shift, 1.0, cfg);
    const double tail =
        integrate_to_infinity([&](double y) { return std::pow(y, p.value()) * weight(y); }, 1.0, t, cfg);
    return head + tail;
}

} // namespace lcsharp
