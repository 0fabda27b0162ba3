#pragma once

// A small fixed catalogue of centred log-concave densities, generic moment
// integrals against them, and the two comparison checks that pit a density
// against its matched two-sided exponential (reduction_check) or against the
// symmetric exponential with the same value at zero (fradelizi_check).

#include <lcsharp/errors.hpp>
#include <lcsharp/expfamily.hpp>
#include <lcsharp/quadrature.hpp>
#include <lcsharp/specfun.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

namespace lcsharp {

struct TwoSidedExponentialLaw {
    TwoSidedExpParams params;
};
struct CentredUniform {
    double half_width = 1.0;
};
struct CentredGaussian {
    double sigma = 1.0;
};
/// e^{-y} restricted to [0, length], renormalised and shifted to mean zero.
struct TruncatedExponential {
    double length = 2.0;
};
/// Gamma(shape, 1) shifted by its mean; log-concave for shape >= 1.
struct CentredGamma {
    double shape = 2.0;
};

class LogConcaveTestDensity {
public:
    using Law = std::variant<TwoSidedExponentialLaw, CentredUniform, CentredGaussian, TruncatedExponential,
                             CentredGamma>;

    explicit LogConcaveTestDensity(Law law) : law_(law) { validate(); }

    static LogConcaveTestDensity two_sided_exponential(double a, double b)
    {
        return LogConcaveTestDensity(TwoSidedExponentialLaw{{a, b}});
    }
    static LogConcaveTestDensity uniform(double half_width) { return LogConcaveTestDensity(CentredUniform{half_width}); }
    static LogConcaveTestDensity gaussian(double sigma) { return LogConcaveTestDensity(CentredGaussian{sigma}); }
    static LogConcaveTestDensity truncated_exponential(double length)
    {
        return LogConcaveTestDensity(TruncatedExponential{length});
    }
    static LogConcaveTestDensity gamma_law(double shape) { return LogConcaveTestDensity(CentredGamma{shape}); }

    const Law& law() const { return law_; }

    std::string name() const
    {
        return std::visit(
            [](const auto& l) -> std::string {
                using L = std::decay_t<decltype(l)>;
                if constexpr (std::is_same_v<L, TwoSidedExponentialLaw>)
                    return "two-sided-exponential(" + fmt(l.params.a) + "," + fmt(l.params.b) + ")";
                else if constexpr (std::is_same_v<L, CentredUniform>)
                    return "centred-uniform(" + fmt(l.half_width) + ")";
                else if constexpr (std::is_same_v<L, CentredGaussian>)
                    return "centred-gaussian(" + fmt(l.sigma) + ")";
                else if constexpr (std::is_same_v<L, TruncatedExponential>)
                    return "truncated-exponential(" + fmt(l.length) + ")";
                else
                    return "centred-gamma(" + fmt(l.shape) + ")";
            },
            law_);
    }

    double pdf(double x) const
    {
        return std::visit(
            [x](const auto& l) -> double {
                using L = std::decay_t<decltype(l)>;
                if constexpr (std::is_same_v<L, TwoSidedExponentialLaw>) {
                    return density_xab(l.params, x);
                } else if constexpr (std::is_same_v<L, CentredUniform>) {
                    return std::abs(x) <= l.half_width ? 0.5 / l.half_width : 0.0;
                } else if constexpr (std::is_same_v<L, CentredGaussian>) {
                    const double z = x / l.sigma;
                    return std::exp(-0.5 * z * z) / (l.sigma * std::sqrt(2.0 * std::numbers::pi));
                } else if constexpr (std::is_same_v<L, TruncatedExponential>) {
                    const double y = x + truncated_mean(l.length);
                    if (y < 0.0 || y > l.length) return 0.0;
                    return std::exp(-y) / -std::expm1(-l.length);
                } else {
                    const double y = x + l.shape;
                    if (y < 0.0) return 0.0;
                    if (y == 0.0) return l.shape == 1.0 ? 1.0 : 0.0;
                    return std::exp((l.shape - 1.0) * std::log(y) - y - std::lgamma(l.shape));
                }
            },
            law_);
    }

    double lower() const
    {
        constexpr double inf = std::numeric_limits<double>::infinity();
        return std::visit(
            [](const auto& l) -> double {
                using L = std::decay_t<decltype(l)>;
                if constexpr (std::is_same_v<L, TwoSidedExponentialLaw>)
                    return l.params.b > 0.0 ? -inf : -l.params.a;
                else if constexpr (std::is_same_v<L, CentredUniform>)
                    return -l.half_width;
                else if constexpr (std::is_same_v<L, CentredGaussian>)
                    return -inf;
                else if constexpr (std::is_same_v<L, TruncatedExponential>)
                    return -truncated_mean(l.length);
                else
                    return -l.shape;
            },
            law_);
    }

    double upper() const
    {
        constexpr double inf = std::numeric_limits<double>::infinity();
        return std::visit(
            [](const auto& l) -> double {
                using L = std::decay_t<decltype(l)>;
                if constexpr (std::is_same_v<L, TwoSidedExponentialLaw>)
                    return l.params.a > 0.0 ? inf : l.params.b;
                else if constexpr (std::is_same_v<L, CentredUniform>)
                    return l.half_width;
                else if constexpr (std::is_same_v<L, TruncatedExponential>)
                    return l.length - truncated_mean(l.length);
                else
                    return inf;
            },
            law_);
    }

    /// Interior points of the support where the density is not smooth.
    std::vector<double> kinks() const
    {
        if (const auto* l = std::get_if<TwoSidedExponentialLaw>(&law_)) {
            const double m = -(l->params.a - l->params.b);
            if (m > lower() && m < upper()) return {m};
        }
        return {};
    }

    /// Length scale of exponential decay for unbounded tails.
    double tail_scale() const
    {
        return std::visit(
            [](const auto& l) -> double {
                using L = std::decay_t<decltype(l)>;
                if constexpr (std::is_same_v<L, TwoSidedExponentialLaw>)
                    return std::max(l.params.a, l.params.b);
                else if constexpr (std::is_same_v<L, CentredGaussian>)
                    return l.sigma;
                else
                    return 1.0;
            },
            law_);
    }

    static double truncated_mean(double length) { return 1.0 - length / std::expm1(length); }

private:
    static std::string fmt(double v)
    {
        std::string s = std::to_string(v);
        s.erase(s.find_last_not_of('0') + 1);
        if (!s.empty() && s.back() == '.') s.pop_back();
        return s;
    }

    void validate() const
    {
        std::visit(
            [](const auto& l) {
                using L = std::decay_t<decltype(l)>;
                if constexpr (std::is_same_v<L, TwoSidedExponentialLaw>)
                    l.params.validate();
                else if constexpr (std::is_same_v<L, CentredUniform>)
                    detail::require(l.half_width > 0.0, "uniform half-width must be positive");
                else if constexpr (std::is_same_v<L, CentredGaussian>)
                    detail::require(l.sigma > 0.0, "gaussian sigma must be positive");
                else if constexpr (std::is_same_v<L, TruncatedExponential>)
                    detail::require(l.length > 0.0, "truncation length must be positive");
                else
                    detail::require(l.shape >= 1.0, "gamma shape must be >= 1 for log-concavity");
            },
            law_);
    }

    Law law_;
};

/// The catalogue used by the inequality sweeps and the CLI verify suites.
inline std::vector<LogConcaveTestDensity> standard_catalogue()
{
    return {
        LogConcaveTestDensity::two_sided_exponential(1.0, 1.0),
        LogConcaveTestDensity::two_sided_exponential(1.0, 0.0),
        LogConcaveTestDensity::two_sided_exponential(1.0, 0.5),
        LogConcaveTestDensity::two_sided_exponential(0.3, 1.0),
        LogConcaveTestDensity::uniform(1.0),
        LogConcaveTestDensity::uniform(2.5),
        LogConcaveTestDensity::gaussian(1.0),
        LogConcaveTestDensity::gaussian(0.4),
        LogConcaveTestDensity::truncated_exponential(2.0),
        LogConcaveTestDensity::truncated_exponential(0.5),
        LogConcaveTestDensity::gamma_law(2.0),
        LogConcaveTestDensity::gamma_law(3.5),
    };
}

enum class HalfLine { positive, negative };

/// int_0^inf y^p f(+-y) dy, i.e. E[|X|^p; X > 0] or E[|X|^p; X < 0].
inline double half_moment(const LogConcaveTestDensity& f, MomentOrder p, HalfLine side,
                          const QuadratureConfig& cfg = {})
{
    const double sgn = side == HalfLine::positive ? 1.0 : -1.0;
    const double end = side == HalfLine::positive ? f.upper() : -f.lower();
    if (end <= 0.0) return 0.0;
    std::vector<double> cuts;
    for (double k : f.kinks())
        if (sgn * k > 0.0 && sgn * k < end) cuts.push_back(sgn * k);
    std::sort(cuts.begin(), cuts.end());
    auto g = [&](double y) { return f.pdf(sgn * y); };

    double total = 0.0;
    double lo = 0.0;
    for (double c : cuts) {
        total += integrate_power_weighted(p, g, lo, c, cfg);
        lo = c;
    }
    if (std::isfinite(end))
        total += integrate_power_weighted(p, g, lo, end, cfg);
    else
        total += integrate_power_weighted_to_infinity(p, g, lo, f.tail_scale(), cfg);
    return total;
}

inline double abs_moment(const LogConcaveTestDensity& f, MomentOrder p, const QuadratureConfig& cfg = {})
{
    return half_moment(f, p, HalfLine::positive, cfg) + half_moment(f, p, HalfLine::negative, cfg);
}

/// (E|X|^p)^{1/p}; p = 0 is rejected.
inline double lp_norm(const LogConcaveTestDensity& f, MomentOrder p, const QuadratureConfig& cfg = {})
{
    detail::require(p.value() != 0.0, "lp_norm: p = 0 is not supported");
    return std::pow(abs_moment(f, p, cfg), 1.0 / p);
}

/// int phi(x) f(x) dx over the support, split at zero and at the kinks.
template <class Phi>
double expectation(const LogConcaveTestDensity& f, Phi&& phi, const QuadratureConfig& cfg = {})
{
    std::vector<double> cuts = f.kinks();
    if (f.lower() < 0.0 && f.upper() > 0.0) cuts.push_back(0.0);
    std::sort(cuts.begin(), cuts.end());
    auto integrand = [&](double x) { return phi(x) * f.pdf(x); };

    const double lo = f.lower(), hi = f.upper();
    double total = 0.0;
    double left = cuts.empty() ? (std::isfinite(lo) ? lo : 0.0) : cuts.front();
    if (!std::isfinite(lo))
        total += integrate_to_infinity([&](double y) { return integrand(-y); }, -left, f.tail_scale(), cfg);
    else
        total += integrate(integrand, lo, left, cfg);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += integrate(integrand, cuts[i], cuts[i + 1], cfg);
    const double right = cuts.empty() ? left : cuts.back();
    if (!std::isfinite(hi))
        total += integrate_to_infinity(integrand, right, f.tail_scale(), cfg);
    else
        total += integrate(integrand, right, hi, cfg);
    return total;
}

/// Total mass and mean of a catalogue density, for hypothesis checks.
struct DensitySanity {
    double mass;
    double mean;
    bool ok(double tol = 1e-8) const { return std::abs(mass - 1.0) <= tol && std::abs(mean) <= tol; }
};

inline DensitySanity check_density(const LogConcaveTestDensity& f, const QuadratureConfig& cfg = {})
{
    return {expectation(f, [](double) { return 1.0; }, cfg), expectation(f, [](double x) { return x; }, cfg)};
}

// ---------------------------------------------------------------------------

struct ReductionResult {
    TwoSidedExpParams matched;
    double lhs_positive = 0, lhs_negative = 0;  // E[psi(X/E|X|)] per half-line
    double rhs_positive = 0, rhs_negative = 0;  // same for the matched X_{a,b}
    double lhs = 0, rhs = 0;
    /// +1 when psi = |x|^p is convex on each half-line (lhs <= rhs expected),
    /// -1 when concave (lhs >= rhs), 0 when affine (equality).
    int direction = 0;
    bool holds = false;
};

/// Compares E[psi(X/E|X|)] for X ~ f with the same functional of the two-sided
/// exponential matching P(X > 0) and E|X|, where psi(x) = |x|^p on each half-line
/// separately. Quadrature failures propagate as quadrature_error.
inline ReductionResult reduction_check(const LogConcaveTestDensity& f, MomentOrder p, double tol = 1e-8,
                                       const QuadratureConfig& cfg = {})
{
    ReductionResult r;
    const double alpha = half_moment(f, 0.0, HalfLine::positive, cfg);
    const double l1 = abs_moment(f, 1.0, cfg);
    r.matched = match_moments(alpha, l1);

    const double scale = std::pow(l1, -p.value());
    r.lhs_positive = half_moment(f, p, HalfLine::positive, cfg) * scale;
    r.lhs_negative = half_moment(f, p, HalfLine::negative, cfg) * scale;
    const double scale_ab = std::pow(abs_mean_xab(r.matched), -p.value());
    r.rhs_positive = positive_half_moment(r.matched, p, cfg) * scale_ab;
    r.rhs_negative = negative_half_moment(r.matched, p, cfg) * scale_ab;
    r.lhs = r.lhs_positive + r.lhs_negative;
    r.rhs = r.rhs_positive + r.rhs_negative;

    if (p.value() < 0.0 || p.value() > 1.0)
        r.direction = 1;
    else if (p.value() > 0.0 && p.value() < 1.0)
        r.direction = -1;
    auto ok = [&](double lhs, double rhs) {
        if (r.direction > 0) return lhs <= rhs + tol;
        if (r.direction < 0) return lhs >= rhs - tol;
        return std::abs(lhs - rhs) <= tol;
    };
    r.holds = ok(r.lhs_positive, r.rhs_positive) && ok(r.lhs_negative, r.rhs_negative);
    return r;
}

/// Convex test functions for the Fradelizi comparison: x^2, |x|^3 and |x|^p, p >= 1.
class ConvexTestFunction {
public:
    static ConvexTestFunction square() { return ConvexTestFunction(2.0, "x^2"); }
    static ConvexTestFunction abs_cube() { return ConvexTestFunction(3.0, "|x|^3"); }
    static ConvexTestFunction abs_power(double p)
    {
        detail::require(p >= 1.0, "abs_power test function needs p >= 1 for convexity");
        return ConvexTestFunction(p, "|x|^" + std::to_string(p));
    }

    double operator()(double x) const { return std::pow(std::abs(x), exponent_); }
    double exponent() const { return exponent_; }
    const std::string& name() const { return name_; }
    /// Closed form of int phi(x) c e^{-2c|x|} dx = Gamma(p+1) / (2c)^p.
    double against_symmetric_exponential(double c) const
    {
        return std::tgamma(exponent_ + 1.0) / std::pow(2.0 * c, exponent_);
    }

private:
    ConvexTestFunction(double p, std::string name) : exponent_(p), name_(std::move(name)) {}
    double exponent_;
    std::string name_;
};

inline std::vector<ConvexTestFunction> convex_catalogue()
{
    return {ConvexTestFunction::square(), ConvexTestFunction::abs_cube(), ConvexTestFunction::abs_power(1.5),
            ConvexTestFunction::abs_power(4.0)};
}

struct FradeliziResult {
    double value_at_zero = 0;
    double lhs = 0;
    double rhs = 0;
    bool holds = false;
};

/// int phi f  <=  int phi(x) f(0) e^{-2 f(0)|x|} dx, both sides by quadrature.
inline FradeliziResult fradelizi_check(const LogConcaveTestDensity& f, const ConvexTestFunction& phi,
                                       double tol = 1e-8, const QuadratureConfig& cfg = {})
{
    FradeliziResult r;
    r.value_at_zero = f.pdf(0.0);
    detail::require(r.value_at_zero > 0.0, "fradelizi_check: density must be positive at 0");
    r.lhs = expectation(f, phi, cfg);
    const double c = r.value_at_zero;
    auto side = [&](double y) { return phi(y) * c * std::exp(-2.0 * c * y); };
    auto mirror = [&](double y) { return phi(-y) * c * std::exp(-2.0 * c * y); };
    r.rhs = integrate_to_infinity(side, 0.0, 0.5 / c, cfg) + integrate_to_infinity(mirror, 0.0, 0.5 / c, cfg);
    r.holds = r.lhs <= r.rhs + tol;
    return r;
}

} // namespace lcsharp
