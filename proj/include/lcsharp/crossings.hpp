#pragma once

// Sign-change analysis on (0, inf): detection and certification of crossings,
// the three-node power-function interpolant x^p - (alpha + beta x + gamma x^q),
// and numerical checks of the crossing arguments for the family |E_t| / mu_t.

#include <lcsharp/constants.hpp>
#include <lcsharp/errors.hpp>
#include <lcsharp/expfamily.hpp>
#include <lcsharp/roots.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace lcsharp {

struct SignChangeReport {
    std::vector<double> crossings;        // strictly increasing
    std::vector<int> pattern;             // +1/-1, size crossings.size() + 1
    double resolution = 0.0;              // uniform grid step
    bool certified = false;               // every crossing bisected to 1e-10
    std::vector<std::pair<double, double>> unresolved;  // zero bands too wide to place a crossing

    std::string pattern_string() const
    {
        std::string s = "(";
        for (std::size_t i = 0; i < pattern.size(); ++i) {
            if (i) s += ",";
            s += pattern[i] > 0 ? "+" : "-";
        }
        return s + ")";
    }

    bool matches(const std::vector<int>& expected) const { return unresolved.empty() && pattern == expected; }
};

/// Samples f on a uniform grid over (lo, hi), together with a geometric
/// refinement towards lo and the caller's breakpoints (each also probed just to
/// its right, so jumps register). Values with |f| <= tol count as zero; each
/// strict change of sign across such values is located by bisection.
template <class F>
SignChangeReport detect_sign_changes(F&& f, double lo, double hi, std::size_t grid_size, double tol,
                                     const std::vector<double>& breakpoints = {})
{
    detail::require(hi > lo, "detect_sign_changes: empty domain");
    detail::require(grid_size >= 1000, "detect_sign_changes: grid_size must be >= 1000");
    detail::require(tol >= 0.0, "detect_sign_changes: tol must be >= 0");

    SignChangeReport report;
    const double step = (hi - lo) / static_cast<double>(grid_size);
    report.resolution = step;

    std::vector<double> xs;
    xs.reserve(grid_size + 64 + 2 * breakpoints.size());
    for (std::size_t i = 1; i < grid_size; ++i) xs.push_back(lo + step * static_cast<double>(i));
    for (int k = 1; k <= 40; ++k) xs.push_back(lo + step * std::ldexp(1.0, -k));
    for (double b : breakpoints) {
        if (b <= lo || b >= hi) continue;
        xs.push_back(b);
        xs.push_back(b + 1e-11 * std::max(1.0, std::abs(b)));
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    std::vector<double> ys(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = f(xs[i]);
    auto sign_of = [tol](double y) { return y > tol ? 1 : (y < -tol ? -1 : 0); };

    report.certified = true;
    std::ptrdiff_t prev = -1;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (std::isnan(ys[i])) continue;
        const int s = sign_of(ys[i]);
        if (s == 0) continue;
        if (prev < 0) {
            report.pattern.push_back(s);
        } else if (s != report.pattern.back()) {
            const auto p = static_cast<std::size_t>(prev);
            if (i > p + 1 && xs[i - 1] - xs[p + 1] > 10.0 * step) {
                report.unresolved.emplace_back(xs[p + 1], xs[i - 1]);
                report.certified = false;
            }
            double a = xs[p], b = xs[i];
            const bool a_positive = ys[p] > 0.0;
            while (b - a > 1e-12 * std::max(1.0, std::abs(a))) {
                const double m = 0.5 * (a + b);
                if (m <= a || m >= b) break;
                const double fm = f(m);
                if ((fm > 0.0) == a_positive && fm != 0.0)
                    a = m;
                else
                    b = m;
            }
            if (b - a > 1e-10) report.certified = false;
            double root = 0.5 * (a + b);
            for (double bp : breakpoints)
                if (std::abs(root - bp) <= 1e-9 * std::max(1.0, std::abs(bp))) root = bp;
            report.crossings.push_back(root);
            report.pattern.push_back(s);
        }
        prev = static_cast<std::ptrdiff_t>(i);
    }
    return report;
}

// ---------------------------------------------------------------------------

/// g(x) = x^p - (alpha + beta x + gamma x^q), vanishing at three given nodes.
struct PowerInterpolant {
    double p, q;
    double alpha, beta, gamma;
    std::array<double, 3> nodes;

    double operator()(double x) const { return std::pow(x, p) - (alpha + beta * x + gamma * std::pow(x, q)); }

    /// Sign of g on (0, x1): that of (0 - p)(1 - p)(q - p). Signs alternate
    /// across the nodes.
    int leading_sign() const { return (-p) * (1.0 - p) * (q - p) > 0.0 ? 1 : -1; }
    std::vector<int> predicted_pattern() const
    {
        const int s = leading_sign();
        return {s, -s, s, -s};
    }
};

inline PowerInterpolant vandermonde_coeffs(double p, double q, double x1, double x2, double x3)
{
    detail::require(0.0 < x1 && x1 < x2 && x2 < x3, "vandermonde_coeffs: nodes must satisfy 0 < x1 < x2 < x3");
    detail::require(q > 2.0, "vandermonde_coeffs: requires q > 2");
    detail::require(p != 0.0 && p != 1.0 && p != q, "vandermonde_coeffs: 0, 1, p, q must be pairwise distinct");

    const std::array<double, 3> xs = {x1, x2, x3};
    std::array<std::array<double, 4>, 3> m{};
    for (int j = 0; j < 3; ++j) m[j] = {1.0, xs[j], std::pow(xs[j], q), std::pow(xs[j], p)};
    double scale = 0.0;
    for (const auto& row : m)
        for (int c = 0; c < 3; ++c) scale = std::max(scale, std::abs(row[c]));

    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        if (std::abs(m[piv][col]) <= 1e-14 * scale)
            throw singular_system_error("vandermonde_coeffs: near-singular system");
        std::swap(m[col], m[piv]);
        for (int r = col + 1; r < 3; ++r) {
            const double k = m[r][col] / m[col][col];
            for (int c = col; c < 4; ++c) m[r][c] -= k * m[col][c];
        }
    }
    std::array<double, 3> sol{};
    for (int r = 2; r >= 0; --r) {
        double acc = m[r][3];
        for (int c = r + 1; c < 3; ++c) acc -= m[r][c] * sol[c];
        sol[r] = acc / m[r][r];
    }
    PowerInterpolant g{p, q, sol[0], sol[1], sol[2], xs};
    for (double x : xs) {
        const double mag = std::max({std::abs(std::pow(x, p)), std::abs(g.alpha), std::abs(g.beta * x),
                                     std::abs(g.gamma * std::pow(x, q))});
        if (std::abs(g(x)) > 1e-10 * std::max(1.0, mag))
            throw singular_system_error("vandermonde_coeffs: interpolation residual too large");
    }
    return g;
}

// ---------------------------------------------------------------------------

/// Thrown when a certified crossing pattern differs from the expected one.
class crossing_pattern_error : public std::runtime_error {
public:
    crossing_pattern_error(const std::string& what, SignChangeReport report)
        : std::runtime_error(what), report_(std::move(report))
    {
    }
    const SignChangeReport& report() const { return report_; }

private:
    SignChangeReport report_;
};

/// Right end of the sampling window: beyond it every |E_t| / mu_t density is
/// below 1e-14.
inline double crossing_window() { return (14.0 * std::numbers::ln10 + 1.0) / family_scale(0.0); }

struct ThreeCrossings {
    SignChangeReport upper;  // f_1 - f_t
    SignChangeReport lower;  // f_t - f_0
};

/// Certifies that f_1 - f_t and f_t - f_0 (f_s the density of |E_s| / mu_s)
/// each change sign exactly three times with pattern (+,-,+,-).
inline ThreeCrossings verify_3crossings(double t, std::size_t grid_size = 4000, double tol = 1e-12)
{
    detail::require(t > 0.0 && t < 1.0, "verify_3crossings: requires 0 < t < 1");
    const FamilyPoint pt(t);
    const double window = crossing_window();
    const double jump = 1.0 / family_scale(0.0);

    ThreeCrossings out;
    out.upper = detect_sign_changes([t](double x) { return density_abs_ebar(1.0, x) - density_abs_ebar(t, x); },
                                    0.0, window, grid_size, tol, {pt.breakpoint()});
    out.lower = detect_sign_changes([t](double x) { return density_abs_ebar(t, x) - density_abs_ebar(0.0, x); },
                                    0.0, window, grid_size, tol, {pt.breakpoint(), jump});
    const std::vector<int> expected = {1, -1, 1, -1};
    if (!out.upper.matches(expected) || !out.upper.certified)
        throw crossing_pattern_error("f_1 - f_t has pattern " + out.upper.pattern_string() + " at t = " +
                                         std::to_string(t),
                                     out.upper);
    if (!out.lower.matches(expected) || !out.lower.certified)
        throw crossing_pattern_error("f_t - f_0 has pattern " + out.lower.pattern_string() + " at t = " +
                                         std::to_string(t),
                                     out.lower);
    return out;
}

/// Which endpoint of the family a moment gap is taken against.
enum class FamilyReference { symmetric, one_sided };

/// E|E_s / mu_s|^q.
inline double normalized_moment(MomentOrder q, double s, const QuadratureConfig& cfg = {})
{
    if (s == 1.0) return gamma(q + 1.0);
    return moment_et(q, s, cfg) / std::pow(family_scale(s), q.value());
}

struct MatchingOrder {
    double q;
    double residual;
};

/// The order q in the bracket where E|E_ref / mu_ref|^q = E|E_t / mu_t|^q.
inline MatchingOrder matching_order(double t, double q_lo = 2.0, double q_hi = 4.0,
                                    FamilyReference ref = FamilyReference::symmetric,
                                    const QuadratureConfig& cfg = {})
{
    detail::require(t > 0.0 && t < 1.0, "matching_order: requires 0 < t < 1");
    detail::require(q_lo > -1.0 && q_lo < q_hi, "matching_order: invalid bracket");
    const double r = ref == FamilyReference::symmetric ? 1.0 : 0.0;
    auto gap = [&](double q) { return normalized_moment(q, r, cfg) - normalized_moment(q, t, cfg); };
    const double q = bisect(gap, q_lo, q_hi, 200);
    const double res = gap(q);
    if (std::abs(res) >= 1e-10)
        throw bracket_error("matching_order: residual " + std::to_string(res) + " exceeds 1e-10");
    return {q, res};
}

struct DecompositionCheck {
    bool holds = false;
    FamilyReference reference = FamilyReference::symmetric;
    double q = 0.0;
    std::array<double, 3> nodes{};
    PowerInterpolant interpolant{};
    int orientation = 1;          // product sign that should be nonnegative
    double min_product = 0.0;     // min of orientation * (density gap) * (power gap)
    double argmin = 0.0;
};

/// Samples orientation * (f_ref - f_t)(x) * (x^p - alpha - beta x - gamma x^q) on
/// a 10^4-point grid and checks it stays above -slack. The regime fixes the
/// reference density and the bracket for q:
///   -1 < p < 1, p != 0 : f_1, q in (2, 4)
///    1 < p <= p0       : f_1, q in [p0, 4)
///    p > p0            : f_0, q in (2, p0]
inline DecompositionCheck nonneg_decomposition_check(double t, MomentOrder p, double slack = 1e-9,
                                                     std::size_t grid_size = 10000,
                                                     const QuadratureConfig& cfg = {})
{
    detail::require(t > 0.0 && t < 1.0, "nonneg_decomposition_check: requires 0 < t < 1");
    detail::require(p.value() != 0.0, "nonneg_decomposition_check: p = 0 is not covered");
    DecompositionCheck out;
    if (p.value() == 1.0) {
        // x - (0 + 1 x + 0 x^q) vanishes identically.
        out.holds = true;
        return out;
    }
    const double p0 = transition_order(cfg);
    const auto crossings = verify_3crossings(t);

    if (p.value() < 1.0) {
        out.q = matching_order(t, 2.0, 4.0, FamilyReference::symmetric, cfg).q;
        out.orientation = p.value() < 0.0 ? 1 : -1;
    } else if (p.value() <= p0) {
        out.q = matching_order(t, p0, 4.0, FamilyReference::symmetric, cfg).q;
    } else {
        out.reference = FamilyReference::one_sided;
        out.q = matching_order(t, 2.0, p0, FamilyReference::one_sided, cfg).q;
    }
    const auto& report = out.reference == FamilyReference::symmetric ? crossings.upper : crossings.lower;
    std::copy(report.crossings.begin(), report.crossings.end(), out.nodes.begin());
    out.interpolant = vandermonde_coeffs(p, out.q, out.nodes[0], out.nodes[1], out.nodes[2]);

    const double r = out.reference == FamilyReference::symmetric ? 1.0 : 0.0;
    auto product = [&](double x) {
        return out.orientation * (density_abs_ebar(r, x) - density_abs_ebar(t, x)) * out.interpolant(x);
    };
    const double window = crossing_window();
    std::vector<double> xs;
    for (std::size_t i = 1; i < grid_size; ++i) xs.push_back(window * static_cast<double>(i) / grid_size);
    for (double n : out.nodes) xs.push_back(n);
    xs.push_back(FamilyPoint(t).breakpoint());
    xs.push_back(1.0 / family_scale(0.0));

    out.min_product = std::numeric_limits<double>::infinity();
    for (double x : xs) {
        const double v = product(x);
        if (v < out.min_product) {
            out.min_product = v;
            out.argmin = x;
        }
    }
    out.holds = out.min_product >= -slack;
    return out;
}

} // namespace lcsharp
