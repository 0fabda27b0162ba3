#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature with helpers for semi-infinite
// ranges and integrable power singularities at the origin.

#include <lcsharp/errors.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

namespace lcsharp {

struct QuadratureConfig {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    /// Upper bound on the number of interval bisections per finite integral.
    int max_refinements = 4000;
    /// Semi-infinite integrals stop once the integrand has fallen below
    /// exp(-tail_cutoff_log) of its running peak and the last panel is negligible.
    double tail_cutoff_log = 40.0;

    void validate() const
    {
        detail::require(abs_tol > 0 && rel_tol > 0, "quadrature tolerances must be positive");
        detail::require(max_refinements >= 1, "max_refinements must be >= 1");
        detail::require(tail_cutoff_log > 0, "tail_cutoff_log must be positive");
    }
};

namespace detail {

// Nodes/weights of the 15-point Kronrod rule and its embedded 7-point Gauss rule.
inline constexpr std::array<double, 8> kronrod_x = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_w = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss_w = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk15(F& f, double a, double b)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double k = fc * kronrod_w[7];
    double g = fc * gauss_w[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kronrod_x[j];
        const double s = f(c - dx) + f(c + dx);
        k += kronrod_w[j] * s;
        if (j % 2 == 1) g += gauss_w[j / 2] * s;
    }
    return {a, b, k * h, std::abs((k - g) * h)};
}

} // namespace detail

/// Integral of f over the finite interval [a, b]. Subdivides the segment with the
/// largest error estimate until the total estimate meets the tolerance.
template <class F>
double integrate(F&& f, double a, double b, const QuadratureConfig& cfg = {})
{
    if (a == b) return 0.0;
    if (b < a) return -integrate(f, b, a, cfg);
    detail::require(std::isfinite(a) && std::isfinite(b), "integrate: limits must be finite");

    std::priority_queue<detail::Segment> heap;
    heap.push(detail::gk15(f, a, b));
    double total = heap.top().value;
    double error = heap.top().error;

    for (int it = 0; it < cfg.max_refinements; ++it) {
        if (!std::isfinite(total)) break;
        if (error <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total))) return total;
        auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // Segment is down to machine resolution; accept what we have.
            heap.push(worst);
            break;
        }
        auto left = detail::gk15(f, worst.a, mid);
        auto right = detail::gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Recompute the sums from scratch; the running totals drift.
    total = 0.0;
    error = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    if (std::isfinite(total) && error <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total)))
        return total;
    throw quadrature_error("integrate: no convergence on [" + std::to_string(a) + ", " +
                           std::to_string(b) + "], error estimate " + std::to_string(error));
}

/// Integral of f over [a, +inf) for integrands with exponential decay on the
/// length scale `scale`. Consecutive panels of width 4*scale are summed until a
/// panel is negligible and the integrand has decayed by exp(-tail_cutoff_log).
template <class F>
double integrate_to_infinity(F&& f, double a, double scale, const QuadratureConfig& cfg = {})
{
    detail::require(scale > 0 && std::isfinite(scale), "integrate_to_infinity: scale must be positive");
    const double width = 4.0 * scale;
    const double cutoff = std::exp(-cfg.tail_cutoff_log);
    double total = 0.0;
    double peak = 0.0;
    double lo = a;
    for (int panel = 0; panel < 100000; ++panel) {
        const double hi = lo + width;
        const double part = integrate(f, lo, hi, cfg);
        total += part;
        peak = std::max({peak, std::abs(f(lo)), std::abs(f(0.5 * (lo + hi)))});
        const double edge = std::abs(f(hi));
        const double negligible = 1e-3 * std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
        if (std::abs(part) <= negligible && edge <= cutoff * peak) return total;
        if (peak == 0.0 && panel > 64) return total;
        lo = hi;
    }
    throw quadrature_error("integrate_to_infinity: tail did not decay");
}

/// Integral of x^p g(x) over [a, b] with 0 <= a < b < inf and p > -1. When the
/// range touches the origin and p < 0 the substitution x = u^(1/(p+1)) removes
/// the singularity: x^p dx = du / (p+1).
template <class G>
double integrate_power_weighted(double p, G&& g, double a, double b, const QuadratureConfig& cfg = {})
{
    detail::require(p > -1.0, "integrate_power_weighted: p must exceed -1");
    detail::require(0.0 <= a && a <= b, "integrate_power_weighted: need 0 <= a <= b");
    if (a == b) return 0.0;
    if (p >= 0.0) {
        return integrate([&](double x) { return (x == 0.0 && p == 0.0 ? 1.0 : std::pow(x, p)) * g(x); },
                         a, b, cfg);
    }
    const double k = p + 1.0;
    const double inv = 1.0 / k;
    const double ua = std::pow(a, k);
    const double ub = std::pow(b, k);
    return integrate([&](double u) { return g(std::pow(u, inv)); }, ua, ub, cfg) * inv;
}

/// Integral of x^p g(x) over [a, +inf), g decaying on length scale `scale`.
/// The stretch [a, max(a, 1)] is treated as singular-capable, the rest as a tail.
template <class G>
double integrate_power_weighted_to_infinity(double p, G&& g, double a, double scale,
                                            const QuadratureConfig& cfg = {})
{
    const double split = std::max(a, std::min(1.0, a + scale));
    const double head = integrate_power_weighted(p, g, a, split, cfg);
    const double tail = integrate_to_infinity([&](double x) { return std::pow(x, p) * g(x); }, split,
                                              scale, cfg);
    return head + tail;
}

} // namespace lcsharp
