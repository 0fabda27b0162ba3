#pragma once

#include <lcsharp/errors.hpp>

#include <cmath>
#include <string>
#include <utility>

namespace lcsharp {

/// Bisection on [lo, hi]; f(lo) and f(hi) must have opposite signs (or one be
/// zero). Runs a fixed number of halvings, stopping early only when the
/// interval can no longer be split in floating point.
template <class F>
double bisect(F&& f, double lo, double hi, int iterations = 200)
{
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (std::signbit(flo) == std::signbit(fhi) || std::isnan(flo) || std::isnan(fhi))
        throw bracket_error("bisect: no sign change on [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "]");
    for (int i = 0; i < iterations; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return std::abs(flo) <= std::abs(f(hi)) ? lo : hi;
}

/// Golden-section search for the maximum of a unimodal f on [lo, hi].
/// Returns (argmax, max).
template <class F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, double tol = 1e-10)
{
    constexpr double invphi = 0.6180339887498948482;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, f(x)};
}

} // namespace lcsharp
