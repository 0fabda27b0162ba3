#pragma once

// Sharp L_p - L_1 / L_p - L_2 comparison constants for centred log-concave
// variables, the transition order p0, and scans over the extremal families.

#include <lcsharp/errors.hpp>
#include <lcsharp/expfamily.hpp>
#include <lcsharp/parallel.hpp>
#include <lcsharp/roots.hpp>
#include <lcsharp/specfun.hpp>

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace lcsharp {

/// Gamma(p+1)^{1/p}: the L_p norm of a standard exponential, and of the
/// symmetric double exponential.
inline double gamma_norm(MomentOrder p)
{
    detail::require(p.value() != 0.0, "gamma_norm: p = 0 is not supported");
    return std::pow(gamma(p + 1.0), 1.0 / p);
}

/// (e/2) ||E - 1||_p: the L_p norm of the centred one-sided exponential
/// rescaled to unit L_1 norm.
inline double one_sided_norm(MomentOrder p, const QuadratureConfig& cfg = {})
{
    detail::require(p.value() != 0.0, "one_sided_norm: p = 0 is not supported");
    return std::numbers::e / 2.0 * std::pow(moment_et(p, 0.0, cfg), 1.0 / p);
}

/// Sharp constant in ||X||_p <= C_p ||X||_1, p >= 1.
inline double c_p(double p, const QuadratureConfig& cfg = {})
{
    detail::require(p >= 1.0, "c_p: requires p >= 1 (got " + std::to_string(p) + ")");
    return std::max(gamma_norm(p), one_sided_norm(p, cfg));
}

/// h(p) = Gamma(p+1) - (e/2)^p E|E - 1|^p; positive exactly where the symmetric
/// branch of C_p dominates.
inline double h(MomentOrder p, const QuadratureConfig& cfg = {})
{
    return gamma(p + 1.0) - std::pow(std::numbers::e / 2.0, p.value()) * moment_et(p, 0.0, cfg);
}

struct TransitionOrder {
    double p0;
    double residual;  // h(p0)
};

/// Root of h on [lo, hi] by 200-step bisection.
inline TransitionOrder find_p0(double lo = 2.0, double hi = 4.0, const QuadratureConfig& cfg = {})
{
    const double root = bisect([&](double p) { return h(p, cfg); }, lo, hi, 200);
    return {root, h(root, cfg)};
}

inline double transition_order(const QuadratureConfig& cfg = {})
{
    static const double cached = find_p0(2.0, 4.0, QuadratureConfig{}).p0;
    if (cfg.rel_tol == QuadratureConfig{}.rel_tol && cfg.abs_tol == QuadratureConfig{}.abs_tol) return cached;
    return find_p0(2.0, 4.0, cfg).p0;
}

// ||X||_p >= Gamma(p+1)^{1/p} ||X||_1, -1 < p <= 1.
inline double lp_l1_lower(double p)
{
    detail::require(p > -1.0 && p <= 1.0 && p != 0.0, "lp_l1_lower: requires p in (-1, 1], p != 0");
    return gamma_norm(p);
}

// ||X||_p <= C_p ||X||_1, p >= 1.
inline double lp_l1_upper(double p, const QuadratureConfig& cfg = {})
{
    detail::require(p >= 1.0, "lp_l1_upper: requires p >= 1");
    return c_p(p, cfg);
}

// ||X||_p >= 2^{-1/2} Gamma(p+1)^{1/p} ||X||_2, -1 < p <= 1.
inline double lp_l2_lower(double p)
{
    detail::require(p > -1.0 && p <= 1.0 && p != 0.0, "lp_l2_lower: requires p in (-1, 1], p != 0");
    return gamma_norm(p) / std::numbers::sqrt2;
}

// ||X||_p >= Gamma(p+1)^{1/p} / Gamma(q+1)^{1/q} ||X||_q, -1 < p <= 1 <= q <= p0.
inline double lp_lq_ratio(double p, double q, const QuadratureConfig& cfg = {})
{
    detail::require(p > -1.0 && p <= 1.0 && p != 0.0, "lp_lq_ratio: requires p in (-1, 1], p != 0");
    detail::require(q >= 1.0 && q <= transition_order(cfg) + 1e-12, "lp_lq_ratio: requires q in [1, p0]");
    return gamma_norm(p) / gamma_norm(q);
}

// ---------------------------------------------------------------------------
// Scans

struct ProfilePoint {
    double x;
    double value;
};

struct ScanResult {
    double argopt;
    double opt_value;
    bool minimised;  // true: smallest value sought, false: largest
    std::vector<ProfilePoint> profile;
};

namespace detail {

// Grid-then-refine optimisation on [0, 1]. Endpoints within `tie` of the
// optimum are preferred (first `preferred`, then the other one).
template <class F>
ScanResult grid_refine(F&& f, std::size_t grid_size, bool minimise, double preferred, double tie = 1e-8)
{
    require(grid_size >= 2, "scan grid needs at least two points");
    ScanResult out{0.0, 0.0, minimise, {}};
    out.profile.resize(grid_size);
    parallel_for(grid_size, [&](std::size_t i) {
        const double x = static_cast<double>(i) / static_cast<double>(grid_size - 1);
        out.profile[i] = {x, f(x)};
    });
    const double sgn = minimise ? -1.0 : 1.0;  // maximise sgn * f
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid_size; ++i)
        if (sgn * out.profile[i].value > sgn * out.profile[best].value) best = i;

    double arg = out.profile[best].x;
    double val = out.profile[best].value;
    if (best > 0 && best + 1 < grid_size) {
        auto [x, fx] = golden_max([&](double s) { return sgn * f(s); }, out.profile[best - 1].x,
                                  out.profile[best + 1].x, 1e-10);
        if (sgn * fx > sgn * val) {
            arg = x;
            val = sgn * fx;
        }
    }
    const double ends[2] = {preferred, 1.0 - preferred};
    for (double e : ends) {
        const double fe = f(e);
        if (sgn * fe >= sgn * val - tie) {
            arg = e;
            val = fe;
            break;
        }
    }
    out.argopt = arg;
    out.opt_value = val;
    return out;
}

} // namespace detail

/// Scans t -> ||E_t / mu_t||_p over [0, 1]: the minimum for p <= 1, the
/// maximum for p > 1. The profile holds (t, value) grid rows.
inline ScanResult scan_family_extrema(MomentOrder p, std::size_t grid_size = 1000, const QuadratureConfig& cfg = {})
{
    detail::require(p.value() != 0.0, "scan_family_extrema: p = 0 is not supported");
    detail::require(grid_size >= 100, "scan_family_extrema: grid_size must be >= 100");
    const bool minimise = p.value() <= 1.0;
    return detail::grid_refine([&](double t) { return norm_ebar(p, t, cfg); }, grid_size, minimise, 1.0);
}

/// ||Z_s||_p / ||Z_s||_2 for Z_s = s(E - 1) - (1 - s)(E' - 1).
inline double l2_ratio(MomentOrder p, double s, const QuadratureConfig& cfg = {})
{
    detail::require(s >= 0.0 && s <= 1.0, "l2_ratio: s must lie in [0, 1]");
    detail::require(p.value() != 0.0, "l2_ratio: p = 0 is not supported");
    // Z_s and Z_{1-s} are mirror images; for s >= 1/2, Z_s = s E_t with t = (1-s)/s.
    const double big = std::max(s, 1.0 - s);
    const double t = (1.0 - big) / big;
    return std::pow(moment_et(p, t, cfg), 1.0 / p) / std::sqrt(1.0 + t * t);
}

/// Where ||Z_s||_p / ||Z_s||_2 is extremal over s in [0, 1]: largest for
/// p > 2, smallest for 1 < p < 2 (the direction in which the ratio
/// ||Z||_max(p,2) / ||Z||_min(p,2) is maximised). Mirror-image ties are
/// reported with s >= 1/2.
inline ScanResult scan_l2_ratio(MomentOrder p, std::size_t grid_size = 1001, const QuadratureConfig& cfg = {})
{
    detail::require(p.value() > 1.0 && p.value() != 2.0, "scan_l2_ratio: requires p > 1, p != 2");
    detail::require(grid_size >= 3, "scan_l2_ratio: grid_size must be >= 3");
    const bool minimise = p.value() < 2.0;
    // Scan u in [0, 1] <-> s = (1 + u)/2 in [1/2, 1]; preferred tie endpoint is s = 1/2.
    auto res = detail::grid_refine([&](double u) { return l2_ratio(p, 0.5 * (1.0 + u), cfg); }, grid_size,
                                   minimise, 0.0);
    res.argopt = 0.5 * (1.0 + res.argopt);
    std::vector<ProfilePoint> full;
    full.reserve(2 * res.profile.size() - 1);
    for (auto it = res.profile.rbegin(); it != res.profile.rend(); ++it) full.push_back({0.5 * (1.0 - it->x), it->value});
    for (std::size_t i = 1; i < res.profile.size(); ++i)
        full.push_back({0.5 * (1.0 + res.profile[i].x), res.profile[i].value});
    res.profile = std::move(full);
    return res;
}

enum class L2Extremiser { symmetric, one_sided, interior };

inline L2Extremiser classify_l2_extremiser(double s)
{
    if (std::abs(s - 0.5) < 1e-9) return L2Extremiser::symmetric;
    if (s < 1e-9 || s > 1.0 - 1e-9) return L2Extremiser::one_sided;
    return L2Extremiser::interior;
}

struct L2Transition {
    double p_star;
    double bracket_lo, bracket_hi;  // symmetric at lo, one-sided at hi
};

/// Locates, by bisection on the classification of scan_l2_ratio, the order in
/// (lo, hi) where the extremiser switches from symmetric to one-sided.
inline L2Transition locate_l2_transition(double lo = 1.05, double hi = 1.95, double tol = 1e-4,
                                         std::size_t grid_size = 201, const QuadratureConfig& cfg = {})
{
    auto kind = [&](double p) { return classify_l2_extremiser(scan_l2_ratio(p, grid_size, cfg).argopt); };
    if (kind(lo) != L2Extremiser::symmetric || kind(hi) != L2Extremiser::one_sided)
        throw bracket_error("locate_l2_transition: extremiser does not switch on the bracket");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (kind(mid) == L2Extremiser::symmetric)
            lo = mid;
        else
            hi = mid;
    }
    return {0.5 * (lo + hi), lo, hi};
}

} // namespace lcsharp
