#pragma once

// Central hyperplane sections of the regular simplex
//   Delta_n = {x in R^{n+1} : x_j >= 0, sum x_j = 1}
// through the density at zero of sum a_j E_j (E_j i.i.d. standard
// exponentials): vol_{n-1}(Delta_n cap a^perp) = sqrt(n+1)/(n-1)! f(0).

#include <lcsharp/errors.hpp>
#include <lcsharp/parallel.hpp>
#include <lcsharp/quadrature.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace lcsharp {

/// Unit normal a of a central section: sum a_j = 0 and |a| = 1.
class WeightVector {
public:
    /// Validates without modification.
    static WeightVector strict(std::vector<double> a, double tol = 1e-12)
    {
        detail::require(a.size() >= 2, "weight vector needs at least 2 entries");
        const double sum = std::accumulate(a.begin(), a.end(), 0.0);
        const double norm = std::sqrt(std::inner_product(a.begin(), a.end(), a.begin(), 0.0));
        detail::require(std::abs(sum) <= tol, "weight vector must sum to 0 (sum = " + std::to_string(sum) + ")");
        detail::require(std::abs(norm - 1.0) <= tol,
                        "weight vector must have unit norm (|a| = " + std::to_string(norm) + ")");
        return WeightVector(std::move(a));
    }

    /// Subtracts the mean and rescales to unit norm.
    static WeightVector projected(std::vector<double> a)
    {
        detail::require(a.size() >= 2, "weight vector needs at least 2 entries");
        const double mean = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(a.size());
        for (double& v : a) v -= mean;
        const double norm = std::sqrt(std::inner_product(a.begin(), a.end(), a.begin(), 0.0));
        detail::require(norm > 1e-300, "weight vector is constant; cannot project");
        for (double& v : a) v /= norm;
        return WeightVector(std::move(a));
    }

    std::span<const double> values() const { return a_; }
    const std::vector<double>& vector() const { return a_; }
    std::size_t size() const { return a_.size(); }
    double operator[](std::size_t i) const { return a_[i]; }
    /// Dimension n of the simplex the normal lives in (size - 1).
    std::size_t dimension() const { return a_.size() - 1; }

private:
    explicit WeightVector(std::vector<double> a) : a_(std::move(a)) {}
    std::vector<double> a_;
};

enum class DensityMethod {
    fourier,        // inversion of the characteristic function
    residue,        // partial fractions; repeated weights fall back to fourier
    cross_checked,  // fourier, verified against residue when weights are distinct
};

namespace detail {

inline std::vector<double> nonzero_weights(std::span<const double> a)
{
    std::vector<double> w;
    for (double v : a)
        if (v != 0.0) w.push_back(v);
    require(!w.empty(), "density_at_zero: all weights are zero");
    const bool pos = std::any_of(w.begin(), w.end(), [](double v) { return v > 0; });
    const bool neg = std::any_of(w.begin(), w.end(), [](double v) { return v < 0; });
    require(pos && neg, "density_at_zero: weights of both signs are required");
    return w;
}

inline bool distinct_weights(std::span<const double> w, double rel_gap = 1e-8)
{
    for (std::size_t i = 0; i < w.size(); ++i)
        for (std::size_t j = i + 1; j < w.size(); ++j)
            if (std::abs(w[i] - w[j]) <= rel_gap * std::max(std::abs(w[i]), std::abs(w[j]))) return false;
    return true;
}

} // namespace detail

/// f(0) = (1/pi) int_0^inf Re prod_j (1 - i a_j s)^{-1} ds, with the half-line
/// mapped onto [0, 1) by s = c u / (1 - u), c = 1 / max|a_j|.
inline double density_at_zero_fourier(std::span<const double> a, const QuadratureConfig& cfg = {})
{
    const auto w = detail::nonzero_weights(a);
    double amax = 0.0;
    for (double v : w) amax = std::max(amax, std::abs(v));
    const double c = 1.0 / amax;
    auto integrand = [&](double u) {
        const double one_minus = 1.0 - u;
        if (one_minus <= 0.0) return 0.0;
        const double s = c * u / one_minus;
        std::complex<double> denom(1.0, 0.0);
        for (double v : w) denom *= std::complex<double>(1.0, -v * s);
        return (1.0 / denom).real() * c / (one_minus * one_minus);
    };
    return integrate(integrand, 0.0, 1.0, cfg) / std::numbers::pi;
}

/// Partial-fraction value: f(0) = sum_{a_j > 0} (1/a_j) prod_{k != j} a_j / (a_j - a_k),
/// over the nonzero weights, which must be pairwise distinct.
inline double density_at_zero_residue(std::span<const double> a)
{
    const auto w = detail::nonzero_weights(a);
    detail::require(detail::distinct_weights(w), "density_at_zero_residue: nonzero weights must be distinct");
    double total = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (w[j] <= 0.0) continue;
        double coeff = 1.0;
        for (std::size_t k = 0; k < w.size(); ++k)
            if (k != j) coeff *= w[j] / (w[j] - w[k]);
        total += coeff / w[j];
    }
    return total;
}

/// Density of sum a_j E_j at zero.
inline double density_at_zero(const WeightVector& a, DensityMethod method = DensityMethod::fourier,
                              const QuadratureConfig& cfg = {})
{
    const auto vals = a.values();
    const bool distinct = detail::distinct_weights(detail::nonzero_weights(vals));
    switch (method) {
    case DensityMethod::residue:
        return distinct ? density_at_zero_residue(vals) : density_at_zero_fourier(vals, cfg);
    case DensityMethod::cross_checked: {
        const double f = density_at_zero_fourier(vals, cfg);
        if (distinct) {
            const double r = density_at_zero_residue(vals);
            if (std::abs(f - r) > 1e-8)
                throw quadrature_error("density_at_zero: fourier " + std::to_string(f) + " vs residue " +
                                       std::to_string(r));
        }
        return f;
    }
    case DensityMethod::fourier:
    default:
        return density_at_zero_fourier(vals, cfg);
    }
}

/// sqrt(n+1) / (n-1)!, the factor converting f(0) into a section volume.
inline double section_volume_factor(std::size_t n)
{
    detail::require(n >= 2, "section volume requires n >= 2");
    return std::sqrt(static_cast<double>(n + 1)) / std::tgamma(static_cast<double>(n));
}

inline double section_volume(const WeightVector& a, std::size_t n, const QuadratureConfig& cfg = {})
{
    detail::require(n >= 2, "section_volume: requires n >= 2 (got n = " + std::to_string(n) + ")");
    detail::require(a.size() == n + 1, "section_volume: weight vector must have n + 1 entries");
    return section_volume_factor(n) * density_at_zero(a, DensityMethod::fourier, cfg);
}

// ---------------------------------------------------------------------------
// Direct slicing of the simplex.

struct SectionPolytope {
    std::vector<std::vector<double>> vertices;
    std::vector<double> normal;

    /// Whether x lies in the section (in the plane sum x = 1, in a^perp, and in
    /// the convex hull of the vertices) up to tol.
    bool contains(std::span<const double> x, double tol = 1e-10) const;
};

namespace detail {

inline double dot(std::span<const double> u, std::span<const double> v)
{
    return std::inner_product(u.begin(), u.end(), v.begin(), 0.0);
}

inline std::vector<double> sub(std::span<const double> u, std::span<const double> v)
{
    std::vector<double> r(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) r[i] = u[i] - v[i];
    return r;
}

struct PlaneFrame {
    std::vector<double> origin, e1, e2;
    std::pair<double, double> coords(std::span<const double> x) const
    {
        const auto d = sub(x, origin);
        return {dot(d, e1), dot(d, e2)};
    }
};

inline PlaneFrame frame_of(const std::vector<std::vector<double>>& pts)
{
    const std::size_t dim = pts.front().size();
    PlaneFrame f{std::vector<double>(dim, 0.0), {}, {}};
    for (const auto& p : pts)
        for (std::size_t i = 0; i < dim; ++i) f.origin[i] += p[i] / static_cast<double>(pts.size());
    double best = 0.0;
    for (const auto& p : pts) {
        auto d = sub(p, f.origin);
        const double n = std::sqrt(dot(d, d));
        if (n > best) {
            best = n;
            for (double& v : d) v /= n;
            f.e1 = d;
        }
    }
    best = 0.0;
    for (const auto& p : pts) {
        auto d = sub(p, f.origin);
        const double k = dot(d, f.e1);
        for (std::size_t i = 0; i < dim; ++i) d[i] -= k * f.e1[i];
        const double n = std::sqrt(dot(d, d));
        if (n > best) {
            best = n;
            for (double& v : d) v /= n;
            f.e2 = d;
        }
    }
    require(best > 1e-12, "section polytope is degenerate (vertices are collinear)");
    return f;
}

// Vertices of a planar convex polygon, counter-clockwise in frame coordinates.
inline std::vector<std::pair<double, double>> ordered_polygon(const PlaneFrame& f,
                                                              const std::vector<std::vector<double>>& pts)
{
    std::vector<std::pair<double, double>> uv;
    for (const auto& p : pts) uv.push_back(f.coords(p));
    std::sort(uv.begin(), uv.end(), [](const auto& l, const auto& r) {
        return std::atan2(l.second, l.first) < std::atan2(r.second, r.first);
    });
    return uv;
}

} // namespace detail

/// Vertices of Delta_n cap a^perp: simplex vertices e_i with a_i = 0 and the
/// points (a_j e_i - a_i e_j) / (a_j - a_i) on edges whose end weights differ in sign.
inline SectionPolytope section_polytope(const WeightVector& a)
{
    const std::size_t m = a.size();
    SectionPolytope poly;
    poly.normal = a.vector();
    auto push_unique = [&](std::vector<double> v) {
        for (const auto& w : poly.vertices) {
            double d = 0.0;
            for (std::size_t i = 0; i < m; ++i) d = std::max(d, std::abs(w[i] - v[i]));
            if (d < 1e-12) return;
        }
        poly.vertices.push_back(std::move(v));
    };
    for (std::size_t i = 0; i < m; ++i) {
        if (std::abs(a[i]) <= 1e-14) {
            std::vector<double> v(m, 0.0);
            v[i] = 1.0;
            push_unique(std::move(v));
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            if (!(a[i] * a[j] < 0.0) || std::abs(a[i]) <= 1e-14 || std::abs(a[j]) <= 1e-14) continue;
            std::vector<double> v(m, 0.0);
            v[i] = a[j] / (a[j] - a[i]);
            v[j] = -a[i] / (a[j] - a[i]);
            push_unique(std::move(v));
        }
    }
    return poly;
}

inline bool SectionPolytope::contains(std::span<const double> x, double tol) const
{
    double sum = 0.0;
    for (double v : x) sum += v;
    if (std::abs(sum - 1.0) > tol || std::abs(detail::dot(normal, x)) > tol) return false;
    if (vertices.size() == 1) {
        return detail::sub(x, vertices[0]) == std::vector<double>(x.size(), 0.0);
    }
    if (vertices.size() == 2) {
        const auto d = detail::sub(vertices[1], vertices[0]);
        const auto r = detail::sub(x, vertices[0]);
        const double len2 = detail::dot(d, d);
        const double s = detail::dot(r, d) / len2;
        double off = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) off = std::max(off, std::abs(r[i] - s * d[i]));
        return s >= -tol && s <= 1.0 + tol && off <= tol;
    }
    const auto frame = detail::frame_of(vertices);
    const auto poly = detail::ordered_polygon(frame, vertices);
    const auto [px, py] = frame.coords(x);
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const auto [ax, ay] = poly[i];
        const auto [bx, by] = poly[(i + 1) % poly.size()];
        if ((bx - ax) * (py - ay) - (by - ay) * (px - ax) < -tol) return false;
    }
    return true;
}

/// vol_{n-1}(Delta_n cap a^perp) for n in {2, 3} by direct slicing: a segment
/// length or a polygon area.
inline double geometry_oracle_volume(const WeightVector& a, std::size_t n)
{
    detail::require(n == 2 || n == 3, "geometry_oracle_volume: only n = 2 or 3 is supported");
    detail::require(a.size() == n + 1, "geometry_oracle_volume: weight vector must have n + 1 entries");
    const auto poly = section_polytope(a);
    if (n == 2) {
        detail::require(poly.vertices.size() == 2, "degenerate section: expected a segment, got " +
                                                       std::to_string(poly.vertices.size()) + " vertices");
        const auto d = detail::sub(poly.vertices[0], poly.vertices[1]);
        return std::sqrt(detail::dot(d, d));
    }
    detail::require(poly.vertices.size() >= 3, "degenerate section: expected a polygon, got " +
                                                   std::to_string(poly.vertices.size()) + " vertices");
    const auto frame = detail::frame_of(poly.vertices);
    const auto uv = detail::ordered_polygon(frame, poly.vertices);
    double area2 = 0.0;
    for (std::size_t i = 0; i < uv.size(); ++i) {
        const auto& [x0, y0] = uv[i];
        const auto& [x1, y1] = uv[(i + 1) % uv.size()];
        area2 += x0 * y1 - x1 * y0;
    }
    return 0.5 * std::abs(area2);
}

// ---------------------------------------------------------------------------
// Maximal sections.

/// Euclidean distance from a to the nearest (e_j - e_k)/sqrt(2), j != k.
inline double equality_orbit_distance(std::span<const double> a)
{
    double best = std::numeric_limits<double>::infinity();
    const double r = 1.0 / std::numbers::sqrt2;
    for (std::size_t j = 0; j < a.size(); ++j) {
        for (std::size_t k = 0; k < a.size(); ++k) {
            if (j == k) continue;
            double d2 = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                const double target = i == j ? r : (i == k ? -r : 0.0);
                d2 += (a[i] - target) * (a[i] - target);
            }
            best = std::min(best, std::sqrt(d2));
        }
    }
    return best;
}

struct SectionOptimum {
    std::vector<double> a_star;
    double value = 0.0;
    double max_evaluated = 0.0;  // largest objective value seen at any candidate
    std::size_t evaluations = 0;
    double orbit_distance = 0.0;
};

struct AscentOptions {
    double fd_step = 1e-6;
    double prune_below = 1e-2;  // coordinates smaller than this are dropped and re-optimised
    int max_iterations = 3000;
    unsigned threads = 0;
};

namespace detail {

class SectionAscent {
public:
    SectionAscent(std::size_t size, const AscentOptions& opt, const QuadratureConfig& cfg)
        : size_(size), opt_(opt), cfg_(cfg)
    {
    }

    // Onto {sum over support = 0, zero off support, |v| = 1}.
    std::vector<double> retract(std::vector<double> v, const std::vector<bool>& support) const
    {
        double sum = 0.0;
        std::size_t k = 0;
        for (std::size_t i = 0; i < size_; ++i)
            if (support[i]) {
                sum += v[i];
                ++k;
            } else {
                v[i] = 0.0;
            }
        for (std::size_t i = 0; i < size_; ++i)
            if (support[i]) v[i] -= sum / static_cast<double>(k);
        const double n = std::sqrt(dot(v, v));
        for (double& x : v) x /= n;
        return v;
    }

    double objective(const std::vector<double>& a)
    {
        const double v = density_at_zero_fourier(a, cfg_);
        ++evaluations;
        max_evaluated = std::max(max_evaluated, v);
        return v;
    }

    // Orthonormal basis of {v : supp v in S, sum v = 0, <v, a> = 0}.
    std::vector<std::vector<double>> tangent_basis(const std::vector<double>& a, const std::vector<bool>& support) const
    {
        std::vector<std::vector<double>> constraints, basis;
        std::vector<double> ones(size_, 0.0);
        for (std::size_t i = 0; i < size_; ++i) ones[i] = support[i] ? 1.0 : 0.0;
        auto orthonormalise = [&](std::vector<double> v, bool into_basis) {
            for (int pass = 0; pass < 2; ++pass) {
                for (const auto& c : constraints) {
                    const double k = dot(v, c);
                    for (std::size_t i = 0; i < size_; ++i) v[i] -= k * c[i];
                }
                for (const auto& b : basis) {
                    const double k = dot(v, b);
                    for (std::size_t i = 0; i < size_; ++i) v[i] -= k * b[i];
                }
            }
            const double n = std::sqrt(dot(v, v));
            if (n < 1e-8) return;
            for (double& x : v) x /= n;
            (into_basis ? basis : constraints).push_back(std::move(v));
        };
        orthonormalise(ones, false);
        orthonormalise(a, false);
        for (std::size_t i = 0; i < size_; ++i) {
            if (!support[i]) continue;
            std::vector<double> e(size_, 0.0);
            e[i] = 1.0;
            orthonormalise(std::move(e), true);
        }
        return basis;
    }

    // Normalised-gradient ascent with an adaptive step on the support manifold.
    std::pair<std::vector<double>, double> ascend(std::vector<double> a, const std::vector<bool>& support)
    {
        a = retract(std::move(a), support);
        double fa = objective(a);
        double step = 0.2;
        for (int it = 0; it < opt_.max_iterations && step > 1e-12; ++it) {
            const auto basis = tangent_basis(a, support);
            if (basis.empty()) break;
            std::vector<double> grad(size_, 0.0);
            for (const auto& b : basis) {
                std::vector<double> up(a), down(a);
                for (std::size_t i = 0; i < size_; ++i) {
                    up[i] += opt_.fd_step * b[i];
                    down[i] -= opt_.fd_step * b[i];
                }
                const double g = (objective(retract(up, support)) - objective(retract(down, support))) /
                                 (2.0 * opt_.fd_step);
                for (std::size_t i = 0; i < size_; ++i) grad[i] += g * b[i];
            }
            const double gn = std::sqrt(dot(grad, grad));
            if (gn < 1e-12) break;
            std::vector<double> cand(a);
            for (std::size_t i = 0; i < size_; ++i) cand[i] += step * grad[i] / gn;
            cand = retract(std::move(cand), support);
            const double fc = objective(cand);
            if (fc > fa) {
                a = std::move(cand);
                fa = fc;
                step = std::min(1.0, 1.5 * step);
            } else {
                step *= 0.5;
            }
        }
        return {a, fa};
    }

    std::size_t evaluations = 0;
    double max_evaluated = 0.0;

private:
    std::size_t size_;
    AscentOptions opt_;
    QuadratureConfig cfg_;
};

} // namespace detail

/// Maximises the density at zero of sum a_j E_j over unit zero-sum a in
/// R^{n+1}. Each restart draws a Gaussian start from its own stream
/// (seed, restart), ascends, then repeatedly drops coordinates that have
/// collapsed towards zero and re-ascends on the smaller support. The best
/// restart wins; ties go to the lowest restart index.
inline SectionOptimum maximize_section(std::size_t n, std::size_t restarts, std::uint64_t seed,
                                       const AscentOptions& opt = {}, const QuadratureConfig& cfg = {})
{
    detail::require(n >= 2, "maximize_section: requires n >= 2");
    detail::require(restarts >= 20, "maximize_section: requires at least 20 restarts");
    const std::size_t m = n + 1;

    std::vector<SectionOptimum> results(restarts);
    detail::parallel_for(
        restarts,
        [&](std::size_t r) {
            std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                              static_cast<std::uint32_t>(r)};
            std::mt19937_64 rng(seq);
            std::normal_distribution<double> normal;
            std::vector<double> start(m);
            for (double& v : start) v = normal(rng);

            detail::SectionAscent ascent(m, opt, cfg);
            std::vector<bool> support(m, true);
            auto [a, val] = ascent.ascend(start, support);
            for (;;) {
                std::vector<bool> pruned(m);
                std::size_t kept = 0;
                for (std::size_t i = 0; i < m; ++i) {
                    pruned[i] = support[i] && std::abs(a[i]) >= opt.prune_below;
                    kept += pruned[i];
                }
                if (kept == static_cast<std::size_t>(std::count(support.begin(), support.end(), true)) || kept < 2) break;
                auto [b, bval] = ascent.ascend(a, pruned);
                if (bval < val) break;
                a = std::move(b);
                val = bval;
                support = std::move(pruned);
            }
            results[r].a_star = a;
            results[r].value = val;
            results[r].max_evaluated = ascent.max_evaluated;
            results[r].evaluations = ascent.evaluations;
        },
        opt.threads);

    SectionOptimum best = results.front();
    double max_eval = 0.0;
    std::size_t evals = 0;
    for (const auto& r : results) {
        if (r.value > best.value) best = r;
        max_eval = std::max(max_eval, r.max_evaluated);
        evals += r.evaluations;
    }
    best.max_evaluated = max_eval;
    best.evaluations = evals;
    best.orbit_distance = equality_orbit_distance(best.a_star);
    return best;
}

} // namespace lcsharp
