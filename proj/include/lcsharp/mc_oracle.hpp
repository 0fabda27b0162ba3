#pragma once

// Monte Carlo oracles. Samples are generated in fixed-size blocks, each block
// seeded from (seed, block index); per-block statistics are merged in block
// order, so estimates do not depend on how many streams run concurrently.

#include <lcsharp/errors.hpp>
#include <lcsharp/expfamily.hpp>
#include <lcsharp/parallel.hpp>
#include <lcsharp/simplex.hpp>
#include <lcsharp/specfun.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace lcsharp {

struct McConfig {
    std::uint64_t seed = 20240601;
    std::uint64_t samples = 10'000'000;
    double density_window = 0.01;
    unsigned streams = 1;
    // Richardson-corrected window 2F(w) - F(2w); cancels the O(w) bias that a
    // kink at the evaluation point gives the plain window estimator.
    bool bias_corrected = true;

    void validate() const
    {
        detail::require(samples >= 100'000, "McConfig: samples must be >= 1e5");
        detail::require(density_window > 0.0 && std::isfinite(density_window),
                        "McConfig: density_window must be positive");
        detail::require(streams >= 1, "McConfig: streams must be >= 1");
    }
};

struct McEstimate {
    double estimate = 0.0;
    double standard_error = 0.0;
    std::uint64_t samples = 0;

    bool within(double target, double k = 3.0) const { return std::abs(estimate - target) <= k * standard_error; }
};

namespace detail {

inline constexpr std::uint64_t mc_block_size = 1u << 16;

// Unit exponential from 53 random bits; avoids the library-specific
// std::exponential_distribution so streams are portable.
inline double unit_exponential(std::mt19937_64& rng)
{
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return -std::log1p(-u);
}

inline std::mt19937_64 block_engine(std::uint64_t seed, std::uint64_t block)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
    return std::mt19937_64(seq);
}

struct Moments {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void push(double y)
    {
        ++n;
        const double d = y - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (y - mean);
    }

    void merge(const Moments& o)
    {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(n), nb = static_cast<double>(o.n);
        const double d = o.mean - mean;
        mean += d * nb / (na + nb);
        m2 += o.m2 + d * d * na * nb / (na + nb);
        n += o.n;
    }
};

} // namespace detail

/// Lazily evaluated i.i.d. stream: a draw rule plus the configuration that
/// fixes its seed and length.
struct SampleStream {
    std::function<double(std::mt19937_64&)> draw;
    McConfig cfg;

    /// Sample mean of phi(X) with the delete-one jackknife standard error
    /// (which for a mean reduces to s / sqrt(N)).
    McEstimate mean_of(const std::function<double(double)>& phi) const
    {
        cfg.validate();
        const std::uint64_t blocks = (cfg.samples + detail::mc_block_size - 1) / detail::mc_block_size;
        std::vector<detail::Moments> parts(blocks);
        detail::parallel_for(
            blocks,
            [&](std::size_t b) {
                auto rng = detail::block_engine(cfg.seed, b);
                const std::uint64_t begin = b * detail::mc_block_size;
                const std::uint64_t end = std::min<std::uint64_t>(cfg.samples, begin + detail::mc_block_size);
                detail::Moments m;
                for (std::uint64_t i = begin; i < end; ++i) m.push(phi(draw(rng)));
                parts[b] = m;
            },
            cfg.streams);
        detail::Moments total;
        for (const auto& m : parts) total.merge(m);
        const double n = static_cast<double>(total.n);
        const double var = total.n > 1 ? total.m2 / (n - 1.0) : 0.0;
        return {total.mean, std::sqrt(var / n), total.n};
    }

    /// The first `count` samples, for inspection and tests.
    std::vector<double> take(std::uint64_t count) const
    {
        std::vector<double> out;
        out.reserve(count);
        for (std::uint64_t b = 0; out.size() < count; ++b) {
            auto rng = detail::block_engine(cfg.seed, b);
            for (std::uint64_t i = 0; i < detail::mc_block_size && out.size() < count; ++i) out.push_back(draw(rng));
        }
        return out;
    }
};

/// X_{a,b} = a(E - 1) - b(E' - 1).
inline SampleStream sample_xab(TwoSidedExpParams params, McConfig cfg = {})
{
    params.validate();
    cfg.validate();
    return {[params](std::mt19937_64& rng) {
                const double e1 = detail::unit_exponential(rng);
                const double e2 = detail::unit_exponential(rng);
                return params.a * (e1 - 1.0) - params.b * (e2 - 1.0);
            },
            cfg};
}

/// E_t, or E_t / mu_t when normalized.
inline SampleStream sample_family(double t, bool normalized, McConfig cfg = {})
{
    const FamilyPoint fp(t);
    const double scale = normalized ? 1.0 / fp.mu() : 1.0;
    auto s = sample_xab({1.0, t}, cfg);
    return {[inner = s.draw, scale](std::mt19937_64& rng) { return scale * inner(rng); }, cfg};
}

/// sum_j a_j E_j.
inline SampleStream sample_weighted_sum(const WeightVector& weights, McConfig cfg = {})
{
    cfg.validate();
    return {[a = weights.vector()](std::mt19937_64& rng) {
                double s = 0.0;
                for (double w : a) s += w * detail::unit_exponential(rng);
                return s;
            },
            cfg};
}

/// E|X|^p. For p in (-1, 0) the variance may be infinite; the reported
/// standard error is then only indicative.
inline McEstimate estimate_abs_moment(const SampleStream& stream, MomentOrder p)
{
    const double pv = p.value();
    if (pv == 0.0) return stream.mean_of([](double) { return 1.0; });
    return stream.mean_of([pv](double x) { return std::pow(std::abs(x), pv); });
}

/// Window estimate of the density at zero of sum a_j E_j.
inline McEstimate estimate_density_at_zero(const WeightVector& weights, const McConfig& cfg = {})
{
    const double w = cfg.density_window;
    const auto stream = sample_weighted_sum(weights, cfg);
    if (!cfg.bias_corrected) return stream.mean_of([w](double x) { return std::abs(x) <= w ? 0.5 / w : 0.0; });
    return stream.mean_of([w](double x) {
        const double ax = std::abs(x);
        return ((ax <= w ? 4.0 : 0.0) - (ax <= 2.0 * w ? 1.0 : 0.0)) / (4.0 * w);
    });
}

} // namespace lcsharp
