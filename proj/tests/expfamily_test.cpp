#include <lcsharp/expfamily.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

using namespace lcsharp;

namespace {

// g_{a,b} written out directly from X = a(E - 1) - b(E' - 1) by convolution of
// the two exponential laws; a, b > 0 only.
double convolved_density(double a, double b, double x)
{
    // density of aE - bE' at y: e^{-y/a}/(a+b) for y >= 0, e^{y/b}/(a+b) for y < 0
    const double y = x + a - b;
    return y >= 0 ? std::exp(-y / a) / (a + b) : std::exp(y / b) / (a + b);
}

template <class F>
double line_integral(F f, double kink)
{
    return kink < 0 ? oracle::whole_line(f, {kink, 0.0}) : oracle::whole_line(f, {0.0, kink});
}

// E|E_t / mu_t|^p by tanh-sinh / exp-sinh on the folded density of E_t.
double folded_moment(double p, double t)
{
    const double mu = 2.0 * std::exp(t - 1.0) / (1.0 + t);
    auto folded = [&](double x) {
        const double y = mu * x;
        // at t = 0 X = E - 1 has no negative exponential branch
        const double g = t > 0 ? convolved_density(1.0, t, y) + convolved_density(1.0, t, -y)
                               : std::exp(-(y + 1.0)) + (y < 1.0 ? std::exp(y - 1.0) : 0.0);
        return oracle::weighted(x, p, mu * g);
    };
    const double kink = (1.0 - t) / mu;
    if (kink == 0.0) return oracle::half_line(folded, 0.0);
    return oracle::finite(folded, 0.0, kink) + oracle::half_line(folded, kink);
}

} // namespace

TEST(DensityXab, PointValues)
{
    EXPECT_NEAR(density_xab({1.0, 0.0}, 0.0), std::exp(-1.0), 1e-15);
    EXPECT_NEAR(density_xab({1.0, 1.0}, 0.0), 0.5, 1e-15);
    EXPECT_EQ(density_xab({1.0, 0.0}, -1.5), 0.0);
    EXPECT_EQ(density_xab({0.0, 2.0}, 3.0), 0.0);
}

TEST(DensityXab, MatchesConvolution)
{
    for (double x : {-3.0, -0.4, 0.0, 0.2, 1.7, 6.0})
        EXPECT_NEAR(density_xab({0.8, 0.35}, x), convolved_density(0.8, 0.35, x), 1e-15);
}

TEST(DensityXab, RejectsDegenerateScales)
{
    EXPECT_THROW(density_xab({0.0, 0.0}, 1.0), std::domain_error);
    EXPECT_THROW(density_xab({-1.0, 1.0}, 1.0), std::domain_error);
}

TEST(DensityXab, UnitMassAndZeroMeanForRandomScales)
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.05, 3.0);
    EXPECT_NEAR(line_integral([](double x) { return density_xab({1.0, 0.5}, x); }, -0.5), 1.0, 1e-10);
    for (int k = 0; k < 50; ++k) {
        const TwoSidedExpParams s{u(rng), u(rng)};
        const double kink = -(s.a - s.b);
        const double mass = line_integral([&](double x) { return density_xab(s, x); }, kink);
        const double mean = line_integral([&](double x) { return x * density_xab(s, x); }, kink);
        EXPECT_NEAR(mass, 1.0, 1e-8) << s.a << "," << s.b;
        EXPECT_NEAR(mean, 0.0, 1e-8) << s.a << "," << s.b;
    }
}

TEST(ProbPositive, KnownValues)
{
    EXPECT_NEAR(prob_positive({1.0, 1.0}), 0.5, 1e-15);
    EXPECT_NEAR(prob_positive({1.0, 0.0}), 1.0 / std::numbers::e, 1e-15);
    const double ref = oracle::half_line([](double x) { return convolved_density(1.0, 0.3, x); }, 0.0);
    EXPECT_NEAR(prob_positive({1.0, 0.3}), ref, 1e-10);
}

TEST(ProbPositive, RangeWhenPositiveBranchDominates)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        const double a = 0.1 + 3 * u(rng), b = a * u(rng);
        const double pr = prob_positive({a, b});
        EXPECT_GE(pr, 1.0 / std::numbers::e - 1e-15);
        EXPECT_LE(pr, 0.5 + 1e-15);
        EXPECT_NEAR(prob_positive({b, a}), 1.0 - pr, 1e-15);
    }
}

TEST(HalfMoments, AgreeWithQuadrature)
{
    for (auto s : {TwoSidedExpParams{1.0, 0.4}, TwoSidedExpParams{0.3, 1.2}, TwoSidedExpParams{2.0, 0.0}}) {
        for (double p : {-0.7, 0.4, 1.0, 3.3}) {
            auto pos = [&](double x) { return oracle::weighted(x, p, density_xab(s, x)); };
            auto neg = [&](double x) { return oracle::weighted(x, p, density_xab(s, -x)); };
            const double kink = s.a - s.b;  // mode of -X
            auto side = [](auto f, double k) {
                return k > 0 ? oracle::finite(f, 0.0, k) + oracle::half_line(f, k) : oracle::half_line(f, 0.0);
            };
            const double neg_ref = side(neg, kink);
            const double pos_ref = side(pos, -kink);
            EXPECT_NEAR(positive_half_moment(s, p) / pos_ref, 1.0, 1e-9) << s.a << "," << s.b << " p=" << p;
            EXPECT_NEAR(negative_half_moment(s, p) / neg_ref, 1.0, 1e-9) << s.a << "," << s.b << " p=" << p;
        }
    }
}

TEST(MatchTwoSided, Corners)
{
    auto sym = match_two_sided(0.5, 1.0);
    EXPECT_NEAR(sym.a, 1.0, 1e-12);
    EXPECT_NEAR(sym.b, 1.0, 1e-12);
    auto one = match_two_sided(1.0 / std::numbers::e, 2.0 / std::numbers::e);
    EXPECT_NEAR(one.a, 1.0, 1e-12);
    EXPECT_NEAR(one.b, 0.0, 1e-12);
}

TEST(MatchTwoSided, OutOfRange)
{
    EXPECT_THROW(match_two_sided(0.3, 1.0), std::domain_error);
    EXPECT_THROW(match_two_sided(0.6, 1.0), std::domain_error);
    EXPECT_THROW(match_two_sided(0.4, 0.0), std::domain_error);
}

TEST(MatchTwoSided, RoundTrip)
{
    const auto s = match_two_sided(0.45, 1.0);
    const double l1 = line_integral([&](double x) { return std::abs(x) * density_xab(s, x); }, -(s.a - s.b));
    EXPECT_NEAR(prob_positive(s), 0.45, 1e-10);
    EXPECT_NEAR(l1, 1.0, 1e-10);

    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> al(1.0 / std::numbers::e, 0.5), l(0.1, 5.0);
    for (int k = 0; k < 100; ++k) {
        const double alpha = al(rng), l1v = l(rng);
        const auto m = match_two_sided(alpha, l1v);
        EXPECT_NEAR(prob_positive(m), alpha, 1e-10);
        EXPECT_NEAR(abs_mean_xab(m) / l1v, 1.0, 1e-10);
        EXPECT_LE(m.b, m.a);
    }
}

TEST(MatchMoments, MirrorsAboveOneHalf)
{
    const auto m = match_moments(0.55, 1.3);
    EXPECT_GT(m.b, m.a);
    EXPECT_NEAR(prob_positive(m), 0.55, 1e-10);
    EXPECT_NEAR(abs_mean_xab(m), 1.3, 1e-10);
}

TEST(FamilyPointType, Scale)
{
    EXPECT_NEAR(FamilyPoint(0.0).mu(), 2.0 / std::numbers::e, 1e-15);
    EXPECT_NEAR(FamilyPoint(1.0).mu(), 1.0, 1e-15);
    double prev = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double mu = FamilyPoint(i / 1000.0).mu();
        EXPECT_GT(mu, prev);
        prev = mu;
    }
    EXPECT_THROW(FamilyPoint(-0.01), std::domain_error);
    EXPECT_THROW(FamilyPoint(1.01), std::domain_error);
}

TEST(MomentEt, ClosedForms)
{
    for (double t = 0.0; t <= 1.0 + 1e-12; t += 0.05) {
        const double tt = std::min(t, 1.0);
        EXPECT_NEAR(moment_et(2.0, tt), 1 + tt * tt, 1e-10);
        EXPECT_NEAR(moment_et(3.0, tt), 2 * (6 * std::exp(tt - 1) / (1 + tt) + tt * tt * tt - 1), 1e-10);
        EXPECT_NEAR(moment_et(4.0, tt), 9 * std::pow(tt, 4) + 6 * tt * tt + 9, 1e-10);
    }
    for (double p : {-0.9, -0.4, 0.5, 2.2, 5.0})
        EXPECT_NEAR(moment_et(p, 1.0) / lcsharp::gamma(p + 1.0), 1.0, 1e-12);
}

TEST(MomentEt, FirstMomentIsScale)
{
    for (int i = 0; i <= 1000; ++i) {
        const double t = i / 1000.0;
        EXPECT_NEAR(moment_et(1.0, t), family_scale(t), 1e-10) << "t = " << t;
    }
}

TEST(MomentEt, AgreesWithFoldedDensityQuadrature)
{
    for (double p : {-0.9, -0.45, 0.3, 1.7, 3.6, 6.0}) {
        for (double t : {0.0, 0.13, 0.5, 0.87, 1.0}) {
            const double ref = folded_moment(p, t) * std::pow(family_scale(t), p);
            EXPECT_NEAR(moment_et(p, t) / ref, 1.0, 1e-9) << "p = " << p << " t = " << t;
        }
    }
}

TEST(NormEbar, KnownValues)
{
    for (double p : {-0.5, 0.5, 3.0}) EXPECT_NEAR(norm_ebar(p, 1.0), std::pow(lcsharp::gamma(p + 1), 1 / p), 1e-12);
    const double cube = std::pow(norm_ebar(3.0, 0.2), 3.0);
    EXPECT_NEAR(cube, 5.97, 0.01);
    EXPECT_LT(cube, 6.0);
    EXPECT_NEAR(std::pow(norm_ebar(2.0, 0.0), 2.0), std::exp(2.0) / 4.0, 1e-12);
    EXPECT_THROW(norm_ebar(0.0, 0.5), std::domain_error);
}

TEST(NormEbar, LowMomentMonotonicity)
{
    std::vector<double> n2, n3, n4;
    for (int i = 0; i <= 200; ++i) {
        const double t = i / 200.0;
        n2.push_back(norm_ebar(2.0, t));
        n3.push_back(norm_ebar(3.0, t));
        n4.push_back(norm_ebar(4.0, t));
    }
    for (std::size_t i = 1; i < n2.size(); ++i) {
        EXPECT_GT(n2[i], n2[i - 1]);
        EXPECT_LT(n4[i], n4[i - 1]);
    }
    // p = 3: one direction change, from decreasing to increasing.
    int changes = 0;
    for (std::size_t i = 2; i < n3.size(); ++i)
        changes += ((n3[i] - n3[i - 1]) > 0) != ((n3[i - 1] - n3[i - 2]) > 0);
    EXPECT_EQ(changes, 1);
    EXPECT_LT(n3[1], n3[0]);
    EXPECT_GT(n3.back(), n3[n3.size() - 2]);
}

TEST(DensityAbsEbar, PointValues)
{
    for (double x : {0.0, 0.3, 1.0, 4.0}) EXPECT_NEAR(density_abs_ebar(1.0, x), std::exp(-x), 1e-15);
    const double mu0 = 2.0 / std::numbers::e;
    EXPECT_NEAR(density_abs_ebar(0.0, 0.0), 2.0 * mu0 / std::numbers::e, 1e-15);
    // folding of g_{1,t}
    for (double t : {0.2, 0.7})
        for (double x : {0.1, 0.9, 2.5}) {
            const double mu = family_scale(t);
            EXPECT_NEAR(density_abs_ebar(t, x),
                        mu * (density_xab({1.0, t}, mu * x) + density_xab({1.0, t}, -mu * x)), 1e-14);
        }
}

TEST(DensityAbsEbar, JumpAtZeroParameter)
{
    const double jump = 1.0 / family_scale(0.0);
    EXPECT_GT(density_abs_ebar(0.0, jump), density_abs_ebar(0.0, jump + 1e-12) + 0.1);
}

TEST(DensityAbsEbar, UnitMass)
{
    for (double t : {0.0, 0.5, 1.0}) {
        const double k = FamilyPoint(t).breakpoint();
        auto f = [t](double x) { return density_abs_ebar(t, x); };
        const double mass = oracle::finite(f, 0.0, k) + oracle::half_line(f, k);
        EXPECT_NEAR(mass, 1.0, 1e-10) << "t = " << t;
    }
}

TEST(DensityAbsEbar, NegativeMomentLimitGivesDensityAtZero)
{
    // (1+p)/2 E|Y|^p -> f_Y(0) as p -> -1, for Y = E_t / mu_t (f_Y(0) = density_abs_ebar(t, 0) / 2).
    for (double t : {0.0, 0.4, 1.0}) {
        const double target = density_abs_ebar(t, 0.0) / 2.0;
        const double mu = family_scale(t);
        auto lim = [&](double p) { return (1 + p) / 2 * moment_et(p, t) / std::pow(mu, p); };
        const double a = lim(-0.999), b = lim(-0.9999);
        const double extrapolated = b + (b - a) / 9.0;  // error linear in 1 + p
        EXPECT_NEAR(extrapolated, target, 1e-3) << "t = " << t;
    }
}
