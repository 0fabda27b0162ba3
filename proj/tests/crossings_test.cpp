#include <lcsharp/crossings.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace lcsharp;

namespace {

const std::vector<int> alternating = {1, -1, 1, -1};

int sign(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

} // namespace

TEST(DetectSignChanges, Linear)
{
    const auto r = detect_sign_changes([](double x) { return x - 1.0; }, 0.0, 5.0, 1000, 1e-12);
    ASSERT_EQ(r.crossings.size(), 1u);
    EXPECT_NEAR(r.crossings[0], 1.0, 1e-10);
    EXPECT_EQ(r.pattern, (std::vector<int>{-1, 1}));
    EXPECT_EQ(r.pattern_string(), "(-,+)");
    EXPECT_TRUE(r.certified);
    EXPECT_NEAR(r.resolution, 0.005, 1e-15);
}

TEST(DetectSignChanges, Sine)
{
    const auto r = detect_sign_changes([](double x) { return std::sin(x); }, 0.0, 10.0, 1000, 1e-12);
    ASSERT_EQ(r.crossings.size(), 3u);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(r.crossings[k], (k + 1) * std::numbers::pi, 1e-9);
    EXPECT_EQ(r.pattern, (std::vector<int>{1, -1, 1, -1}));
}

TEST(DetectSignChanges, JumpAtBreakpoint)
{
    auto step = [](double x) { return x <= 2.0 ? 1.0 : -1.0; };
    const auto r = detect_sign_changes(step, 0.0, 5.0, 1000, 1e-12, {2.0});
    ASSERT_EQ(r.crossings.size(), 1u);
    EXPECT_EQ(r.crossings[0], 2.0);
}

TEST(DetectSignChanges, WeakChangeThroughShortZeroBand)
{
    auto f = [](double x) { return x < 1.0 ? x - 1.0 : (x < 1.02 ? 0.0 : x - 1.02); };
    const auto r = detect_sign_changes(f, 0.0, 5.0, 1000, 1e-12);
    EXPECT_EQ(r.crossings.size(), 1u);
    EXPECT_TRUE(r.unresolved.empty());
}

TEST(DetectSignChanges, WideZeroBandIsUnresolved)
{
    auto f = [](double x) { return x < 1.0 ? -1.0 : (x < 3.0 ? 0.0 : 1.0); };
    const auto r = detect_sign_changes(f, 0.0, 5.0, 1000, 1e-12);
    EXPECT_EQ(r.unresolved.size(), 1u);
    EXPECT_FALSE(r.certified);
    EXPECT_FALSE(r.matches({-1, 1}));
}

TEST(DetectSignChanges, Preconditions)
{
    auto f = [](double x) { return x; };
    EXPECT_THROW(detect_sign_changes(f, 0.0, 1.0, 999, 0.0), std::domain_error);
    EXPECT_THROW(detect_sign_changes(f, 1.0, 1.0, 1000, 0.0), std::domain_error);
}

TEST(DetectSignChanges, FamilyDensityGap)
{
    const auto r = detect_sign_changes([](double x) { return density_abs_ebar(1.0, x) - density_abs_ebar(0.5, x); },
                                       0.0, crossing_window(), 4000, 1e-12, {FamilyPoint(0.5).breakpoint()});
    EXPECT_EQ(r.crossings.size(), 3u);
    EXPECT_EQ(r.pattern, alternating);
}

// One weak sign change (-, +) and zero integral force a positive first moment.
TEST(ToyCrossing, PositiveFirstMoment)
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> scale(0.3, 3.0);
    std::uniform_int_distribution<int> family(0, 2);
    auto base = [](int k, double x) {
        switch (k) {
        case 0: return std::exp(-x);
        case 1: return std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 * x * x);
        default: return x * std::exp(-x);
        }
    };
    for (int trial = 0; trial < 20; ++trial) {
        const int k = family(rng);
        double s1 = scale(rng), s2 = scale(rng);
        if (s1 > s2) std::swap(s1, s2);
        if (s2 - s1 < 0.05) s2 = s1 + 0.05;
        auto h = [&](double x) { return base(k, x / s2) / s2 - base(k, x / s1) / s1; };
        const double hi = 60.0 * s2;
        const auto r = detect_sign_changes(h, 0.0, hi, 4000, 1e-14);
        ASSERT_EQ(r.crossings.size(), 1u) << "trial " << trial;
        EXPECT_EQ(r.pattern.front(), -1);
        EXPECT_NEAR(oracle::half_line(h, 0.0), 0.0, 1e-10);
        EXPECT_GT(oracle::half_line([&](double x) { return x * h(x); }, 0.0), 0.0) << "trial " << trial;
    }
}

TEST(Vandermonde, InterpolatesAtNodes)
{
    const auto g = vandermonde_coeffs(-0.5, 3.0, 1.0, 2.0, 3.0);
    for (double x : {1.0, 2.0, 3.0}) EXPECT_NEAR(g(x), 0.0, 1e-10);
}

TEST(Vandermonde, NamedPatterns)
{
    for (auto [p, expected] : {std::pair{-0.5, alternating}, {0.5, std::vector<int>{-1, 1, -1, 1}}}) {
        const auto g = vandermonde_coeffs(p, 3.0, 1.0, 2.0, 3.0);
        const auto r = detect_sign_changes(g, 0.0, 10.0, 2000, 1e-13);
        EXPECT_EQ(r.pattern, expected) << "p = " << p;
        EXPECT_EQ(g.predicted_pattern(), expected);
        ASSERT_EQ(r.crossings.size(), 3u);
        for (int j = 0; j < 3; ++j) EXPECT_NEAR(r.crossings[j], j + 1.0, 1e-9);
    }
}

TEST(Vandermonde, Preconditions)
{
    EXPECT_THROW(vandermonde_coeffs(0.5, 3.0, 2.0, 1.0, 3.0), std::domain_error);
    EXPECT_THROW(vandermonde_coeffs(0.5, 1.5, 1.0, 2.0, 3.0), std::domain_error);
    EXPECT_THROW(vandermonde_coeffs(1.0, 3.0, 1.0, 2.0, 3.0), std::domain_error);
    EXPECT_THROW(vandermonde_coeffs(3.0, 3.0, 1.0, 2.0, 3.0), std::domain_error);
    EXPECT_THROW(vandermonde_coeffs(0.0, 3.0, 1.0, 2.0, 3.0), std::domain_error);
}

TEST(Vandermonde, SignPatternOnRandomCases)
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int done = 0;
    while (done < 50) {
        const double q = 2.1 + 3.0 * u(rng);
        const double p = -0.9 + 7.0 * u(rng);
        if (std::abs(p) < 0.1 || std::abs(p - 1) < 0.1 || std::abs(p - q) < 0.1) continue;
        const double x1 = 0.2 + u(rng), x2 = x1 + 0.3 + u(rng), x3 = x2 + 0.3 + u(rng);
        const auto g = vandermonde_coeffs(p, q, x1, x2, x3);
        const auto pattern = g.predicted_pattern();
        const std::array<double, 4> edges = {0.0, x1, x2, x3};
        for (int i = 1; i <= 1000; ++i) {
            const double x = 1.5 * x3 * i / 1000.0;
            int region = 0;
            while (region < 3 && x > edges[region + 1]) ++region;
            double gap = 1e9;
            for (double n : {x1, x2, x3}) gap = std::min(gap, std::abs(x - n));
            if (gap < 1e-2) continue;
            const double v = g(x);
            if (std::abs(v) < 1e-12) continue;
            EXPECT_EQ(sign(v), pattern[region]) << "p=" << p << " q=" << q << " x=" << x;
        }
        ++done;
    }
}

TEST(ThreeCrossings, NamedParameters)
{
    for (double t : {0.1, 0.5, 0.9}) {
        const auto r = verify_3crossings(t);
        EXPECT_EQ(r.upper.crossings.size(), 3u);
        EXPECT_EQ(r.lower.crossings.size(), 3u);
        EXPECT_EQ(r.upper.pattern, alternating);
        EXPECT_EQ(r.lower.pattern, alternating);
        EXPECT_TRUE(r.upper.certified && r.lower.certified);
    }
}

TEST(ThreeCrossings, NinetyNinePointGrid)
{
    for (int i = 1; i <= 99; ++i) {
        const double t = i / 100.0;
        ThreeCrossings r;
        ASSERT_NO_THROW(r = verify_3crossings(t)) << "t = " << t;
        EXPECT_EQ(r.upper.crossings.size(), 3u) << t;
        EXPECT_EQ(r.lower.crossings.size(), 3u) << t;
    }
}

TEST(ThreeCrossings, JumpCrossingNearZeroParameter)
{
    const auto r = verify_3crossings(0.01);
    EXPECT_EQ(r.lower.crossings[1], 1.0 / family_scale(0.0));
}

TEST(ThreeCrossings, RejectsEndpoints)
{
    EXPECT_THROW(verify_3crossings(0.0), std::domain_error);
    EXPECT_THROW(verify_3crossings(1.0), std::domain_error);
}

TEST(ThreeCrossings, ErrorCarriesReport)
{
    try {
        throw crossing_pattern_error("x", detect_sign_changes([](double x) { return x - 1; }, 0, 2, 1000, 0));
    } catch (const crossing_pattern_error& e) {
        EXPECT_EQ(e.report().crossings.size(), 1u);
    }
}

TEST(MatchingOrder, MidpointParameter)
{
    const auto m = matching_order(0.5);
    EXPECT_GT(m.q, 2.0);
    EXPECT_LT(m.q, 4.0);
    EXPECT_LT(std::abs(m.residual), 1e-10);
}

TEST(MatchingOrder, GapSignsAtBracketEnds)
{
    for (int i = 1; i <= 99; i += 7) {
        const double t = i / 100.0;
        EXPECT_GT(normalized_moment(2.0, 1.0) - normalized_moment(2.0, t), 0.0) << t;
        EXPECT_LT(normalized_moment(4.0, 1.0) - normalized_moment(4.0, t), 0.0) << t;
    }
}

TEST(MatchingOrder, AgreesWithDenseGridLocator)
{
    const double t = 0.3;
    const auto m = matching_order(t);
    double prev_q = 2.0, prev = normalized_moment(2.0, 1.0) - normalized_moment(2.0, t);
    double located = -1;
    for (int i = 1; i <= 2000; ++i) {
        const double q = 2.0 + 2.0 * i / 2000.0;
        const double cur = normalized_moment(q, 1.0) - normalized_moment(q, t);
        if ((cur > 0) != (prev > 0)) {
            located = prev_q - prev * (q - prev_q) / (cur - prev);
            break;
        }
        prev_q = q;
        prev = cur;
    }
    EXPECT_NEAR(m.q, located, 1e-5);
}

TEST(MatchingOrder, BracketFailure)
{
    EXPECT_THROW(matching_order(0.5, 2.0, 2.1), bracket_error);
}

TEST(Decomposition, NamedRegimes)
{
    for (double t : {0.1, 0.5, 0.9}) {
        const auto neg = nonneg_decomposition_check(t, -0.5);
        EXPECT_TRUE(neg.holds) << t << " min " << neg.min_product << " at " << neg.argmin;
        const auto mid = nonneg_decomposition_check(t, 2.0);
        EXPECT_TRUE(mid.holds) << t << " min " << mid.min_product << " at " << mid.argmin;
        EXPECT_GE(mid.q, transition_order());
        const auto high = nonneg_decomposition_check(t, 3.5);
        EXPECT_TRUE(high.holds) << t << " min " << high.min_product << " at " << high.argmin;
        EXPECT_EQ(high.reference, FamilyReference::one_sided);
        EXPECT_LE(high.q, transition_order());
    }
}

TEST(Decomposition, OtherOrders)
{
    for (double p : {-0.9, 0.3, 0.7, 1.0, 1.5, 2.9, 4.0, 6.0})
        for (double t : {0.2, 0.6}) EXPECT_TRUE(nonneg_decomposition_check(t, p).holds) << "p=" << p << " t=" << t;
}
