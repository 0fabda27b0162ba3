#include <lcsharp/constants.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace lcsharp;

TEST(Cp, KnownValues)
{
    EXPECT_NEAR(c_p(2.0), std::numbers::sqrt2, 1e-12);
    EXPECT_NEAR(c_p(4.0), std::numbers::e / 2 * std::pow(9.0, 0.25), 1e-10);
    EXPECT_NEAR(c_p(4.0), 2.3540, 2e-4);
    EXPECT_NEAR(c_p(1.0), 1.0, 1e-12);
    EXPECT_THROW(c_p(0.5), std::domain_error);
}

TEST(Cp, BranchesMeetAtTransition)
{
    const double p0 = find_p0().p0;
    EXPECT_NEAR(gamma_norm(p0), one_sided_norm(p0), 1e-8);
    EXPECT_LT(std::abs(c_p(p0 - 1e-6) - c_p(p0 + 1e-6)), 1e-4);
    EXPECT_NEAR(c_p(p0 - 0.2), gamma_norm(p0 - 0.2), 1e-15);
    EXPECT_NEAR(c_p(p0 + 0.2), one_sided_norm(p0 + 0.2), 1e-15);
}

TEST(H, Bracketing)
{
    EXPECT_NEAR(h(1.0), 0.0, 1e-12);
    EXPECT_GT(h(2.9414), 1e-5);
    EXPECT_LT(h(2.9415), -1e-5);
}

TEST(H, SingleSignChangeOnTwoToFour)
{
    int changes = 0;
    double prev = h(2.0);
    for (int i = 1; i <= 1000; ++i) {
        const double cur = h(2.0 + 2.0 * i / 1000.0);
        changes += (cur > 0) != (prev > 0);
        prev = cur;
    }
    EXPECT_EQ(changes, 1);
}

TEST(FindP0, RootAndResidual)
{
    const auto r = find_p0();
    EXPECT_GT(r.p0, 2.9414);
    EXPECT_LT(r.p0, 2.9415);
    EXPECT_LT(std::abs(r.residual), 1e-12);
    EXPECT_LT(std::abs(h(r.p0)), 1e-12);
    EXPECT_DOUBLE_EQ(transition_order(), r.p0);
    EXPECT_THROW(find_p0(3.0, 4.0), bracket_error);
}

TEST(Bounds, ClosedForms)
{
    EXPECT_NEAR(lp_l2_lower(1.0), 1.0 / std::numbers::sqrt2, 1e-15);
    EXPECT_NEAR(lp_l1_upper(2.0), std::numbers::sqrt2, 1e-12);
    EXPECT_NEAR(lp_lq_ratio(1.0, 2.0), 1.0 / std::numbers::sqrt2, 1e-15);
    EXPECT_NEAR(lp_l1_lower(0.5), std::numbers::pi / 4, 1e-15);
    EXPECT_THROW(lp_l1_lower(1.5), std::domain_error);
    EXPECT_THROW(lp_l2_lower(0.0), std::domain_error);
    EXPECT_THROW(lp_lq_ratio(0.5, 3.5), std::domain_error);
    EXPECT_THROW(lp_l1_upper(0.9), std::domain_error);
}

TEST(ScanFamily, MinimumAtSymmetricEndForSmallOrders)
{
    for (double p : {-0.9, -0.5, 0.5, 1.0}) {
        const auto s = scan_family_extrema(p, 1000);
        EXPECT_TRUE(s.minimised);
        EXPECT_EQ(s.argopt, 1.0) << p;
        EXPECT_NEAR(s.opt_value, gamma_norm(p), 1e-8) << p;
        for (const auto& pt : s.profile) EXPECT_GE(pt.value, s.opt_value - 1e-12) << p << " t=" << pt.x;
    }
    EXPECT_NEAR(scan_family_extrema(0.5).opt_value, std::numbers::pi / 4, 1e-8);
}

TEST(ScanFamily, MaximumSwitchesEndAtTransition)
{
    const double p0 = find_p0().p0;
    for (double p : {1.5, 2.0, 2.5, p0 - 0.1}) {
        const auto s = scan_family_extrema(p, 1000);
        EXPECT_FALSE(s.minimised);
        EXPECT_EQ(s.argopt, 1.0) << p;
        EXPECT_NEAR(s.opt_value, c_p(p), 1e-8) << p;
    }
    for (double p : {p0 + 0.1, 3.5, 4.0, 6.0}) {
        const auto s = scan_family_extrema(p, 1000);
        EXPECT_EQ(s.argopt, 0.0) << p;
        EXPECT_NEAR(s.opt_value, c_p(p), 1e-8) << p;
    }
    const auto four = scan_family_extrema(4.0, 1000);
    EXPECT_NEAR(four.opt_value, std::numbers::e / 2 * std::pow(9.0, 0.25), 1e-10);
    EXPECT_EQ(four.profile.size(), 1000u);
}

TEST(ScanFamily, DomainErrors)
{
    EXPECT_THROW(scan_family_extrema(0.0), std::domain_error);
    EXPECT_THROW(scan_family_extrema(2.0, 50), std::domain_error);
}

TEST(LargeT, NormsBelowSymmetricValue)
{
    for (double p : {1.0, 2.0, 3.0})
        for (double t = 0.2; t <= 1.0; t += 0.01) EXPECT_LE(norm_ebar(p, t), norm_ebar(p, 1.0) + 1e-10) << p << " " << t;
}

TEST(SmallT, NormsAtTransitionBelowGammaNorm)
{
    const double p0 = find_p0().p0;
    for (double t = 0.0; t <= 0.2 + 1e-12; t += 0.002) EXPECT_LE(norm_ebar(p0, t), gamma_norm(p0) + 1e-10) << t;
}

TEST(SmallT, ConstantAtTransition)
{
    const double p0 = find_p0().p0;
    const double a = std::pow(2.0, p0) * std::exp(-p0) * lcsharp::gamma(p0 + 1) * (p0 - 1);
    EXPECT_NEAR(a, 4.39, 0.01);
}

TEST(L2Ratio, SymmetryAndEndpoints)
{
    for (double p : {1.5, 3.0})
        for (double s : {0.1, 0.3, 0.45}) EXPECT_NEAR(l2_ratio(p, s), l2_ratio(p, 1 - s), 1e-14);
    EXPECT_NEAR(l2_ratio(3.0, 0.5), std::pow(6.0, 1.0 / 3) / std::numbers::sqrt2, 1e-12);
    EXPECT_NEAR(l2_ratio(3.0, 1.0), std::pow(moment_et(3.0, 0.0), 1.0 / 3), 1e-12);
}

TEST(ScanL2, ExtremiserOnEitherSide)
{
    const auto low = scan_l2_ratio(1.5);
    EXPECT_TRUE(low.minimised);
    EXPECT_EQ(low.argopt, 0.5);
    EXPECT_EQ(classify_l2_extremiser(low.argopt), L2Extremiser::symmetric);
    const auto high = scan_l2_ratio(3.0);
    EXPECT_FALSE(high.minimised);
    EXPECT_TRUE(high.argopt == 0.0 || high.argopt == 1.0);
    EXPECT_EQ(classify_l2_extremiser(high.argopt), L2Extremiser::one_sided);
    EXPECT_EQ(high.profile.size(), 2001u);
    EXPECT_EQ(high.profile.front().x, 0.0);
    EXPECT_EQ(high.profile.back().x, 1.0);
    EXPECT_THROW(scan_l2_ratio(2.0), std::domain_error);
    EXPECT_THROW(scan_l2_ratio(0.5), std::domain_error);
}

TEST(ScanL2, TransitionNearOnePointSixEight)
{
    const auto tr = locate_l2_transition();
    EXPECT_NEAR(tr.p_star, 1.68, 0.02);
    EXPECT_LT(tr.bracket_hi - tr.bracket_lo, 1e-3);
    EXPECT_EQ(classify_l2_extremiser(scan_l2_ratio(tr.bracket_lo).argopt), L2Extremiser::symmetric);
    EXPECT_EQ(classify_l2_extremiser(scan_l2_ratio(tr.bracket_hi).argopt), L2Extremiser::one_sided);
}

TEST(ScanL2, TransitionMatchesNormEquation)
{
    // Both endpoints tie where Gamma(p+1)^{1/p} / sqrt(2) = ||E - 1||_p.
    const auto tr = locate_l2_transition(1.05, 1.95, 1e-6);
    EXPECT_NEAR(gamma_norm(tr.p_star) / std::numbers::sqrt2, std::pow(moment_et(tr.p_star, 0.0), 1 / tr.p_star),
                1e-5);
}

TEST(Scan, ParallelEvaluationIsDeterministic)
{
    const auto a = scan_family_extrema(3.3, 400);
    const auto b = scan_family_extrema(3.3, 400);
    ASSERT_EQ(a.profile.size(), b.profile.size());
    for (std::size_t i = 0; i < a.profile.size(); ++i) EXPECT_EQ(a.profile[i].value, b.profile[i].value);
    EXPECT_EQ(a.argopt, b.argopt);
}
