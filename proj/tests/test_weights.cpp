#include <cmath>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include "innerfn/weights.hpp"

using namespace innerfn;

namespace {

// Independent oracle: tanh-sinh on [r, 1).
double oracle_tail(const std::function<double(double)>& omega, double r)
{
    boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate(omega, r, 1.0, 1e-14);
}

}  // namespace

TEST(Tail, PowerClosedForms)
{
    EXPECT_NEAR(tail_integral(RadialWeight::power(0.0), 0.5), 0.5, 1e-15);
    EXPECT_NEAR(tail_integral(RadialWeight::power(1.0), 0.5), 0.125, 1e-15);
}

TEST(Tail, ClosedFormsMatchQuadrature)
{
    for (double alpha : {-0.5, 0.0, 0.25, 1.0, 2.0}) {
        const auto w = RadialWeight::power(alpha);
        for (int m = 0; m <= 16; m += 2) {
            const double r = dyadic_radius(m);
            const double closed = tail_integral(w, r);
            const double numeric = numeric_tail_integral(w, r);
            EXPECT_LE(std::abs(closed - numeric), 1e-9 * (1.0 + closed)) << w.name() << " r=" << r;
        }
    }
    // the 1/log tail is too slow for the open-ended quadrature; compare
    // increments over finite ranges instead
    const auto ils = custom_weight("inverse_log_square");
    for (int m = 0; m <= 16; m += 4) {
        const double closed = tail_integral(ils, dyadic_radius(m)) - tail_integral(ils, dyadic_radius(m + 4));
        const double numeric = std::exp(
            detail::log_integral_dyadic([&ils](double h) { return ils.log_density(h); }, m, m + 4, ils.name()));
        EXPECT_LE(std::abs(closed - numeric), 1e-9 * closed) << m;
    }
}

TEST(Tail, PowerLogAgainstTanhSinh)
{
    const auto w = RadialWeight::power_log(1.0, 1.0);
    const double got = tail_integral(w, 0.9);
    const double want = oracle_tail([](double s) { return (1 - s) * std::log(std::exp(1.0) / (1 - s)); }, 0.9);
    EXPECT_NEAR(got, want, 1e-12);
}

TEST(Tail, ExponentialAgainstTanhSinh)
{
    const auto w = RadialWeight::exponential();
    for (double r : {0.0, 0.5, 0.9}) {
        const double want = oracle_tail([](double s) { return s < 1 ? std::exp(-1.0 / (1 - s)) : 0.0; }, r);
        EXPECT_NEAR(tail_integral(w, r) / want, 1.0, 1e-9) << r;
    }
}

TEST(Tail, ExponentialClosedFormMatchesQuadrature)
{
    const auto w = RadialWeight::exponential();
    for (int m = 1; m <= 12; ++m) {
        const double h = dyadic_gap(m);
        const double numeric = detail::log_tail_dyadic([&w](double g) { return w.log_density(g); }, h, w.name());
        EXPECT_NEAR(log_tail_at_gap(w, h), numeric, 1e-7) << m;
    }
    // the large-x series takes over at x = 1e4; no visible seam
    const double below = log_tail_at_gap(w, 1.0 / (1e4 * (1.0 - 1e-12)));
    const double above = log_tail_at_gap(w, 1.0 / (1e4 * (1.0 + 1e-12)));
    EXPECT_NEAR(below - above, 2e-8, 1e-9);
}

TEST(Tail, Monotone)
{
    for (const auto& w : {RadialWeight::power(-0.5), RadialWeight::power_log(0.5, 2.0), RadialWeight::exponential()}) {
        double prev = inf;
        for (int k = 0; k <= 40; ++k) {
            const double v = tail_integral(w, 1.0 - std::exp2(-0.5 * k));
            EXPECT_LE(v, prev) << w.name();
            prev = v;
        }
    }
}

TEST(Tail, NonIntegrableWeightNamed)
{
    RadialWeight bad("too_singular", WeightFamily::custom, {}, [](double h) { return -1.5 * std::log(h); });
    try {
        (void)tail_integral(bad, 0.5);
        FAIL() << "expected an error";
    } catch (const ConvergenceError& e) {
        EXPECT_NE(std::string(e.what()).find("too_singular"), std::string::npos);
    }
}

TEST(Classify, PowerWeightsAreTwoSidedDoubling)
{
    for (double alpha : {-0.5, 0.0, 1.0, 2.0}) {
        const auto rep = classify_weight(RadialWeight::power(alpha), {}, 16);
        EXPECT_TRUE(rep.in_Dhat()) << alpha;
        EXPECT_TRUE(rep.in_Dcheck()) << alpha;
        EXPECT_NEAR(rep.alpha_hat, alpha + 1.0, 0.05);
        EXPECT_NEAR(rep.beta_hat, alpha + 1.0, 0.05);
        EXPECT_NEAR(rep.fitted_exponent, alpha + 1.0, 0.05);
        EXPECT_GE(rep.beta_hat, rep.alpha_hat);
        EXPECT_GT(rep.alpha_hat, 0.0);
    }
}

TEST(Classify, LogBergmanAccepted)
{
    const auto rep = classify_weight(custom_weight("log_bergman"), {}, 16);
    EXPECT_TRUE(rep.in_R());
}

TEST(Classify, ExponentialRejectedFromDhat)
{
    const auto rep = classify_weight(RadialWeight::exponential(), {}, 16);
    EXPECT_EQ(rep.dhat.status, Membership::non_member);
    EXPECT_FALSE(rep.in_Dhat());
}

TEST(Classify, InverseLogSquareOnlyUpperDoubling)
{
    const auto rep = classify_weight(custom_weight("inverse_log_square"), {}, 24);
    EXPECT_TRUE(rep.in_Dhat());
    EXPECT_NE(rep.dcheck.status, Membership::member);
}

TEST(Classify, PClasses)
{
    // int_0^r (1-s)^{-2} ds and int_r^1 (1-s)^{-1/2} ds are elementary, so
    // both suprema are finite constants for omega = 1.
    const auto rep = classify_weight(RadialWeight::power(0.0), {2.0, 0.5}, 16);
    ASSERT_EQ(rep.p_classes.size(), 2u);
    EXPECT_EQ(rep.p_classes[0].dhat_p.status, Membership::member);
    // (1-r)^2/(1-r) * (1/(1-r) - 1) -> 1
    EXPECT_NEAR(rep.p_classes[0].dhat_p.constant, 1.0, 1e-3);
    EXPECT_EQ(rep.p_classes[1].dcheck_p.status, Membership::member);
    // (1-r)^{1/2}/(1-r) * 2 (1-r)^{1/2} = 2
    EXPECT_NEAR(rep.p_classes[1].dcheck_p.constant, 2.0, 1e-6);
}

TEST(Classify, ExponentsImplyPClasses)
{
    for (double alpha : {0.0, 0.5, 1.5}) {
        const double p = alpha + 1.5;  // beta_hat = alpha + 1 < p
        const auto rep = classify_weight(RadialWeight::power(alpha), {p}, 16);
        ASSERT_TRUE(rep.in_Dhat());
        EXPECT_EQ(rep.p_classes[0].dhat_p.status, Membership::member) << alpha;
        const double p2 = alpha + 0.5;  // alpha_hat = alpha + 1 > p2
        const auto rep2 = classify_weight(RadialWeight::power(alpha), {p2}, 16);
        EXPECT_EQ(rep2.p_classes[0].dcheck_p.status, Membership::member) << alpha;
    }
}

TEST(Classify, TooShallowGridRejected) { EXPECT_THROW(classify_weight(RadialWeight::power(0), {}, 7), DomainError); }

TEST(Shift, PowerBecomesShiftedPower)
{
    const auto s = shift_weight(RadialWeight::power(0.0), 1.0);
    for (double r : {0.0, 0.3, 0.9, 0.999}) EXPECT_DOUBLE_EQ(s(r), RadialWeight::power(1.0)(r));
    const auto same = shift_weight(RadialWeight::power(0.5), 0.0);
    for (double r : {0.0, 0.3, 0.9}) EXPECT_EQ(same(r), RadialWeight::power(0.5)(r));
}

TEST(Shift, TailRatioWindow)
{
    const auto base = RadialWeight::power(0.0);
    const auto s = shift_weight(base, 0.5);
    double lo = inf, hi = 0;
    for (int k = 0; k <= 64; ++k) {
        const double h = std::exp2(-k / 4.0);
        const double ratio = tail_at_gap(s.weight, h) / (tail_at_gap(base, h) * std::pow(h, 0.5));
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    EXPECT_LE(hi / lo, 4.0);
}

TEST(Shift, ExponentsMoveByX)
{
    for (double alpha : {0.0, 1.0}) {
        for (double x : {0.5, 1.0}) {
            const auto base = classify_weight(RadialWeight::power(alpha), {}, 16);
            const auto sh = classify_weight(shift_weight(RadialWeight::power(alpha), x).weight, {}, 16);
            EXPECT_NEAR(sh.alpha_hat, base.alpha_hat + x, 0.1);
            EXPECT_NEAR(sh.beta_hat, base.beta_hat + x, 0.1);
        }
    }
}

TEST(Shift, CustomFamilyUsesDensity)
{
    const auto s = shift_weight(RadialWeight::exponential(), 2.0);
    EXPECT_NEAR(s(0.5), std::exp(-2.0) * 0.25, 1e-15);
    EXPECT_THROW(shift_weight(RadialWeight::power(0.0), -1.5), DomainError);
}
