#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "innerfn/verify.hpp"

using namespace innerfn;

namespace {

std::vector<double> series(int n, const std::function<double(int)>& f)
{
    std::vector<double> v;
    for (int k = 0; k < n; ++k) v.push_back(f(k));
    return v;
}

const cplx e_inv = std::exp(-1.0);

SuiteOptions quick()
{
    SuiteOptions o;
    o.norm_depth = 14;
    o.sum_depth = 24;
    o.disc_nodes = 48;
    return o;
}

}  // namespace

TEST(Classifier, Geometric)
{
    for (double beta : {0.3, 0.5, 1.0, 3.0}) {
        const auto v = classify(series(16, [beta](int k) { return std::exp2(-beta * k); }));
        EXPECT_EQ(v.verdict, Verdict::convergent) << beta;
        EXPECT_NEAR(v.fitted_slope, -beta, 1e-12);
        EXPECT_EQ(v.depth_lo, 10);
        EXPECT_EQ(v.depth_hi, 15);
    }
}

TEST(Classifier, FlatAndGrowing)
{
    const auto flat = classify(std::vector<double>(12, 1.0));
    EXPECT_EQ(flat.verdict, Verdict::divergent);
    EXPECT_NEAR(flat.fitted_slope, 0.0, 1e-15);
    for (double beta : {0.05, 0.5, 2.0}) {
        EXPECT_EQ(classify(series(12, [beta](int k) { return std::exp2(beta * k); })).verdict, Verdict::divergent);
    }
}

TEST(Classifier, HarmonicIsNotConvergent)
{
    // eight blocks of k^{-1} fit a slope near -0.25; every suite uses twelve or more
    for (int n : {12, 16, 20, 40}) {
        const auto v = classify(series(n, [](int k) { return 1.0 / (k + 1.0); }));
        EXPECT_NE(v.verdict, Verdict::convergent) << n;
    }
}

TEST(Classifier, TerminatingIsConvergent)
{
    const auto v = classify(std::vector<double>{1.0, 0.5, 0.2, 0.1, 0.0, 0.0, 0.0});
    EXPECT_EQ(v.verdict, Verdict::convergent);
    EXPECT_TRUE(std::isinf(v.fitted_slope));
}

TEST(Classifier, ShortOrSparseIsInconclusive)
{
    EXPECT_EQ(classify(std::vector<double>{1, 0.5, 0.25, 0.1, 0.05}).verdict, Verdict::inconclusive);
    EXPECT_EQ(classify(std::vector<double>{1, 1, 1, 0, 1, 0, 0, 1}).verdict, Verdict::inconclusive);
    EXPECT_THROW(classify(std::vector<double>{1, 1, 1, 1, 1, -1}), DomainError);
}

TEST(Classifier, NoisyGeometricStillConvergent)
{
    std::mt19937_64 eng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const double beta = 0.3 + 2.0 * uniform01(eng);
        const auto v = classify(series(14, [&](int k) { return std::exp2(-beta * k) * (0.9 + 0.2 * uniform01(eng)); }));
        EXPECT_EQ(v.verdict, Verdict::convergent) << beta;
    }
}

TEST(Classifier, SyntheticSuiteAccuracy)
{
    // growth, flat and decay with |rate| >= 0.3 must be classified without error
    int wrong = 0, total = 0;
    for (double rate = -2.0; rate <= 2.0; rate += 0.1) {
        if (std::abs(rate) < 0.3 - 1e-12 && std::abs(rate) > 1e-12) continue;
        const auto v = classify(series(12, [rate](int k) { return std::exp2(rate * k); }));
        const Verdict want = rate < 0 ? Verdict::convergent : Verdict::divergent;
        wrong += v.verdict != want;
        ++total;
    }
    EXPECT_EQ(wrong, 0) << "of " << total;
}

TEST(Classifier, Disagree)
{
    ConvergenceVerdict c, d, i;
    c.verdict = Verdict::convergent;
    d.verdict = Verdict::divergent;
    EXPECT_TRUE(disagree(c, d));
    EXPECT_FALSE(disagree(c, c));
    EXPECT_FALSE(disagree(i, d));
    EXPECT_TRUE(all_agree({&c, &i, &c}));
    EXPECT_FALSE(all_agree({&c, &i, &d}));
}

TEST(Ratio, Invariants)
{
    std::mt19937_64 eng(4);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<RatioRow> rows;
        for (int m = 8; m <= 14; ++m) rows.push_back({m, 0.01 + uniform01(eng), 0.01 + uniform01(eng), 0.0});
        const auto rep = ratio_report(rows, 0.5, 2.0);
        EXPECT_LE(rep.ratio_min, rep.ratio_max);
        const bool inside = rep.ratio_min >= 0.5 && rep.ratio_max <= 2.0;
        EXPECT_EQ(rep.window_ok, inside);
        for (const auto& r : rep.pairs) EXPECT_DOUBLE_EQ(r.ratio, r.left / r.right);
    }
    EXPECT_FALSE(ratio_report({}).window_ok);
}

TEST(Stamps, TheoremOneCombinations)
{
    const auto w0 = RadialWeight::power(0.0);
    const auto w25 = RadialWeight::power(0.25);
    // beta_hat = alpha_hat = 1 for omega = 1 and 1.25 for (1-r)^0.25
    EXPECT_EQ(hypotheses_theorem1(w25, 2, 2).status, Stamp::satisfied);
    EXPECT_NE(hypotheses_theorem1(w0, 2, 2).status, Stamp::satisfied);
    EXPECT_NE(hypotheses_theorem1(w0, 1, 1).status, Stamp::satisfied);
    EXPECT_EQ(hypotheses_theorem1(w25, 2, 1).status, Stamp::violated);
    EXPECT_EQ(hypotheses_theorem1(w0, 1, 2).status, Stamp::violated);  // q > p
    EXPECT_EQ(hypotheses_theorem1b(w0, 0.4, 1).status, Stamp::violated);
}

TEST(Stamps, TheoremThree)
{
    EXPECT_EQ(hypotheses_theorem3(RadialWeight::power(0.0), 0.75).status, Stamp::violated);
    EXPECT_EQ(hypotheses_theorem3(RadialWeight::power(-0.75), 0.75).status, Stamp::satisfied);
    EXPECT_NE(hypotheses_theorem3(RadialWeight::power(-0.5), 0.75).status, Stamp::satisfied);
    EXPECT_EQ(hypotheses_theorem3(RadialWeight::power(0.5), 2.0).status, Stamp::satisfied);
    EXPECT_EQ(hypotheses_theorem3(RadialWeight::exponential(), 2.0).status, Stamp::violated);
}

TEST(ThresholdSharpness, ZeroPowerSums)
{
    // sum (1 - |z_n|)^alpha over the zeros of S_a converges iff alpha > 1/2
    for (const cplx a : {e_inv, cplx(0.3, 0.2)}) {
        const int max_n = 30;
        const auto gaps = shift_gaps(InnerFunction::atomic(), a, max_n);
        for (double alpha = 0.05; alpha <= 1.5; alpha += 0.05) {
            const auto v = classify(zero_power_sum(gaps, alpha, max_n));
            const double dist = std::abs(alpha - 0.5);
            const Verdict want = alpha > 0.5 ? Verdict::convergent : Verdict::divergent;
            if (dist >= 0.25 - 1e-12) {
                EXPECT_EQ(v.verdict, want) << alpha;
            } else if (v.verdict != Verdict::inconclusive) {
                EXPECT_EQ(v.verdict, want) << alpha;
            }
        }
    }
}

TEST(Suites, TheoremOneAtomic)
{
    const auto S = InnerFunction::atomic();
    const auto c = verify_theorem1(S, {1.0, 1.0, RadialWeight::power(0.0)}, e_inv, quick());
    EXPECT_EQ(c.verdict_norm.verdict, Verdict::convergent);
    EXPECT_EQ(c.verdict_sum.verdict, Verdict::convergent);
    EXPECT_TRUE(c.agree);
    const auto d = verify_theorem1(S, {2.0, 2.0, RadialWeight::power(0.0)}, e_inv, quick());
    EXPECT_EQ(d.verdict_norm.verdict, Verdict::divergent);
    EXPECT_EQ(d.verdict_sum.verdict, Verdict::divergent);
    EXPECT_TRUE(d.agree);
}

TEST(Suites, TheoremOneFiniteBlaschke)
{
    const auto B = InnerFunction::finite_blaschke({0.5, cplx(0, 0.9)});
    const auto r = verify_theorem1(B, {2.0, 2.0, RadialWeight::power(0.25)}, cplx(0.2, 0.1), quick());
    EXPECT_EQ(r.verdict_norm.verdict, Verdict::convergent);
    EXPECT_EQ(r.verdict_sum.verdict, Verdict::convergent);
}

TEST(Suites, TheoremOneBFiniteBlaschkeStable)
{
    auto o = quick();
    o.disc_nodes = 16;
    const auto B = InnerFunction::finite_blaschke({0.5});
    const auto r = verify_theorem1b(B, {1.0, 1.0, RadialWeight::power(0.0)}, 0.5, 8, 12, o);
    EXPECT_TRUE(r.ratios.window_ok);
    EXPECT_LE(r.ratios.spread(), 1.01);
    EXPECT_EQ(r.verdict_sum.verdict, Verdict::convergent);
}

TEST(Suites, TheoremThree)
{
    const auto S = InnerFunction::atomic();
    const auto w = RadialWeight::power(0.0);
    const auto c = verify_theorem3(S, 0.75, w, e_inv, 0.5, quick());
    EXPECT_EQ(c.norm.verdict, Verdict::convergent);
    EXPECT_EQ(c.zero_sum.verdict, Verdict::convergent);
    EXPECT_EQ(c.level_set.verdict, Verdict::convergent);
    EXPECT_TRUE(c.agree);
    const auto d = verify_theorem3(S, 2.0, w, e_inv, 0.5, quick());
    EXPECT_EQ(d.norm.verdict, Verdict::divergent);
    EXPECT_EQ(d.zero_sum.verdict, Verdict::divergent);
    EXPECT_EQ(d.level_set.verdict, Verdict::divergent);
    const auto b = verify_theorem3(InnerFunction::finite_blaschke({0.5}), 2.0, w, 0.1, 0.5, quick());
    EXPECT_EQ(b.norm.verdict, Verdict::convergent);
    EXPECT_EQ(b.zero_sum.verdict, Verdict::convergent);
    EXPECT_EQ(b.level_set.verdict, Verdict::convergent);
}

TEST(Suites, CorollaryHp)
{
    const auto s = verify_corollary_hp(InnerFunction::atomic(), 0.75, e_inv, {0.0, 1.0}, quick());
    EXPECT_EQ(s.hypotheses.status, Stamp::satisfied);
    EXPECT_EQ(s.hardy.verdict, Verdict::divergent);
    for (const auto& v : s.bergman) EXPECT_EQ(v.verdict, Verdict::divergent);
    EXPECT_EQ(s.zero_sum.verdict, Verdict::divergent);
    EXPECT_EQ(s.level_set.verdict, Verdict::divergent);
    EXPECT_TRUE(s.agree);

    const auto b = verify_corollary_hp(InnerFunction::finite_blaschke({0.3, -0.6}), 0.75, 0.2, {0.0, 1.0}, quick());
    EXPECT_EQ(b.hardy.verdict, Verdict::convergent);
    for (const auto& v : b.bergman) EXPECT_EQ(v.verdict, Verdict::convergent);
    EXPECT_EQ(b.zero_sum.verdict, Verdict::convergent);
    EXPECT_EQ(b.level_set.verdict, Verdict::convergent);
}

TEST(Suites, BesovFiniteBlaschkeAndRange)
{
    auto o = quick();
    o.disc_nodes = 16;
    const auto B = InnerFunction::finite_blaschke({0.5});
    const auto r = verify_besov(B, 2.0, 2.0, 0.25, 0.5, o, 10);
    EXPECT_EQ(r.verdict_norm.verdict, Verdict::convergent);
    EXPECT_EQ(r.verdict_sum.verdict, Verdict::convergent);
    EXPECT_THROW(verify_besov(B, 2.0, 2.0, 0.6, 0.5, o), DomainError);
    EXPECT_THROW(verify_besov(B, 0.5, 2.0, 0.5, 0.5, o), DomainError);
}

TEST(Suites, RemarkOne)
{
    const auto b = verify_remark1(InnerFunction::finite_blaschke({0.4}), 0.75, quick());
    EXPECT_EQ(b.verdict_norm.verdict, Verdict::convergent);
    EXPECT_EQ(b.verdict_sum.verdict, Verdict::convergent);
    const auto s = verify_remark1(InnerFunction::atomic(), 0.75, quick());
    EXPECT_EQ(s.verdict_norm.verdict, Verdict::divergent);
    EXPECT_EQ(s.verdict_sum.verdict, Verdict::divergent);
    EXPECT_THROW(verify_remark1(InnerFunction::atomic(), 0.5), DomainError);
}

TEST(Suites, ShiftGapsMatchNumeric)
{
    const auto S = InnerFunction::atomic();
    const cplx a(0.3, 0.2);
    auto exact = shift_gaps(S, a, 8);
    const auto num = find_zeros_numeric(S, a, dyadic_radius(9), 1e-12);
    std::vector<double> ng;
    for (const cplx& z : num.zeros) {
        if (std::abs(z) < dyadic_radius(9)) ng.push_back(1.0 - std::abs(z));
    }
    std::sort(exact.begin(), exact.end());
    std::sort(ng.begin(), ng.end());
    ASSERT_EQ(exact.size(), ng.size());
    for (std::size_t i = 0; i < ng.size(); ++i) EXPECT_NEAR(exact[i], ng[i], 1e-9);
}
