#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "innerfn/norms.hpp"
#include "innerfn/zeros.hpp"

using namespace innerfn;

namespace {

cplx S_of(cplx z) { return std::exp((z + 1.0) / (z - 1.0)); }
cplx dS_of(cplx z) { return -2.0 / ((z - 1.0) * (z - 1.0)) * S_of(z); }

cplx blaschke_derivative(const std::vector<cplx>& zs, cplx z)
{
    // B'/B = sum (|w|^2 - 1)/((w - z)(1 - conj(w) z))
    cplx v = 1.0, logd = 0.0;
    for (const cplx& w : zs) {
        const cplx u = w == 0.0 ? cplx(1.0) : std::abs(w) / w;
        v *= w == 0.0 ? z : u * (w - z) / (1.0 - std::conj(w) * z);
    }
    if (std::abs(v) < 1e-300) {
        // fall back to a difference quotient at a zero
        const double h = 1e-7;
        auto B = [&](cplx x) {
            cplx r = 1.0;
            for (const cplx& w : zs) r *= w == 0.0 ? x : (std::abs(w) / w) * (w - x) / (1.0 - std::conj(w) * x);
            return r;
        };
        return (B(z + h) - B(z - h)) / (2 * h);
    }
    for (const cplx& w : zs) logd += (std::norm(w) - 1.0) / ((w - z) * (1.0 - std::conj(w) * z));
    return v * logd;
}

double gk_circle_mean(const std::function<double(double)>& g)
{
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, 0.0, two_pi, 20, 1e-14) / two_pi;
}

}  // namespace

TEST(CircleMean, IdentityAndConstants)
{
    const auto id = modulus_of([](cplx z) { return z; });
    for (double r : {0.1, 0.5, 0.99}) EXPECT_NEAR(circle_mean(id, r, 2.0), r, 1e-14);
    const auto c = modulus_of([](cplx) { return cplx(0.3, -0.4); });
    for (double p : {0.5, 1.0, 3.0}) EXPECT_NEAR(circle_mean(c, 0.7, p), 0.5, 1e-14);
}

TEST(CircleMean, AtomicDerivativeAgainstGaussKronrod)
{
    const double r = 0.5;
    const double got = circle_mean(modulus_of(dS_of), r, 1.0, 1e-13);
    const double want = gk_circle_mean([r](double t) { return std::abs(dS_of(std::polar(r, t))); });
    EXPECT_NEAR(got, want, 1e-10);
}

TEST(CircleMean, RejectsBadArguments)
{
    const auto id = modulus_of([](cplx z) { return z; });
    EXPECT_THROW(circle_mean(id, 1.0, 1.0), DomainError);
    EXPECT_THROW(circle_mean(id, 0.5, 0.0), DomainError);
}

TEST(MixedNorm, IdentityLimit)
{
    const auto id = modulus_of([](cplx z) { return z; });
    const int m = 12;
    const auto t = mixed_norm_truncated(id, {2.0, 2.0, RadialWeight::power(0.0)}, m);
    const double R = dyadic_radius(m);
    EXPECT_NEAR(t.value, R * R * R / 3.0, 1e-12);
    EXPECT_NEAR(t.value, 1.0 / 3.0, std::ldexp(1.0, -m));
    ASSERT_EQ(t.blocks.size(), std::size_t(m));
    // block k is int r^2 over [r_k, r_{k+1})
    for (int k = 0; k < m; ++k) {
        const double a = dyadic_radius(k), b = dyadic_radius(k + 1);
        EXPECT_NEAR(t.blocks[k], (b * b * b - a * a * a) / 3.0, 1e-15);
    }
}

TEST(MixedNorm, WeightScalesLinearly)
{
    const auto f = modulus_of(dS_of);
    const auto prof = radial_profile(f, 1.0, 10);
    const auto w = RadialWeight::power(0.5);
    const auto base = mixed_norm_from_profile(prof, {1.0, 1.5, w});
    const auto scaled = mixed_norm_from_profile(prof, {1.0, 1.5, w.scaled(3.0)});
    EXPECT_NEAR(scaled.value, 3.0 * base.value, 1e-13 * scaled.value);
}

TEST(MixedNorm, AtomicDerivativeDecaysForConvergentCase)
{
    const auto t = mixed_norm_truncated(modulus_of(dS_of), {1.0, 1.0, RadialWeight::power(0.0)}, 14);
    // blocks fall like 2^{-1/2} per shell
    for (int k = 8; k < 14; ++k) EXPECT_NEAR(t.blocks[k] / t.blocks[k - 1], std::sqrt(0.5), 0.05) << k;
}

TEST(MixedNorm, AtomicDerivativeGrowsForDivergentCase)
{
    const auto t = mixed_norm_truncated(modulus_of(dS_of), {2.0, 2.0, RadialWeight::power(0.0)}, 16);
    for (int k = 9; k < 16; ++k) EXPECT_GE(t.blocks[k], t.blocks[k - 1]) << k;
}

TEST(MixedNorm, PartialSumsMonotone)
{
    const auto t = mixed_norm_truncated(modulus_of(dS_of), {0.75, 1.0, RadialWeight::power(0.25)}, 12);
    const auto ps = partial_sums(t);
    for (std::size_t k = 1; k < ps.size(); ++k) EXPECT_GE(ps[k], ps[k - 1]);
    EXPECT_NEAR(ps.back(), t.value, 1e-14 * t.value);
}

TEST(MixedNorm, KernelFormsComparable)
{
    // for power weights omega-hat(r)/(1-r) = omega(r)/(alpha+1)
    const auto prof = radial_profile(modulus_of(dS_of), 1.0, 12);
    const MixedNormParams params{1.0, 1.0, RadialWeight::power(1.0)};
    const auto a = mixed_norm_from_profile(prof, params, MixedKernel::weight);
    const auto b = mixed_norm_from_profile(prof, params, MixedKernel::tail_over_gap);
    EXPECT_NEAR(b.value, 0.5 * a.value, 1e-12 * a.value);
}

TEST(Hardy, Identity)
{
    const auto id = modulus_of([](cplx z) { return z; });
    for (int m : {4, 10}) EXPECT_NEAR(hardy_norm_truncated(id, 1.0, m).value, 1.0 - std::ldexp(1.0, -m), 1e-14);
}

TEST(Hardy, FiniteBlaschkeDerivativeStabilizes)
{
    const auto f = modulus_of([](cplx z) { return blaschke_derivative({0.5}, z); });
    const auto h12 = hardy_norm_truncated(f, 0.75, 12);
    const auto h16 = hardy_norm_truncated(f, 0.75, 16);
    EXPECT_NEAR(h12.value, h16.value, 1e-3 * h16.value);
}

TEST(Hardy, AtomicDerivativeKeepsGrowing)
{
    const auto h = hardy_norm_truncated(modulus_of(dS_of), 0.75, 16);
    for (int k = 9; k <= 16; ++k) EXPECT_GT(h.means[k], h.means[k - 1] * 1.02) << k;
}

TEST(LevelSet, DiscRegionClosedForm)
{
    const auto B = InnerFunction::finite_blaschke({0.0});
    const auto t = level_set_integral(B, 0.5, 0.75, RadialWeight::power(0.0), 10);
    // 2 pi int_0^{1/2} r (1-r)^{-3/4} dr with u = 1 - r
    auto F = [](double u) { return 4.0 * std::pow(u, 0.25) - 0.8 * std::pow(u, 1.25); };
    const double want = two_pi * (F(1.0) - F(0.5));
    EXPECT_NEAR(t.value, want, 1e-6);
}

TEST(LevelSet, MonotoneInC)
{
    const auto S = InnerFunction::atomic();
    const auto w = RadialWeight::power(0.0);
    double prev = 0.0;
    for (double C : {0.05, 0.2, 0.5, 0.8}) {
        const double v = level_set_integral(S, C, 0.75, w, 8).value;
        EXPECT_GE(v, prev) << C;
        prev = v;
    }
}

TEST(DyadicSums, EmptyAndSinglePoint)
{
    const MixedNormParams params{1.0, 1.0, RadialWeight::power(0.0)};
    DyadicProfile empty;
    empty.max_n = 8;
    empty.counts.assign(9, 0);
    EXPECT_EQ(single_point_sum(empty, params, 8).value, 0.0);

    // one zero at 0.9 regardless of a: annulus 3 only
    const double delta = 0.3;
    std::vector<DiscAverage> avgs;
    for (int n = 0; n <= 8; ++n) avgs.push_back({n, 1.0, n == 3 ? pi * delta * delta : 0.0, delta, 1});
    const auto t = dyadic_sum_theorem1b(avgs, params, 8);
    EXPECT_NEAR(t.value, tail_integral(params.omega, 0.875) * pi * delta * delta, 1e-15);
    avgs.pop_back();
    EXPECT_THROW(dyadic_sum_theorem1b(avgs, params, 8), DomainError);
}

TEST(DyadicSums, AtomicSinglePointRate)
{
    const auto prof = atomic_profile(std::exp(-1.0), 24);
    const auto t = single_point_sum(prof, {1.0, 1.0, RadialWeight::power(0.0)}, 24);
    // omega-hat(r_n) upsilon_n ~ 2^{-n} 2^{n/2}
    for (int n = 12; n <= 24; n += 2) EXPECT_NEAR(t.blocks[n] / t.blocks[n - 2], 0.5, 0.1) << n;
}

TEST(DyadicSums, DiscAverageRate)
{
    const auto avgs = disc_average_profile(InnerFunction::atomic(), 0.5, 1.0, 16, 64);
    const auto t = dyadic_sum_theorem1b(avgs, {1.0, 1.0, RadialWeight::power(0.0)}, 16);
    for (int n = 9; n <= 16; ++n) EXPECT_NEAR(t.blocks[n] / t.blocks[n - 1], std::sqrt(0.5), 0.3 * std::sqrt(0.5));
}

TEST(ZeroSums, GapIndexShells)
{
    EXPECT_EQ(gap_index(1.0), 0);
    EXPECT_EQ(gap_index(0.75), 0);
    EXPECT_EQ(gap_index(0.5), 1);
    EXPECT_EQ(gap_index(0.3), 1);
    EXPECT_EQ(gap_index(std::ldexp(1.0, -30)), 30);
    EXPECT_EQ(gap_index(std::ldexp(1.0, -30) * 1.0001), 29);
}

TEST(ZeroSums, FiniteListDirectSum)
{
    const std::vector<cplx> zs{0.1, cplx(0.0, 0.7), -0.93, cplx(0.6, 0.6)};
    const auto g = gaps_of(zs);
    const auto w = RadialWeight::power(0.0);
    const auto t = zero_sum_theorem3(g, 0.75, w, 10);
    double direct = 0;
    for (double h : g) direct += h * std::pow(h, -(0.75 - 1.0));
    EXPECT_NEAR(t.value, direct, 1e-14);
    EXPECT_EQ(zero_power_sum({}, 0.5, 5).value, 0.0);
}

TEST(ZeroSums, CompleteShells)
{
    EXPECT_EQ(complete_shells(dyadic_radius(10)), 9);
    EXPECT_EQ(complete_shells(dyadic_radius(10) - 1e-6), 8);
    EXPECT_EQ(complete_shells(0.4), -1);
}

TEST(Fractional, IdentityFirstOrder)
{
    const auto s = fractional_derivative_circle([](cplx z) { return z; }, 1.0, 0.6, 64);
    for (std::size_t k = 0; k < 64; ++k) {
        EXPECT_LE(std::abs(s.values[k] - 2.0 * std::polar(0.6, two_pi * k / 64)), 1e-12);
    }
}

TEST(Fractional, GeometricSeries)
{
    const double alpha = 0.7, r = 0.8;
    const auto s = fractional_derivative_circle([](cplx z) { return 1.0 / (1.0 - 0.5 * z); }, alpha, r, 32, 1e-12);
    for (std::size_t k = 0; k < 32; ++k) {
        const cplx z = std::polar(r, two_pi * k / 32);
        cplx want = 0.0, zn = 1.0;
        for (int n = 0; n < 400; ++n) {
            want += std::pow(n + 1.0, alpha) * std::ldexp(1.0, -n) * zn;
            zn *= z;
        }
        EXPECT_LE(std::abs(s.values[k] - want), 1e-10);
    }
}

TEST(Fractional, FirstOrderComparableToDerivative)
{
    // D^1 f = (z f)' = f + z f'
    for (int k = 2; k <= 10; k += 2) {
        const double r = dyadic_radius(k);
        const double d1 = fractional_circle_mean(S_of, 1.0, r, 1.0);
        const double fp = circle_mean(modulus_of(dS_of), r, 1.0);
        EXPECT_GE(d1 / fp, 0.125);
        EXPECT_LE(d1 / fp, 8.0);
    }
}

TEST(Besov, IdentityClosedForm)
{
    const int m = 10;
    const auto t = besov_norm_truncated([](cplx z) { return z; }, 2.0, 2.0, 0.25, m);
    const double R = dyadic_radius(m);
    // int_0^R 2^{2.5} r^2 (1 - r) dr
    const double want = std::pow(2.0, 2.5) * (R * R * R / 3.0 - R * R * R * R / 4.0);
    EXPECT_NEAR(t.value, want, 1e-9);
}

TEST(Stolz, TrivialCases)
{
    EXPECT_NEAR(stolz_sum({0.0}, 2.0, 0.75, 1024), two_pi, 1e-12);
    EXPECT_EQ(stolz_sum({}, 2.0, 0.75, 1024), 0.0);
    EXPECT_THROW(stolz_sum({0.0}, 1.0, 1.0, 16), DomainError);
}

TEST(Stolz, MembershipAgainstBruteForce)
{
    const std::vector<cplx> zs{cplx(0.9, 0.1), cplx(-0.5, 0.3), cplx(0.0, -0.99), cplx(0.7, -0.7)};
    const std::size_t N = 2048;
    const double eta = 3.0, p = 0.8;
    double brute = 0;
    for (std::size_t k = 0; k < N; ++k) {
        const cplx e = std::polar(1.0, two_pi * k / N);
        double s = 0;
        for (const cplx& z : zs) {
            if (std::abs(z - e) <= eta * (1.0 - std::abs(z))) s += 1.0 / (1.0 - std::abs(z));
        }
        brute += s > 0 ? std::pow(s, p) : 0.0;
    }
    brute *= two_pi / N;
    EXPECT_NEAR(stolz_sum(zs, eta, p, N), brute, 1e-10 * brute);
}

TEST(Stolz, AtomicGrowsWithTruncation)
{
    const auto seq = atomic_frostman_sequence(std::exp(-1.0));
    double prev = 0;
    for (std::size_t n : {125u, 250u, 500u, 1000u}) {
        std::vector<cplx> zs;
        for (std::size_t k = 0; k < n; ++k) zs.push_back(seq.at(k));
        const double v = stolz_sum(zs, 2.0, 0.75, 1 << 16);
        EXPECT_GT(v, prev * 1.05) << n;
        prev = v;
    }
}

TEST(HpIdentity, IdentityMap)
{
    EXPECT_NEAR(hp_blaschke_identity_rhs({0.0}, 1.0), 1.0, 1e-14);
}

TEST(HpIdentity, MatchesHardyNorm)
{
    struct Case {
        std::vector<cplx> zs;
        double p, rel;
    };
    for (const auto& c : {Case{{0.5}, 1.0, 0.01}, Case{{0.5, -0.5}, 0.75, 0.02},
                          Case{{cplx(0.3, 0.4), -0.6, cplx(0.1, -0.8)}, 1.25, 0.02}}) {
        const auto f = modulus_of([&](cplx z) { return blaschke_derivative(c.zs, z); });
        const double hardy = std::pow(hardy_norm_truncated(f, c.p, 14).value, c.p);
        const double rhs = hp_blaschke_identity_rhs(c.zs, c.p);
        EXPECT_NEAR(hardy / rhs, 1.0, c.rel) << c.p;
    }
}

TEST(Quadrature, GaussLegendreExactForPolynomials)
{
    for (int n : {1, 4, 8, 17}) {
        const auto& rule = quad::gauss_legendre(n);
        ASSERT_EQ(rule.nodes.size(), static_cast<std::size_t>(n));
        EXPECT_TRUE(std::is_sorted(rule.nodes.begin(), rule.nodes.end()));
        // x^k integrates to 2/(k+1) for even k, 0 for odd k, up to k = 2n-1
        for (int k = 0; k <= 2 * n - 1; ++k) {
            const double got = quad::gauss([k](double x) { return std::pow(x, k); }, -1.0, 1.0, n);
            EXPECT_NEAR(got, k % 2 == 0 ? 2.0 / (k + 1) : 0.0, 1e-14) << n << " " << k;
        }
    }
}

TEST(Fft, MatchesDirectSum)
{
    const std::size_t n = 64;
    std::vector<cplx> x(n), y;
    for (std::size_t k = 0; k < n; ++k) x[k] = cplx(std::cos(0.3 * k), std::sin(1.7 * k * k));
    y = x;
    fft(y, false);
    for (std::size_t j = 0; j < n; ++j) {
        cplx s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += x[k] * std::polar(1.0, -two_pi * double(j * k % n) / n);
        EXPECT_LE(std::abs(y[j] - s), 1e-12);
    }
    fft(y, true);
    for (std::size_t k = 0; k < n; ++k) EXPECT_LE(std::abs(y[k] / double(n) - x[k]), 1e-14);
    std::vector<cplx> bad(6);
    EXPECT_THROW(fft(bad), DomainError);
}
