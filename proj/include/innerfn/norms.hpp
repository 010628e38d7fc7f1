#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "innerfn/common.hpp"
#include "innerfn/fft.hpp"
#include "innerfn/inner.hpp"
#include "innerfn/parallel.hpp"
#include "innerfn/quadrature.hpp"
#include "innerfn/summation.hpp"
#include "innerfn/weights.hpp"
#include "innerfn/zeros.hpp"

namespace innerfn {

/// |f(r e^{i theta})|.
using CircleFn = std::function<double(double, double)>;
/// Analytic function sampled anywhere in the disc.
using AnalyticFn = std::function<cplx(cplx)>;

/// Partial result of a radially truncated quantity: block k is the
/// contribution of the shell 1 - 2^{-k} <= r < 1 - 2^{-k-1}.
struct TruncatedValue {
    int depth = 0;
    double value = 0.0;
    std::vector<double> blocks;
};

inline TruncatedValue make_truncated(std::vector<double> blocks)
{
    TruncatedValue t;
    t.depth = static_cast<int>(blocks.size());
    t.value = pairwise_sum(blocks);
    t.blocks = std::move(blocks);
    return t;
}

/// Partial sums by depth: entry k is the value truncated after k+1 blocks.
inline std::vector<double> partial_sums(const TruncatedValue& t)
{
    std::vector<double> out;
    for (std::size_t k = 1; k <= t.blocks.size(); ++k) {
        out.push_back(pairwise_sum(std::span<const double>(t.blocks.data(), k)));
    }
    return out;
}

struct MixedNormParams {
    double p = 2.0;
    double q = 2.0;
    RadialWeight omega = RadialWeight::power(0.0);
};

enum class MixedKernel { weight, tail_over_gap };

namespace detail {

/// Deterministic sum of term(0..n-1): pairwise within fixed chunks, then
/// pairwise over chunk sums.
template <typename F>
double chunked_sum(std::size_t n, F&& term)
{
    constexpr std::size_t chunk = 4096;
    std::vector<double> partial;
    partial.reserve(n / chunk + 1);
    std::vector<double> buf;
    buf.reserve(std::min(n, chunk));
    for (std::size_t start = 0; start < n; start += chunk) {
        const std::size_t end = std::min(n, start + chunk);
        buf.clear();
        for (std::size_t i = start; i < end; ++i) buf.push_back(term(i));
        partial.push_back(pairwise_sum(buf));
    }
    return pairwise_sum(partial);
}

inline constexpr int circle_max_doublings = 6;

}  // namespace detail

/// Initial trapezoid node count on |z| = r.
inline std::size_t circle_nodes(double r)
{
    return std::max<std::size_t>(256, static_cast<std::size_t>(std::ceil(64.0 / (1.0 - r))));
}

/// (1/2pi) int |f(re^{it})|^p dt by the trapezoidal rule, doubling until
/// the p-th roots of successive values agree to tol relatively.
inline double circle_mean_pth(const CircleFn& f, double r, double p, double tol)
{
    if (!(r >= 0.0 && r < 1.0)) throw DomainError("circle_mean: r must lie in [0,1)");
    if (!(p > 0.0)) throw DomainError("circle_mean: p must be positive");
    std::size_t n = circle_nodes(r);
    auto powp = [p](double v) { return v == 0.0 ? 0.0 : (p == 1.0 ? v : (p == 2.0 ? v * v : std::pow(v, p))); };
    double sum = detail::chunked_sum(n, [&](std::size_t k) { return powp(f(r, two_pi * static_cast<double>(k) / n)); });
    double mean = sum / n;
    for (int d = 0; d < detail::circle_max_doublings; ++d) {
        // midpoints of the current grid
        const double mid = detail::chunked_sum(
            n, [&](std::size_t k) { return powp(f(r, two_pi * (static_cast<double>(k) + 0.5) / n)); });
        const double next = 0.5 * (mean + mid / n);
        n *= 2;
        const double a = std::pow(mean, 1.0 / p), b = std::pow(next, 1.0 / p);
        mean = next;
        if (b == 0.0 || std::abs(a - b) <= tol * b) return mean;
    }
    throw ConvergenceError("circle_mean did not converge at r = " + std::to_string(r) + " (last values " +
                           std::to_string(std::pow(mean, 1.0 / p)) + ")");
}

/// M_p(r, f).
inline double circle_mean(const CircleFn& f, double r, double p, double tol = 1e-8)
{
    return std::pow(circle_mean_pth(f, r, p, tol), 1.0 / p);
}

/// |f| for an analytic callable.
inline CircleFn modulus_of(AnalyticFn g)
{
    return [g = std::move(g)](double r, double t) { return std::abs(g(std::polar(r, t))); };
}

// ---------------------------------------------------------------------------
// Mixed norms

/// M_p^p sampled at Gauss nodes of every dyadic shell up to depth m; reused
/// across q, weights and kernels.
struct RadialProfile {
    double p = 0.0;
    int depth = 0;
    int nodes_per_shell = 0;
    std::vector<double> gap;     // 1 - r at each node
    std::vector<double> weight;  // Gauss weight times dr/dt
    std::vector<double> mpp;     // M_p^p
};

inline RadialProfile radial_profile(const CircleFn& f, double p, int m, double tol = 1e-8, int nodes_per_shell = 8)
{
    if (m < 1 || m > 20) throw DomainError("radial truncation depth must lie in [1, 20]");
    RadialProfile prof;
    prof.p = p;
    prof.depth = m;
    prof.nodes_per_shell = nodes_per_shell;
    const auto& rule = quad::gauss_legendre(nodes_per_shell);
    for (int k = 0; k < m; ++k) {
        for (int i = 0; i < nodes_per_shell; ++i) {
            const double t = k + 0.5 * (1.0 + rule.nodes[i]);
            const double h = std::exp2(-t);
            prof.gap.push_back(h);
            prof.weight.push_back(0.5 * rule.weights[i] * ln2 * h);
        }
    }
    prof.mpp = parallel_map<double>(prof.gap.size(),
                                    [&](std::size_t i) { return circle_mean_pth(f, 1.0 - prof.gap[i], p, tol); });
    return prof;
}

/// Blocks of int M_p^q(r) K(r) dr with K given as a function of the gap.
inline TruncatedValue mixed_norm_from_profile(const RadialProfile& prof, double q,
                                              const std::function<double(double)>& kernel_of_gap)
{
    if (!(q > 0.0)) throw DomainError("mixed norm: q must be positive");
    std::vector<double> blocks;
    const int npts = prof.nodes_per_shell;
    for (int k = 0; k < prof.depth; ++k) {
        std::vector<double> terms;
        for (int i = 0; i < npts; ++i) {
            const std::size_t j = static_cast<std::size_t>(k * npts + i);
            const double mq = prof.mpp[j] == 0.0 ? 0.0 : std::pow(prof.mpp[j], q / prof.p);
            terms.push_back(prof.weight[j] * mq * kernel_of_gap(prof.gap[j]));
        }
        blocks.push_back(pairwise_sum(terms));
    }
    return make_truncated(std::move(blocks));
}

inline std::function<double(double)> mixed_kernel(const RadialWeight& w, MixedKernel kernel)
{
    if (kernel == MixedKernel::weight) return [w](double h) { return w.density_at_gap(h); };
    return [w](double h) { return std::exp(log_tail_at_gap(w, h) - std::log(h)); };
}

inline TruncatedValue mixed_norm_from_profile(const RadialProfile& prof, const MixedNormParams& params,
                                              MixedKernel kernel = MixedKernel::weight)
{
    if (std::abs(prof.p - params.p) > 0.0) throw DomainError("mixed norm: profile was computed for another p");
    return mixed_norm_from_profile(prof, params.q, mixed_kernel(params.omega, kernel));
}

/// q-th power of the A^{p,q}_omega norm truncated at r = 1 - 2^{-m}.
inline TruncatedValue mixed_norm_truncated(const CircleFn& f, const MixedNormParams& params, int m,
                                           MixedKernel kernel = MixedKernel::weight, double tol = 1e-8)
{
    if (!(params.p > 0.0) || !(params.q > 0.0)) throw DomainError("mixed norm: p and q must be positive");
    return mixed_norm_from_profile(radial_profile(f, params.p, m, tol), params, kernel);
}

// ---------------------------------------------------------------------------
// Hardy norms

struct HardyNorm {
    double value = 0.0;          // max over r_k, k <= m, of M_p(r_k)
    TruncatedValue pth_power;    // increments of the running max of M_p^p
    std::vector<double> means;   // M_p(r_k)
};

inline HardyNorm hardy_norm_truncated(const CircleFn& f, double p, int m, double tol = 1e-8)
{
    if (m < 0 || m > 20) throw DomainError("hardy norm: depth must lie in [0, 20]");
    auto mpp = parallel_map<double>(static_cast<std::size_t>(m) + 1, [&](std::size_t k) {
        return circle_mean_pth(f, dyadic_radius(static_cast<int>(k)), p, tol);
    });
    HardyNorm out;
    std::vector<double> blocks;
    double run = 0.0;
    for (double v : mpp) {
        out.means.push_back(std::pow(v, 1.0 / p));
        const double next = std::max(run, v);
        blocks.push_back(next - run);
        run = next;
    }
    out.value = std::pow(run, 1.0 / p);
    out.pth_power = make_truncated(std::move(blocks));
    return out;
}

// ---------------------------------------------------------------------------
// Level sets

/// Area integral of kernel(1 - |z|) over {|Theta| < C, |z| < 1 - 2^{-m}},
/// blocked by dyadic shells.
inline TruncatedValue level_set_integral_kernel(const InnerFunction& f, double C,
                                                const std::function<double(double)>& kernel_of_gap, int m,
                                                int panels_per_shell = 2, int nodes_per_panel = 8)
{
    if (!(C > 0.0 && C < 1.0)) throw DomainError("level_set_integral: C must lie in (0,1)");
    if (m < 1 || m > 20) throw DomainError("level_set_integral: depth must lie in [1, 20]");
    const CircleFn mod = modulus_function(f, Order::value);
    const auto& rule = quad::gauss_legendre(nodes_per_panel);
    struct Node {
        int shell;
        double h, w;
    };
    std::vector<Node> nodes;
    for (int k = 0; k < m; ++k) {
        for (int pnl = 0; pnl < panels_per_shell; ++pnl) {
            const double ta = k + static_cast<double>(pnl) / panels_per_shell;
            const double tb = k + static_cast<double>(pnl + 1) / panels_per_shell;
            for (int i = 0; i < nodes_per_panel; ++i) {
                const double t = 0.5 * (ta + tb) + 0.5 * (tb - ta) * rule.nodes[i];
                const double h = std::exp2(-t);
                nodes.push_back({k, h, 0.5 * (tb - ta) * rule.weights[i] * ln2 * h});
            }
        }
    }
    auto vals = parallel_map<double>(nodes.size(), [&](std::size_t j) {
        const double h = nodes[j].h;
        const double r = 1.0 - h;
        const std::size_t n = circle_nodes(r);
        const double inside = detail::chunked_sum(n, [&](std::size_t k) {
            return mod(r, two_pi * (static_cast<double>(k) + 0.5) / n) < C ? 1.0 : 0.0;
        });
        const double arc = two_pi * inside / n;
        return arc == 0.0 ? 0.0 : nodes[j].w * arc * r * kernel_of_gap(h);
    });
    std::vector<double> blocks(static_cast<std::size_t>(m), 0.0);
    for (int k = 0; k < m; ++k) {
        std::vector<double> terms;
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            if (nodes[j].shell == k) terms.push_back(vals[j]);
        }
        blocks[static_cast<std::size_t>(k)] = pairwise_sum(terms);
    }
    return make_truncated(std::move(blocks));
}

/// int_{|Theta| < C} omega-hat(z)/(1-|z|)^{p+1} dA(z), truncated.
inline TruncatedValue level_set_integral(const InnerFunction& f, double C, double p, const RadialWeight& w, int m)
{
    return level_set_integral_kernel(
        f, C, [&w, p](double h) { return std::exp(log_tail_at_gap(w, h) - (p + 1.0) * std::log(h)); }, m);
}

// ---------------------------------------------------------------------------
// Dyadic characterization sums

inline double theorem1_factor(const MixedNormParams& params, int n)
{
    const double h = dyadic_gap(n);
    return std::exp(log_tail_at_gap(params.omega, h) - (params.q - params.q / params.p) * std::log(h));
}

/// sum_n omega-hat(r_n)/(1-r_n)^{q-q/p} int_{D_delta} upsilon_n^{q/p} dA.
inline TruncatedValue dyadic_sum_theorem1b(const std::vector<DiscAverage>& averages, const MixedNormParams& params,
                                           int max_n)
{
    if (max_n < 0) throw DomainError("dyadic sum: max_n must be non-negative");
    std::vector<double> blocks;
    for (int n = 0; n <= max_n; ++n) {
        const auto it = std::find_if(averages.begin(), averages.end(), [n](const DiscAverage& d) { return d.n == n; });
        if (it == averages.end()) throw DomainError("dyadic sum: missing disc average for n = " + std::to_string(n));
        if (std::abs(it->exponent - params.q / params.p) > 1e-12) {
            throw DomainError("dyadic sum: disc averages use exponent " + std::to_string(it->exponent) +
                              ", expected q/p");
        }
        blocks.push_back(it->value == 0.0 ? 0.0 : theorem1_factor(params, n) * it->value);
    }
    return make_truncated(std::move(blocks));
}

/// sum_n omega-hat(r_n) upsilon_n(a)^{q/p}/(1-r_n)^{q-q/p}.
inline TruncatedValue single_point_sum(const DyadicProfile& profile, const MixedNormParams& params, int max_n)
{
    if (max_n > profile.max_n) throw DomainError("single_point_sum: profile does not reach max_n");
    std::vector<double> blocks;
    for (int n = 0; n <= max_n; ++n) {
        const long c = profile.counts[static_cast<std::size_t>(n)];
        blocks.push_back(c == 0 ? 0.0
                                : theorem1_factor(params, n) * std::pow(static_cast<double>(c), params.q / params.p));
    }
    return make_truncated(std::move(blocks));
}

/// Shell k holds gaps 2^{-k-1} < h <= 2^{-k}; exact at powers of two.
inline int gap_index(double h)
{
    int e = 0;
    const double f = std::frexp(h, &e);
    return f == 0.5 ? 1 - e : -e;
}

/// Terms g(1 - |z|) summed per dyadic shell, shells 0..max_n.
template <typename G>
TruncatedValue shell_sum(const std::vector<double>& gaps, int max_n, G&& g)
{
    std::vector<std::vector<double>> per(static_cast<std::size_t>(max_n) + 1);
    for (double h : gaps) {
        if (!(h > 0.0)) throw DomainError("zero sum: zero on or outside the unit circle");
        const int k = gap_index(h);
        if (k <= max_n) per[static_cast<std::size_t>(k)].push_back(g(h));
    }
    std::vector<double> blocks;
    for (auto& v : per) blocks.push_back(pairwise_sum(v));
    return make_truncated(std::move(blocks));
}

/// Largest shell index n with r_{n+1} <= complete_below.
inline int complete_shells(double complete_below)
{
    int n = -1;
    while (n < 60 && dyadic_radius(n + 2) <= complete_below) ++n;
    return n;
}

inline std::vector<double> gaps_of(const std::vector<cplx>& zeros)
{
    std::vector<double> g;
    g.reserve(zeros.size());
    for (const cplx& z : zeros) g.push_back(1.0 - std::abs(z));
    return g;
}

/// sum (1 - |z_n|)^alpha per shell.
inline TruncatedValue zero_power_sum(const std::vector<double>& gaps, double alpha, int max_n)
{
    return shell_sum(gaps, max_n, [alpha](double h) { return std::pow(h, alpha); });
}

/// sum omega-hat(z_n)/(1-|z_n|)^{p-1} per shell, shells 0..max_n.
inline TruncatedValue zero_sum_theorem3(const std::vector<double>& gaps, double p, const RadialWeight& w, int max_n)
{
    return shell_sum(gaps, max_n,
                     [&w, p](double h) { return std::exp(log_tail_at_gap(w, h) - (p - 1.0) * std::log(h)); });
}

// ---------------------------------------------------------------------------
// Fractional derivatives and Besov norms

struct FractionalSamples {
    std::vector<cplx> values;  // D^alpha f(r e^{2 pi i k/N})
    std::size_t fft_size = 0;
    double rho = 0.0;
};

namespace detail {

inline std::vector<cplx> fractional_at_size(const AnalyticFn& f, double alpha, double r, double rho, std::size_t M,
                                            std::size_t N)
{
    std::vector<cplx> buf(M);
    for (std::size_t k = 0; k < M; ++k) buf[k] = f(std::polar(rho, two_pi * static_cast<double>(k) / M));
    fft(buf, false);
    const double ratio = r / rho;
    double pw = 1.0;
    for (std::size_t n = 0; n < M; ++n) {
        const double mult = (alpha == 0.0 ? 1.0 : std::pow(static_cast<double>(n) + 1.0, alpha)) * pw;
        buf[n] *= mult / static_cast<double>(M);
        pw *= ratio;
    }
    fft(buf, true);
    std::vector<cplx> out(N);
    const std::size_t stride = M / N;
    for (std::size_t k = 0; k < N; ++k) out[k] = buf[k * stride];
    return out;
}

}  // namespace detail

inline constexpr std::size_t max_fft_size = std::size_t{1} << 20;

/// D^alpha f on |z| = r at N equispaced angles, via Taylor coefficients
/// read off a circle of radius (1 + r)/2.
inline FractionalSamples fractional_derivative_circle(const AnalyticFn& f, double alpha, double r, std::size_t N,
                                                      double tol = 1e-6)
{
    if (!(alpha >= 0.0)) throw DomainError("fractional derivative: alpha must be non-negative");
    if (!(r >= 0.0 && r < 1.0)) throw DomainError("fractional derivative: r must lie in [0,1)");
    if (!std::has_single_bit(N)) throw DomainError("fractional derivative: N must be a power of two");
    const double rho = 0.5 * (1.0 + r);
    std::size_t M = std::max<std::size_t>(N, std::bit_ceil(static_cast<std::size_t>(std::ceil(32.0 / (1.0 - r)))));
    if (M > max_fft_size) throw ConvergenceError("fractional derivative: aliasing not controlled at N = 2^20");
    auto prev = detail::fractional_at_size(f, alpha, r, rho, M, N);
    while (true) {
        const std::size_t M2 = 2 * M;
        if (M2 > max_fft_size) throw ConvergenceError("fractional derivative: aliasing not controlled at N = 2^20");
        auto cur = detail::fractional_at_size(f, alpha, r, rho, M2, N);
        double scale = 0.0, diff = 0.0;
        for (std::size_t k = 0; k < N; ++k) {
            scale = std::max(scale, std::abs(cur[k]));
            diff = std::max(diff, std::abs(cur[k] - prev[k]));
        }
        M = M2;
        if (diff <= tol * std::max(scale, 1e-300)) return {std::move(cur), M, rho};
        prev = std::move(cur);
    }
}

/// M_p(r, D^alpha f) by the trapezoidal rule on the fractional samples.
inline double fractional_circle_mean(const AnalyticFn& f, double alpha, double r, double p, double tol = 1e-6)
{
    const std::size_t N = std::bit_ceil(circle_nodes(r));
    const auto s = fractional_derivative_circle(f, alpha, r, 2 * N, tol);
    std::vector<double> all(2 * N), even(N);
    for (std::size_t k = 0; k < 2 * N; ++k) all[k] = std::pow(std::abs(s.values[k]), p);
    for (std::size_t k = 0; k < N; ++k) even[k] = all[2 * k];
    const double fine = std::pow(pairwise_sum(all) / (2.0 * N), 1.0 / p);
    const double coarse = std::pow(pairwise_sum(even) / static_cast<double>(N), 1.0 / p);
    if (std::abs(fine - coarse) > 1e-4 * fine) {
        throw ConvergenceError("fractional circle mean not resolved at r = " + std::to_string(r));
    }
    return fine;
}

/// int M_p^q(r, D^{1+alpha} f)(1-r)^{q-1} dr, truncated.
inline TruncatedValue besov_norm_truncated(const AnalyticFn& f, double p, double q, double alpha, int m,
                                           int nodes_per_shell = 8)
{
    if (m < 1 || m > 20) throw DomainError("besov norm: depth must lie in [1, 20]");
    const auto& rule = quad::gauss_legendre(nodes_per_shell);
    std::vector<double> gaps, weights;
    for (int k = 0; k < m; ++k) {
        for (int i = 0; i < nodes_per_shell; ++i) {
            const double t = k + 0.5 * (1.0 + rule.nodes[i]);
            const double h = std::exp2(-t);
            gaps.push_back(h);
            weights.push_back(0.5 * rule.weights[i] * ln2 * h);
        }
    }
    const auto means = parallel_map<double>(gaps.size(), [&](std::size_t j) {
        return fractional_circle_mean(f, 1.0 + alpha, 1.0 - gaps[j], p);
    });
    std::vector<double> blocks;
    for (int k = 0; k < m; ++k) {
        std::vector<double> terms;
        for (int i = 0; i < nodes_per_shell; ++i) {
            const std::size_t j = static_cast<std::size_t>(k * nodes_per_shell + i);
            terms.push_back(weights[j] * std::pow(means[j], q) * std::pow(gaps[j], q - 1.0));
        }
        blocks.push_back(pairwise_sum(terms));
    }
    return make_truncated(std::move(blocks));
}

/// sum_n (1-r_n)^{q/p - alpha q} int_{D_delta} upsilon_n^{q/p} dA.
inline TruncatedValue besov_dyadic_sum(const std::vector<DiscAverage>& averages, double p, double q, double alpha,
                                       int max_n)
{
    std::vector<double> blocks;
    for (int n = 0; n <= max_n; ++n) {
        const auto it = std::find_if(averages.begin(), averages.end(), [n](const DiscAverage& d) { return d.n == n; });
        if (it == averages.end()) throw DomainError("besov sum: missing disc average for n = " + std::to_string(n));
        blocks.push_back(std::pow(dyadic_gap(n), q / p - alpha * q) * it->value);
    }
    return make_truncated(std::move(blocks));
}

// ---------------------------------------------------------------------------
// Boundary-type sums for Blaschke products

/// int_0^{2pi} (sum over zeros in the Stolz angle at e^{it} of 1/(1-|z|))^p dt
/// on an N-point grid.
inline double stolz_sum(const std::vector<cplx>& zeros, double eta, double p, std::size_t N)
{
    if (!(eta > 1.0)) throw DomainError("stolz_sum: eta must exceed 1");
    if (N < 1) throw DomainError("stolz_sum: need at least one angle");
    std::vector<double> diff(N + 1, 0.0);
    double everywhere = 0.0;
    const double dt = two_pi / static_cast<double>(N);
    for (const cplx& z : zeros) {
        const double m = std::abs(z);
        const double g = 1.0 - m;
        if (!(g > 0.0)) throw DomainError("stolz_sum: zero outside the disc");
        const double w = 1.0 / g;
        if (m == 0.0) {
            everywhere += w;  // |e^{it}| = 1 <= eta
            continue;
        }
        const double c = (m * m + 1.0 - eta * eta * g * g) / (2.0 * m);
        if (c <= -1.0) {
            everywhere += w;
            continue;
        }
        if (c > 1.0) continue;
        const double beta = std::acos(c);
        const double phi = std::arg(z);
        // grid indices k with |t_k - phi| <= beta (mod 2 pi)
        const long lo = static_cast<long>(std::ceil((phi - beta) / dt));
        const long hi = static_cast<long>(std::floor((phi + beta) / dt));
        if (hi - lo + 1 >= static_cast<long>(N)) {
            everywhere += w;
            continue;
        }
        if (hi < lo) continue;
        const long n = static_cast<long>(N);
        const long a = ((lo % n) + n) % n;
        const long b = a + (hi - lo);
        if (b < n) {
            diff[static_cast<std::size_t>(a)] += w;
            diff[static_cast<std::size_t>(b + 1)] -= w;
        } else {
            diff[static_cast<std::size_t>(a)] += w;
            diff[N] -= w;
            diff[0] += w;
            diff[static_cast<std::size_t>(b - n + 1)] -= w;
        }
    }
    std::vector<double> terms(N);
    double run = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
        run += diff[k];
        const double s = run + everywhere;
        terms[k] = s > 0.0 ? std::pow(s, p) : 0.0;
    }
    return dt * pairwise_sum(terms);
}

/// (1/2pi) int (sum (1-|z_n|^2)/|z_n - e^{it}|^2)^p dt on an N-point grid.
inline double hp_blaschke_identity_rhs(const std::vector<cplx>& zeros, double p, std::size_t N = 1 << 14)
{
    if (N < 1) throw DomainError("hp identity: need at least one angle");
    std::vector<double> terms(N);
    for (std::size_t k = 0; k < N; ++k) {
        const cplx e = std::polar(1.0, two_pi * static_cast<double>(k) / static_cast<double>(N));
        std::vector<double> s;
        for (const cplx& z : zeros) s.push_back((1.0 - std::norm(z)) / std::norm(z - e));
        const double v = pairwise_sum(s);
        terms[k] = v > 0.0 ? std::pow(v, p) : 0.0;
    }
    return pairwise_sum(terms) / static_cast<double>(N);
}

}  // namespace innerfn
