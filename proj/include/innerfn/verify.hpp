#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "innerfn/common.hpp"
#include "innerfn/inner.hpp"
#include "innerfn/norms.hpp"
#include "innerfn/weights.hpp"
#include "innerfn/zeros.hpp"

namespace innerfn {

// ---------------------------------------------------------------------------
// Convergence verdicts

enum class Verdict { convergent, divergent, inconclusive };

inline const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::convergent: return "convergent";
    case Verdict::divergent: return "divergent";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

struct ConvergenceVerdict {
    Verdict verdict = Verdict::inconclusive;
    double fitted_slope = 0.0;  // log2 block ratio per shell; -inf for terminating sequences
    int depth_lo = 0;
    int depth_hi = 0;
    double residual = 0.0;
    std::string note;
};

struct ClassifierConfig {
    int window = 6;
    double convergent_slope = -0.2;
    double divergent_slope = -0.05;
    double max_residual = 0.25;
    // last/first >= 1 - ratio_slack counts as non-decreasing
    double ratio_slack = 0.01;
};

/// Least-squares fit of log2(block_k) against k over the last blocks.
inline ConvergenceVerdict classify(const std::vector<double>& blocks, const ClassifierConfig& cfg = {})
{
    ConvergenceVerdict v;
    const int n = static_cast<int>(blocks.size());
    if (n < cfg.window) {
        v.note = "fewer than " + std::to_string(cfg.window) + " blocks";
        return v;
    }
    v.depth_lo = n - cfg.window;
    v.depth_hi = n - 1;
    for (double b : blocks) {
        if (b < 0.0 || std::isnan(b)) throw DomainError("classify: blocks must be non-negative");
    }
    const bool tail_zero = blocks[n - 1] == 0.0 && blocks[n - 2] == 0.0 && blocks[n - 3] == 0.0;
    if (tail_zero) {
        v.verdict = Verdict::convergent;
        v.fitted_slope = -inf;
        v.note = "terminating";
        return v;
    }
    std::vector<double> xs, ys;
    for (int k = n - cfg.window; k < n; ++k) {
        if (blocks[k] > 0.0) {
            xs.push_back(k);
            ys.push_back(std::log2(blocks[k]));
        }
    }
    if (static_cast<int>(xs.size()) < cfg.window && xs.size() < 4) {
        v.note = "too many zero blocks in the fit window";
        return v;
    }
    const double m = static_cast<double>(xs.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    const double slope = sxy / sxx;
    double rss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (my + slope * (xs[i] - mx));
        rss += e * e;
    }
    v.fitted_slope = slope;
    v.residual = std::sqrt(rss / m);
    const double first = blocks[n - cfg.window];
    const double last = blocks[n - 1];
    if (slope <= cfg.convergent_slope && v.residual <= cfg.max_residual) {
        v.verdict = Verdict::convergent;
    } else if (slope >= cfg.divergent_slope && first > 0.0 && last / first >= 1.0 - cfg.ratio_slack) {
        v.verdict = Verdict::divergent;
    } else {
        v.note = "slope between thresholds or noisy fit";
    }
    return v;
}

inline ConvergenceVerdict classify(const TruncatedValue& t, const ClassifierConfig& cfg = {})
{
    return classify(t.blocks, cfg);
}

/// True when both are conclusive and differ.
inline bool disagree(const ConvergenceVerdict& a, const ConvergenceVerdict& b)
{
    return a.verdict != Verdict::inconclusive && b.verdict != Verdict::inconclusive && a.verdict != b.verdict;
}

// ---------------------------------------------------------------------------
// Ratio reports

struct RatioRow {
    int m = 0;
    double left = 0.0;
    double right = 0.0;
    double ratio = 0.0;
};

struct RatioReport {
    std::vector<RatioRow> pairs;
    double ratio_min = inf;
    double ratio_max = -inf;
    double window_lo = 1.0 / 50.0;
    double window_hi = 50.0;
    bool window_ok = false;

    [[nodiscard]] double spread() const { return ratio_max / ratio_min; }
};

inline RatioReport ratio_report(const std::vector<RatioRow>& rows, double window_lo = 1.0 / 50.0,
                                double window_hi = 50.0)
{
    RatioReport rep;
    rep.window_lo = window_lo;
    rep.window_hi = window_hi;
    for (RatioRow r : rows) {
        r.ratio = r.left / r.right;
        rep.ratio_min = std::min(rep.ratio_min, r.ratio);
        rep.ratio_max = std::max(rep.ratio_max, r.ratio);
        rep.pairs.push_back(r);
    }
    rep.window_ok = !rep.pairs.empty() && rep.ratio_min >= window_lo && rep.ratio_max <= window_hi;
    return rep;
}

// ---------------------------------------------------------------------------
// Hypothesis stamps

enum class Stamp { satisfied, violated, unverified };

inline const char* to_string(Stamp s)
{
    switch (s) {
    case Stamp::satisfied: return "satisfied";
    case Stamp::violated: return "violated";
    case Stamp::unverified: return "unverified";
    }
    return "?";
}

struct HypothesisStamp {
    Stamp status = Stamp::unverified;
    std::string detail;
};

inline constexpr double hypothesis_margin = 0.05;

namespace detail {

/// x < bound with margin: satisfied / violated / unverified.
inline Stamp strictly_below(double x, double bound)
{
    if (x + hypothesis_margin < bound) return Stamp::satisfied;
    if (x - hypothesis_margin >= bound) return Stamp::violated;
    return Stamp::unverified;
}

inline Stamp both(Stamp a, Stamp b)
{
    if (a == Stamp::violated || b == Stamp::violated) return Stamp::violated;
    if (a == Stamp::unverified || b == Stamp::unverified) return Stamp::unverified;
    return Stamp::satisfied;
}

inline std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

inline HypothesisStamp weight_in_R(const WeightClassReport& rep)
{
    if (rep.dhat.status == Membership::non_member || rep.dcheck.status == Membership::non_member) {
        return {Stamp::violated, "weight is not two-sided doubling"};
    }
    if (rep.dhat.status != Membership::member || rep.dcheck.status != Membership::member) {
        return {Stamp::unverified, "weight class inconclusive"};
    }
    return {Stamp::satisfied, "weight is two-sided doubling"};
}

/// Branch (a): 1/2 < p <= 1, beta < upper_a; branch (b): p > 1, beta < upper_b, alpha > lower_b.
inline HypothesisStamp two_branch(const WeightClassReport& rep, double p, double upper_a, double upper_b,
                                  double lower_b)
{
    if (!(p > 0.5)) return {Stamp::violated, "p must exceed 1/2"};
    const auto base = weight_in_R(rep);
    if (base.status == Stamp::violated) return base;
    Stamp s;
    std::string d;
    if (p <= 1.0) {
        s = strictly_below(rep.beta_hat, upper_a);
        d = "branch (a): beta_hat " + fmt(rep.beta_hat) + " < " + fmt(upper_a);
    } else {
        s = both(strictly_below(rep.beta_hat, upper_b), strictly_below(lower_b, rep.alpha_hat));
        d = "branch (b): beta_hat " + fmt(rep.beta_hat) + " < " + fmt(upper_b) + ", alpha_hat " +
            fmt(rep.alpha_hat) + " > " + fmt(lower_b);
    }
    return {both(base.status, s), d};
}

}  // namespace detail

inline HypothesisStamp hypotheses_theorem1b(const RadialWeight& w, double p, double q)
{
    const auto rep = classify_weight(w, {}, 16);
    return detail::two_branch(rep, p, 2.0 * q - q / p, q, q - q / p);
}

inline HypothesisStamp hypotheses_theorem1(const RadialWeight& w, double p, double q)
{
    auto s = hypotheses_theorem1b(w, p, q);
    if (!(q <= p)) return {Stamp::violated, "needs q <= p; " + s.detail};
    return s;
}

inline HypothesisStamp hypotheses_theorem3(const RadialWeight& w, double p)
{
    const auto rep = classify_weight(w, {}, 16);
    return detail::two_branch(rep, p, 2.0 * p - 1.0, p, p - 1.0);
}

// ---------------------------------------------------------------------------
// Building blocks shared by the suites

struct SuiteOptions {
    int norm_depth = 16;       // radial truncation of norm-type quantities
    int sum_depth = 24;        // annuli for dyadic sums built from exact counts
    int disc_nodes = 128;      // radial nodes of the disc-average grid
    double level_C = 0.5;
    ClassifierConfig classifier;
};

inline CircleFn derivative_modulus(const InnerFunction& f) { return modulus_function(f, Order::first); }

inline AnalyticFn analytic_value(const InnerFunction& f)
{
    auto fp = std::make_shared<const InnerFunction>(f);
    return [fp](cplx z) { return detail::jet(*fp, z, 1e-12, 0).v; };
}

/// Dyadic profile of Theta_a up to max_n.
inline DyadicProfile shift_profile(const InnerFunction& f, cplx a, int max_n)
{
    if (const auto* s = f.as<AtomicSingular>()) return atomic_profile(a, max_n, s->mass);
    const auto zs = zeros_of_shift(f, a, dyadic_radius(max_n + 1));
    return dyadic_counts(zs.zeros, max_n, zs.complete_below, a);
}

/// Gaps 1 - |z| of the zeros of Theta_a below r_{max_n+1}; exact for S_a.
inline std::vector<double> shift_gaps(const InnerFunction& f, cplx a, int max_n)
{
    const double R = dyadic_radius(max_n + 1);
    if (const auto* s = f.as<AtomicSingular>()) {
        const long N = atomic_count_below(a, R, s->mass) / 2 + 2;
        const auto list = atomic_frostman_zeros(a, N, s->mass);
        const auto all = atomic_gaps(list);
        std::vector<double> gaps;
        for (std::size_t k = 0; k < all.size(); ++k) {
            if (std::abs(list.zeros[k].z) < R) gaps.push_back(all[k]);
        }
        return gaps;
    }
    const auto zs = zeros_of_shift(f, a, R);
    std::vector<double> gaps;
    for (const cplx& z : zs.zeros) {
        if (std::abs(z) < R) gaps.push_back(1.0 - std::abs(z));
    }
    return gaps;
}

struct DualVerdict {
    ConvergenceVerdict verdict_norm;
    ConvergenceVerdict verdict_sum;
    bool agree = true;
    HypothesisStamp hypotheses;
    TruncatedValue norm_side;
    TruncatedValue sum_side;
};

inline DualVerdict make_dual(TruncatedValue norm, TruncatedValue sum, HypothesisStamp h, const ClassifierConfig& cfg)
{
    DualVerdict d;
    d.verdict_norm = classify(norm, cfg);
    d.verdict_sum = classify(sum, cfg);
    d.agree = !disagree(d.verdict_norm, d.verdict_sum);
    d.hypotheses = std::move(h);
    d.norm_side = std::move(norm);
    d.sum_side = std::move(sum);
    return d;
}

// ---------------------------------------------------------------------------
// Theorem suites

struct Theorem1bReport {
    RatioReport ratios;
    ConvergenceVerdict verdict_norm;
    ConvergenceVerdict verdict_sum;
    bool agree = true;
    HypothesisStamp hypotheses;
    TruncatedValue norm_side;
    TruncatedValue sum_side;
};

/// Norm side truncated at r = 1 - 2^{-m} against the disc-averaged dyadic
/// sum through annulus m, for m in [m_lo, m_hi].
inline Theorem1bReport verify_theorem1b(const InnerFunction& f, const MixedNormParams& params, double delta, int m_lo,
                                        int m_hi, const SuiteOptions& opt = {}, double window_lo = 1.0 / 50.0,
                                        double window_hi = 50.0)
{
    if (m_lo < 1 || m_hi < m_lo || m_hi > 20) throw DomainError("theorem1b: need 1 <= m_lo <= m_hi <= 20");
    Theorem1bReport rep;
    rep.hypotheses = hypotheses_theorem1b(params.omega, params.p, params.q);
    rep.norm_side = mixed_norm_truncated(derivative_modulus(f), params, m_hi);
    const auto avgs = disc_average_profile(f, delta, params.q / params.p, m_hi, opt.disc_nodes);
    rep.sum_side = dyadic_sum_theorem1b(avgs, params, m_hi);
    const auto left = partial_sums(rep.norm_side);
    const auto right = partial_sums(rep.sum_side);
    std::vector<RatioRow> rows;
    for (int m = m_lo; m <= m_hi; ++m) rows.push_back({m, left[m - 1], right[m], 0.0});
    rep.ratios = ratio_report(rows, window_lo, window_hi);
    rep.verdict_norm = classify(rep.norm_side, opt.classifier);
    rep.verdict_sum = classify(rep.sum_side, opt.classifier);
    rep.agree = !disagree(rep.verdict_norm, rep.verdict_sum);
    return rep;
}

/// Single-point sum at a against the mixed norm.
inline DualVerdict verify_theorem1(const InnerFunction& f, const MixedNormParams& params, cplx a,
                                   const SuiteOptions& opt = {})
{
    auto h = hypotheses_theorem1(params.omega, params.p, params.q);
    auto norm = mixed_norm_truncated(derivative_modulus(f), params, opt.norm_depth);
    const int max_n = f.as<AtomicSingular>() ? opt.sum_depth : opt.norm_depth;
    auto sum = single_point_sum(shift_profile(f, a, max_n), params, max_n);
    return make_dual(std::move(norm), std::move(sum), std::move(h), opt.classifier);
}

struct Theorem3Report {
    ConvergenceVerdict norm;       // (i)
    ConvergenceVerdict zero_sum;   // (ii)/(iii)
    ConvergenceVerdict level_set;  // (iv)
    bool agree = true;
    HypothesisStamp hypotheses;
    TruncatedValue norm_side, zero_side, level_side;
};

inline bool all_agree(std::initializer_list<const ConvergenceVerdict*> vs)
{
    std::optional<Verdict> seen;
    for (const auto* v : vs) {
        if (v->verdict == Verdict::inconclusive) continue;
        if (seen && *seen != v->verdict) return false;
        seen = v->verdict;
    }
    return true;
}

inline Theorem3Report verify_theorem3(const InnerFunction& f, double p, const RadialWeight& w, cplx a, double C,
                                      const SuiteOptions& opt = {})
{
    Theorem3Report rep;
    rep.hypotheses = hypotheses_theorem3(w, p);
    rep.norm_side = mixed_norm_truncated(derivative_modulus(f), {p, p, w}, opt.norm_depth);
    const int max_n = f.as<AtomicSingular>() ? opt.sum_depth : opt.norm_depth;
    rep.zero_side = zero_sum_theorem3(shift_gaps(f, a, max_n), p, w, max_n);
    rep.level_side = level_set_integral(f, C, p, w, opt.norm_depth);
    rep.norm = classify(rep.norm_side, opt.classifier);
    rep.zero_sum = classify(rep.zero_side, opt.classifier);
    rep.level_set = classify(rep.level_side, opt.classifier);
    rep.agree = all_agree({&rep.norm, &rep.zero_sum, &rep.level_set});
    return rep;
}

struct CorollaryHpReport {
    ConvergenceVerdict hardy;                  // (i)
    std::vector<double> alphas;
    std::vector<ConvergenceVerdict> bergman;   // (iii), one per alpha
    ConvergenceVerdict zero_sum;               // (v)
    ConvergenceVerdict level_set;              // (vi)
    bool agree = true;
    HypothesisStamp hypotheses;
};

inline CorollaryHpReport verify_corollary_hp(const InnerFunction& f, double p, cplx a,
                                             const std::vector<double>& alphas, const SuiteOptions& opt = {})
{
    CorollaryHpReport rep;
    rep.hypotheses = (p > 0.5 && p < 1.0) ? HypothesisStamp{Stamp::satisfied, "1/2 < p < 1"}
                                          : HypothesisStamp{Stamp::violated, "needs 1/2 < p < 1"};
    const CircleFn d = derivative_modulus(f);
    rep.hardy = classify(hardy_norm_truncated(d, p, opt.norm_depth).pth_power, opt.classifier);
    rep.alphas = alphas;
    for (double al : alphas) {
        const double pp = p + al + 1.0;
        rep.bergman.push_back(classify(mixed_norm_truncated(d, {pp, pp, RadialWeight::power(al)}, opt.norm_depth),
                                       opt.classifier));
    }
    const int max_n = f.as<AtomicSingular>() ? opt.sum_depth : opt.norm_depth;
    rep.zero_sum = classify(zero_power_sum(shift_gaps(f, a, max_n), 1.0 - p, max_n), opt.classifier);
    rep.level_set = classify(
        level_set_integral_kernel(
            f, opt.level_C, [p](double h) { return std::pow(h, -(p + 1.0)); }, opt.norm_depth),
        opt.classifier);
    std::vector<const ConvergenceVerdict*> all{&rep.hardy, &rep.zero_sum, &rep.level_set};
    for (const auto& v : rep.bergman) all.push_back(&v);
    std::optional<Verdict> seen;
    for (const auto* v : all) {
        if (v->verdict == Verdict::inconclusive) continue;
        if (seen && *seen != v->verdict) rep.agree = false;
        seen = v->verdict;
    }
    return rep;
}

/// Besov norm of Theta against the disc-averaged dyadic sum.
inline DualVerdict verify_besov(const InnerFunction& f, double p, double q, double alpha, double delta,
                                const SuiteOptions& opt = {}, int besov_depth = 14)
{
    const double lo = std::max(0.0, 1.0 / p - 1.0);
    if (!(alpha > lo && alpha < 1.0 / p)) {
        throw DomainError("verify_besov: alpha must satisfy max{0, 1/p - 1} < alpha < 1/p");
    }
    HypothesisStamp h{Stamp::satisfied, "max{0,1/p-1} < alpha < 1/p"};
    auto norm = besov_norm_truncated(analytic_value(f), p, q, alpha, besov_depth);
    const int max_n = f.as<AtomicSingular>() ? opt.sum_depth : besov_depth;
    const auto avgs = disc_average_profile(f, delta, q / p, max_n, opt.disc_nodes);
    auto sum = besov_dyadic_sum(avgs, p, q, alpha, max_n);
    return make_dual(std::move(norm), std::move(sum), std::move(h), opt.classifier);
}

/// Theta'' in A^p_{p-1} against Theta' in H^p.
inline DualVerdict verify_remark1(const InnerFunction& f, double p, const SuiteOptions& opt = {})
{
    if (!(p > 0.5)) throw DomainError("verify_remark1: needs p > 1/2");
    HypothesisStamp h{Stamp::satisfied, "p > 1/2"};
    auto second = mixed_norm_truncated(modulus_function(f, Order::second), {p, p, RadialWeight::power(p - 1.0)},
                                       opt.norm_depth);
    auto hardy = hardy_norm_truncated(derivative_modulus(f), p, opt.norm_depth).pth_power;
    return make_dual(std::move(second), std::move(hardy), std::move(h), opt.classifier);
}

/// ||Theta'||^q in A^{p,q}_omega against ||Theta'||^{q+x} in A^{p+xp/q, q+x}_{omega_x}.
inline RatioReport corollary41_ratio(const InnerFunction& f, const MixedNormParams& params, double x, int m_lo,
                                     int m_hi)
{
    const CircleFn d = derivative_modulus(f);
    const auto left = partial_sums(mixed_norm_truncated(d, params, m_hi));
    const auto shifted = shift_weight(params.omega, x);
    const MixedNormParams p2{params.p + x * params.p / params.q, params.q + x, shifted.weight};
    const auto right = partial_sums(mixed_norm_truncated(d, p2, m_hi));
    std::vector<RatioRow> rows;
    for (int m = m_lo; m <= m_hi; ++m) rows.push_back({m, left[m - 1], right[m - 1], 0.0});
    return ratio_report(rows);
}

}  // namespace innerfn
