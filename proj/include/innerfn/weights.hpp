#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gsl/gsl_sf_expint.h>

#include "innerfn/common.hpp"
#include "innerfn/quadrature.hpp"
#include "innerfn/summation.hpp"

namespace innerfn {

enum class WeightFamily { power, power_log, exponential, custom };

inline const char* to_string(WeightFamily f)
{
    switch (f) {
    case WeightFamily::power: return "power";
    case WeightFamily::power_log: return "power_log";
    case WeightFamily::exponential: return "exponential";
    case WeightFamily::custom: return "custom";
    }
    return "?";
}

/// A radial weight on the unit disc. Internally every evaluator is a function
/// of the boundary gap h = 1 - r and works with logarithms, which keeps tails
/// of rapidly vanishing weights representable at any depth.
class RadialWeight {
public:
    using GapFn = std::function<double(double)>;

    RadialWeight(std::string name, WeightFamily family, std::vector<double> params, GapFn log_density,
                 std::optional<GapFn> log_tail = std::nullopt,
                 std::optional<double> boundary_exponent = std::nullopt)
        : name_(std::move(name)),
          family_(family),
          params_(std::move(params)),
          log_density_(std::move(log_density)),
          log_tail_(std::move(log_tail)),
          boundary_exponent_(boundary_exponent)
    {
    }

    /// omega(r) = (1 - r)^alpha, alpha > -1.
    static RadialWeight power(double alpha)
    {
        if (!(alpha > -1.0)) throw DomainError("power weight needs alpha > -1");
        return RadialWeight(
            "power(" + fmt_num(alpha) + ")", WeightFamily::power, {alpha},
            [alpha](double h) { return alpha == 0.0 ? 0.0 : alpha * std::log(h); },
            [alpha](double h) { return (alpha + 1.0) * std::log(h) - std::log(alpha + 1.0); }, alpha);
    }

    /// omega(r) = (1 - r)^alpha (log(e/(1 - r)))^beta.
    static RadialWeight power_log(double alpha, double beta)
    {
        if (!(alpha > -1.0)) throw DomainError("power_log weight needs alpha > -1");
        return RadialWeight(
            "power_log(" + fmt_num(alpha) + "," + fmt_num(beta) + ")", WeightFamily::power_log,
            {alpha, beta},
            [alpha, beta](double h) {
                const double lh = std::log(h);
                return alpha * lh + beta * std::log(1.0 - lh);
            },
            std::nullopt, alpha);
    }

    /// omega(r) = exp(-1/(1 - r)).
    static RadialWeight exponential()
    {
        // tail int_0^h e^{-1/u} du = e^{-x} (1/x - e^x E1(x)), x = 1/h
        return RadialWeight("exponential", WeightFamily::exponential, {}, [](double h) { return -1.0 / h; },
                            [](double h) {
                                const double x = 1.0 / h;
                                double rest;
                                if (x > 1e4) {
                                    // asymptotic e^x E1(x) = (1/x) sum (-1)^k k! / x^k
                                    const double y = 1.0 / x;
                                    rest = y * y * (1.0 - y * (2.0 - y * (6.0 - y * (24.0 - 120.0 * y))));
                                } else {
                                    rest = 1.0 / x - gsl_sf_expint_E1_scaled(x);
                                }
                                return -x + std::log(rest);
                            });
    }

    /// Density at r.
    double operator()(double r) const { return density_at_gap(1.0 - r); }
    double density_at_gap(double h) const
    {
        const double l = log_density_(h);
        return l == -inf ? 0.0 : std::exp(l);
    }
    double log_density(double h) const { return log_density_(h); }

    [[nodiscard]] bool has_closed_tail() const { return log_tail_.has_value(); }
    double closed_log_tail(double h) const { return (*log_tail_)(h); }

    [[nodiscard]] const std::string& name() const { return name_; }
    [[nodiscard]] WeightFamily family() const { return family_; }
    [[nodiscard]] const std::vector<double>& params() const { return params_; }
    [[nodiscard]] std::optional<double> boundary_exponent() const { return boundary_exponent_; }

    /// c * omega for c > 0.
    [[nodiscard]] RadialWeight scaled(double c) const
    {
        if (!(c > 0.0)) throw DomainError("weight scale must be positive");
        const double lc = std::log(c);
        auto ld = [f = log_density_, lc](double h) { return f(h) + lc; };
        std::optional<GapFn> lt;
        if (log_tail_) lt = [f = *log_tail_, lc](double h) { return f(h) + lc; };
        return RadialWeight(fmt_num(c) + "*" + name_, WeightFamily::custom, {c}, ld, lt, boundary_exponent_);
    }

    static std::string fmt_num(double x)
    {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", x);
        return buf;
    }

private:
    std::string name_;
    WeightFamily family_;
    std::vector<double> params_;
    GapFn log_density_;
    std::optional<GapFn> log_tail_;
    std::optional<double> boundary_exponent_;
};

/// Named custom weights; configs may only refer to these.
inline std::map<std::string, std::function<RadialWeight()>>& weight_registry()
{
    static std::map<std::string, std::function<RadialWeight()>> reg = {
        {"log_bergman", [] { return RadialWeight::power_log(1.0, 1.0); }},
        {"exp_singular", [] { return RadialWeight::exponential(); }},
        {"inverse_log_square",
         [] {
             // omega = 1/((1-r) log^2(e/(1-r))), tail 1/log(e/(1-r)): in D-hat, not in D-check.
             return RadialWeight(
                 "inverse_log_square", WeightFamily::custom, {},
                 [](double h) { return -std::log(h) - 2.0 * std::log(1.0 - std::log(h)); },
                 [](double h) { return -std::log(1.0 - std::log(h)); });
         }},
    };
    return reg;
}

inline RadialWeight custom_weight(const std::string& name)
{
    auto& reg = weight_registry();
    auto it = reg.find(name);
    if (it == reg.end()) throw DomainError("unknown custom weight '" + name + "'");
    return it->second();
}

namespace detail {

// Tighter requests make the Kronrod recursion chase roundoff; achieved errors are
// typically near 1e-13.
inline constexpr double tail_rel_tol = 1e-9;
inline constexpr double tail_t_max = 1000.0;

/// log of int_{r(t_a)}^{r(t_b)} g(s) ds with r(t) = 1 - 2^{-t}, where log_g is
/// given as a function of the gap h. Unit panels in t.
template <typename LogG>
double log_integral_dyadic(LogG&& log_g, double t_a, double t_b, const std::string& what)
{
    LogSum total;
    auto log_integrand = [&](double t) {
        const double h = std::exp2(-t);
        const double lg = log_g(h);
        return lg == -inf ? -inf : lg + std::log(ln2 * h);
    };
    for (double t = t_a; t < t_b; t += 1.0) {
        const double te = std::min(t + 1.0, t_b);
        const auto part = quad::log_gauss_kronrod(log_integrand, t, te, tail_rel_tol);
        total.add(part.log_value);
        if (part.rel_error * std::exp(part.log_value - total.value()) > 1e-6) {
            throw ConvergenceError("quadrature failed to converge for " + what);
        }
    }
    return total.value();
}

/// log of int_{1-h}^{1} g(s) ds; throws when the tail does not settle.
template <typename LogG>
double log_tail_dyadic(LogG&& log_g, double h, const std::string& what)
{
    LogSum total;
    auto log_integrand = [&](double t) {
        const double hh = std::exp2(-t);
        const double lg = log_g(hh);
        return lg == -inf ? -inf : lg + std::log(ln2 * hh);
    };
    const double t0 = -std::log2(h);
    int negligible = 0;
    for (double t = t0; t < tail_t_max; t += 1.0) {
        const auto part = quad::log_gauss_kronrod(log_integrand, t, t + 1.0, tail_rel_tol);
        total.add(part.log_value);
        const double cur = total.value();
        // judge each panel's error by its share of the running total
        if (part.rel_error * std::exp(part.log_value - cur) > 1e-6) {
            throw ConvergenceError("quadrature failed to converge for " + what);
        }
        if (part.log_value == -inf || part.log_value < cur - 45.0) {
            if (++negligible >= 3 && log_integrand(t + 1.0) <= log_integrand(t)) return cur;
        } else {
            negligible = 0;
        }
    }
    throw ConvergenceError("weight '" + what + "' is not integrable near r = 1");
}

}  // namespace detail

/// log of the tail integral at gap h = 1 - r.
inline double log_tail_at_gap(const RadialWeight& w, double h)
{
    if (!(h > 0.0) || h > 1.0) throw DomainError("tail_integral: r must lie in [0,1)");
    if (w.has_closed_tail()) return w.closed_log_tail(h);
    return detail::log_tail_dyadic([&w](double g) { return w.log_density(g); }, h, w.name());
}

inline double tail_at_gap(const RadialWeight& w, double h)
{
    const double l = log_tail_at_gap(w, h);
    return l == -inf ? 0.0 : std::exp(l);
}

/// omega-hat(r) = int_r^1 omega(s) ds.
inline double tail_integral(const RadialWeight& w, double r)
{
    if (!(r >= 0.0) || !(r < 1.0)) throw DomainError("tail_integral: r must lie in [0,1)");
    return tail_at_gap(w, 1.0 - r);
}

/// Numerically integrated tail, ignoring any closed form.
inline double numeric_tail_integral(const RadialWeight& w, double r)
{
    const double l = detail::log_tail_dyadic([&w](double g) { return w.log_density(g); }, 1.0 - r, w.name());
    return l == -inf ? 0.0 : std::exp(l);
}

// ---------------------------------------------------------------------------
// Classification

enum class Membership { member, non_member, inconclusive };

inline const char* to_string(Membership m)
{
    switch (m) {
    case Membership::member: return "member";
    case Membership::non_member: return "non_member";
    case Membership::inconclusive: return "inconclusive";
    }
    return "?";
}

struct ClassTest {
    Membership status = Membership::inconclusive;
    double constant = 0.0;         // empirical sup (or inf) at the deepest level
    std::vector<double> history;   // running sup/inf for depths 8..grid_depth (log scale for D-hat)
};

struct PClassTest {
    double p = 0.0;
    ClassTest dhat_p;
    ClassTest dcheck_p;
};

struct WeightClassReport {
    std::string weight;
    int grid_depth = 0;
    ClassTest dhat;
    ClassTest dcheck;
    double K = 2.0;
    double alpha_hat = 0.0;
    double beta_hat = 0.0;
    double fitted_exponent = 0.0;
    std::vector<PClassTest> p_classes;
    std::vector<double> grid;

    [[nodiscard]] bool in_Dhat() const { return dhat.status == Membership::member; }
    [[nodiscard]] bool in_Dcheck() const { return dcheck.status == Membership::member; }
    [[nodiscard]] bool in_R() const { return in_Dhat() && in_Dcheck(); }
};

namespace detail {

inline constexpr int first_rule_depth = 8;
inline constexpr double stable_change = 0.05;
inline constexpr double growth_step = 0.25;
inline constexpr int growth_steps_checked = 4;

/// Applies the stabilization rule to running log-sups log_sup[M], M = 0..D.
inline ClassTest decide_sup(const std::vector<double>& log_values)
{
    ClassTest out;
    const int d = static_cast<int>(log_values.size()) - 1;
    std::vector<double> running(log_values.size());
    double cur = -inf;
    for (int m = 0; m <= d; ++m) {
        cur = std::max(cur, log_values[m]);
        running[m] = cur;
    }
    for (int m = std::min(first_rule_depth, d); m <= d; ++m) out.history.push_back(running[m]);
    out.constant = std::exp(running[d]);
    if (running[d] == inf || std::isnan(running[d])) {
        out.status = Membership::non_member;
        return out;
    }
    const double change = std::expm1(running[d] - running[d - 2]);
    if (change < stable_change) {
        out.status = Membership::member;
        return out;
    }
    bool growing = true;
    for (int m = d - growth_steps_checked; m < d; ++m) {
        if (!(running[m + 1] - running[m] > std::log1p(growth_step))) growing = false;
    }
    out.status = growing ? Membership::non_member : Membership::inconclusive;
    return out;
}

/// Lower-doubling rule on log ratios log Q_m, m = 0..D: needs inf Q > 1 with a
/// stable margin.
inline ClassTest decide_inf_above_one(const std::vector<double>& log_values)
{
    ClassTest out;
    const int d = static_cast<int>(log_values.size()) - 1;
    std::vector<double> running(log_values.size());
    double cur = inf;
    for (int m = 0; m <= d; ++m) {
        cur = std::min(cur, log_values[m]);
        running[m] = cur;
    }
    for (int m = std::min(first_rule_depth, d); m <= d; ++m) out.history.push_back(std::exp(running[m]));
    out.constant = std::exp(running[d]);
    if (!(running[d] > 0.0)) {
        out.status = Membership::non_member;
        return out;
    }
    // stability is judged on the margin Q - 1, which is what must stay away from 0
    const double margin = std::expm1(running[d]);
    const double change = std::abs(margin / std::expm1(running[d - 2]) - 1.0);
    if (change < stable_change) {
        out.status = Membership::member;
        return out;
    }
    bool shrinking = true;
    for (int m = d - growth_steps_checked; m < d; ++m) {
        const double now = std::expm1(running[m + 1]);
        const double before = std::expm1(running[m]);
        if (!(now < before / (1.0 + growth_step))) shrinking = false;
    }
    out.status = shrinking ? Membership::non_member : Membership::inconclusive;
    return out;
}

}  // namespace detail

/// Evaluates the doubling-class inequalities of w on the dyadic grid
/// r_m = 1 - 2^{-m}, m = 0..grid_depth, and fits the boundary exponents.
inline WeightClassReport classify_weight(const RadialWeight& w, const std::vector<double>& p_list, int grid_depth,
                                         double K = 2.0)
{
    if (grid_depth < 8) throw DomainError("classify_weight: grid_depth must be at least 8");
    if (!(K > 1.0)) throw DomainError("classify_weight: K must exceed 1");
    const int d = grid_depth;
    WeightClassReport rep;
    rep.weight = w.name();
    rep.grid_depth = d;
    rep.K = K;

    std::vector<double> log_tail(d + 2);
    for (int m = 0; m <= d + 1; ++m) {
        rep.grid.push_back(dyadic_radius(m));
        log_tail[m] = log_tail_at_gap(w, dyadic_gap(m));
    }

    // D-hat: omega-hat(r) <= C omega-hat((1+r)/2).
    std::vector<double> log_up(d + 1);
    for (int m = 0; m <= d; ++m) log_up[m] = log_tail[m] - log_tail[m + 1];
    rep.dhat = detail::decide_sup(log_up);
    for (double& v : rep.dhat.history) v = std::exp(v);

    // D-check: omega-hat(r) >= C omega-hat(1 - (1-r)/K).
    std::vector<double> log_down(d + 1);
    for (int m = 0; m <= d; ++m) {
        log_down[m] = (K == 2.0) ? log_up[m] : log_tail[m] - log_tail_at_gap(w, dyadic_gap(m) / K);
    }
    rep.dcheck = detail::decide_inf_above_one(log_down);

    // Local exponents over the five deepest grid points.
    std::vector<double> slopes;
    for (int m = d - 4; m < d; ++m) slopes.push_back((log_tail[m] - log_tail[m + 1]) / ln2);
    rep.alpha_hat = *std::min_element(slopes.begin(), slopes.end());
    rep.beta_hat = *std::max_element(slopes.begin(), slopes.end());
    {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const int n = 5;
        for (int m = d - 4; m <= d; ++m) {
            const double x = std::log(dyadic_gap(m));
            const double y = log_tail[m];
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        rep.fitted_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }

    for (double p : p_list) {
        PClassTest pc;
        pc.p = p;
        auto log_g = [&w, p](double h) {
            const double l = w.log_density(h);
            return l == -inf ? -inf : l - p * std::log(h);
        };
        // (1-r)^p / omega-hat(r) * int_0^r omega(s) (1-s)^{-p} ds
        std::vector<double> log_head(d + 1, -inf);
        double acc = -inf;
        for (int m = 1; m <= d; ++m) {
            acc = log_add(acc, detail::log_integral_dyadic(log_g, m - 1, m, w.name()));
            log_head[m] = p * std::log(dyadic_gap(m)) - log_tail[m] + acc;
        }
        pc.dhat_p = detail::decide_sup(log_head);
        for (double& v : pc.dhat_p.history) v = std::exp(v);

        // (1-r)^p / omega-hat(r) * int_r^1 omega(s) (1-s)^{-p} ds
        std::vector<double> log_rest(d + 1);
        try {
            for (int m = 0; m <= d; ++m) {
                const double h = dyadic_gap(m);
                log_rest[m] = p * std::log(h) - log_tail[m] + detail::log_tail_dyadic(log_g, h, w.name());
            }
            pc.dcheck_p = detail::decide_sup(log_rest);
            for (double& v : pc.dcheck_p.history) v = std::exp(v);
        } catch (const ConvergenceError&) {
            pc.dcheck_p.status = Membership::non_member;
            pc.dcheck_p.constant = inf;
        }
        rep.p_classes.push_back(std::move(pc));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Shifted weights omega_x(r) = omega(r) (1 - r)^x

struct ShiftedWeight {
    RadialWeight base;
    double x = 0.0;
    RadialWeight weight;  // the shifted density itself

    double operator()(double r) const { return weight(r); }
};

inline ShiftedWeight shift_weight(const RadialWeight& w, double x)
{
    if (x == 0.0) return {w, 0.0, w};
    std::optional<RadialWeight> shifted;
    if (w.family() == WeightFamily::power) {
        const double a = w.params().at(0) + x;
        if (!(a > -1.0)) throw DomainError("shift_weight: shifted weight is not integrable");
        shifted = RadialWeight::power(a);
    } else if (w.family() == WeightFamily::power_log) {
        const double a = w.params().at(0) + x;
        if (!(a > -1.0)) throw DomainError("shift_weight: shifted weight is not integrable");
        shifted = RadialWeight::power_log(a, w.params().at(1));
    } else {
        const auto be = w.boundary_exponent();
        shifted = RadialWeight(
            w.name() + "*(1-r)^" + RadialWeight::fmt_num(x), WeightFamily::custom, {x},
            [base = w, x](double h) {
                const double l = base.log_density(h);
                return l == -inf ? -inf : l + x * std::log(h);
            },
            std::nullopt, be ? std::optional<double>(*be + x) : std::nullopt);
    }
    try {
        (void)log_tail_at_gap(*shifted, 1.0);
    } catch (const ConvergenceError&) {
        throw DomainError("shift_weight: shifted weight '" + shifted->name() + "' is not integrable");
    }
    return {w, x, *shifted};
}

}  // namespace innerfn
