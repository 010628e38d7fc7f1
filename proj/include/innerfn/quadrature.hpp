#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gsl/gsl_integration.h>

#include "innerfn/common.hpp"
#include "innerfn/summation.hpp"

namespace innerfn::quad {

struct Rule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;  // sum to 2
};

/// Gauss-Legendre rule with n nodes from GSL's tables. Rules are built once
/// per n and cached for the life of the process.
inline const Rule& gauss_legendre(int n)
{
    static std::mutex m;
    static std::map<int, Rule> cache;
    std::lock_guard lock(m);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
    if (n < 1) throw DomainError("gauss_legendre: need at least one node");

    gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(n));
    if (!table) throw DomainError("gauss_legendre: table allocation failed");
    Rule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        gsl_integration_glfixed_point(-1.0, 1.0, static_cast<std::size_t>(i), &rule.nodes[i], &rule.weights[i], table);
    }
    gsl_integration_glfixed_table_free(table);
    // GSL lists nodes from the centre outwards; keep them ascending
    std::vector<std::size_t> order(n);
    for (int i = 0; i < n; ++i) order[i] = static_cast<std::size_t>(i);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rule.nodes[a] < rule.nodes[b]; });
    Rule sorted;
    for (std::size_t i : order) {
        sorted.nodes.push_back(rule.nodes[i]);
        sorted.weights.push_back(rule.weights[i]);
    }
    return cache.emplace(n, std::move(sorted)).first->second;
}

/// Fixed Gauss-Legendre integral of f over [a, b].
template <typename F>
double gauss(F&& f, double a, double b, int n)
{
    const Rule& rule = gauss_legendre(n);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    std::vector<double> terms(rule.nodes.size());
    for (std::size_t i = 0; i < terms.size(); ++i) {
        terms[i] = rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    return half * pairwise_sum(terms);
}

/// Result of a log-space integral: log of the value and a relative error estimate.
struct LogIntegral {
    double log_value = -inf;
    double rel_error = 0.0;
};

namespace detail {

inline constexpr double log_range_per_piece = 30.0;  // dynamic range handed to one GK call
inline constexpr double log_negligible = 80.0;       // pieces this far below the peak are dropped
inline constexpr int max_split_depth = 60;

template <typename LogF>
void log_gk_pieces(LogF& log_f, double a, double b, double peak, double rel_tol, int depth, LogSum& total,
                   double& abs_err_scaled, double err_ref)
{
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double hi = std::max(log_f(a), log_f(b));
    double lo = std::min(log_f(a), log_f(b));
    for (double x : GK::abscissa()) {
        for (double l : {log_f(mid - half * x), log_f(mid + half * x)}) {
            hi = std::max(hi, l);
            lo = std::min(lo, l);
        }
    }
    if (!(hi < inf) || std::isnan(hi)) throw ConvergenceError("log_gauss_kronrod: integrand not finite");
    if (hi == -inf || hi < peak - log_negligible) return;
    if (hi - lo > log_range_per_piece && depth < max_split_depth) {
        log_gk_pieces(log_f, a, mid, peak, rel_tol, depth + 1, total, abs_err_scaled, err_ref);
        log_gk_pieces(log_f, mid, b, peak, rel_tol, depth + 1, total, abs_err_scaled, err_ref);
        return;
    }
    auto scaled = [&](double x) {
        const double l = log_f(x);
        return l == -inf ? 0.0 : std::exp(l - hi);
    };
    double err = 0.0;
    const double v = GK::integrate(scaled, a, b, 10, rel_tol, &err);
    if (!(v > 0.0)) return;
    total.add(hi + std::log(v));
    abs_err_scaled += std::exp(hi - err_ref) * err;
}

}  // namespace detail

/// Integral of exp(log_f) over [a, b] for integrands far outside the double
/// range (e.g. exp(-1/(1-r)) near r = 1). The interval is split until each
/// piece spans a modest dynamic range, pieces negligible against the largest
/// sampled value are dropped, and each remaining piece goes to adaptive
/// Gauss-Kronrod after rescaling.
template <typename LogF>
LogIntegral log_gauss_kronrod(LogF&& log_f, double a, double b, double rel_tol)
{
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double peak = std::max(log_f(a), log_f(b));
    for (double x : GK::abscissa()) peak = std::max({peak, log_f(mid - half * x), log_f(mid + half * x)});
    if (peak == -inf) return {};
    if (!std::isfinite(peak)) throw ConvergenceError("log_gauss_kronrod: integrand not finite");

    LogSum total;
    double abs_err_scaled = 0.0;  // in units of exp(peak)
    detail::log_gk_pieces(log_f, a, b, peak, rel_tol, 0, total, abs_err_scaled, peak);
    LogIntegral out;
    out.log_value = total.value();
    if (out.log_value == -inf) return out;
    out.rel_error = abs_err_scaled * std::exp(peak - out.log_value);
    return out;
}

}  // namespace innerfn::quad
