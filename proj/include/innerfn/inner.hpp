#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "innerfn/common.hpp"
#include "innerfn/summation.hpp"

namespace innerfn {

inline constexpr double eps = std::numeric_limits<double>::epsilon();

/// Largest modulus at which inner functions may be evaluated.
inline const double max_eval_radius = 1.0 - std::ldexp(1.0, -40);

struct EvalResult {
    cplx value;
    double error_bound = 0.0;
    std::size_t terms_used = 0;
};

inline double pseudo_hyperbolic(cplx z, cplx w)
{
    if (!(std::abs(z) < 1.0) || !(std::abs(w) < 1.0)) throw DomainError("pseudo_hyperbolic: points must lie in the disc");
    return std::abs(z - w) / std::abs(1.0 - std::conj(w) * z);
}

/// Relative residual of |(1 - conj(a) z)/(z - a)|^2 = (1-|z|^2)(1-|a|^2)/|z-a|^2 + 1.
/// Returns 0 for z == a, where the identity is not defined.
inline double pseudo_hyperbolic_identity_residual(cplx z, cplx a)
{
    if (z == a) return 0.0;
    const double d2 = std::norm(z - a);
    const double lhs = std::norm(1.0 - std::conj(a) * z) / d2;
    const double rhs = (1.0 - std::norm(z)) * (1.0 - std::norm(a)) / d2 + 1.0;
    return std::abs(lhs - rhs) / rhs;
}

// ---------------------------------------------------------------------------
// Zero sequences

enum class ZeroSource { explicit_list, generator };

/// Zeros ordered by non-decreasing modulus, either listed or produced by index.
class ZeroSequence {
public:
    using Generator = std::function<cplx(std::size_t)>;
    using TailBound = std::function<double(std::size_t)>;  // bound on sum_{k >= N} (1 - |z_k|)

    static ZeroSequence explicit_list(std::vector<cplx> zeros)
    {
        for (const cplx& z : zeros) {
            if (!(std::abs(z) < 1.0)) throw DomainError("zero sequence: all zeros must satisfy |z| < 1");
        }
        sort_by_modulus(zeros);
        ZeroSequence s;
        s.name_ = "explicit";
        s.list_ = std::move(zeros);
        return s;
    }

    static ZeroSequence from_generator(std::string name, Generator g, std::optional<TailBound> tail)
    {
        ZeroSequence s;
        s.name_ = std::move(name);
        s.gen_ = std::move(g);
        s.tail_ = std::move(tail);
        return s;
    }

    /// z_k = 1 - 2^{-(k+1)}, k >= 0.
    static ZeroSequence exponential()
    {
        return from_generator(
            "exponential", [](std::size_t k) { return cplx(dyadic_radius(static_cast<int>(std::min<std::size_t>(k + 1, 1000))), 0.0); },
            [](std::size_t n) { return std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(n, 1100))); });
    }

    /// 1 - |z_k| = (k+2)^{-c} with golden-angle arguments, c > 1.
    static ZeroSequence polynomial_decay(double c)
    {
        if (!(c > 1.0)) throw DomainError("polynomial_decay zeros need c > 1");
        const double golden = pi * (3.0 - std::sqrt(5.0));
        return from_generator(
            "polynomial_decay(" + std::to_string(c) + ")",
            [c, golden](std::size_t k) {
                const double h = std::pow(static_cast<double>(k) + 2.0, -c);
                return std::polar(1.0 - h, golden * static_cast<double>(k));
            },
            [c](std::size_t n) { return std::pow(static_cast<double>(n) + 1.0, 1.0 - c) / (c - 1.0); });
    }

    [[nodiscard]] const std::string& name() const { return name_; }
    [[nodiscard]] ZeroSource source() const { return gen_ ? ZeroSource::generator : ZeroSource::explicit_list; }
    [[nodiscard]] bool finite() const { return !gen_; }
    [[nodiscard]] std::size_t size() const
    {
        if (gen_) throw DomainError("zero sequence is infinite");
        return list_.size();
    }
    [[nodiscard]] bool has_tail_bound() const { return finite() || tail_.has_value(); }

    [[nodiscard]] cplx at(std::size_t k) const
    {
        if (gen_) return (*gen_)(k);
        return list_.at(k);
    }

    /// First n zeros (all of them for a shorter finite list).
    [[nodiscard]] std::vector<cplx> first(std::size_t n) const
    {
        if (!gen_) return {list_.begin(), list_.begin() + static_cast<std::ptrdiff_t>(std::min(n, list_.size()))};
        std::vector<cplx> out(n);
        for (std::size_t k = 0; k < n; ++k) out[k] = (*gen_)(k);
        return out;
    }

    /// All zeros with |z| < r (relies on the modulus ordering).
    [[nodiscard]] std::vector<cplx> below(double r, std::size_t max_terms = std::size_t{1} << 26) const
    {
        std::vector<cplx> out;
        for (std::size_t k = 0;; ++k) {
            if (!gen_ && k >= list_.size()) break;
            if (k >= max_terms) throw ConvergenceError("zero sequence: too many zeros below requested radius");
            const cplx z = at(k);
            if (std::abs(z) >= r) break;
            out.push_back(z);
        }
        return out;
    }

    /// Partial Blaschke sum over the first N zeros.
    [[nodiscard]] double blaschke_sum(std::size_t n) const
    {
        const auto zs = first(n);
        std::vector<double> t(zs.size());
        for (std::size_t k = 0; k < zs.size(); ++k) t[k] = 1.0 - std::abs(zs[k]);
        return pairwise_sum(t);
    }

    /// Bound on the Blaschke tail beyond the first N zeros.
    [[nodiscard]] std::optional<double> tail_bound(std::size_t n) const
    {
        if (!gen_) {
            if (n >= list_.size()) return 0.0;
            std::vector<double> t;
            for (std::size_t k = n; k < list_.size(); ++k) t.push_back(1.0 - std::abs(list_[k]));
            return pairwise_sum(t);
        }
        if (tail_) return (*tail_)(n);
        return std::nullopt;
    }

    static void sort_by_modulus(std::vector<cplx>& zs)
    {
        std::stable_sort(zs.begin(), zs.end(), [](cplx a, cplx b) {
            const double ma = std::abs(a), mb = std::abs(b);
            if (ma != mb) return ma < mb;
            return std::arg(a) < std::arg(b);
        });
    }

private:
    std::string name_;
    std::vector<cplx> list_;
    std::optional<Generator> gen_;
    std::optional<TailBound> tail_;
};

// ---------------------------------------------------------------------------
// Inner functions

class InnerFunction;

struct FiniteBlaschke {
    std::vector<cplx> zeros;
    double lambda = 0.0;
};

struct InfiniteBlaschke {
    ZeroSequence zeros;
    double lambda = 0.0;
    std::size_t max_terms = std::size_t{1} << 24;
};

/// exp((m/2)(z+1)/(z-1)); mass 2 is S(z) = exp((z+1)/(z-1)).
struct AtomicSingular {
    double mass = 2.0;
};

struct Frostman {
    std::shared_ptr<const InnerFunction> base;
    cplx a;
};

class InnerFunction {
public:
    using Variant = std::variant<FiniteBlaschke, InfiniteBlaschke, AtomicSingular, Frostman>;

    InnerFunction(Variant v) : v_(std::move(v)) {}  // NOLINT(google-explicit-constructor)
    InnerFunction(FiniteBlaschke b) : v_(std::move(b)) {}  // NOLINT(google-explicit-constructor)
    InnerFunction(InfiniteBlaschke b) : v_(std::move(b)) {}  // NOLINT(google-explicit-constructor)
    InnerFunction(AtomicSingular s) : v_(s) {}  // NOLINT(google-explicit-constructor)
    InnerFunction(Frostman f) : v_(std::move(f)) {}  // NOLINT(google-explicit-constructor)

    static InnerFunction finite_blaschke(std::vector<cplx> zeros, double lambda = 0.0)
    {
        for (const cplx& z : zeros) {
            if (!(std::abs(z) < 1.0)) throw DomainError("Blaschke zeros must satisfy |z| < 1");
        }
        ZeroSequence::sort_by_modulus(zeros);
        return FiniteBlaschke{std::move(zeros), lambda};
    }
    static InnerFunction infinite_blaschke(ZeroSequence zeros, double lambda = 0.0)
    {
        return InfiniteBlaschke{std::move(zeros), lambda};
    }
    static InnerFunction atomic(double mass = 2.0)
    {
        if (!(mass > 0.0)) throw DomainError("atomic singular mass must be positive");
        return AtomicSingular{mass};
    }

    [[nodiscard]] const Variant& variant() const { return v_; }
    template <typename T>
    [[nodiscard]] const T* as() const
    {
        return std::get_if<T>(&v_);
    }

    [[nodiscard]] std::string describe() const;

private:
    Variant v_;
};

inline InnerFunction frostman_shift(const InnerFunction& f, cplx a)
{
    if (!(std::abs(a) < 1.0)) throw DomainError("frostman_shift: need |a| < 1");
    return Frostman{std::make_shared<const InnerFunction>(f), a};
}

inline std::string InnerFunction::describe() const
{
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, FiniteBlaschke>) {
                return "finite_blaschke(" + std::to_string(x.zeros.size()) + " zeros)";
            } else if constexpr (std::is_same_v<T, InfiniteBlaschke>) {
                return "infinite_blaschke(" + x.zeros.name() + ")";
            } else if constexpr (std::is_same_v<T, AtomicSingular>) {
                return "atomic(mass=" + std::to_string(x.mass) + ")";
            } else {
                return "frostman(" + x.base->describe() + ", a=" + std::to_string(x.a.real()) + "+" +
                       std::to_string(x.a.imag()) + "i)";
            }
        },
        v_);
}

namespace detail {

inline void check_point(cplx z)
{
    if (!(std::abs(z) <= max_eval_radius)) {
        throw DomainError("evaluation point too close to the unit circle (|z| > 1 - 2^-40)");
    }
}

/// Blaschke factor (|w|/w)(w - z)/(1 - conj(w) z), equal to z when w = 0.
inline cplx blaschke_factor(cplx w, cplx z)
{
    if (w == cplx(0.0)) return z;
    const double mw = std::abs(w);
    return (mw / w) * (w - z) / (1.0 - std::conj(w) * z);
}

inline cplx blaschke_factor_derivative(cplx w, cplx z)
{
    if (w == cplx(0.0)) return 1.0;
    const double mw = std::abs(w);
    const cplx d = 1.0 - std::conj(w) * z;
    return (mw / w) * (mw * mw - 1.0) / (d * d);
}

/// Value, first and second derivatives at one point.
struct Jet {
    cplx v, d1, d2;
    double e0 = 0.0, e1 = 0.0, e2 = 0.0;
    std::size_t terms = 0;
};

inline constexpr double near_zero_rho = 1e-6;

/// Derivatives of prod_k b_{w_k}(z) for a finite list.
inline Jet blaschke_jet(const std::vector<cplx>& ws, cplx z, int order)
{
    Jet j;
    j.terms = ws.size();
    const std::size_t n = ws.size();
    std::vector<cplx> b(n);
    double min_rho = inf;
    for (std::size_t k = 0; k < n; ++k) {
        b[k] = blaschke_factor(ws[k], z);
        min_rho = std::min(min_rho, std::abs(b[k]));
    }
    cplx prod = 1.0;
    for (const cplx& x : b) prod *= x;
    j.v = prod;
    const double round = 8.0 * eps * static_cast<double>(n + 1);
    j.e0 = round;
    if (order == 0) return j;

    const double h = 1.0 - std::abs(z);
    if (min_rho >= near_zero_rho) {
        // Logarithmic form: B'/B = sum (|w|^2 - 1)/((w - z)(1 - conj(w) z)).
        cplx L = 0.0, Lp = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const cplx w = ws[k];
            const double mw2 = std::norm(w);
            const cplx g = (w - z) * (1.0 - std::conj(w) * z);
            L += (mw2 - 1.0) / g;
            if (order >= 2) Lp += (mw2 - 1.0) * (1.0 + mw2 - 2.0 * std::conj(w) * z) / (g * g);
        }
        j.d1 = prod * L;
        j.e1 = round / (h * h);
        if (order >= 2) {
            j.d2 = prod * (L * L + Lp);
            j.e2 = round / (h * h * h);
        }
        return j;
    }
    // Product rule with prefix/suffix products near a zero.
    std::vector<cplx> pre(n + 1, 1.0), suf(n + 1, 1.0);
    for (std::size_t k = 0; k < n; ++k) pre[k + 1] = pre[k] * b[k];
    for (std::size_t k = n; k-- > 0;) suf[k] = suf[k + 1] * b[k];
    cplx d1 = 0.0;
    for (std::size_t k = 0; k < n; ++k) d1 += blaschke_factor_derivative(ws[k], z) * pre[k] * suf[k + 1];
    j.d1 = d1;
    j.e1 = round / (h * h);
    if (order >= 2) {
        // Cauchy integral on a small circle; the integrand stays well scaled.
        const double rho = h / 4.0;
        constexpr int nodes = 32;
        cplx acc = 0.0;
        for (int k = 0; k < nodes; ++k) {
            const double t = two_pi * k / nodes;
            const cplx e = std::polar(1.0, t);
            cplx p = 1.0;
            for (const cplx& w : ws) p *= blaschke_factor(w, z + rho * e);
            acc += p / (e * e);
        }
        j.d2 = 2.0 * acc / (static_cast<double>(nodes) * rho * rho);
        j.e2 = 64.0 * round / (rho * rho);
    }
    return j;
}

/// Truncation length for an infinite product so the value (and derivatives
/// when order > 0) is certified within tol at z.
inline std::size_t certified_terms(const InfiniteBlaschke& b, cplx z, double tol, int order, double& bound_out)
{
    const double h = 1.0 - std::abs(z);
    auto bound = [&](std::size_t n) -> double {
        const auto t = b.zeros.tail_bound(n);
        if (!t) return inf;
        const double T = *t;
        const double rel = std::expm1(2.0 * T / h);
        double e = rel;
        if (order >= 1) e = std::max(e, rel / (h * (2.0 - h)) + 2.0 * T / (h * h));
        if (order >= 2) e = std::max(e, 2.0 * rel / (h * h * h) + 16.0 * T / (h * h * h));
        return e;
    };
    if (b.zeros.finite()) {
        bound_out = 0.0;
        return b.zeros.size();
    }
    if (!b.zeros.has_tail_bound()) throw ConvergenceError("cannot certify tolerance: zero sequence has no tail bound");
    std::size_t hi = 1;
    while (bound(hi) > tol) {
        if (hi >= b.max_terms) throw ConvergenceError("cannot certify tolerance within the term budget");
        hi = std::min(hi * 2, b.max_terms);
    }
    std::size_t lo = hi / 2;
    while (lo + 1 < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (bound(mid) <= tol) hi = mid; else lo = mid;
    }
    bound_out = bound(hi);
    return hi;
}

inline Jet atomic_jet(double mass, cplx z, int order)
{
    const cplx zm1 = z - 1.0;
    const cplx w = 0.5 * mass * (z + 1.0) / zm1;
    const cplx s = std::exp(w);
    Jet j;
    j.v = s;
    const double rel = 8.0 * eps * (std::abs(w) + 1.0);
    j.e0 = std::abs(s) * rel;
    if (order >= 1) {
        const cplx q = zm1 * zm1;
        j.d1 = -mass * s / q;
        j.e1 = std::abs(j.d1) * rel;
        if (order >= 2) {
            j.d2 = s * mass * (mass + 2.0 * zm1) / (q * q);
            j.e2 = std::abs(j.d2) * rel;
        }
    }
    return j;
}

inline Jet jet(const InnerFunction& f, cplx z, double tol, int order)
{
    return std::visit(
        [&](const auto& x) -> Jet {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, FiniteBlaschke>) {
                Jet j = blaschke_jet(x.zeros, z, order);
                const cplx rot = std::polar(1.0, x.lambda);
                j.v *= rot;
                j.d1 *= rot;
                j.d2 *= rot;
                return j;
            } else if constexpr (std::is_same_v<T, InfiniteBlaschke>) {
                double tail = 0.0;
                const std::size_t n = certified_terms(x, z, tol / 2.0, order, tail);
                Jet j = blaschke_jet(x.zeros.first(n), z, order);
                const cplx rot = std::polar(1.0, x.lambda);
                j.v *= rot;
                j.d1 *= rot;
                j.d2 *= rot;
                j.e0 += tail;
                j.e1 += tail;
                j.e2 += tail;
                return j;
            } else if constexpr (std::is_same_v<T, AtomicSingular>) {
                return atomic_jet(x.mass, z, order);
            } else {
                const cplx a = x.a;
                const double ma = std::abs(a);
                const double amp = (1.0 + ma) / (1.0 - ma);
                const Jet b = jet(*x.base, z, tol * (1.0 - ma) / (4.0 * (1.0 + ma)), order);
                const cplx den = 1.0 - std::conj(a) * b.v;
                const double k = 1.0 - ma * ma;
                Jet j;
                j.terms = b.terms;
                j.v = (b.v - a) / den;
                j.e0 = b.e0 * amp + 4.0 * eps;
                if (order >= 1) {
                    j.d1 = b.d1 * k / (den * den);
                    j.e1 = b.e1 * amp + std::abs(b.d1) * k * 2.0 * ma / std::pow(1.0 - ma, 3) * b.e0 +
                           4.0 * eps * std::abs(j.d1);
                }
                if (order >= 2) {
                    j.d2 = k * (b.d2 / (den * den) + 2.0 * std::conj(a) * b.d1 * b.d1 / (den * den * den));
                    j.e2 = b.e2 * amp + 4.0 * std::abs(b.d1) * b.e1 / std::pow(1.0 - ma, 3) +
                           8.0 * eps * std::abs(j.d2) + b.e0 * (std::abs(b.d2) + std::abs(b.d1 * b.d1)) * 8.0 /
                                                            std::pow(1.0 - ma, 4);
                }
                return j;
            }
        },
        f.variant());
}

inline EvalResult checked(cplx v, double err, std::size_t terms, double tol)
{
    if (!(err <= tol)) {
        throw ConvergenceError("cannot certify tolerance: error bound " + std::to_string(err) + " exceeds " +
                               std::to_string(tol));
    }
    return {v, err, terms};
}

}  // namespace detail

inline EvalResult eval(const InnerFunction& f, cplx z, double tol = 1e-12)
{
    if (!(tol > 0.0)) throw DomainError("eval: tol must be positive");
    detail::check_point(z);
    const auto j = detail::jet(f, z, tol, 0);
    return detail::checked(j.v, j.e0, j.terms, tol);
}

inline EvalResult eval_derivative(const InnerFunction& f, cplx z, double tol = 1e-12)
{
    if (!(tol > 0.0)) throw DomainError("eval_derivative: tol must be positive");
    detail::check_point(z);
    const auto j = detail::jet(f, z, tol, 1);
    return detail::checked(j.d1, j.e1, j.terms, tol);
}

inline EvalResult eval_second_derivative(const InnerFunction& f, cplx z, double tol = 1e-12)
{
    if (!(tol > 0.0)) throw DomainError("eval_second_derivative: tol must be positive");
    detail::check_point(z);
    const auto j = detail::jet(f, z, tol, 2);
    return detail::checked(j.d2, j.e2, j.terms, tol);
}

/// Value and derivative at once, without the tolerance check; used by sweeps
/// that carry relative error budgets themselves.
struct ValueAndDerivative {
    cplx value, derivative;
    double value_error = 0.0, derivative_error = 0.0;
};

inline ValueAndDerivative eval_jet(const InnerFunction& f, cplx z, double tol = 1e-12)
{
    detail::check_point(z);
    const auto j = detail::jet(f, z, tol, 1);
    return {j.v, j.d1, j.e0, j.e1};
}

// ---------------------------------------------------------------------------
// Fast modulus on circles

enum class Order { value = 0, first = 1, second = 2 };

/// |f^{(k)}(r e^{i theta})| as a callable; for the atomic singular function the
/// modulus comes from real arithmetic only.
inline std::function<double(double, double)> modulus_function(const InnerFunction& f, Order order, double tol = 1e-10)
{
    if (const auto* s = f.as<AtomicSingular>()) {
        const double m = s->mass;
        return [m, order](double r, double theta) {
            const double sh = std::sin(0.5 * theta);
            const double gap = 1.0 - r;
            const double q = gap * gap + 4.0 * r * sh * sh;  // |1 - z|^2
            const double P = gap * (1.0 + r) / q;
            const double mod = std::exp(-0.5 * m * P);
            switch (order) {
            case Order::value: return mod;
            case Order::first: return m * mod / q;
            case Order::second: {
                // |m + 2(z - 1)|
                const double c = std::cos(theta);
                const double re = m - 2.0 + 2.0 * r * c;
                const double im = 2.0 * r * std::sin(theta);
                return m * std::hypot(re, im) * mod / (q * q);
            }
            }
            return 0.0;
        };
    }
    auto fp = std::make_shared<const InnerFunction>(f);
    return [fp, order, tol](double r, double theta) {
        const cplx z = std::polar(r, theta);
        const auto j = detail::jet(*fp, z, tol, static_cast<int>(order));
        switch (order) {
        case Order::value: return std::abs(j.v);
        case Order::first: return std::abs(j.d1);
        case Order::second: return std::abs(j.d2);
        }
        return 0.0;
    };
}

// ---------------------------------------------------------------------------
// Diagnostics

struct SeparationReport {
    double separated_delta = 1.0;
    double uniformly_separated_inf = 1.0;
    std::size_t depth = 0;
};

inline SeparationReport separation_report(const std::vector<cplx>& zs)
{
    if (zs.size() < 2) throw DomainError("separation_report: need depth >= 2");
    SeparationReport rep;
    rep.depth = zs.size();
    rep.separated_delta = inf;
    rep.uniformly_separated_inf = inf;
    for (std::size_t n = 0; n < zs.size(); ++n) {
        double log_prod = 0.0;
        for (std::size_t k = 0; k < zs.size(); ++k) {
            if (k == n) continue;
            const double rho = pseudo_hyperbolic(zs[k], zs[n]);
            if (k > n) rep.separated_delta = std::min(rep.separated_delta, rho);
            log_prod += std::log(rho);
        }
        rep.uniformly_separated_inf = std::min(rep.uniformly_separated_inf, std::exp(log_prod));
    }
    return rep;
}

inline SeparationReport separation_report(const ZeroSequence& seq, std::size_t depth)
{
    if (depth < 2) throw DomainError("separation_report: need depth >= 2");
    const auto zs = seq.first(depth);
    if (zs.size() < 2) throw DomainError("separation_report: fewer than two zeros available");
    return separation_report(zs);
}

struct SchwarzPickReport {
    double max_violation = -inf;
    double error_budget = 0.0;  // evaluation error allowance at the worst point
    cplx worst_point;
    std::size_t samples = 0;
};

/// max over random z of |f'(z)|(1-|z|^2) - (1 - |f(z)|^2). Points are uniform
/// on the disc of radius 1 - 1e-4.
inline SchwarzPickReport schwarz_pick_check(const InnerFunction& f, std::size_t samples, std::uint64_t seed)
{
    if (samples < 1) throw DomainError("schwarz_pick_check: need at least one sample");
    std::mt19937_64 eng(seed);
    SchwarzPickReport rep;
    rep.samples = samples;
    const double rmax = 1.0 - 1e-4;
    for (std::size_t i = 0; i < samples; ++i) {
        const double r = rmax * std::sqrt(uniform01(eng));
        const double t = two_pi * uniform01(eng);
        const cplx z = std::polar(r, t);
        const auto j = eval_jet(f, z, 1e-12);
        const double lhs = std::abs(j.derivative) * (1.0 - r * r);
        const double rhs = 1.0 - std::norm(j.value);
        const double v = lhs - rhs;
        if (v > rep.max_violation) {
            rep.max_violation = v;
            rep.worst_point = z;
            rep.error_budget = j.derivative_error * (1.0 - r * r) + 2.0 * j.value_error + 8.0 * eps;
        }
    }
    return rep;
}

}  // namespace innerfn
