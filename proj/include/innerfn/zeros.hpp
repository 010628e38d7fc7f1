#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "innerfn/common.hpp"
#include "innerfn/inner.hpp"
#include "innerfn/parallel.hpp"
#include "innerfn/quadrature.hpp"
#include "innerfn/summation.hpp"

namespace innerfn {

// ---------------------------------------------------------------------------
// Exact zeros of Frostman shifts of the atomic singular function

namespace detail {

inline void check_atomic_parameter(cplx a)
{
    if (a == cplx(0.0)) throw DomainError("Frostman parameter in exceptional set of S (a = 0)");
    if (!(std::abs(a) < 1.0)) throw DomainError("Frostman parameter must satisfy |a| < 1");
}

/// c_n scaled by 2/m, so that z_n = (c + 1)/(c - 1).
inline cplx atomic_c(cplx a, long n, double mass)
{
    return (2.0 / mass) * cplx(std::log(std::abs(a)), two_pi * static_cast<double>(n) + std::arg(a));
}

}  // namespace detail

/// z_n(a) solving exp((m/2)(z+1)/(z-1)) = a.
inline cplx atomic_zero(cplx a, long n, double mass = 2.0)
{
    detail::check_atomic_parameter(a);
    const cplx c = detail::atomic_c(a, n, mass);
    return (c + 1.0) / (c - 1.0);
}

/// 1 - |z_n(a)|^2 = -4 Re c / |c - 1|^2.
inline double atomic_zero_gap2(cplx a, long n, double mass = 2.0)
{
    detail::check_atomic_parameter(a);
    const cplx c = detail::atomic_c(a, n, mass);
    return -4.0 * c.real() / std::norm(c - 1.0);
}

struct IndexedZero {
    long n = 0;
    cplx z;
};

struct AtomicZeroList {
    cplx a;
    double mass = 2.0;
    std::vector<IndexedZero> zeros;  // increasing modulus, ties by argument
    double complete_below = 0.0;     // every zero with |z| < this radius is listed

    [[nodiscard]] std::vector<cplx> points() const
    {
        std::vector<cplx> out;
        out.reserve(zeros.size());
        for (const auto& iz : zeros) out.push_back(iz.z);
        return out;
    }
};

/// Zeros z_n(a) for n = -N..N.
inline AtomicZeroList atomic_frostman_zeros(cplx a, long N, double mass = 2.0)
{
    detail::check_atomic_parameter(a);
    if (N < 0) throw DomainError("atomic_frostman_zeros: N must be non-negative");
    AtomicZeroList out;
    out.a = a;
    out.mass = mass;
    out.zeros.reserve(static_cast<std::size_t>(2 * N + 1));
    for (long n = -N; n <= N; ++n) out.zeros.push_back({n, atomic_zero(a, n, mass)});
    std::stable_sort(out.zeros.begin(), out.zeros.end(), [](const IndexedZero& x, const IndexedZero& y) {
        const double mx = std::abs(x.z), my = std::abs(y.z);
        if (mx != my) return mx < my;
        return std::arg(x.z) < std::arg(y.z);
    });
    out.complete_below = std::min(std::abs(atomic_zero(a, N + 1, mass)), std::abs(atomic_zero(a, -N - 1, mass)));
    return out;
}

/// 1 - |z| for each listed zero, from the closed form rather than |z|.
inline std::vector<double> atomic_gaps(const AtomicZeroList& list)
{
    std::vector<double> out;
    out.reserve(list.zeros.size());
    for (const auto& iz : list.zeros) out.push_back(atomic_zero_gap2(list.a, iz.n, list.mass) / (1.0 + std::abs(iz.z)));
    return out;
}

namespace detail {

/// Index n of the k-th zero in modulus order, before tie resolution:
/// sorting |2 pi n + arg a| gives 0, -1, 1, -2, 2, ... for arg a >= 0.
inline long atomic_natural_index(std::size_t k, double theta)
{
    if (k == 0) return 0;
    const long j = static_cast<long>((k + 1) / 2);
    const bool first_of_pair = (k % 2 == 1);
    const long sign = theta >= 0.0 ? -1 : 1;
    return first_of_pair ? sign * j : -sign * j;
}

}  // namespace detail

/// The zeros of S_a (mass m) as an infinite sequence in modulus order, with
/// a closed-form Blaschke tail bound.
inline ZeroSequence atomic_frostman_sequence(cplx a, double mass = 2.0)
{
    detail::check_atomic_parameter(a);
    const double theta = std::arg(a);
    const bool ties_odd = (theta == 0.0);  // pairs (1,2), (3,4), ...
    const bool ties_even = (theta == pi);  // pairs (0,1), (2,3), ...
    auto gen = [a, mass, theta, ties_odd, ties_even](std::size_t k) {
        const long n = detail::atomic_natural_index(k, theta);
        std::optional<std::size_t> partner;
        if (ties_odd && k > 0) partner = (k % 2 == 1) ? k + 1 : k - 1;
        if (ties_even) partner = (k % 2 == 0) ? k + 1 : k - 1;
        const cplx z = atomic_zero(a, n, mass);
        if (!partner) return z;
        const cplx w = atomic_zero(a, detail::atomic_natural_index(*partner, theta), mass);
        const bool z_first = std::arg(z) <= std::arg(w);
        const bool k_first = k < *partner;
        return z_first == k_first ? z : w;
    };
    auto tail = [a, mass, theta](std::size_t n) {
        if (n == 0) return inf;
        const long idx = detail::atomic_natural_index(n, theta);
        const double X = std::abs(two_pi * static_cast<double>(idx) + theta);
        if (X == 0.0) return inf;
        const double re = -4.0 * (2.0 / mass) * std::log(std::abs(a));
        return re * (mass * mass / 4.0) * 2.0 * (1.0 / (X * X) + 1.0 / (two_pi * X));
    };
    return ZeroSequence::from_generator("atomic_frostman", gen, tail);
}

/// Number of zeros of S_a (mass m) with |z| < R, in O(1).
inline long atomic_count_below(cplx a, double R, double mass = 2.0)
{
    detail::check_atomic_parameter(a);
    if (R <= 0.0) return 0;
    if (!(R < 1.0)) throw DomainError("atomic_count_below: radius must be < 1");
    const double cre = (2.0 / mass) * std::log(std::abs(a));
    const double gap2 = (1.0 - R) * (1.0 + R);
    const double Q = -4.0 * cre / gap2 - (cre - 1.0) * (cre - 1.0);
    if (Q <= 0.0) return 0;
    // |Im c| < sqrt(Q), Im c = (2/m)(2 pi n + theta)
    const double s = std::sqrt(Q) * mass / 2.0;
    const double theta = std::arg(a);
    const double lo = (-s - theta) / two_pi;
    const double hi = (s - theta) / two_pi;
    const long cnt = static_cast<long>(std::ceil(hi)) - static_cast<long>(std::floor(lo)) - 1;
    return std::max(0L, cnt);
}

/// upsilon_n(a) for S_a: zeros in r_n <= |z| < r_{n+1}.
inline long atomic_annulus_count(cplx a, int n, double mass = 2.0)
{
    return atomic_count_below(a, dyadic_radius(n + 1), mass) - atomic_count_below(a, dyadic_radius(n), mass);
}

// ---------------------------------------------------------------------------
// Dyadic profiles

struct DyadicProfile {
    std::vector<long> counts;  // counts[n], n = 0..max_n
    int max_n = -1;
    std::optional<cplx> a;

    [[nodiscard]] long total() const
    {
        long s = 0;
        for (long c : counts) s += c;
        return s;
    }
    bool operator==(const DyadicProfile&) const = default;
};

/// Bins zeros into half-open annuli [r_n, r_{n+1}). complete_below is the
/// radius below which the list is known to be complete.
inline DyadicProfile dyadic_counts(const std::vector<cplx>& zeros, int max_n, double complete_below = 1.0,
                                   std::optional<cplx> a = std::nullopt)
{
    if (max_n < 0) throw DomainError("dyadic_counts: max_n must be non-negative");
    if (complete_below < dyadic_radius(max_n + 1)) {
        throw DomainError("dyadic_counts: zero list is incomplete below r_" + std::to_string(max_n + 1));
    }
    DyadicProfile p;
    p.max_n = max_n;
    p.a = a;
    p.counts.assign(static_cast<std::size_t>(max_n) + 1, 0);
    for (const cplx& z : zeros) {
        const double m = std::abs(z);
        if (!(m < 1.0)) throw DomainError("dyadic_counts: zero outside the disc");
        const int n = dyadic_index(m);
        if (n <= max_n) ++p.counts[static_cast<std::size_t>(n)];
    }
    return p;
}

inline DyadicProfile dyadic_counts(const AtomicZeroList& list, int max_n)
{
    return dyadic_counts(list.points(), max_n, list.complete_below, list.a);
}

/// Exact profile of S_a from the closed-form counts.
inline DyadicProfile atomic_profile(cplx a, int max_n, double mass = 2.0)
{
    DyadicProfile p;
    p.max_n = max_n;
    p.a = a;
    for (int n = 0; n <= max_n; ++n) p.counts.push_back(atomic_annulus_count(a, n, mass));
    return p;
}

// ---------------------------------------------------------------------------
// Finite Blaschke preimages

namespace detail {

/// Roots of sum c_k z^k (c back is the leading coefficient) by Aberth iteration.
inline std::vector<cplx> polynomial_roots(const std::vector<cplx>& c)
{
    const std::size_t d = c.size() - 1;
    if (d == 0) return {};
    if (d == 1) return {-c[0] / c[1]};
    auto eval = [&](cplx z, cplx& dp) {
        cplx p = c[d];
        dp = 0.0;
        for (std::size_t k = d; k-- > 0;) {
            dp = dp * z + p;
            p = p * z + c[k];
        }
        return p;
    };
    std::vector<cplx> z(d);
    for (std::size_t k = 0; k < d; ++k) z[k] = std::polar(0.5, two_pi * (static_cast<double>(k) + 0.25) / d + 0.4);
    for (int it = 0; it < 1000; ++it) {
        double worst = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            cplx dp;
            const cplx p = eval(z[k], dp);
            if (p == cplx(0.0)) continue;
            const cplx ratio = p / dp;
            cplx s = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                if (j != k) s += 1.0 / (z[k] - z[j]);
            }
            const cplx step = ratio / (1.0 - ratio * s);
            z[k] -= step;
            worst = std::max(worst, std::abs(step));
        }
        if (worst < 1e-15) break;
    }
    return z;
}

}  // namespace detail

/// Solutions of B(z) = a for a finite Blaschke product, polished by Newton.
inline std::vector<cplx> finite_blaschke_preimages(const FiniteBlaschke& b, cplx a)
{
    if (!(std::abs(a) < 1.0)) throw DomainError("preimages: need |a| < 1");
    const cplx rot = std::polar(1.0, b.lambda);
    // numerator e^{i lambda} prod u_k (w_k - z), denominator prod (1 - conj(w_k) z)
    std::vector<cplx> num{rot}, den{1.0};
    auto mul = [](std::vector<cplx>& poly, cplx c0, cplx c1) {
        std::vector<cplx> out(poly.size() + 1, 0.0);
        for (std::size_t k = 0; k < poly.size(); ++k) {
            out[k] += poly[k] * c0;
            out[k + 1] += poly[k] * c1;
        }
        poly = std::move(out);
    };
    for (const cplx& w : b.zeros) {
        if (w == cplx(0.0)) {
            mul(num, 0.0, 1.0);
        } else {
            const cplx u = std::abs(w) / w;
            mul(num, u * w, -u);
        }
        mul(den, 1.0, -std::conj(w));
    }
    std::vector<cplx> poly(num.size());
    for (std::size_t k = 0; k < num.size(); ++k) poly[k] = num[k] - a * den[k];
    auto roots = detail::polynomial_roots(poly);
    const InnerFunction f = b;
    for (cplx& z : roots) {
        for (int it = 0; it < 50; ++it) {
            const auto j = detail::jet(f, z, 1e-14, 1);
            if (j.d1 == cplx(0.0)) break;
            const cplx step = (j.v - a) / j.d1;
            z -= step;
            if (std::abs(step) < 1e-16) break;
        }
    }
    ZeroSequence::sort_by_modulus(roots);
    return roots;
}

// ---------------------------------------------------------------------------
// Argument-principle zero finder

struct CellRecord {
    int annulus = 0;
    int sector = 0;
    int winding = 0;
    int samples_per_edge = 0;
    int subdivisions = 0;
};

struct ZeroCertificate {
    std::vector<CellRecord> cells;
    int total_winding = 0;
    int boundary_winding = 0;  // winding of Theta_a along |z| = r_max
    int rotations = 0;
};

struct NumericZeros {
    std::vector<cplx> zeros;
    double complete_below = 0.0;
    ZeroCertificate certificate;
};

namespace detail {

struct Cell {
    double r0, r1, t0, t1;  // t1 - t0 == 2 pi with r0 == 0 means a full disc
    [[nodiscard]] bool is_disc() const { return r0 == 0.0; }
};

class ArgumentPrinciple {
public:
    ArgumentPrinciple(const InnerFunction& f, cplx a, double tol) : f_(f), a_(a), tol_(tol) {}

    struct Sample {
        cplx fz;     // Theta_a
        cplx logd;   // Theta_a' / Theta_a
    };

    Sample sample(cplx z) const
    {
        const auto j = jet(f_, z, 1e-13, 1);
        const cplx num = j.v - a_;
        const cplx den = 1.0 - std::conj(a_) * j.v;
        return {num / den, j.d1 / num + std::conj(a_) * j.d1 / den};
    }

    /// Boundary points in counterclockwise order with dz weights for one cell,
    /// using n Gauss nodes per edge.
    struct Contour {
        std::vector<cplx> z, dz;
    };

    static Contour contour(const Cell& c, int n)
    {
        const auto& rule = quad::gauss_legendre(n);
        Contour out;
        auto arc = [&](double r, double ta, double tb) {
            for (int i = 0; i < n; ++i) {
                const double s = 0.5 * (1.0 + rule.nodes[i]);
                const double t = ta + (tb - ta) * s;
                const cplx z = std::polar(r, t);
                out.z.push_back(z);
                out.dz.push_back(cplx(0.0, 1.0) * z * (tb - ta) * 0.5 * rule.weights[i]);
            }
        };
        auto seg = [&](double ra, double rb, double t) {
            const cplx e = std::polar(1.0, t);
            for (int i = 0; i < n; ++i) {
                const double s = 0.5 * (1.0 + rule.nodes[i]);
                out.z.push_back((ra + (rb - ra) * s) * e);
                out.dz.push_back(e * (rb - ra) * 0.5 * rule.weights[i]);
            }
        };
        if (c.is_disc()) {
            // Whole circle split into 8 arcs for resolution.
            for (int k = 0; k < 8; ++k) arc(c.r1, c.t0 + two_pi * k / 8, c.t0 + two_pi * (k + 1) / 8);
            return out;
        }
        arc(c.r1, c.t0, c.t1);
        seg(c.r1, c.r0, c.t1);
        arc(c.r0, c.t1, c.t0);
        seg(c.r0, c.r1, c.t0);
        return out;
    }

    struct Winding {
        bool ok = false;
        int value = 0;
        int samples = 0;
        double moment_z = 0.0;
        cplx centre;
    };

    /// Winding number of Theta_a around the cell boundary, certified by two
    /// estimates: the contour integral of the log-derivative and the sum of
    /// argument increments.
    Winding winding(const Cell& c) const
    {
        Winding w;
        for (int n = 64; n <= 8192; n *= 2) {
            const Contour ct = contour(c, n);
            cplx integral = 0.0, moment = 0.0;
            double arg_sum = 0.0;
            bool smooth = true;
            cplx prev;
            double fmin = inf;
            for (std::size_t i = 0; i < ct.z.size(); ++i) {
                const Sample s = sample(ct.z[i]);
                fmin = std::min(fmin, std::abs(s.fz));
                integral += s.logd * ct.dz[i];
                moment += ct.z[i] * s.logd * ct.dz[i];
                if (i > 0) {
                    const double d = std::arg(s.fz / prev);
                    if (std::abs(d) >= pi / 3.0) smooth = false;
                    arg_sum += d;
                }
                prev = s.fz;
            }
            {
                const Sample s0 = sample(ct.z.front());
                const double d = std::arg(s0.fz / prev);
                if (std::abs(d) >= pi / 3.0) smooth = false;
                arg_sum += d;
            }
            if (!(fmin > 1e-12)) return w;  // a zero sits on the contour
            const cplx W = integral / cplx(0.0, two_pi);
            const double k = std::round(W.real());
            const int by_arg = static_cast<int>(std::lround(arg_sum / two_pi));
            if (smooth && std::abs(W.real() - k) <= 0.05 && std::abs(W.imag()) <= 0.05 && by_arg == static_cast<int>(k)) {
                w.ok = true;
                w.value = static_cast<int>(k);
                w.samples = n;
                if (w.value == 1) w.centre = moment / cplx(0.0, two_pi);
                return w;
            }
        }
        return w;
    }

    /// Newton on Theta_a; converged when the last step is below tol
    /// (tol bounds the position error, not the residual).
    bool newton(cplx& z) const
    {
        const double k = 1.0 - std::norm(a_);
        double last = inf;
        for (int it = 0; it < 100; ++it) {
            const auto j = jet(f_, z, 1e-13, 1);
            const cplx den = 1.0 - std::conj(a_) * j.v;
            const cplx fz = (j.v - a_) / den;
            const cplx dfz = j.d1 * k / (den * den);
            if (fz == cplx(0.0)) return true;
            if (dfz == cplx(0.0)) return false;
            const cplx step = fz / dfz;
            z -= step;
            if (!(std::abs(z) < 1.0)) return false;
            last = std::abs(step);
            if (last <= 1e-3 * tol_) break;
        }
        return last <= tol_;
    }

    const InnerFunction& f_;
    cplx a_;
    double tol_;
};

inline bool in_cell(const Cell& c, cplx z, double slack)
{
    const double m = std::abs(z);
    if (m < c.r0 - slack || m > c.r1 + slack) return false;
    if (c.is_disc()) return true;
    double t = std::arg(z) - c.t0;
    t = std::fmod(t, two_pi);
    if (t < 0) t += two_pi;
    const double width = c.t1 - c.t0;
    return t <= width + slack / std::max(m, 1e-3) || t >= two_pi - slack / std::max(m, 1e-3);
}

}  // namespace detail

/// All solutions of Theta(z) = a with |z| <= r_max, each certified by the
/// argument principle on a dyadic annulus-sector tiling.
inline NumericZeros find_zeros_numeric(const InnerFunction& f, cplx a, double r_max, double tol)
{
    if (!(std::abs(a) < 1.0)) throw DomainError("find_zeros_numeric: need |a| < 1");
    if (!(r_max > 0.0) || !(r_max <= 1.0 - std::ldexp(1.0, -20))) {
        throw DomainError("find_zeros_numeric: r_max must lie in (0, 1 - 2^-20]");
    }
    if (!(tol > 0.0)) throw DomainError("find_zeros_numeric: tol must be positive");
    const detail::ArgumentPrinciple ap(f, a, tol);

    // annulus edges 0 = rho_0 < 1/2 = rho_1 < ... < rho_K = r_max
    std::vector<double> dyadic_edges{0.0};
    for (int n = 1; dyadic_radius(n) < r_max; ++n) dyadic_edges.push_back(dyadic_radius(n));
    dyadic_edges.push_back(r_max);
    const int annuli = static_cast<int>(dyadic_edges.size()) - 1;
    std::vector<double> edges = dyadic_edges;

    NumericZeros out;
    out.complete_below = r_max;

    struct AnnulusResult {
        std::vector<CellRecord> records;
        std::vector<cplx> zeros;
        int rotations = 0;
    };

    auto solve_cell = [&](const detail::Cell& top, int annulus, int sector, AnnulusResult& res) -> bool {
        struct Item {
            detail::Cell cell;
            int depth;
        };
        std::vector<Item> stack{{top, 0}};
        CellRecord rec{annulus, sector, 0, 0, 0};
        bool have_top = false;
        while (!stack.empty()) {
            const Item it = stack.back();
            stack.pop_back();
            const auto w = ap.winding(it.cell);
            if (!w.ok) {
                if (it.depth == 0) return false;
                throw ConvergenceError("cell inconclusive: annulus " + std::to_string(annulus) + " sector " +
                                       std::to_string(sector) + " (subcell depth " + std::to_string(it.depth) + ")");
            }
            if (!have_top) {
                rec.winding = w.value;
                rec.samples_per_edge = w.samples;
                have_top = true;
            }
            if (w.value < 0) throw ConvergenceError("negative winding in annulus " + std::to_string(annulus));
            if (w.value == 0) continue;
            if (w.value == 1) {
                // start from the moment centre, or the cell centre when the
                // moment is too rough; shrink the cell if Newton escapes
                cplx z = w.centre;
                if (!detail::in_cell(it.cell, z, 0.0)) {
                    z = std::polar(0.5 * (it.cell.r0 + it.cell.r1), 0.5 * (it.cell.t0 + it.cell.t1));
                }
                if (ap.newton(z) && detail::in_cell(it.cell, z, 1e-9)) {
                    res.zeros.push_back(z);
                    continue;
                }
                if (it.depth >= 16) {
                    throw ConvergenceError("Newton failed to converge in annulus " + std::to_string(annulus) +
                                           " sector " + std::to_string(sector));
                }
            }
            if (it.depth >= 16) {
                throw ConvergenceError("cell inconclusive: annulus " + std::to_string(annulus) + " sector " +
                                       std::to_string(sector) + " (winding " + std::to_string(w.value) +
                                       " does not separate)");
            }
            ++rec.subdivisions;
            const detail::Cell& c = it.cell;
            if (c.is_disc()) {
                // split the disc into an inner disc and four sectors of the ring
                const double rm = 0.5 * c.r1;
                stack.push_back({{0.0, rm, c.t0, c.t0 + two_pi}, it.depth + 1});
                for (int q = 0; q < 4; ++q) {
                    stack.push_back({{rm, c.r1, c.t0 + q * pi / 2, c.t0 + (q + 1) * pi / 2}, it.depth + 1});
                }
            } else {
                const double rm = 0.5 * (c.r0 + c.r1);
                const double tm = 0.5 * (c.t0 + c.t1);
                stack.push_back({{c.r0, rm, c.t0, tm}, it.depth + 1});
                stack.push_back({{c.r0, rm, tm, c.t1}, it.depth + 1});
                stack.push_back({{rm, c.r1, c.t0, tm}, it.depth + 1});
                stack.push_back({{rm, c.r1, tm, c.t1}, it.depth + 1});
            }
        }
        res.records.push_back(rec);
        return true;
    };

    auto solve_annulus = [&](std::size_t idx) -> std::optional<AnnulusResult> {
        const int n = static_cast<int>(idx);
        const int sectors = (n == 0) ? 1 : (1 << ((n + 1) / 2 + 3));
        const double width = two_pi / sectors;
        for (int rot = 0; rot < 6; ++rot) {
            AnnulusResult res;
            res.rotations = rot;
            const double offset = 0.1234567 * width + rot * 0.1713 * width;
            bool ok = true;
            for (int s = 0; s < sectors && ok; ++s) {
                detail::Cell c{edges[idx], edges[idx + 1], offset + s * width, offset + (s + 1) * width};
                if (n == 0) c = {0.0, edges[1], offset, offset + two_pi};
                ok = solve_cell(c, n, s, res);
            }
            if (ok) return res;
        }
        return std::nullopt;
    };

    // A zero on an annulus circle defeats every sector rotation; interior
    // circles are then pulled inward by a fraction of their gap. Binning
    // uses moduli, so the tiling need not follow r_n exactly.
    std::vector<AnnulusResult> results;
    int unresolved = -1;
    for (double shift : {0.0, 3.7e-3, 1.13e-2}) {
        for (int i = 1; i < annuli; ++i) edges[i] = dyadic_edges[i] - shift * (1.0 - dyadic_edges[i]);
        auto attempt = parallel_map<std::optional<AnnulusResult>>(static_cast<std::size_t>(annuli), solve_annulus);
        unresolved = -1;
        for (int i = 0; i < annuli && unresolved < 0; ++i) {
            if (!attempt[i]) unresolved = i;
        }
        if (unresolved < 0) {
            for (auto& r : attempt) results.push_back(std::move(*r));
            break;
        }
    }
    if (unresolved >= 0) {
        throw ConvergenceError("cell inconclusive: annulus " + std::to_string(unresolved) + " after sector rotations");
    }

    for (auto& r : results) {
        for (auto& rec : r.records) {
            out.certificate.total_winding += rec.winding;
            out.certificate.cells.push_back(rec);
        }
        out.certificate.rotations += r.rotations;
        out.zeros.insert(out.zeros.end(), r.zeros.begin(), r.zeros.end());
    }
    ZeroSequence::sort_by_modulus(out.zeros);
    for (std::size_t k = 1; k < out.zeros.size(); ++k) {
        if (std::abs(out.zeros[k] - out.zeros[k - 1]) < 1e-9) {
            throw ConvergenceError("zero finder produced a duplicate zero near a cell edge");
        }
    }
    if (static_cast<int>(out.zeros.size()) != out.certificate.total_winding) {
        throw ConvergenceError("winding total does not match the number of refined zeros");
    }

    // Independent global count along |z| = r_max.
    {
        bool done = false;
        const std::size_t n0 = std::max<std::size_t>(256, static_cast<std::size_t>(std::ceil(64.0 / (1.0 - r_max))));
        for (std::size_t n = n0; n <= (n0 << 6) && !done; n *= 2) {
            double sum = 0.0;
            bool smooth = true;
            cplx prev = ap.sample(std::polar(r_max, 0.0)).fz;
            const cplx first = prev;
            for (std::size_t i = 1; i <= n; ++i) {
                const cplx cur = (i == n) ? first : ap.sample(std::polar(r_max, two_pi * i / n)).fz;
                const double d = std::arg(cur / prev);
                if (std::abs(d) >= pi / 3.0) smooth = false;
                sum += d;
                prev = cur;
            }
            if (smooth) {
                out.certificate.boundary_winding = static_cast<int>(std::lround(sum / two_pi));
                done = true;
            }
        }
        if (!done) throw ConvergenceError("boundary winding along |z| = r_max not resolved");
        if (out.certificate.boundary_winding != out.certificate.total_winding) {
            throw ConvergenceError("cell windings do not add up to the boundary winding");
        }
    }
    return out;
}

/// Zeros of Theta_a inside |z| < R, with completeness certificate radius.
inline NumericZeros zeros_of_shift(const InnerFunction& f, cplx a, double R, double tol = 1e-12)
{
    if (const auto* s = f.as<AtomicSingular>()) {
        NumericZeros out;
        out.zeros = atomic_frostman_sequence(a, s->mass).below(R);
        out.complete_below = R;
        return out;
    }
    if (const auto* b = f.as<FiniteBlaschke>()) {
        NumericZeros out;
        out.zeros = finite_blaschke_preimages(*b, a);
        out.complete_below = 1.0;
        return out;
    }
    return find_zeros_numeric(f, a, R, tol);
}

// ---------------------------------------------------------------------------
// Disc averages of counts over a in D_delta

struct DiscAverage {
    int n = 0;
    double exponent = 1.0;
    double value = 0.0;
    double delta = 0.0;
    int nodes = 0;
};

namespace detail {

/// Midpoint polar grid over inner_cut <= |a| <= delta with radial and 4x
/// angular nodes; calls g(a, weight) for each node.
template <typename G>
void disc_grid(double delta, double inner_cut, int nodes, G&& g)
{
    const int nr = nodes;
    const int nt = 4 * nodes;
    const double dr = (delta - inner_cut) / nr;
    const double dt = two_pi / nt;
    for (int i = 0; i < nr; ++i) {
        const double rho = inner_cut + (i + 0.5) * dr;
        for (int k = 0; k < nt; ++k) {
            const double t = -pi + (k + 0.5) * dt;
            g(i, k, std::polar(rho, t), rho * dr * dt);
        }
    }
}

inline double inner_cutoff(const InnerFunction& f, double delta)
{
    return f.as<AtomicSingular>() ? delta * std::ldexp(1.0, -10) : 0.0;
}

}  // namespace detail

/// Disc averages for annuli 0..max_n at once. The zero sets of Theta_a are
/// computed once per node.
inline std::vector<DiscAverage> disc_average_profile(const InnerFunction& f, double delta, double exponent,
                                                     int max_n, int nodes)
{
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("disc average: delta must lie in (0,1)");
    if (!(exponent > 0.0)) throw DomainError("disc average: exponent must be positive");
    if (nodes < 1) throw DomainError("disc average: nodes must be positive");
    const double cut = detail::inner_cutoff(f, delta);
    std::vector<std::pair<cplx, double>> pts;
    detail::disc_grid(delta, cut, nodes, [&](int, int, cplx a, double w) { pts.emplace_back(a, w); });

    const double R = dyadic_radius(max_n + 1);
    const auto* atomic = f.as<AtomicSingular>();
    auto per_node = parallel_map<std::vector<double>>(pts.size(), [&](std::size_t i) {
        const cplx a = pts[i].first;
        std::vector<double> terms(static_cast<std::size_t>(max_n) + 1, 0.0);
        DyadicProfile prof;
        if (atomic) {
            prof = atomic_profile(a, max_n, atomic->mass);
        } else {
            const auto zs = zeros_of_shift(f, a, R);
            prof = dyadic_counts(zs.zeros, max_n, zs.complete_below, a);
        }
        for (int n = 0; n <= max_n; ++n) {
            const long c = prof.counts[static_cast<std::size_t>(n)];
            terms[static_cast<std::size_t>(n)] = c > 0 ? std::pow(static_cast<double>(c), exponent) * pts[i].second : 0.0;
        }
        return terms;
    });
    std::vector<DiscAverage> out;
    for (int n = 0; n <= max_n; ++n) {
        std::vector<double> col(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) col[i] = per_node[i][static_cast<std::size_t>(n)];
        out.push_back({n, exponent, pairwise_sum(col), delta, nodes});
    }
    return out;
}

inline DiscAverage disc_average_counts(const InnerFunction& f, double delta, double exponent, int n, int nodes)
{
    if (n < 0) throw DomainError("disc average: n must be non-negative");
    if (const auto* s = f.as<AtomicSingular>()) {
        if (!(delta > 0.0 && delta < 1.0)) throw DomainError("disc average: delta must lie in (0,1)");
        if (!(exponent > 0.0)) throw DomainError("disc average: exponent must be positive");
        if (nodes < 1) throw DomainError("disc average: nodes must be positive");
        std::vector<double> terms;
        detail::disc_grid(delta, detail::inner_cutoff(f, delta), nodes, [&](int, int, cplx a, double w) {
            const long c = atomic_annulus_count(a, n, s->mass);
            terms.push_back(c > 0 ? std::pow(static_cast<double>(c), exponent) * w : 0.0);
        });
        return {n, exponent, pairwise_sum(terms), delta, nodes};
    }
    return disc_average_profile(f, delta, exponent, n, nodes).back();
}

}  // namespace innerfn
