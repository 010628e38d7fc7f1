#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace innerfn {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double ln2 = std::numbers::ln2;
inline constexpr double inf = std::numeric_limits<double>::infinity();

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad argument or violated precondition.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure could not reach or certify its tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// r_n = 1 - 2^{-n}, exact in binary floating point for n <= 52.
inline double dyadic_radius(int n) { return 1.0 - std::ldexp(1.0, -n); }

/// 1 - r_n.
inline double dyadic_gap(int n) { return std::ldexp(1.0, -n); }

/// Annulus index n with r_n <= x < r_{n+1}; x must lie in [0, 1).
inline int dyadic_index(double x)
{
    if (!(x >= 0.0) || !(x < 1.0)) {
        throw DomainError("dyadic_index: modulus outside [0,1)");
    }
    // 1 - x is exact for x >= 1/2 and rounds harmlessly below.
    const double h = 1.0 - x;
    int e = 0;
    const double mant = std::frexp(h, &e);  // h = mant * 2^e, mant in [0.5, 1)
    // h in (2^{-n-1}, 2^{-n}] gives n = -e when mant == 0.5 exactly, else -e.
    int n = (mant == 0.5) ? -(e - 1) : -e;
    // Guard against the rounding of 1 - x for tiny x.
    while (n > 0 && x < dyadic_radius(n)) --n;
    while (x >= dyadic_radius(n + 1)) ++n;
    return n;
}

/// Uniform double in [0, 1) from 53 random bits; portable across standard libraries.
template <typename Engine>
double uniform01(Engine& eng)
{
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

}  // namespace innerfn
