#pragma once

#include <bit>
#include <cstddef>
#include <mutex>
#include <span>

#include <fftw3.h>

#include "innerfn/common.hpp"

namespace innerfn {

/// In-place FFT via FFTW. Forward uses exp(-2 pi i jk/N); neither direction
/// divides by N.
inline void fft(std::span<cplx> data, bool inverse = false)
{
    const std::size_t n = data.size();
    if (n <= 1) return;
    if (!std::has_single_bit(n)) throw DomainError("fft: length must be a power of two");

    // The planner is not thread-safe. FFTW_UNALIGNED keeps the codelet choice
    // independent of buffer alignment, so results are bitwise reproducible.
    static std::mutex planner;
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard lock(planner);
        plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    if (!plan) throw ConvergenceError("fft: planning failed");
    fftw_execute(plan);
    std::lock_guard lock(planner);
    fftw_destroy_plan(plan);
}

}  // namespace innerfn
