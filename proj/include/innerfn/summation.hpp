#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "innerfn/common.hpp"

namespace innerfn {

/// Fixed-tree pairwise summation. The association order depends only on the
/// length of the input, so results are bit-reproducible regardless of how the
/// values were produced.
inline double pairwise_sum(std::span<const double> v)
{
    constexpr std::size_t leaf = 32;
    if (v.size() <= leaf) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

inline double pairwise_sum(const std::vector<double>& v)
{
    return pairwise_sum(std::span<const double>(v.data(), v.size()));
}

/// Running log-sum-exp accumulator: holds log(sum exp(l_i)).
class LogSum {
public:
    void add(double log_value)
    {
        if (log_value == -inf) return;
        if (log_value > max_) {
            sum_ = sum_ * std::exp(max_ - log_value) + 1.0;
            max_ = log_value;
        } else {
            sum_ += std::exp(log_value - max_);
        }
    }
    [[nodiscard]] double value() const { return sum_ > 0.0 ? max_ + std::log(sum_) : -inf; }

private:
    double max_ = -inf;
    double sum_ = 0.0;
};

inline double log_add(double a, double b)
{
    if (a == -inf) return b;
    if (b == -inf) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

}  // namespace innerfn
