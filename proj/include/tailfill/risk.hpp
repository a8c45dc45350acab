#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "tailfill/errors.hpp"

namespace tailfill {

namespace detail {

inline void check_sample(std::span<const double> values, double alpha) {
    if (values.empty()) throw EmptySample();
    if (!(alpha > 0.0 && alpha <= 1.0)) throw AlphaOutOfRange(alpha);
}

// Index count for an alpha-tail of N samples, immune to the off-by-one that
// floating point introduces when alpha*N is mathematically an integer
// (e.g. 0.53 * 100).
inline double tail_mass(double alpha, std::size_t n) {
    return alpha * double(n);
}

}  // namespace detail

/// Empirical upper-tail CV@R: the exact minimizer value of
///   t + (1/(alpha N)) sum (z_j - t)_+,
/// computed as the mean of the worst alpha-tail with fractional weight on the
/// boundary order statistic. At alpha = 1 this is the sample mean.
inline double cvar_upper(std::span<const double> sample, double alpha) {
    detail::check_sample(sample, alpha);
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());

    const double m = detail::tail_mass(alpha, sorted.size());
    auto full = std::size_t(std::floor(m));
    if (full > sorted.size()) full = sorted.size();
    const double frac = m - double(full);

    double acc = 0.0;
    for (std::size_t j = 0; j < full; ++j) acc += sorted[j];
    if (frac > 0.0 && full < sorted.size()) acc += frac * sorted[full];
    return acc / m;
}

/// Lower-tail reward CV@R, the reflection -cvar_upper(-z, alpha): the mean of
/// the smallest alpha-tail. Bounded above by the sample mean.
inline double cvar_lower_reward(std::span<const double> sample, double alpha) {
    detail::check_sample(sample, alpha);
    std::vector<double> negated(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) negated[i] = -sample[i];
    return -cvar_upper(negated, alpha);
}

/// Lower alpha-quantile with the left-continuous convention: the smallest
/// order statistic whose rank fraction reaches alpha. This is the canonical
/// minimizer t of the CV@R variational formula.
inline double empirical_var(std::span<const double> sample, double alpha) {
    detail::check_sample(sample, alpha);
    const double m = detail::tail_mass(alpha, sample.size());
    // rank = ceil(m), nudged so that a mathematically-integral m that rounded
    // up in floating point does not spill into the next order statistic
    auto rank = std::size_t(std::ceil(m * (1.0 - 1e-12)));
    if (rank < 1) rank = 1;
    if (rank > sample.size()) rank = sample.size();

    std::vector<double> sorted(sample.begin(), sample.end());
    std::nth_element(sorted.begin(), sorted.begin() + (rank - 1), sorted.end());
    return sorted[rank - 1];
}

}  // namespace tailfill
