#pragma once

#include <cstddef>

// Shared pieces of the lane-structured reductions. Each backend accumulates
// partial sums into eight lanes (element i contributes to lane i mod 8) and
// finishes through these exact helpers, which fixes the rounding order across
// backends. These files must be compiled with FP contraction disabled.

namespace dmask::kernels::detail {

// Evaluation order pinned to (((up+down)+left)+right) - 4*centre; the SIMD
// backends replicate it so that all backends agree bitwise.
inline double stencil(double up, double down, double left, double right,
                      double centre) {
  return (((up + down) + left) + right) - 4.0 * centre;
}

inline double combine8(const double lane[8]) {
  return ((lane[0] + lane[4]) + (lane[1] + lane[5])) +
         ((lane[2] + lane[6]) + (lane[3] + lane[7]));
}

inline double finish_dot(double lane[8], const double* a, const double* b,
                         std::size_t i, std::size_t n) {
  for (std::size_t j = 0; i < n; ++i, ++j) lane[j] += a[i] * b[i];
  return combine8(lane);
}

inline double finish_sum(double lane[8], const double* a, std::size_t i,
                         std::size_t n) {
  for (std::size_t j = 0; i < n; ++i, ++j) lane[j] += a[i];
  return combine8(lane);
}

inline double finish_sq_diff(double lane[8], const double* a, const double* b,
                             std::size_t i, std::size_t n) {
  for (std::size_t j = 0; i < n; ++i, ++j) {
    const double d = a[i] - b[i];
    lane[j] += d * d;
  }
  return combine8(lane);
}

}  // namespace dmask::kernels::detail
