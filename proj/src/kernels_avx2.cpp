#include "dmask/kernels.hpp"

#include "kernel_lanes.hpp"

// Compiled with -mavx2 when the toolchain supports it; selected at runtime
// only after a cpuid check. No FMA: the scalar backend rounds mul and add
// separately, and the two must stay bit-identical.

#if defined(__AVX2__)

#include <immintrin.h>

namespace dmask::kernels {

namespace {

using detail::stencil;

double dot_(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(
        acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(a + i + 4),
                                             _mm256_loadu_pd(b + i + 4)));
  }
  alignas(32) double lane[8];
  _mm256_store_pd(lane, acc0);
  _mm256_store_pd(lane + 4, acc1);
  return detail::finish_dot(lane, a, b, i, n);
}

double sum_(const double* a, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(a + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(a + i + 4));
  }
  alignas(32) double lane[8];
  _mm256_store_pd(lane, acc0);
  _mm256_store_pd(lane + 4, acc1);
  return detail::finish_sum(lane, a, i, n);
}

double sq_diff_sum_(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 =
        _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d d1 =
        _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(d0, d0));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(d1, d1));
  }
  alignas(32) double lane[8];
  _mm256_store_pd(lane, acc0);
  _mm256_store_pd(lane + 4, acc1);
  return detail::finish_sq_diff(lane, a, b, i, n);
}

void axpy_(double* y, double a, const double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d t = _mm256_add_pd(
        _mm256_loadu_pd(y + i), _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    _mm256_storeu_pd(y + i, t);
  }
  for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

void xpby_(double* p, const double* r, double b, std::size_t n) {
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d t = _mm256_add_pd(
        _mm256_loadu_pd(r + i), _mm256_mul_pd(vb, _mm256_loadu_pd(p + i)));
    _mm256_storeu_pd(p + i, t);
  }
  for (; i < n; ++i) p[i] = r[i] + b * p[i];
}

void mul_(double* y, const double* m, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(
        y + i, _mm256_mul_pd(_mm256_loadu_pd(y + i), _mm256_loadu_pd(m + i)));
  }
  for (; i < n; ++i) y[i] *= m[i];
}

// Vector stencil over the interior columns of one row; edges stay scalar.
inline __m256d stencil4(const double* up, const double* down, const double* row,
                        int x, const __m256d four) {
  __m256d t = _mm256_add_pd(_mm256_loadu_pd(up + x), _mm256_loadu_pd(down + x));
  t = _mm256_add_pd(t, _mm256_loadu_pd(row + x - 1));
  t = _mm256_add_pd(t, _mm256_loadu_pd(row + x + 1));
  return _mm256_sub_pd(t, _mm256_mul_pd(four, _mm256_loadu_pd(row + x)));
}

void laplacian_(const double* u, double* out, int w, int h) {
  const __m256d four = _mm256_set1_pd(4.0);
  for (int y = 0; y < h; ++y) {
    const double* row = u + static_cast<std::size_t>(y) * w;
    const double* up = y > 0 ? row - w : row;
    const double* down = y < h - 1 ? row + w : row;
    double* o = out + static_cast<std::size_t>(y) * w;
    if (w == 1) {
      o[0] = stencil(up[0], down[0], row[0], row[0], row[0]);
      continue;
    }
    o[0] = stencil(up[0], down[0], row[0], row[1], row[0]);
    int x = 1;
    for (; x + 4 <= w - 1; x += 4)
      _mm256_storeu_pd(o + x, stencil4(up, down, row, x, four));
    for (; x < w - 1; ++x)
      o[x] = stencil(up[x], down[x], row[x - 1], row[x + 1], row[x]);
    o[w - 1] = stencil(up[w - 1], down[w - 1], row[w - 2], row[w - 1], row[w - 1]);
  }
}

void masked_neg_laplacian_(const double* u, const double* wts, double* out,
                           int w, int h) {
  const __m256d four = _mm256_set1_pd(4.0);
  const __m256d signbit = _mm256_set1_pd(-0.0);
  for (int y = 0; y < h; ++y) {
    const double* row = u + static_cast<std::size_t>(y) * w;
    const double* mrow = wts + static_cast<std::size_t>(y) * w;
    const double* up = y > 0 ? row - w : row;
    const double* down = y < h - 1 ? row + w : row;
    double* o = out + static_cast<std::size_t>(y) * w;
    if (w == 1) {
      o[0] = mrow[0] * -stencil(up[0], down[0], row[0], row[0], row[0]);
      continue;
    }
    o[0] = mrow[0] * -stencil(up[0], down[0], row[0], row[1], row[0]);
    int x = 1;
    for (; x + 4 <= w - 1; x += 4) {
      const __m256d neg = _mm256_xor_pd(stencil4(up, down, row, x, four), signbit);
      _mm256_storeu_pd(o + x, _mm256_mul_pd(_mm256_loadu_pd(mrow + x), neg));
    }
    for (; x < w - 1; ++x)
      o[x] = mrow[x] * -stencil(up[x], down[x], row[x - 1], row[x + 1], row[x]);
    o[w - 1] = mrow[w - 1] *
               -stencil(up[w - 1], down[w - 1], row[w - 2], row[w - 1], row[w - 1]);
  }
}

}  // namespace

const Backend* avx2_backend() {
  if (!__builtin_cpu_supports("avx2")) return nullptr;
  static const Backend backend = {
      "avx2",     laplacian_,    masked_neg_laplacian_,
      dot_,       sum_,          sq_diff_sum_,
      axpy_,      xpby_,         mul_,
  };
  return &backend;
}

}  // namespace dmask::kernels

#else

namespace dmask::kernels {
const Backend* avx2_backend() { return nullptr; }
}  // namespace dmask::kernels

#endif
