#include "dmask/kernels.hpp"

#include "kernel_lanes.hpp"

// AArch64 NEON backend. Mirrors the scalar lane structure with four 2-wide
// accumulators, so results stay bit-identical to the scalar backend.

#if defined(__aarch64__) && defined(__ARM_NEON)

#include <arm_neon.h>

namespace dmask::kernels {

namespace {

using detail::stencil;

double dot_(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  float64x2_t acc2 = vdupq_n_f64(0.0);
  float64x2_t acc3 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = vaddq_f64(acc0, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    acc1 = vaddq_f64(acc1, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
    acc2 = vaddq_f64(acc2, vmulq_f64(vld1q_f64(a + i + 4), vld1q_f64(b + i + 4)));
    acc3 = vaddq_f64(acc3, vmulq_f64(vld1q_f64(a + i + 6), vld1q_f64(b + i + 6)));
  }
  double lane[8];
  vst1q_f64(lane, acc0);
  vst1q_f64(lane + 2, acc1);
  vst1q_f64(lane + 4, acc2);
  vst1q_f64(lane + 6, acc3);
  return detail::finish_dot(lane, a, b, i, n);
}

double sum_(const double* a, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  float64x2_t acc2 = vdupq_n_f64(0.0);
  float64x2_t acc3 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = vaddq_f64(acc0, vld1q_f64(a + i));
    acc1 = vaddq_f64(acc1, vld1q_f64(a + i + 2));
    acc2 = vaddq_f64(acc2, vld1q_f64(a + i + 4));
    acc3 = vaddq_f64(acc3, vld1q_f64(a + i + 6));
  }
  double lane[8];
  vst1q_f64(lane, acc0);
  vst1q_f64(lane + 2, acc1);
  vst1q_f64(lane + 4, acc2);
  vst1q_f64(lane + 6, acc3);
  return detail::finish_sum(lane, a, i, n);
}

double sq_diff_sum_(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  float64x2_t acc2 = vdupq_n_f64(0.0);
  float64x2_t acc3 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const float64x2_t d0 = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    const float64x2_t d1 = vsubq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    const float64x2_t d2 = vsubq_f64(vld1q_f64(a + i + 4), vld1q_f64(b + i + 4));
    const float64x2_t d3 = vsubq_f64(vld1q_f64(a + i + 6), vld1q_f64(b + i + 6));
    acc0 = vaddq_f64(acc0, vmulq_f64(d0, d0));
    acc1 = vaddq_f64(acc1, vmulq_f64(d1, d1));
    acc2 = vaddq_f64(acc2, vmulq_f64(d2, d2));
    acc3 = vaddq_f64(acc3, vmulq_f64(d3, d3));
  }
  double lane[8];
  vst1q_f64(lane, acc0);
  vst1q_f64(lane + 2, acc1);
  vst1q_f64(lane + 4, acc2);
  vst1q_f64(lane + 6, acc3);
  return detail::finish_sq_diff(lane, a, b, i, n);
}

void axpy_(double* y, double a, const double* x, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i,
              vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
  }
  for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

void xpby_(double* p, const double* r, double b, std::size_t n) {
  const float64x2_t vb = vdupq_n_f64(b);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(p + i,
              vaddq_f64(vld1q_f64(r + i), vmulq_f64(vb, vld1q_f64(p + i))));
  }
  for (; i < n; ++i) p[i] = r[i] + b * p[i];
}

void mul_(double* y, const double* m, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(y + i, vmulq_f64(vld1q_f64(y + i), vld1q_f64(m + i)));
  for (; i < n; ++i) y[i] *= m[i];
}

inline float64x2_t stencil2(const double* up, const double* down,
                            const double* row, int x, const float64x2_t four) {
  float64x2_t t = vaddq_f64(vld1q_f64(up + x), vld1q_f64(down + x));
  t = vaddq_f64(t, vld1q_f64(row + x - 1));
  t = vaddq_f64(t, vld1q_f64(row + x + 1));
  return vsubq_f64(t, vmulq_f64(four, vld1q_f64(row + x)));
}

void laplacian_(const double* u, double* out, int w, int h) {
  const float64x2_t four = vdupq_n_f64(4.0);
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
    for (; x + 2 <= w - 1; x += 2) vst1q_f64(o + x, stencil2(up, down, row, x, four));
    for (; x < w - 1; ++x)
      o[x] = stencil(up[x], down[x], row[x - 1], row[x + 1], row[x]);
    o[w - 1] = stencil(up[w - 1], down[w - 1], row[w - 2], row[w - 1], row[w - 1]);
  }
}

void masked_neg_laplacian_(const double* u, const double* wts, double* out,
                           int w, int h) {
  const float64x2_t four = vdupq_n_f64(4.0);
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
    for (; x + 2 <= w - 1; x += 2) {
      const float64x2_t neg = vnegq_f64(stencil2(up, down, row, x, four));
      vst1q_f64(o + x, vmulq_f64(vld1q_f64(mrow + x), neg));
    }
    for (; x < w - 1; ++x)
      o[x] = mrow[x] * -stencil(up[x], down[x], row[x - 1], row[x + 1], row[x]);
    o[w - 1] = mrow[w - 1] *
               -stencil(up[w - 1], down[w - 1], row[w - 2], row[w - 1], row[w - 1]);
  }
}

}  // namespace

const Backend* neon_backend() {
  static const Backend backend = {
      "neon",     laplacian_,    masked_neg_laplacian_,
      dot_,       sum_,          sq_diff_sum_,
      axpy_,      xpby_,         mul_,
  };
  return &backend;
}

}  // namespace dmask::kernels

#else

namespace dmask::kernels {
const Backend* neon_backend() { return nullptr; }
}  // namespace dmask::kernels

#endif
