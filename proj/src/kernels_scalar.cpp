#include "dmask/kernels.hpp"

#include "kernel_lanes.hpp"

namespace dmask::kernels {

namespace {

using detail::finish_dot;
using detail::finish_sq_diff;
using detail::finish_sum;
using detail::stencil;

void laplacian_(const double* u, double* out, int w, int h) {
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
    for (int x = 1; x < w - 1; ++x)
      o[x] = stencil(up[x], down[x], row[x - 1], row[x + 1], row[x]);
    o[w - 1] = stencil(up[w - 1], down[w - 1], row[w - 2], row[w - 1], row[w - 1]);
  }
}

void masked_neg_laplacian_(const double* u, const double* wts, double* out,
                           int w, int h) {
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
    for (int x = 1; x < w - 1; ++x)
      o[x] = mrow[x] * -stencil(up[x], down[x], row[x - 1], row[x + 1], row[x]);
    o[w - 1] = mrow[w - 1] *
               -stencil(up[w - 1], down[w - 1], row[w - 2], row[w - 1], row[w - 1]);
  }
}

double dot_(const double* a, const double* b, std::size_t n) {
  double lane[8] = {};
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8)
    for (int j = 0; j < 8; ++j) lane[j] += a[i + j] * b[i + j];
  return finish_dot(lane, a, b, i, n);
}

double sum_(const double* a, std::size_t n) {
  double lane[8] = {};
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8)
    for (int j = 0; j < 8; ++j) lane[j] += a[i + j];
  return finish_sum(lane, a, i, n);
}

double sq_diff_sum_(const double* a, const double* b, std::size_t n) {
  double lane[8] = {};
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8)
    for (int j = 0; j < 8; ++j) {
      const double d = a[i + j] - b[i + j];
      lane[j] += d * d;
    }
  return finish_sq_diff(lane, a, b, i, n);
}

void axpy_(double* y, double a, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + a * x[i];
}

void xpby_(double* p, const double* r, double b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + b * p[i];
}

void mul_(double* y, const double* m, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] *= m[i];
}

}  // namespace

const Backend& scalar_backend() {
  static const Backend backend = {
      "scalar",   laplacian_,    masked_neg_laplacian_,
      dot_,       sum_,          sq_diff_sum_,
      axpy_,      xpby_,         mul_,
  };
  return backend;
}

}  // namespace dmask::kernels
