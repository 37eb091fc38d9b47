#pragma once

#include <cstddef>

namespace dmask::kernels {

// Function table for the data-parallel inner loops of the solver and the
// metrics. Every backend evaluates the same expression trees and accumulates
// reductions in eight independent lanes that are combined in a fixed order,
// so all backends return bit-identical results for identical inputs.
struct Backend {
  const char* name;

  // 5-point Laplacian, grid spacing 1, out-of-range neighbours mirrored to
  // the centre pixel (reflecting boundary).
  void (*laplacian)(const double* u, double* out, int w, int h);

  // out_i = wts_i * -(laplacian u)_i. With wts = 1 on unknown pixels and 0 on
  // known ones this is the reduced inpainting operator applied on the full grid.
  void (*masked_neg_laplacian)(const double* u, const double* wts, double* out,
                               int w, int h);

  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum)(const double* a, std::size_t n);
  double (*sq_diff_sum)(const double* a, const double* b, std::size_t n);

  void (*axpy)(double* y, double a, const double* x, std::size_t n);  // y += a*x
  void (*xpby)(double* p, const double* r, double b, std::size_t n);  // p = r + b*p
  void (*mul)(double* y, const double* m, std::size_t n);             // y *= m
};

const Backend& scalar_backend();

// AVX2 backend, or nullptr when the build or the CPU does not support it.
const Backend* avx2_backend();

// NEON backend, or nullptr on non-ARM builds.
const Backend* neon_backend();

// Best supported backend, overridable via DMASK_KERNELS=scalar|avx2|neon.
// The choice is made once per process.
const Backend& active();

inline void laplacian(const double* u, double* out, int w, int h) {
  active().laplacian(u, out, w, h);
}
inline void masked_neg_laplacian(const double* u, const double* wts, double* out,
                                 int w, int h) {
  active().masked_neg_laplacian(u, wts, out, w, h);
}
inline double dot(const double* a, const double* b, std::size_t n) {
  return active().dot(a, b, n);
}
inline double sum(const double* a, std::size_t n) { return active().sum(a, n); }
inline double sq_diff_sum(const double* a, const double* b, std::size_t n) {
  return active().sq_diff_sum(a, b, n);
}
inline void axpy(double* y, double a, const double* x, std::size_t n) {
  active().axpy(y, a, x, n);
}
inline void xpby(double* p, const double* r, double b, std::size_t n) {
  active().xpby(p, r, b, n);
}
inline void mul(double* y, const double* m, std::size_t n) {
  active().mul(y, m, n);
}

}  // namespace dmask::kernels
