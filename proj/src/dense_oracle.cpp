#include "dmask/dense_oracle.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace dmask {

namespace {

struct Neighbours {
  std::size_t idx[4];
  int count = 0;
};

Neighbours in_range_neighbours(int x, int y, int w, int h) {
  Neighbours nb;
  const auto at = [w](int px, int py) {
    return static_cast<std::size_t>(py) * w + px;
  };
  if (x > 0) nb.idx[nb.count++] = at(x - 1, y);
  if (x < w - 1) nb.idx[nb.count++] = at(x + 1, y);
  if (y > 0) nb.idx[nb.count++] = at(x, y - 1);
  if (y < h - 1) nb.idx[nb.count++] = at(x, y + 1);
  return nb;
}

// In-place lower Cholesky of a row-major SPD matrix.
void cholesky(std::vector<double>& m, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double d = m[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= m[j * n + k] * m[j * n + k];
    if (d <= 0.0)
      throw std::runtime_error("reduced system is not positive definite");
    const double ljj = std::sqrt(d);
    m[j * n + j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = m[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= m[i * n + k] * m[j * n + k];
      m[i * n + j] = s / ljj;
    }
  }
}

// Solves L L^T x = rhs with the factor from cholesky(); x overwrites rhs.
void cholesky_solve(const std::vector<double>& l, std::size_t n,
                    std::vector<double>& rhs) {
  for (std::size_t i = 0; i < n; ++i) {
    double s = rhs[i];
    for (std::size_t k = 0; k < i; ++k) s -= l[i * n + k] * rhs[k];
    rhs[i] = s / l[i * n + i];
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = rhs[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= l[k * n + ii] * rhs[k];
    rhs[ii] = s / l[ii * n + ii];
  }
}

}  // namespace

std::vector<double> assemble_dense_laplacian(int width, int height) {
  const std::size_t n = static_cast<std::size_t>(width) * height;
  std::vector<double> a(n * n, 0.0);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * width + x;
      const Neighbours nb = in_range_neighbours(x, y, width, height);
      a[i * n + i] = -static_cast<double>(nb.count);
      for (int k = 0; k < nb.count; ++k) a[i * n + nb.idx[k]] = 1.0;
    }
  return a;
}

ReducedSystem assemble_reduced_system(const Mask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  const std::size_t n = mask.pixel_count();

  ReducedSystem sys;
  std::vector<std::int64_t> position(n, -1);
  for (std::size_t i = 0; i < n; ++i)
    if (!mask.known(i)) {
      position[i] = static_cast<std::int64_t>(sys.unknowns.size());
      sys.unknowns.push_back(i);
    }

  const std::size_t m = sys.unknowns.size();
  sys.matrix.assign(m * m, 0.0);
  for (std::size_t row = 0; row < m; ++row) {
    const std::size_t i = sys.unknowns[row];
    const int x = static_cast<int>(i % w);
    const int y = static_cast<int>(i / w);
    const Neighbours nb = in_range_neighbours(x, y, w, h);
    sys.matrix[row * m + row] = static_cast<double>(nb.count);
    for (int k = 0; k < nb.count; ++k)
      if (position[nb.idx[k]] >= 0)
        sys.matrix[row * m + static_cast<std::size_t>(position[nb.idx[k]])] = -1.0;
  }
  return sys;
}

double reduced_min_eigenvalue(const Mask& mask) {
  ReducedSystem sys = assemble_reduced_system(mask);
  const std::size_t m = sys.unknowns.size();
  if (m == 0) throw std::invalid_argument("full mask has no reduced system");
  cholesky(sys.matrix, m);

  // Inverse power iteration; the deterministic start vector mixes frequencies
  // so it is not orthogonal to the lowest mode in practice.
  std::vector<double> v(m);
  for (std::size_t i = 0; i < m; ++i)
    v[i] = 1.0 + 0.25 * std::sin(0.7 * static_cast<double>(i + 1));
  double lambda_inv = 0.0;
  for (int it = 0; it < 300; ++it) {
    double norm = 0.0;
    for (double e : v) norm += e * e;
    norm = std::sqrt(norm);
    for (double& e : v) e /= norm;
    std::vector<double> w = v;
    cholesky_solve(sys.matrix, m, w);
    double rayleigh = 0.0;
    for (std::size_t i = 0; i < m; ++i) rayleigh += v[i] * w[i];
    const double change = std::abs(rayleigh - lambda_inv);
    lambda_inv = rayleigh;
    v = std::move(w);
    if (it > 8 && change <= 1e-12 * std::abs(lambda_inv)) break;
  }
  return 1.0 / lambda_inv;
}

Image dense_solve_oracle(const Image& f, const Mask& mask) {
  if (f.width() != mask.width() || f.height() != mask.height())
    throw std::invalid_argument("image and mask dimensions differ");
  if (f.pixel_count() > 4096)
    throw std::invalid_argument("dense oracle limited to 4096 pixels");
  if (mask.count() == 0)
    throw std::invalid_argument("empty mask: inpainting system is singular");

  ReducedSystem sys = assemble_reduced_system(mask);
  const std::size_t m = sys.unknowns.size();
  Image u = f;
  if (m == 0) return u;

  cholesky(sys.matrix, m);
  const int w = f.width();
  const int h = f.height();
  for (int c = 0; c < f.channels(); ++c) {
    const auto fc = f.channel(c);
    std::vector<double> rhs(m, 0.0);
    for (std::size_t row = 0; row < m; ++row) {
      const std::size_t i = sys.unknowns[row];
      const int x = static_cast<int>(i % w);
      const int y = static_cast<int>(i / w);
      const Neighbours nb = in_range_neighbours(x, y, w, h);
      for (int k = 0; k < nb.count; ++k)
        if (mask.known(nb.idx[k])) rhs[row] += fc[nb.idx[k]];
    }
    cholesky_solve(sys.matrix, m, rhs);
    auto uc = u.channel(c);
    for (std::size_t row = 0; row < m; ++row) uc[sys.unknowns[row]] = rhs[row];
  }
  return u;
}

}  // namespace dmask
