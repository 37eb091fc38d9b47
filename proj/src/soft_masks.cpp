#include "dmask/soft_masks.hpp"

#include <cmath>
#include <stdexcept>

#include "dmask/kernels.hpp"
#include "dmask/solver.hpp"

namespace dmask {

namespace {

double clipped_mean(const std::vector<double>& map, double lambda) {
  double lane[8] = {};
  for (std::size_t i = 0; i < map.size(); ++i) {
    const double v = lambda * map[i];
    lane[i % 8] += v < 1.0 ? v : 1.0;
  }
  const double total = ((lane[0] + lane[4]) + (lane[1] + lane[5])) +
                       ((lane[2] + lane[6]) + (lane[3] + lane[7]));
  return total / static_cast<double>(map.size());
}

}  // namespace

LaplacianMap laplacian_magnitude(const Image& luma) {
  if (luma.channels() != 1)
    throw std::invalid_argument("laplacian_magnitude expects a luma channel");
  Image lap = apply_laplacian(luma);
  LaplacianMap map{luma.width(), luma.height(), std::move(lap.data())};
  for (double& v : map.values) v = std::abs(v);
  return map;
}

SoftMask rescale_to_density(const LaplacianMap& map, double d) {
  if (!(d > 0.0 && d < 1.0))
    throw std::invalid_argument("target density must lie in (0,1)");
  const std::size_t n = map.pixel_count();
  if (n == 0 || map.values.size() != n)
    throw std::invalid_argument("inconsistent Laplacian map");

  const double mean = kernels::sum(map.values.data(), n) / static_cast<double>(n);
  if (mean == 0.0) return SoftMask(map.width, map.height, d);  // flat image

  std::size_t nonzero = 0;
  for (double v : map.values) nonzero += v > 0.0 ? 1 : 0;
  const double reachable = static_cast<double>(nonzero) / static_cast<double>(n);

  SoftMask s(map.width, map.height);
  if (reachable <= d) {
    // Saturation alone cannot reach d: saturate every nonzero entry and lift
    // the zero entries with a uniform base until the mean matches.
    const double base = (d - reachable) / (1.0 - reachable);
    for (std::size_t i = 0; i < n; ++i)
      s[i] = map.values[i] > 0.0 ? 1.0 : base;
    return s;
  }

  double lo = 0.0;
  double hi = d / mean;  // exact when no value clips
  while (clipped_mean(map.values, hi) < d) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (clipped_mean(map.values, mid) < d)
      lo = mid;
    else
      hi = mid;
  }
  const double lambda = hi;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = lambda * map.values[i];
    s[i] = v < 1.0 ? v : 1.0;
  }
  return s;
}

Mask floyd_steinberg(const SoftMask& s) {
  const int w = s.width();
  const int h = s.height();
  Mask mask(w, h);
  std::vector<double> buf = s.values();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      const double old = buf[i];
      const bool on = old >= 0.5;
      mask.set(i, on);
      const double err = old - (on ? 1.0 : 0.0);
      if (x + 1 < w) buf[i + 1] += err * (7.0 / 16.0);
      if (y + 1 < h) {
        if (x > 0) buf[i + w - 1] += err * (3.0 / 16.0);
        buf[i + w] += err * (5.0 / 16.0);
        if (x + 1 < w) buf[i + w + 1] += err * (1.0 / 16.0);
      }
    }
  }
  return mask;
}

Mask binarise_round(const SoftMask& s) {
  Mask mask(s.width(), s.height());
  for (std::size_t i = 0; i < s.pixel_count(); ++i) mask.set(i, s[i] >= 0.5);
  return mask;
}

SoftMask rescale_if_exceeds(const SoftMask& s, double d) {
  if (!(d > 0.0 && d <= 1.0))
    throw std::invalid_argument("density must lie in (0,1]");
  const double mean = s.mean();
  if (mean <= d) return s;
  SoftMask out = s;
  const double factor = d / mean;
  for (double& v : out.values()) v *= factor;
  return out;
}

double variance_loss(const SoftMask& s, const VarianceLossParams& params) {
  const std::size_t n = s.pixel_count();
  const double mean = s.mean();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = s[i] - mean;
    acc += d * d;
  }
  const double variance = acc / static_cast<double>(n);
  return params.alpha / (variance + params.epsilon);
}

Mask analytic_mask(const Image& f, double d) {
  return floyd_steinberg(rescale_to_density(laplacian_magnitude(to_luma(f)), d));
}

}  // namespace dmask
