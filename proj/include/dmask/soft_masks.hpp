#pragma once

#include <vector>

#include "dmask/image.hpp"

namespace dmask {

// |Laplacian| of a luma channel; nonnegative per pixel.
struct LaplacianMap {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width) * height;
  }
};

struct VarianceLossParams {
  double alpha = 0.01;
  double epsilon = 1e-8;
};

LaplacianMap laplacian_magnitude(const Image& luma);

// Soft mask s_i = min(1, lambda * map_i) with lambda chosen by bisection so
// that mean(s) = d. When even full saturation cannot reach d (fewer than d*n
// nonzero map entries), saturated values blend with a uniform base lifted
// until the mean matches. An all-zero map yields the uniform soft mask d.
SoftMask rescale_to_density(const LaplacianMap& map, double d);

// Raster-order Floyd-Steinberg error diffusion, threshold 0.5, weights
// 7/16 right, 3/16 below-left, 5/16 below, 1/16 below-right. Error pushed
// outside the image is discarded.
Mask floyd_steinberg(const SoftMask& s);

// bit_i = (s_i >= 0.5); the tie rounds to known.
Mask binarise_round(const SoftMask& s);

// s * (d / mean(s)) when mean(s) > d, otherwise unchanged.
SoftMask rescale_if_exceeds(const SoftMask& s, double d);

// alpha / (population variance + epsilon); drives soft masks towards binary.
double variance_loss(const SoftMask& s, const VarianceLossParams& params = {});

// Analytic mask at density d: dithered rescaled Laplacian magnitude of luma.
Mask analytic_mask(const Image& f, double d);

}  // namespace dmask
