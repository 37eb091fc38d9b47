#pragma once

#include "dmask/image.hpp"

namespace dmask {

// Mean squared error on the 0-255 scale, averaged over all pixels and
// channels.
double metric_mse(const Image& u, const Image& f);

// 10*log10(255^2/mse); returns +infinity for mse = 0 (printed as "inf").
double metric_psnr(double mse);

struct QualityReport {
  double mse = 0.0;
  double psnr = 0.0;
  double density = 0.0;
  double wall_time_s = 0.0;
  long long solver_iterations = 0;
};

}  // namespace dmask
