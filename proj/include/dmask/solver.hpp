#pragma once

#include <vector>

#include "dmask/image.hpp"

namespace dmask {

struct SolverConfig {
  // Stop when the residual norm has dropped to this fraction of the
  // zero-guess initial residual.
  double rel_residual_tol = 1e-6;
  // 0 resolves to 10 * max(width, height).
  int max_iterations = 0;
  // Solve the channels of one image on concurrent threads.
  bool parallel_channels = true;

  int resolved_max_iterations(int width, int height) const {
    return max_iterations > 0 ? max_iterations
                              : 10 * (width > height ? width : height);
  }
};

struct ChannelStats {
  int iterations = 0;
  double final_rel_residual = 0.0;
  bool converged = true;
};

struct SolveStats {
  std::vector<ChannelStats> channels;

  long long total_iterations() const {
    long long t = 0;
    for (const auto& c : channels) t += c.iterations;
    return t;
  }
  double max_rel_residual() const {
    double m = 0.0;
    for (const auto& c : channels)
      if (c.final_rel_residual > m) m = c.final_rel_residual;
    return m;
  }
  bool converged() const {
    for (const auto& c : channels)
      if (!c.converged) return false;
    return true;
  }
};

struct InpaintResult {
  Image u;
  SolveStats stats;
};

// 5-point Laplacian with reflecting boundaries (out-of-range neighbours
// mirror to the centre pixel), grid spacing 1.
Image apply_laplacian(const Image& u);

// Homogeneous diffusion inpainting. Each channel solves the reduced system
//   deg_i u_i - sum_{unknown neighbours} u_j = sum_{known neighbours} f_j
// on the unknown pixels by conjugate gradients from a zero initial guess;
// known pixels keep f exactly. `warm_start`, when given, seeds the unknowns
// from a previous reconstruction; the stopping test stays relative to the
// zero-guess residual, so accuracy is unchanged.
InpaintResult inpaint(const Image& f, const Mask& mask, const SolverConfig& cfg,
                      const Image* warm_start = nullptr);

// Euclidean norm of the full-system residual (I-C)Au - C(u-f), per channel.
std::vector<double> residual_norm(const Image& u, const Image& f,
                                  const Mask& mask);

}  // namespace dmask
