#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dmask/image.hpp"
#include "dmask/solver.hpp"

namespace dmask {

struct PsConfig {
  double candidate_fraction = 0.3;  // p: tested per iteration
  double removal_fraction = 0.005;  // q: kept removed per iteration
  double target_density = 0.05;     // d
  std::uint64_t seed = 0;
};

struct NlpeConfig {
  int cycles = 5;          // k; each cycle runs |mask| iterations
  int exchange_count = 1;  // m: pixels moved per iteration
  int candidate_pool = 30; // candidates sampled per iteration
  std::optional<long long> iteration_cap;  // bounds total iterations
  std::uint64_t seed = 0;
  // Seed each trial solve from the current reconstruction. The stopping test
  // stays relative to the zero-guess residual, so solution accuracy is the
  // same; it only saves iterations.
  bool warm_start = true;
};

struct OptimizerProgress {
  long long iteration = 0;
  double density = 0.0;
  double mse = 0.0;  // 0-255 scale
};
using ProgressFn = std::function<void(const OptimizerProgress&)>;

struct OptimizerRunInfo {
  long long inpaintings = 0;
  long long cg_iterations = 0;
  bool no_op = false;                // target already met by the start mask
  std::vector<double> accepted_mse;  // NLPE: mse after every accepted exchange
};

// Probabilistic sparsification: from a full mask (or `start`), repeatedly
// test a random candidate subset, permanently drop the candidates whose
// absence hurts the reconstruction least, and stop at exactly
// ceil(target_density * pixels) known pixels.
Mask sparsify(const Image& f, const PsConfig& cfg, const SolverConfig& solver,
              const Mask* start = nullptr, OptimizerRunInfo* info = nullptr,
              const ProgressFn& progress = {});

// Nonlocal pixel exchange: moves mask pixels onto high-error unknown
// candidates, keeping only exchanges that strictly decrease the MSE.
// Density is preserved exactly.
Mask nlpe(const Image& f, const Mask& mask, const NlpeConfig& cfg,
          const SolverConfig& solver, OptimizerRunInfo* info = nullptr,
          const ProgressFn& progress = {});

}  // namespace dmask
