#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmask/coarse_to_fine.hpp"
#include "dmask/image.hpp"
#include "dmask/metrics.hpp"
#include "dmask/solver.hpp"
#include "dmask/stochastic.hpp"

namespace dmask {

// 8-bit mean squared error: both images quantised with the PNM writer's
// round-half-up rule first. This is the error a decoder would measure
// between the files on disk; a perfect reconstruction gives exactly 0.
double metric_mse_quantised(const Image& u, const Image& f);

struct BenchmarkSpec {
  std::vector<std::string> methods;  // aa | ps | ps-nlpe | c2f
  std::vector<double> densities;
  std::vector<std::string> images;  // file paths
  std::uint64_t seed = 0;
  SolverConfig solver;
  PsConfig ps;
  NlpeConfig nlpe;
  int patch_size = kDefaultPatchSize;
  DensityLevels levels = DensityLevels::standard();
  int workers = 1;        // rows over distinct images may run concurrently
  std::string mask_dir;   // when set, masks are written here and recounted
};

struct BenchRow {
  std::string method;
  std::string image;
  double d_target = 0.0;
  bool ok = false;
  std::string error;
  double d_achieved = 0.0;
  double mse = 0.0;
  double psnr = 0.0;
  double wall_time_s = 0.0;  // compute only; file I/O excluded
  long long cg_iters = 0;
};

// One row per (image, density, method), in spec order. A failing row carries
// its error and the run continues.
std::vector<BenchRow> run_benchmark(const BenchmarkSpec& spec);

// Schema: method,image,d_target,d_achieved,mse,psnr,wall_time_s,cg_iters.
// Failed rows leave the numeric fields empty.
std::string rows_to_csv(const std::vector<BenchRow>& rows);

// Mixes a per-row seed out of the benchmark seed and the row coordinates.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c);

}  // namespace dmask
