#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmask/image.hpp"
#include "dmask/solver.hpp"
#include "dmask/stochastic.hpp"

namespace dmask {

// Admissible per-patch densities, strictly increasing, all in (0,1).
struct DensityLevels {
  std::vector<double> values;

  // 0.5%, then 1%..15% in 1% steps, 15%..25% in 2% steps, 25%..50% in 5%
  // steps, 50%..80% in 10% steps.
  static DensityLevels standard();
};

struct PatchDensityPlan {
  PatchLayout layout;
  std::vector<double> raw;       // per-patch mean of the rescaled |Laplacian|
  std::vector<double> assigned;  // quantised to the level set
  bool clamped = false;  // target fell outside [min level, max level]

  double area_weighted_mean() const;
};

// Per-patch mask generator driven by the assigned density and a derived seed.
struct LocalGenerator {
  enum class Kind { Ps, FloydSteinberg, External };
  Kind kind = Kind::Ps;
  std::uint64_t seed = 0;
  // Ps settings; target_density and seed are overridden per patch.
  PsConfig ps;
  SolverConfig solver;
  // External command template; {image} {mask} {density} {seed} are replaced.
  // The command must write a PBM mask of the patch size to {mask}.
  std::string command;
};

struct C2fResult {
  Mask mask;
  PatchDensityPlan plan;
  OptimizerRunInfo info;
};

// Steps 1-3: per-patch target densities as patch means of the rescaled
// Laplacian magnitude of the luma channel. Area-weighted mean equals d.
std::vector<double> estimate_patch_densities(const Image& f, double d,
                                             const PatchLayout& layout);

// Step 4a: snap each patch to the nearest level (ties to the lower level),
// then move single patches one level step at a time towards the target until
// the area-weighted mean is within 0.0005 of d.
PatchDensityPlan quantise_plan(const std::vector<double>& raw,
                               const DensityLevels& levels, double d,
                               const PatchLayout& layout);

// Steps 4b-5: generate a mask per patch (seed xor patch_index) and assemble.
// Output is identical for any worker count.
C2fResult generate_mask(const Image& f, double d, const PatchLayout& layout,
                        const DensityLevels& levels, const LocalGenerator& gen,
                        int workers = 1);

// Plan export, schema: row,col,raw_density,assigned_level.
std::string plan_to_csv(const PatchDensityPlan& plan);

}  // namespace dmask
