#include "dmask/coarse_to_fine.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "dmask/pnm.hpp"
#include "dmask/soft_masks.hpp"

namespace dmask {

namespace {

double patch_mean(const SoftMask& soft, const PatchRect& r) {
  double acc = 0.0;
  for (int y = 0; y < r.h; ++y) {
    const double* row = soft.values().data() +
                        static_cast<std::size_t>(r.y0 + y) * soft.width() + r.x0;
    for (int x = 0; x < r.w; ++x) acc += row[x];
  }
  return acc / static_cast<double>(r.area());
}

std::size_t nearest_level(const std::vector<double>& levels, double value) {
  std::size_t best = 0;
  double best_dist = std::abs(value - levels[0]);
  for (std::size_t k = 1; k < levels.size(); ++k) {
    const double dist = std::abs(value - levels[k]);
    if (dist < best_dist) {  // strict: an equidistant tie keeps the lower level
      best = k;
      best_dist = dist;
    }
  }
  return best;
}

std::string substitute(std::string templ, const std::string& key,
                       const std::string& value) {
  for (std::size_t pos = templ.find(key); pos != std::string::npos;
       pos = templ.find(key, pos + value.size())) {
    templ.replace(pos, key.size(), value);
  }
  return templ;
}

Mask run_external(const std::string& command, const Image& patch,
                  double density, std::uint64_t seed) {
  static std::atomic<unsigned> counter{0};
  const auto dir = std::filesystem::temp_directory_path();
  const unsigned id = counter.fetch_add(1);
  const std::string stem = "dmask_patch_" + std::to_string(::getpid()) + "_" +
                           std::to_string(id);
  const std::string image_path = (dir / (stem + ".ppm")).string();
  const std::string mask_path = (dir / (stem + ".pbm")).string();
  save_image(image_path, patch);

  char density_buf[32];
  std::snprintf(density_buf, sizeof density_buf, "%.10g", density);
  std::string cmd = substitute(command, "{image}", image_path);
  cmd = substitute(cmd, "{mask}", mask_path);
  cmd = substitute(cmd, "{density}", density_buf);
  cmd = substitute(cmd, "{seed}", std::to_string(seed));

  const int status = std::system(cmd.c_str());
  Mask result;
  std::string failure;
  if (status != 0) {
    failure = "command exited with status " + std::to_string(status);
  } else {
    try {
      result = load_mask(mask_path);
      if (result.width() != patch.width() || result.height() != patch.height())
        failure = "mask dimensions do not match the patch";
    } catch (const std::exception& e) {
      failure = e.what();
    }
  }
  std::error_code ignored;
  std::filesystem::remove(image_path, ignored);
  std::filesystem::remove(mask_path, ignored);
  if (!failure.empty())
    throw std::runtime_error("external generator: " + failure);
  return result;
}

Mask run_generator(const LocalGenerator& gen, const Image& patch,
                   double density, std::uint64_t seed,
                   OptimizerRunInfo* info) {
  switch (gen.kind) {
    case LocalGenerator::Kind::Ps: {
      PsConfig cfg = gen.ps;
      cfg.target_density = density;
      cfg.seed = seed;
      SolverConfig solver = gen.solver;
      solver.parallel_channels = false;  // patch workers carry the parallelism
      return sparsify(patch, cfg, solver, nullptr, info);
    }
    case LocalGenerator::Kind::FloydSteinberg:
      return analytic_mask(patch, density);
    case LocalGenerator::Kind::External:
      return run_external(gen.command, patch, density, seed);
  }
  throw std::logic_error("unknown generator kind");
}

}  // namespace

DensityLevels DensityLevels::standard() {
  DensityLevels levels;
  levels.values.push_back(0.005);
  for (int pct = 1; pct <= 15; ++pct) levels.values.push_back(pct / 100.0);
  for (int pct = 17; pct <= 25; pct += 2) levels.values.push_back(pct / 100.0);
  for (int pct = 30; pct <= 50; pct += 5) levels.values.push_back(pct / 100.0);
  for (int pct = 60; pct <= 80; pct += 10) levels.values.push_back(pct / 100.0);
  return levels;
}

double PatchDensityPlan::area_weighted_mean() const {
  double acc = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < assigned.size(); ++i) {
    const double area = static_cast<double>(layout.rect(i).area());
    acc += area * assigned[i];
    total += area;
  }
  return acc / total;
}

std::vector<double> estimate_patch_densities(const Image& f, double d,
                                             const PatchLayout& layout) {
  if (layout.image_width() != f.width() || layout.image_height() != f.height())
    throw std::invalid_argument("layout does not match image");
  const SoftMask soft =
      rescale_to_density(laplacian_magnitude(to_luma(f)), d);
  std::vector<double> raw(layout.patch_count());
  for (std::size_t i = 0; i < raw.size(); ++i)
    raw[i] = patch_mean(soft, layout.rect(i));
  return raw;
}

PatchDensityPlan quantise_plan(const std::vector<double>& raw,
                               const DensityLevels& levels, double d,
                               const PatchLayout& layout) {
  if (levels.values.empty()) throw std::invalid_argument("empty level set");
  if (raw.size() != layout.patch_count())
    throw std::invalid_argument("raw densities do not match layout");

  PatchDensityPlan plan;
  plan.layout = layout;
  plan.raw = raw;
  plan.assigned.resize(raw.size());

  const std::vector<double>& lv = levels.values;
  if (d < lv.front() || d > lv.back()) {
    // Unreachable target: fall back to the closest uniform plan.
    const double clamp = d < lv.front() ? lv.front() : lv.back();
    for (double& a : plan.assigned) a = clamp;
    plan.clamped = true;
    return plan;
  }

  std::vector<std::size_t> level_idx(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    level_idx[i] = nearest_level(lv, raw[i]);
    plan.assigned[i] = lv[level_idx[i]];
  }

  const double total_area = static_cast<double>(layout.image_width()) *
                            layout.image_height();
  double mean = plan.area_weighted_mean();
  const std::size_t move_budget = raw.size() * lv.size();
  for (std::size_t moves = 0;
       std::abs(mean - d) > 0.0005 && moves < move_budget; ++moves) {
    const bool up = mean < d;
    std::size_t best = raw.size();
    double best_dev = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (up ? level_idx[i] + 1 >= lv.size() : level_idx[i] == 0) continue;
      const double proposed = lv[up ? level_idx[i] + 1 : level_idx[i] - 1];
      const double dev = std::abs(raw[i] - proposed);
      if (best == raw.size() || dev < best_dev) {
        best = i;
        best_dev = dev;
      }
    }
    if (best == raw.size()) break;  // no move in the correcting direction

    const std::size_t new_idx = up ? level_idx[best] + 1 : level_idx[best] - 1;
    const double area = static_cast<double>(layout.rect(best).area());
    const double new_mean =
        mean + area * (lv[new_idx] - lv[level_idx[best]]) / total_area;
    if (std::abs(new_mean - d) >= std::abs(mean - d)) break;  // would overshoot

    level_idx[best] = new_idx;
    plan.assigned[best] = lv[new_idx];
    mean = new_mean;
  }
  return plan;
}

C2fResult generate_mask(const Image& f, double d, const PatchLayout& layout,
                        const DensityLevels& levels, const LocalGenerator& gen,
                        int workers) {
  if (workers < 1) throw std::invalid_argument("workers must be at least 1");

  C2fResult result;
  result.plan = quantise_plan(estimate_patch_densities(f, d, layout), levels,
                              d, layout);

  const std::size_t patches = layout.patch_count();
  std::vector<Mask> tiles(patches);
  std::vector<std::string> failures(patches);
  std::mutex info_mutex;

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= patches) return;
      try {
        const Image patch = crop(f, layout.rect(i));
        OptimizerRunInfo local;
        tiles[i] = run_generator(gen, patch, result.plan.assigned[i],
                                 gen.seed ^ static_cast<std::uint64_t>(i),
                                 &local);
        const std::lock_guard<std::mutex> lock(info_mutex);
        result.info.inpaintings += local.inpaintings;
        result.info.cg_iterations += local.cg_iterations;
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    const int count = std::min<int>(workers, static_cast<int>(patches));
    threads.reserve(count);
    for (int t = 0; t < count; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  for (std::size_t i = 0; i < patches; ++i)
    if (!failures[i].empty()) {
      const int row = static_cast<int>(i) / layout.grid_cols();
      const int col = static_cast<int>(i) % layout.grid_cols();
      throw std::runtime_error("patch (" + std::to_string(row) + "," +
                               std::to_string(col) + "): " + failures[i]);
    }

  // Single-threaded gather of the tiles.
  result.mask = Mask(f.width(), f.height());
  for (std::size_t i = 0; i < patches; ++i) {
    const PatchRect& r = layout.rect(i);
    for (int y = 0; y < r.h; ++y)
      for (int x = 0; x < r.w; ++x)
        result.mask.set(r.x0 + x, r.y0 + y, tiles[i].known(x, y));
  }
  return result;
}

std::string plan_to_csv(const PatchDensityPlan& plan) {
  std::ostringstream out;
  out << "row,col,raw_density,assigned_level\n";
  char buf[128];
  for (std::size_t i = 0; i < plan.assigned.size(); ++i) {
    const int row = static_cast<int>(i) / plan.layout.grid_cols();
    const int col = static_cast<int>(i) % plan.layout.grid_cols();
    std::snprintf(buf, sizeof buf, "%d,%d,%.9g,%.9g\n", row, col, plan.raw[i],
                  plan.assigned[i]);
    out << buf;
  }
  return out.str();
}

}  // namespace dmask
