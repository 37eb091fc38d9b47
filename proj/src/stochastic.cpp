#include "dmask/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "dmask/metrics.hpp"

namespace dmask {

namespace {

// Unbiased bounded sampling on top of the raw generator output. Avoids
// std::uniform_int_distribution, whose mapping differs between standard
// library implementations.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

// Swaps `count` uniformly chosen elements into list[0..count).
void sample_front(std::vector<std::uint32_t>& list, std::size_t count,
                  std::mt19937_64& rng) {
  for (std::size_t j = 0; j < count; ++j) {
    const std::size_t pick = j + bounded(rng, list.size() - j);
    std::swap(list[j], list[pick]);
  }
}

double pixel_sq_error(const Image& u, const Image& f, std::size_t i) {
  const std::size_t n = f.pixel_count();
  double e = 0.0;
  for (int c = 0; c < f.channels(); ++c) {
    const double d = u.data()[c * n + i] - f.data()[c * n + i];
    e += d * d;
  }
  return e;
}

std::size_t ceil_count(double fraction, std::size_t total) {
  return static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(total)));
}

struct ScoredPixel {
  double error;
  std::uint32_t pixel;
};

}  // namespace

Mask sparsify(const Image& f, const PsConfig& cfg, const SolverConfig& solver,
              const Mask* start, OptimizerRunInfo* info,
              const ProgressFn& progress) {
  if (!(cfg.candidate_fraction > 0.0 && cfg.candidate_fraction <= 1.0))
    throw std::invalid_argument("candidate fraction must lie in (0,1]");
  if (!(cfg.removal_fraction > 0.0 && cfg.removal_fraction <= 1.0))
    throw std::invalid_argument("removal fraction must lie in (0,1]");
  if (!(cfg.target_density > 0.0 && cfg.target_density < 1.0))
    throw std::invalid_argument("target density must lie in (0,1)");
  if (start != nullptr &&
      (start->width() != f.width() || start->height() != f.height()))
    throw std::invalid_argument("start mask dimensions differ from image");

  const std::size_t n = f.pixel_count();
  const std::size_t target = std::max<std::size_t>(1, ceil_count(cfg.target_density, n));

  Mask mask = start != nullptr ? *start : Mask(f.width(), f.height(), true);
  std::size_t known = mask.count();
  if (known <= target) {
    if (info != nullptr) info->no_op = true;
    return mask;
  }

  std::vector<std::uint32_t> known_list;
  known_list.reserve(known);
  for (std::size_t i = 0; i < n; ++i)
    if (mask.known(i)) known_list.push_back(static_cast<std::uint32_t>(i));

  std::mt19937_64 rng(cfg.seed);
  Image u_prev;
  long long iteration = 0;
  std::vector<ScoredPixel> scored;
  std::vector<std::uint8_t> dropped(n, 0);

  while (known > target) {
    // Keep one anchor even for candidate_fraction = 1.
    const std::size_t candidates =
        std::min(ceil_count(cfg.candidate_fraction, known), known - 1);
    sample_front(known_list, candidates, rng);

    for (std::size_t j = 0; j < candidates; ++j)
      mask.set(known_list[j], false);
    InpaintResult trial =
        inpaint(f, mask, solver, u_prev.pixel_count() > 0 ? &u_prev : nullptr);
    if (info != nullptr) {
      ++info->inpaintings;
      info->cg_iterations += trial.stats.total_iterations();
    }

    scored.clear();
    scored.reserve(candidates);
    for (std::size_t j = 0; j < candidates; ++j) {
      const std::uint32_t pixel = known_list[j];
      scored.push_back({pixel_sq_error(trial.u, f, pixel), pixel});
    }
    std::sort(scored.begin(), scored.end(), [](const ScoredPixel& a,
                                               const ScoredPixel& b) {
      return a.error != b.error ? a.error < b.error : a.pixel < b.pixel;
    });

    const std::size_t removed =
        std::min(ceil_count(cfg.removal_fraction, candidates), known - target);
    // Re-add every candidate that survives.
    for (std::size_t j = removed; j < scored.size(); ++j)
      mask.set(scored[j].pixel, true);

    for (std::size_t j = 0; j < removed; ++j) dropped[scored[j].pixel] = 1;
    std::erase_if(known_list,
                  [&dropped](std::uint32_t pixel) { return dropped[pixel]; });
    for (std::size_t j = 0; j < removed; ++j) dropped[scored[j].pixel] = 0;
    known -= removed;

    u_prev = std::move(trial.u);
    ++iteration;
    if (progress) progress({iteration, mask.density(), metric_mse(u_prev, f)});
  }
  return mask;
}

Mask nlpe(const Image& f, const Mask& input, const NlpeConfig& cfg,
          const SolverConfig& solver, OptimizerRunInfo* info,
          const ProgressFn& progress) {
  if (cfg.cycles < 1) throw std::invalid_argument("cycles must be at least 1");
  if (cfg.exchange_count < 1)
    throw std::invalid_argument("exchange count must be at least 1");
  if (cfg.candidate_pool < cfg.exchange_count)
    throw std::invalid_argument("candidate pool smaller than exchange count");
  if (input.width() != f.width() || input.height() != f.height())
    throw std::invalid_argument("mask dimensions differ from image");

  const std::size_t n = f.pixel_count();
  const std::size_t known = input.count();
  if (known == 0 || known == n)
    throw std::invalid_argument("nlpe requires a nonempty, nonfull mask");

  Mask mask = input;
  std::vector<std::uint32_t> known_list, unknown_list;
  known_list.reserve(known);
  unknown_list.reserve(n - known);
  for (std::size_t i = 0; i < n; ++i)
    (mask.known(i) ? known_list : unknown_list)
        .push_back(static_cast<std::uint32_t>(i));

  std::mt19937_64 rng(cfg.seed);
  InpaintResult current = inpaint(f, mask, solver);
  if (info != nullptr) {
    ++info->inpaintings;
    info->cg_iterations += current.stats.total_iterations();
  }
  double mse_cur = metric_mse(current.u, f);

  const std::size_t pool =
      std::min<std::size_t>(cfg.candidate_pool, unknown_list.size());
  const std::size_t moves =
      std::min(std::min<std::size_t>(cfg.exchange_count, known), pool);
  long long total = static_cast<long long>(cfg.cycles) *
                    static_cast<long long>(known);
  if (cfg.iteration_cap.has_value())
    total = std::min(total, *cfg.iteration_cap);

  std::vector<ScoredPixel> pool_scored;
  for (long long iter = 0; iter < total; ++iter) {
    sample_front(known_list, moves, rng);
    sample_front(unknown_list, pool, rng);

    pool_scored.clear();
    pool_scored.reserve(pool);
    for (std::size_t j = 0; j < pool; ++j) {
      const std::uint32_t pixel = unknown_list[j];
      pool_scored.push_back({pixel_sq_error(current.u, f, pixel), pixel});
    }
    std::partial_sort(pool_scored.begin(), pool_scored.begin() + moves,
                      pool_scored.end(),
                      [](const ScoredPixel& a, const ScoredPixel& b) {
                        return a.error != b.error ? a.error > b.error
                                                  : a.pixel < b.pixel;
                      });

    for (std::size_t j = 0; j < moves; ++j) {
      mask.set(known_list[j], false);
      mask.set(pool_scored[j].pixel, true);
    }

    InpaintResult trial =
        inpaint(f, mask, solver, cfg.warm_start ? &current.u : nullptr);
    if (info != nullptr) {
      ++info->inpaintings;
      info->cg_iterations += trial.stats.total_iterations();
    }
    const double mse_new = metric_mse(trial.u, f);

    if (mse_new < mse_cur) {
      // Keep: swap list membership of the exchanged pixels.
      for (std::size_t j = 0; j < moves; ++j) {
        const std::uint32_t into = pool_scored[j].pixel;
        const std::uint32_t outof = known_list[j];
        known_list[j] = into;
        const auto pos = std::find(unknown_list.begin(),
                                   unknown_list.begin() + pool, into);
        *pos = outof;
      }
      current.u = std::move(trial.u);
      mse_cur = mse_new;
      if (info != nullptr) info->accepted_mse.push_back(mse_cur);
      if (progress) progress({iter + 1, mask.density(), mse_cur});
    } else {
      for (std::size_t j = 0; j < moves; ++j) {
        mask.set(pool_scored[j].pixel, false);
        mask.set(known_list[j], true);
      }
    }
  }
  return mask;
}

}  // namespace dmask
