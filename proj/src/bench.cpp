#include "dmask/bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "dmask/pnm.hpp"
#include "dmask/soft_masks.hpp"

namespace dmask {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int quantise8(double v) {
  const long q = std::lround(v * 255.0);
  return static_cast<int>(q < 0 ? 0 : (q > 255 ? 255 : q));
}

std::uint64_t splitmix(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string sanitise(std::string name) {
  for (char& c : name)
    if (c == '/' || c == '\\' || c == ' ') c = '_';
  return name;
}

struct RowJob {
  std::size_t image_idx;
  std::size_t density_idx;
  std::size_t method_idx;
};

}  // namespace

double metric_mse_quantised(const Image& u, const Image& f) {
  if (!u.same_shape(f))
    throw std::invalid_argument("mse: image shapes differ");
  long long acc = 0;
  const std::size_t total = f.pixel_count() * f.channels();
  for (std::size_t i = 0; i < total; ++i) {
    const long long d = quantise8(u.data()[i]) - quantise8(f.data()[i]);
    acc += d * d;
  }
  return static_cast<double>(acc) / static_cast<double>(total);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) {
  std::uint64_t state = seed;
  state ^= splitmix(state) + a;
  state ^= splitmix(state) + b;
  state ^= splitmix(state) + c;
  return splitmix(state);
}

std::vector<BenchRow> run_benchmark(const BenchmarkSpec& spec) {
  std::vector<RowJob> jobs;
  for (std::size_t i = 0; i < spec.images.size(); ++i)
    for (std::size_t d = 0; d < spec.densities.size(); ++d)
      for (std::size_t m = 0; m < spec.methods.size(); ++m)
        jobs.push_back({i, d, m});

  std::vector<BenchRow> rows(jobs.size());

  auto run_job = [&](std::size_t j) {
    const RowJob& job = jobs[j];
    BenchRow& row = rows[j];
    row.method = spec.methods[job.method_idx];
    row.image = spec.images[job.image_idx];
    row.d_target = spec.densities[job.density_idx];

    try {
      const Image f = load_image(row.image);  // untimed
      const std::uint64_t row_seed = derive_seed(
          spec.seed, job.image_idx, job.density_idx, job.method_idx);
      SolverConfig solver = spec.solver;
      solver.parallel_channels = spec.workers <= 1;

      OptimizerRunInfo info;
      Mask mask;
      const auto start = Clock::now();
      if (row.method == "aa") {
        mask = analytic_mask(f, row.d_target);
      } else if (row.method == "ps" || row.method == "ps-nlpe") {
        PsConfig ps = spec.ps;
        ps.target_density = row.d_target;
        ps.seed = row_seed;
        mask = sparsify(f, ps, solver, nullptr, &info);
        if (row.method == "ps-nlpe") {
          NlpeConfig nlpe_cfg = spec.nlpe;
          nlpe_cfg.seed = derive_seed(row_seed, 1, 0, 0);
          mask = nlpe(f, mask, nlpe_cfg, solver, &info);
        }
      } else if (row.method == "c2f") {
        LocalGenerator gen;
        gen.kind = LocalGenerator::Kind::Ps;
        gen.seed = row_seed;
        gen.ps = spec.ps;
        gen.solver = solver;
        C2fResult c2f = generate_mask(
            f, row.d_target, make_layout(f.width(), f.height(), spec.patch_size),
            spec.levels, gen, 1);
        mask = std::move(c2f.mask);
        info = c2f.info;
      } else {
        throw std::invalid_argument("unknown method " + row.method);
      }

      InpaintResult reference = inpaint(f, mask, solver);
      row.wall_time_s = seconds_since(start);
      row.cg_iters = info.cg_iterations + reference.stats.total_iterations();
      row.mse = metric_mse_quantised(reference.u, f);
      row.psnr = metric_psnr(row.mse);

      if (!spec.mask_dir.empty()) {
        const auto path = std::filesystem::path(spec.mask_dir) /
                          (row.method + "_" + sanitise(row.image) + "_" +
                           std::to_string(row.d_target) + ".pbm");
        save_mask(path.string(), mask);
        mask = load_mask(path.string());  // recount what actually landed on disk
      }
      row.d_achieved = mask.density();
      row.ok = true;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
  };

  if (spec.workers <= 1 || jobs.size() <= 1) {
    for (std::size_t j = 0; j < jobs.size(); ++j) run_job(j);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (;;) {
        const std::size_t j = next.fetch_add(1);
        if (j >= jobs.size()) return;
        run_job(j);
      }
    };
    std::vector<std::thread> threads;
    const int count = static_cast<int>(
        std::min<std::size_t>(spec.workers, jobs.size()));
    threads.reserve(count);
    for (int t = 0; t < count; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  return rows;
}

std::string rows_to_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "method,image,d_target,d_achieved,mse,psnr,wall_time_s,cg_iters\n";
  char buf[256];
  for (const BenchRow& row : rows) {
    if (!row.ok) {
      out << row.method << ',' << row.image << ',' << row.d_target
          << ",,,,,\n";
      continue;
    }
    std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g,%.6f,%lld",
                  row.d_target, row.d_achieved, row.mse, row.psnr,
                  row.wall_time_s, row.cg_iters);
    out << row.method << ',' << row.image << ',' << buf << '\n';
  }
  return out.str();
}

}  // namespace dmask
