#include "dmask/solver.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <thread>

#include "dmask/kernels.hpp"

namespace dmask {

namespace {

void check_shapes(const Image& f, const Mask& mask) {
  if (f.width() != mask.width() || f.height() != mask.height())
    throw std::invalid_argument("image and mask dimensions differ");
}

struct ChannelProblem {
  const double* f = nullptr;   // one channel of the original
  const double* wts = nullptr; // 1 on unknown pixels, 0 on known
  int width = 0;
  int height = 0;
};

// CG on the reduced system, carried on full-grid vectors whose known entries
// stay zero. Writes the reconstruction into `u` (f on known pixels).
ChannelStats solve_channel(const ChannelProblem& prob, const SolverConfig& cfg,
                           const double* warm, double* u) {
  const std::size_t n =
      static_cast<std::size_t>(prob.width) * prob.height;
  const int max_iter = cfg.resolved_max_iterations(prob.width, prob.height);
  const double tol = cfg.rel_residual_tol;

  std::vector<double> g(n);  // f on known pixels, 0 elsewhere
  for (std::size_t i = 0; i < n; ++i)
    g[i] = prob.wts[i] == 0.0 ? prob.f[i] : 0.0;

  // Right-hand side b_i = sum of known neighbour values, on unknown rows.
  std::vector<double> b(n);
  kernels::laplacian(g.data(), b.data(), prob.width, prob.height);
  kernels::mul(b.data(), prob.wts, n);

  ChannelStats stats;
  std::vector<double> x(n, 0.0);
  const double norm_b = std::sqrt(kernels::dot(b.data(), b.data(), n));
  if (norm_b == 0.0) {
    // Unknowns decouple from the data only as the all-zero solution.
    for (std::size_t i = 0; i < n; ++i) u[i] = g[i];
    return stats;
  }

  std::vector<double> r(n), p(n), q(n);
  if (warm != nullptr) {
    for (std::size_t i = 0; i < n; ++i)
      x[i] = prob.wts[i] == 0.0 ? 0.0 : warm[i];
    kernels::masked_neg_laplacian(x.data(), prob.wts, q.data(), prob.width,
                                  prob.height);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
  } else {
    r = b;
  }

  double rho = kernels::dot(r.data(), r.data(), n);
  stats.final_rel_residual = std::sqrt(rho) / norm_b;
  if (stats.final_rel_residual <= tol) {
    for (std::size_t i = 0; i < n; ++i) u[i] = g[i] + x[i];
    return stats;
  }

  p = r;
  stats.converged = false;
  for (int k = 1; k <= max_iter; ++k) {
    kernels::masked_neg_laplacian(p.data(), prob.wts, q.data(), prob.width,
                                  prob.height);
    const double pq = kernels::dot(p.data(), q.data(), n);
    if (!(pq > 0.0)) break;  // loss of positive definiteness in finite precision
    const double alpha = rho / pq;
    kernels::axpy(x.data(), alpha, p.data(), n);
    kernels::axpy(r.data(), -alpha, q.data(), n);
    const double rho_next = kernels::dot(r.data(), r.data(), n);
    stats.iterations = k;
    if (std::sqrt(rho_next) <= tol * norm_b) {
      // The recurrence residual can drift; confirm against the true one and
      // keep iterating from it when the confirmation fails.
      kernels::masked_neg_laplacian(x.data(), prob.wts, q.data(), prob.width,
                                    prob.height);
      for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
      const double rho_true = kernels::dot(r.data(), r.data(), n);
      stats.final_rel_residual = std::sqrt(rho_true) / norm_b;
      if (stats.final_rel_residual <= tol) {
        stats.converged = true;
        break;
      }
      rho = rho_true;
      p = r;
      continue;
    }
    const double beta = rho_next / rho;
    rho = rho_next;
    kernels::xpby(p.data(), r.data(), beta, n);
  }

  if (!stats.converged) {
    kernels::masked_neg_laplacian(x.data(), prob.wts, q.data(), prob.width,
                                  prob.height);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
    stats.final_rel_residual =
        std::sqrt(kernels::dot(r.data(), r.data(), n)) / norm_b;
    if (stats.final_rel_residual <= tol) stats.converged = true;
  }

  for (std::size_t i = 0; i < n; ++i) u[i] = g[i] + x[i];
  return stats;
}

std::vector<double> mask_weights(const Mask& mask) {
  std::vector<double> wts(mask.pixel_count());
  for (std::size_t i = 0; i < wts.size(); ++i)
    wts[i] = mask.known(i) ? 0.0 : 1.0;
  return wts;
}

}  // namespace

Image apply_laplacian(const Image& u) {
  if (u.channels() != 1)
    throw std::invalid_argument("apply_laplacian expects a single channel");
  Image out(u.width(), u.height(), 1);
  kernels::laplacian(u.channel(0).data(), out.channel(0).data(), u.width(),
                     u.height());
  return out;
}

InpaintResult inpaint(const Image& f, const Mask& mask, const SolverConfig& cfg,
                      const Image* warm_start) {
  check_shapes(f, mask);
  if (warm_start != nullptr && !warm_start->same_shape(f))
    throw std::invalid_argument("warm start shape differs from image");

  const std::size_t known = mask.count();
  if (known == 0)
    throw std::invalid_argument("empty mask: inpainting system is singular");

  InpaintResult result;
  result.u = Image(f.width(), f.height(), f.channels());
  result.stats.channels.resize(f.channels());

  if (known == mask.pixel_count()) {
    result.u = f;  // no unknowns
    return result;
  }

  const std::vector<double> wts = mask_weights(mask);
  auto run_channel = [&](int c) {
    ChannelProblem prob{f.channel(c).data(), wts.data(), f.width(), f.height()};
    result.stats.channels[c] =
        solve_channel(prob, cfg, warm_start ? warm_start->channel(c).data() : nullptr,
                      result.u.channel(c).data());
  };

  const int ch = f.channels();
  if (cfg.parallel_channels && ch > 1 &&
      std::thread::hardware_concurrency() > 1) {
    std::vector<std::thread> threads;
    threads.reserve(ch - 1);
    for (int c = 1; c < ch; ++c) threads.emplace_back(run_channel, c);
    run_channel(0);
    for (auto& t : threads) t.join();
  } else {
    for (int c = 0; c < ch; ++c) run_channel(c);
  }
  return result;
}

std::vector<double> residual_norm(const Image& u, const Image& f,
                                  const Mask& mask) {
  check_shapes(f, mask);
  if (!u.same_shape(f))
    throw std::invalid_argument("reconstruction shape differs from image");

  const std::size_t n = f.pixel_count();
  std::vector<double> norms(f.channels());
  std::vector<double> lap(n);
  for (int c = 0; c < f.channels(); ++c) {
    const double* uc = u.channel(c).data();
    const double* fc = f.channel(c).data();
    kernels::laplacian(uc, lap.data(), f.width(), f.height());
    double lane[8] = {};
    for (std::size_t i = 0; i < n; ++i) {
      const double row = mask.known(i) ? -(uc[i] - fc[i]) : lap[i];
      lane[i % 8] += row * row;
    }
    norms[c] = std::sqrt(((lane[0] + lane[4]) + (lane[1] + lane[5])) +
                         ((lane[2] + lane[6]) + (lane[3] + lane[7])));
  }
  return norms;
}

}  // namespace dmask
