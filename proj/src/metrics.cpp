#include "dmask/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "dmask/kernels.hpp"

namespace dmask {

double metric_mse(const Image& u, const Image& f) {
  if (!u.same_shape(f))
    throw std::invalid_argument("mse: image shapes differ");
  double total = 0.0;
  for (int c = 0; c < f.channels(); ++c)
    total += kernels::sq_diff_sum(u.channel(c).data(), f.channel(c).data(),
                                  f.pixel_count());
  const double count = static_cast<double>(f.pixel_count()) * f.channels();
  return 255.0 * 255.0 * total / count;
}

double metric_psnr(double mse) {
  if (mse < 0.0) throw std::invalid_argument("psnr: negative mse");
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

}  // namespace dmask
