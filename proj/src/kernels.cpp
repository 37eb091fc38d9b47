#include "dmask/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace dmask::kernels {

namespace {

const Backend& pick() {
  if (const char* env = std::getenv("DMASK_KERNELS")) {
    const std::string_view want(env);
    if (want == "scalar") return scalar_backend();
    if (want == "avx2" && avx2_backend()) return *avx2_backend();
    if (want == "neon" && neon_backend()) return *neon_backend();
  }
  if (const Backend* b = avx2_backend()) return *b;
  if (const Backend* b = neon_backend()) return *b;
  return scalar_backend();
}

}  // namespace

const Backend& active() {
  static const Backend& chosen = pick();
  return chosen;
}

}  // namespace dmask::kernels
