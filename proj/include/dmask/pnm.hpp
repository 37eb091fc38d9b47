#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dmask/image.hpp"

namespace dmask {

// Parse failure; the message names the byte offset of the offending input.
class PnmError : public std::runtime_error {
 public:
  PnmError(const std::string& what, std::size_t offset)
      : std::runtime_error("pnm parse error at byte " + std::to_string(offset) +
                           ": " + what),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Binary PGM (P5) or PPM (P6), maxval 255. Intensities map as v/255.
Image load_pnm(std::span<const std::uint8_t> bytes);

// Canonical binary PGM/PPM: "P5\n<w> <h>\n255\n" + payload, round-half-up
// 8-bit quantisation clamped to [0,255].
std::vector<std::uint8_t> save_pnm(const Image& img);

// Binary PBM (P4); a 1 bit marks a known pixel. Rows pad to whole bytes.
Mask load_pbm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> save_pbm(const Mask& mask);

// File wrappers. Errors mention the path.
Image load_image(const std::string& path);
void save_image(const std::string& path, const Image& img);
Mask load_mask(const std::string& path);
void save_mask(const std::string& path, const Mask& mask);

// Soft-mask dump for inspection: values scaled by 255, clamped.
void save_soft_mask(const std::string& path, const SoftMask& soft);

}  // namespace dmask
