#include "dmask/image.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

#include "dmask/kernels.hpp"

namespace dmask {

Image::Image(int width, int height, int channels, double fill)
    : width_(width), height_(height), channels_(channels) {
  if (width < 1 || height < 1)
    throw std::invalid_argument("image dimensions must be at least 1x1");
  if (channels != 1 && channels != 3)
    throw std::invalid_argument("image must have 1 or 3 channels");
  data_.assign(pixel_count() * channels, fill);
}

Mask::Mask(int width, int height, bool fill) : width_(width), height_(height) {
  if (width < 1 || height < 1)
    throw std::invalid_argument("mask dimensions must be at least 1x1");
  bits_.assign(pixel_count(), fill ? 1 : 0);
}

std::size_t Mask::count() const {
  std::size_t c = 0;
  for (std::uint8_t b : bits_) c += b;
  return c;
}

SoftMask::SoftMask(int width, int height, double fill)
    : width_(width), height_(height) {
  if (width < 1 || height < 1)
    throw std::invalid_argument("soft mask dimensions must be at least 1x1");
  values_.assign(pixel_count(), fill);
}

double SoftMask::mean() const {
  return kernels::sum(values_.data(), values_.size()) /
         static_cast<double>(values_.size());
}

PatchLayout::PatchLayout(int image_width, int image_height, int patch_size)
    : image_width_(image_width),
      image_height_(image_height),
      patch_size_(patch_size) {
  if (image_width < 1 || image_height < 1)
    throw std::invalid_argument("layout requires a nonempty image");
  if (patch_size < kMinPatchSize)
    throw std::invalid_argument("patch size must be at least " +
                                std::to_string(kMinPatchSize) +
                                ", got " + std::to_string(patch_size));
  grid_cols_ = (image_width + patch_size - 1) / patch_size;
  grid_rows_ = (image_height + patch_size - 1) / patch_size;
  rects_.reserve(static_cast<std::size_t>(grid_cols_) * grid_rows_);
  for (int row = 0; row < grid_rows_; ++row) {
    const int y0 = row * patch_size;
    const int h = std::min(patch_size, image_height - y0);
    for (int col = 0; col < grid_cols_; ++col) {
      const int x0 = col * patch_size;
      const int w = std::min(patch_size, image_width - x0);
      rects_.push_back(PatchRect{x0, y0, w, h});
    }
  }
}

PatchLayout make_layout(int width, int height, int patch_size) {
  return PatchLayout(width, height, patch_size);
}

Image to_luma(const Image& img) {
  if (img.channels() == 1) return img;
  Image luma(img.width(), img.height(), 1);
  const auto r = img.channel(0);
  const auto g = img.channel(1);
  const auto b = img.channel(2);
  auto out = luma.channel(0);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = 0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i];
  return luma;
}

Image crop(const Image& img, const PatchRect& r) {
  if (r.x0 < 0 || r.y0 < 0 || r.w < 1 || r.h < 1 ||
      r.x0 + r.w > img.width() || r.y0 + r.h > img.height())
    throw std::invalid_argument("crop rectangle outside image");
  Image out(r.w, r.h, img.channels());
  for (int c = 0; c < img.channels(); ++c)
    for (int y = 0; y < r.h; ++y)
      for (int x = 0; x < r.w; ++x)
        out.at(x, y, c) = img.at(r.x0 + x, r.y0 + y, c);
  return out;
}

}  // namespace dmask
