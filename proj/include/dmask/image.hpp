#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dmask {

// Planar raster of intensities in [0,1]; 1 (grey) or 3 (RGB) channels.
// Channel c of pixel (x,y) lives at data()[c*w*h + y*w + x].
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels, double fill = 0.0);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * height_;
  }

  double& at(int x, int y, int c = 0) {
    return data_[static_cast<std::size_t>(c) * pixel_count() +
                 static_cast<std::size_t>(y) * width_ + x];
  }
  double at(int x, int y, int c = 0) const {
    return data_[static_cast<std::size_t>(c) * pixel_count() +
                 static_cast<std::size_t>(y) * width_ + x];
  }

  std::span<double> channel(int c) {
    return {data_.data() + static_cast<std::size_t>(c) * pixel_count(),
            pixel_count()};
  }
  std::span<const double> channel(int c) const {
    return {data_.data() + static_cast<std::size_t>(c) * pixel_count(),
            pixel_count()};
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool same_shape(const Image& other) const {
    return width_ == other.width_ && height_ == other.height_ &&
           channels_ == other.channels_;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

// Binary known-data indicator; bit set means the pixel value is stored.
class Mask {
 public:
  Mask() = default;
  Mask(int width, int height, bool fill = false);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * height_;
  }

  bool known(std::size_t i) const { return bits_[i] != 0; }
  bool known(int x, int y) const {
    return bits_[static_cast<std::size_t>(y) * width_ + x] != 0;
  }
  void set(std::size_t i, bool v) { bits_[i] = v ? 1 : 0; }
  void set(int x, int y, bool v) {
    bits_[static_cast<std::size_t>(y) * width_ + x] = v ? 1 : 0;
  }

  std::size_t count() const;
  double density() const {
    return static_cast<double>(count()) / static_cast<double>(pixel_count());
  }

  const std::vector<std::uint8_t>& bits() const { return bits_; }
  std::vector<std::uint8_t>& bits() { return bits_; }

  bool operator==(const Mask& other) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

// Nonbinary confidence map with values in [0,1].
class SoftMask {
 public:
  SoftMask() = default;
  SoftMask(int width, int height, double fill = 0.0);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * height_;
  }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  double mean() const;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
};

struct PatchRect {
  int x0 = 0;
  int y0 = 0;
  int w = 0;
  int h = 0;
  std::size_t area() const { return static_cast<std::size_t>(w) * h; }
};

// Exact tiling of the image into patch_size x patch_size cells; trailing
// remainder columns/rows become narrower edge patches.
class PatchLayout {
 public:
  PatchLayout() = default;
  PatchLayout(int image_width, int image_height, int patch_size);

  int image_width() const { return image_width_; }
  int image_height() const { return image_height_; }
  int patch_size() const { return patch_size_; }
  int grid_cols() const { return grid_cols_; }
  int grid_rows() const { return grid_rows_; }
  std::size_t patch_count() const { return rects_.size(); }

  // Row-major: index = row * grid_cols + col.
  const PatchRect& rect(std::size_t index) const { return rects_[index]; }
  const std::vector<PatchRect>& rects() const { return rects_; }

 private:
  int image_width_ = 0;
  int image_height_ = 0;
  int patch_size_ = 0;
  int grid_cols_ = 0;
  int grid_rows_ = 0;
  std::vector<PatchRect> rects_;
};

constexpr int kDefaultPatchSize = 120;
constexpr int kMinPatchSize = 8;

PatchLayout make_layout(int width, int height, int patch_size = kDefaultPatchSize);

// Rec. 601 luma: 0.299 R + 0.587 G + 0.114 B. Grey images pass through.
Image to_luma(const Image& img);

// Crop of all channels; the rectangle must lie inside the image.
Image crop(const Image& img, const PatchRect& r);

}  // namespace dmask
