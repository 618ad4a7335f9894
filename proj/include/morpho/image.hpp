#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace morpho {

/// Integer gray-level raster, row-major. Values lie in [0, levels - 1].
class RasterImage {
 public:
  RasterImage() = default;
  RasterImage(int width, int height, int levels, std::vector<std::uint16_t> values);

  static RasterImage filled(int width, int height, int levels, std::uint16_t value);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int levels() const noexcept { return levels_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::uint16_t operator[](std::size_t i) const noexcept { return values_[i]; }
  std::uint16_t at(int x, int y) const;
  std::span<const std::uint16_t> values() const noexcept { return values_; }

  bool operator==(const RasterImage&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int levels_ = 1;
  std::vector<std::uint16_t> values_;
};

/// Level complement L - 1 - X.
RasterImage complement(const RasterImage& image);

/// Real-valued raster, produced by reconstruction and feature maps.
struct RealImage {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  bool operator==(const RealImage&) const = default;
};

/// Band-sequential multiband raster with real-valued samples.
class MultibandImage {
 public:
  MultibandImage() = default;
  MultibandImage(int width, int height, int bands, std::vector<double> values);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int bands() const noexcept { return bands_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  std::span<const double> band(int b) const;
  std::span<const double> values() const noexcept { return values_; }

 private:
  int width_ = 0;
  int height_ = 0;
  int bands_ = 0;
  std::vector<double> values_;
};

/// Per-pixel class ids: 0 is unlabeled, 1..C are classes.
struct LabelMap {
  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> labels;

  int max_class() const noexcept;
  std::size_t labeled_count() const noexcept;
};

}  // namespace morpho
