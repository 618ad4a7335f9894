#include <algorithm>
#include <string>

#include "morpho/error.hpp"
#include "morpho/image.hpp"

namespace morpho {

RasterImage::RasterImage(int width, int height, int levels, std::vector<std::uint16_t> values)
    : width_(width), height_(height), levels_(levels), values_(std::move(values)) {
  if (width < 1 || height < 1) throw DataError("raster dimensions must be positive");
  if (levels < 1 || levels > 65536) throw DataError("level count must lie in [1, 65536]");
  if (values_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
    throw DataError("raster value count does not match width * height");
  for (std::uint16_t v : values_)
    if (v >= levels) throw DataError("raster value " + std::to_string(v) + " outside [0, " +
                                     std::to_string(levels - 1) + "]");
}

RasterImage RasterImage::filled(int width, int height, int levels, std::uint16_t value) {
  return RasterImage(width, height, levels,
                     std::vector<std::uint16_t>(static_cast<std::size_t>(width) *
                                                    static_cast<std::size_t>(height),
                                                value));
}

std::uint16_t RasterImage::at(int x, int y) const {
  if (x < 0 || y < 0 || x >= width_ || y >= height_) throw DataError("pixel out of bounds");
  return values_[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                 static_cast<std::size_t>(x)];
}

RasterImage complement(const RasterImage& image) {
  std::vector<std::uint16_t> out(image.values().begin(), image.values().end());
  const int top = image.levels() - 1;
  for (auto& v : out) v = static_cast<std::uint16_t>(top - v);
  return RasterImage(image.width(), image.height(), image.levels(), std::move(out));
}

MultibandImage::MultibandImage(int width, int height, int bands, std::vector<double> values)
    : width_(width), height_(height), bands_(bands), values_(std::move(values)) {
  if (width < 1 || height < 1) throw DataError("multiband dimensions must be positive");
  if (bands < 1) throw DataError("multiband image needs at least one band");
  if (values_.size() != pixel_count() * static_cast<std::size_t>(bands))
    throw DataError("multiband value count does not match width * height * bands");
}

std::span<const double> MultibandImage::band(int b) const {
  if (b < 0 || b >= bands_) throw DataError("band index out of range");
  return std::span<const double>(values_).subspan(static_cast<std::size_t>(b) * pixel_count(),
                                                  pixel_count());
}

int LabelMap::max_class() const noexcept {
  int best = 0;
  for (auto l : labels) best = std::max(best, static_cast<int>(l));
  return best;
}

std::size_t LabelMap::labeled_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(labels.begin(), labels.end(), [](std::uint16_t l) { return l != 0; }));
}

}  // namespace morpho
