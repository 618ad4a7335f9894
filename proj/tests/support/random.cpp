#include "random.hpp"

namespace testing_support {

morpho::RasterImage noise_image(Rng& rng, int width, int height, int levels) {
  std::vector<std::uint16_t> v(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  for (auto& x : v) x = static_cast<std::uint16_t>(rng.uniform(0, levels - 1));
  return morpho::RasterImage(width, height, levels, std::move(v));
}

morpho::RasterImage blocky_image(Rng& rng, int width, int height, int levels) {
  std::vector<std::uint16_t> v(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
                               static_cast<std::uint16_t>(rng.uniform(0, levels - 1)));
  const int rects = rng.uniform(1, 2 + width * height / 8);
  for (int r = 0; r < rects; ++r) {
    const int x0 = rng.uniform(0, width - 1);
    const int y0 = rng.uniform(0, height - 1);
    const int x1 = rng.uniform(x0, width - 1);
    const int y1 = rng.uniform(y0, height - 1);
    const auto value = static_cast<std::uint16_t>(rng.uniform(0, levels - 1));
    const bool ring = rng.uniform(0, 3) == 0;
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x) {
        if (ring && x > x0 && x < x1 && y > y0 && y < y1) continue;
        v[static_cast<std::size_t>(y * width + x)] = value;
      }
  }
  return morpho::RasterImage(width, height, levels, std::move(v));
}

morpho::RasterImage random_image(Rng& rng, int max_width, int max_height, int max_levels) {
  const int w = rng.uniform(1, max_width);
  const int h = rng.uniform(1, max_height);
  const int levels = rng.uniform(2, max_levels);
  return rng.uniform(0, 1) == 0 ? noise_image(rng, w, h, levels) : blocky_image(rng, w, h, levels);
}

}  // namespace testing_support
