#pragma once

#include <cstdint>

#include "morpho/image.hpp"

namespace testing_support {

/// Three-class scene whose classes share overlapping gray values and differ in
/// region size and local variance: 1 small bright squares, 2 large smooth
/// blobs, 3 noisy background.
struct SyntheticScene {
  morpho::RasterImage image;
  morpho::LabelMap truth;
  morpho::LabelMap train;  // `train_fraction` of the pixels, drawn at random
  morpho::LabelMap test;   // every other pixel
};

SyntheticScene make_scene(int size, std::uint64_t seed, double train_fraction = 0.1);

}  // namespace testing_support
