#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "morpho/attributes.hpp"
#include "morpho/image.hpp"
#include "morpho/tree.hpp"

namespace testing_support {

using PixelSet = std::vector<std::int32_t>;  // sorted pixel indices
using ComponentLevels = std::map<PixelSet, double>;

/// Connected components of the pixels where `inside` holds, by breadth-first flood fill.
std::vector<PixelSet> flood_components(int width, int height, const std::vector<bool>& inside,
                                       bool eight_connected);

/// Every distinct CC of the upper level sets {X >= t}, keyed to the highest t producing it.
ComponentLevels upper_set_components(const morpho::RasterImage& image, bool eight_connected);
/// Every distinct CC of the lower level sets {X <= t}, keyed to the lowest t producing it.
ComponentLevels lower_set_components(const morpho::RasterImage& image, bool eight_connected);

/// (component pixels, level) of every node of a tree.
ComponentLevels tree_components(const morpho::Tree& tree);
std::set<PixelSet> tree_shapes(const morpho::Tree& tree);

/// Area opening by thresholding: each pixel gets the highest t whose upper-set
/// CC around it has at least `lambda` pixels (the image minimum otherwise).
std::vector<double> area_opening(const morpho::RasterImage& image, double lambda,
                                 bool eight_connected);
/// Dual area closing over lower level sets.
std::vector<double> area_closing(const morpho::RasterImage& image, double lambda,
                                 bool eight_connected);

/// Median of the border pixel values (mean of the two middle ones for an even count).
double border_median(const morpho::RasterImage& image);

/// Shapes of the image: for every threshold and both polarities, each 4-connected
/// level-set CC of the image framed at the border median is hole-filled against
/// the 8-connected component of its complement that contains the frame. The
/// whole domain is included.
std::set<PixelSet> shapes(const morpho::RasterImage& image);

/// Every distinct alpha-connected component keyed to the smallest alpha producing it.
ComponentLevels alpha_components(const morpho::RasterImage& image, bool eight_connected);

/// Partition of the alpha-cut at `alpha`: component label per pixel.
std::vector<int> alpha_cut(const morpho::RasterImage& image, double alpha, bool eight_connected);

/// Gray range (max - min) of a pixel set.
int gray_range(const morpho::RasterImage& image, const PixelSet& pixels);

/// Distinct omega-CCs: for each bound w, the largest alpha-CCs with range <= w.
/// Keyed to their range.
ComponentLevels omega_components(const morpho::RasterImage& image, bool eight_connected);

/// Statistics recomputed from a full pixel set.
morpho::NodeStats stats_of(const morpho::RasterImage& image, const PixelSet& pixels);

/// Full pixel set of every node, gathered by walking child lists.
std::vector<PixelSet> subtree_walk(const morpho::Tree& tree);

/// Population standard deviation in two passes (mean, then squared deviations).
double two_pass_std_dev(const morpho::RasterImage& image, const PixelSet& pixels);

}  // namespace testing_support
