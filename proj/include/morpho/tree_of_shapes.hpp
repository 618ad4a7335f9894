#pragma once

#include "morpho/image.hpp"
#include "morpho/tree.hpp"

namespace morpho {

/// Median of the border pixel values; the mean of the two middle values when
/// the border count is even, which keeps the frame self-dual.
double border_median(const RasterImage& image);

/// Tree of shapes (inclusion tree) on the pixel grid.
///
/// The image is framed by one pixel set to `border_median`. At every
/// threshold, the level set on the frame's side is taken 8-connected and the
/// opposite one 4-connected; a shape is a component not containing the frame,
/// with its holes filled. The pairing is swapped by complementing the image,
/// so the tree of L - 1 - X has the same shapes. The root is the shape
/// containing the frame and carries the frame value as its level; every other
/// node carries the gray value of the pixels it owns directly.
Tree build_tree_of_shapes(const RasterImage& image);

}  // namespace morpho
