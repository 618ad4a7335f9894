#pragma once

#include "morpho/image.hpp"
#include "morpho/tree.hpp"

namespace morpho {

/// Max-tree: canonical nodes are the connected components of the upper level
/// sets {p : X(p) >= l}. Built by union-find over pixels taken in decreasing
/// gray order, followed by a canonicalization pass.
Tree build_max_tree(const RasterImage& image, Connectivity connectivity = Connectivity::C4);

/// Min-tree: the max-tree of L - 1 - X with levels mapped back.
Tree build_min_tree(const RasterImage& image, Connectivity connectivity = Connectivity::C4);

}  // namespace morpho
