#pragma once

#include <cstdint>
#include <vector>

#include "morpho/image.hpp"
#include "morpho/tree.hpp"

namespace morpho {

struct Edge {
  std::int32_t a;
  std::int32_t b;
  double weight;
};

/// One edge per unordered adjacent pixel pair, weight |X(a) - X(b)|.
std::vector<Edge> edge_list(const RasterImage& image, Connectivity connectivity = Connectivity::C4);

/// Same adjacency with the Euclidean distance between pixel spectra.
std::vector<Edge> edge_list(const MultibandImage& image,
                            Connectivity connectivity = Connectivity::C4);

/// Alpha-tree: leaves are the 0-flat zones, an internal node at level a is an
/// a-connected component. Chains of equal-level merges collapse into one node.
Tree build_alpha_tree(const RasterImage& image, Connectivity connectivity = Connectivity::C4);

/// Alpha-tree over a multiband image (Euclidean dissimilarity). Experimental:
/// the profile pipeline builds one tree per band.
Tree build_alpha_tree(const MultibandImage& image, Connectivity connectivity = Connectivity::C4);

/// Omega-tree derived from an alpha-tree: keeps the alpha nodes whose global
/// gray range is strictly below their parent's, with the range as level.
Tree build_omega_tree(const Tree& alpha_tree, const RasterImage& image);

}  // namespace morpho
