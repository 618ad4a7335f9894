#include <numeric>
#include <vector>

#include "grid.hpp"
#include "morpho/component_tree.hpp"

namespace morpho {

namespace {

// Pixels sorted by decreasing value, ties by increasing index (counting sort).
std::vector<std::int32_t> sort_decreasing(std::span<const std::uint16_t> values, int levels) {
  std::vector<std::int32_t> start(static_cast<std::size_t>(levels) + 1, 0);
  for (auto v : values) ++start[static_cast<std::size_t>(levels - 1 - v) + 1];
  std::partial_sum(start.begin(), start.end(), start.begin());
  std::vector<std::int32_t> sorted(values.size());
  for (std::size_t p = 0; p < values.size(); ++p)
    sorted[static_cast<std::size_t>(start[static_cast<std::size_t>(levels - 1 - values[p])]++)] =
        static_cast<std::int32_t>(p);
  return sorted;
}

Tree max_tree_of(std::span<const std::uint16_t> f, int width, int height, int levels,
                 Connectivity connectivity, TreeKind kind, bool complement_levels) {
  const std::size_t n = f.size();
  const auto sorted = sort_decreasing(f, levels);
  const int nbrs = detail::neighbour_count(connectivity);

  std::vector<std::int32_t> parent(n);
  std::vector<std::int32_t> zpar(n, -1);
  for (std::int32_t p : sorted) {
    parent[static_cast<std::size_t>(p)] = p;
    zpar[static_cast<std::size_t>(p)] = p;
    detail::for_each_neighbour(width, height, p, nbrs, [&](std::int32_t q) {
      if (zpar[static_cast<std::size_t>(q)] < 0) return;
      const std::int32_t r = detail::find_root(zpar.data(), q);
      if (r != p) {
        parent[static_cast<std::size_t>(r)] = p;
        zpar[static_cast<std::size_t>(r)] = p;
      }
    });
  }

  // Canonicalize from the root downwards: every pixel then points at the
  // canonical pixel of its own level component or of the parent component.
  for (std::size_t i = n; i-- > 0;) {
    const auto p = static_cast<std::size_t>(sorted[i]);
    const auto q = static_cast<std::size_t>(parent[p]);
    if (f[static_cast<std::size_t>(parent[q])] == f[q]) parent[p] = parent[q];
  }

  const std::int32_t root = sorted.back();
  std::vector<NodeId> node_of(n, -1);
  std::vector<NodeId> node_parent;
  std::vector<double> node_level;
  std::vector<NodeId> pixel_node(n);
  for (std::size_t i = n; i-- > 0;) {
    const std::int32_t p = sorted[i];
    const auto up = static_cast<std::size_t>(p);
    const auto q = static_cast<std::size_t>(parent[up]);
    const bool canonical = p == root || f[q] != f[up];
    if (canonical) {
      const auto id = static_cast<NodeId>(node_parent.size());
      node_of[up] = id;
      node_parent.push_back(p == root ? 0 : node_of[q]);
      const int v = f[up];
      node_level.push_back(complement_levels ? levels - 1 - v : v);
      pixel_node[up] = id;
    } else {
      pixel_node[up] = node_of[q];
    }
  }
  return Tree(kind, width, height, std::move(node_parent), std::move(node_level),
              std::move(pixel_node));
}

}  // namespace

Tree build_max_tree(const RasterImage& image, Connectivity connectivity) {
  return max_tree_of(image.values(), image.width(), image.height(), image.levels(), connectivity,
                     TreeKind::MaxTree, false);
}

Tree build_min_tree(const RasterImage& image, Connectivity connectivity) {
  const RasterImage inverted = complement(image);
  return max_tree_of(inverted.values(), inverted.width(), inverted.height(), inverted.levels(),
                     connectivity, TreeKind::MinTree, true);
}

}  // namespace morpho
