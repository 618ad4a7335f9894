#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "grid.hpp"
#include "morpho/error.hpp"
#include "morpho/partition_tree.hpp"

namespace morpho {

namespace {

// Right, down, and for C8 the two downward diagonals: each unordered pair once.
template <class Weight>
std::vector<Edge> grid_edges(int width, int height, Connectivity connectivity, Weight&& weight) {
  static constexpr detail::Offset forward[4] = {{1, 0}, {0, 1}, {1, 1}, {-1, 1}};
  const int count = connectivity == Connectivity::C4 ? 2 : 4;
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) *
                static_cast<std::size_t>(count));
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const auto p = static_cast<std::int32_t>(y * width + x);
      for (int k = 0; k < count; ++k) {
        const int nx = x + forward[k].dx;
        const int ny = y + forward[k].dy;
        if (nx < 0 || ny < 0 || nx >= width || ny >= height) continue;
        const auto q = static_cast<std::int32_t>(ny * width + nx);
        edges.push_back(Edge{p, q, weight(p, q)});
      }
    }
  }
  return edges;
}

Tree alpha_tree_from_edges(int width, int height, std::vector<Edge> edges) {
  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::stable_sort(edges.begin(), edges.end(),
                   [](const Edge& a, const Edge& b) { return a.weight < b.weight; });

  std::vector<std::int32_t> zpar(n);
  std::iota(zpar.begin(), zpar.end(), 0);
  auto edge = edges.begin();
  for (; edge != edges.end() && edge->weight == 0.0; ++edge) {
    const std::int32_t ra = detail::find_root(zpar.data(), edge->a);
    const std::int32_t rb = detail::find_root(zpar.data(), edge->b);
    if (ra != rb) zpar[static_cast<std::size_t>(std::max(ra, rb))] = std::min(ra, rb);
  }

  // Raw hierarchy: one node per flat zone, then one node per merge.
  std::vector<std::int32_t> raw_parent;
  std::vector<double> raw_level;
  std::vector<std::int32_t> set_node(n, -1);
  std::vector<std::int32_t> pixel_leaf(n);
  for (std::size_t p = 0; p < n; ++p) {
    const auto r = static_cast<std::size_t>(detail::find_root(zpar.data(), static_cast<std::int32_t>(p)));
    if (set_node[r] < 0) {
      set_node[r] = static_cast<std::int32_t>(raw_parent.size());
      raw_parent.push_back(-1);
      raw_level.push_back(0.0);
    }
    pixel_leaf[p] = set_node[r];
  }
  for (; edge != edges.end(); ++edge) {
    const std::int32_t ra = detail::find_root(zpar.data(), edge->a);
    const std::int32_t rb = detail::find_root(zpar.data(), edge->b);
    if (ra == rb) continue;
    const auto merged = static_cast<std::int32_t>(raw_parent.size());
    raw_parent[static_cast<std::size_t>(set_node[static_cast<std::size_t>(ra)])] = merged;
    raw_parent[static_cast<std::size_t>(set_node[static_cast<std::size_t>(rb)])] = merged;
    raw_parent.push_back(merged);
    raw_level.push_back(edge->weight);
    const std::int32_t keep = std::min(ra, rb);
    zpar[static_cast<std::size_t>(std::max(ra, rb))] = keep;
    set_node[static_cast<std::size_t>(keep)] = merged;
  }
  const auto root = static_cast<std::int32_t>(raw_parent.size() - 1);
  raw_parent[static_cast<std::size_t>(root)] = root;

  // Collapse equal-level chains, visiting parents (created later) first.
  for (std::size_t i = raw_parent.size(); i-- > 0;) {
    const auto p = static_cast<std::size_t>(raw_parent[i]);
    const auto pp = static_cast<std::size_t>(raw_parent[p]);
    if (p != pp && raw_level[pp] == raw_level[p]) raw_parent[i] = raw_parent[p];
  }

  std::vector<NodeId> id(raw_parent.size(), -1);
  std::vector<NodeId> parent;
  std::vector<double> level;
  for (std::size_t i = raw_parent.size(); i-- > 0;) {
    const auto p = static_cast<std::size_t>(raw_parent[i]);
    const bool canonical = static_cast<std::int32_t>(i) == root || raw_level[p] != raw_level[i];
    if (!canonical) continue;
    id[i] = static_cast<NodeId>(parent.size());
    parent.push_back(static_cast<std::int32_t>(i) == root ? 0 : id[p]);
    level.push_back(raw_level[i]);
  }
  std::vector<NodeId> pixel_node(n);
  for (std::size_t p = 0; p < n; ++p) pixel_node[p] = id[static_cast<std::size_t>(pixel_leaf[p])];
  return Tree(TreeKind::AlphaTree, width, height, std::move(parent), std::move(level),
              std::move(pixel_node));
}

}  // namespace

std::vector<Edge> edge_list(const RasterImage& image, Connectivity connectivity) {
  const auto values = image.values();
  return grid_edges(image.width(), image.height(), connectivity, [&](std::int32_t p, std::int32_t q) {
    return static_cast<double>(std::abs(static_cast<int>(values[static_cast<std::size_t>(p)]) -
                                        static_cast<int>(values[static_cast<std::size_t>(q)])));
  });
}

std::vector<Edge> edge_list(const MultibandImage& image, Connectivity connectivity) {
  return grid_edges(image.width(), image.height(), connectivity, [&](std::int32_t p, std::int32_t q) {
    double sum = 0.0;
    for (int b = 0; b < image.bands(); ++b) {
      const auto band = image.band(b);
      const double d = band[static_cast<std::size_t>(p)] - band[static_cast<std::size_t>(q)];
      sum += d * d;
    }
    return std::sqrt(sum);
  });
}

Tree build_alpha_tree(const RasterImage& image, Connectivity connectivity) {
  return alpha_tree_from_edges(image.width(), image.height(), edge_list(image, connectivity));
}

Tree build_alpha_tree(const MultibandImage& image, Connectivity connectivity) {
  return alpha_tree_from_edges(image.width(), image.height(), edge_list(image, connectivity));
}

Tree build_omega_tree(const Tree& alpha, const RasterImage& image) {
  if (alpha.kind() != TreeKind::AlphaTree)
    throw DataError("omega-tree must be derived from an alpha-tree");
  if (alpha.width() != image.width() || alpha.height() != image.height())
    throw DataError("alpha-tree and image dimensions differ");

  const std::size_t count = alpha.node_count();
  std::vector<int> lo(count, 65536);
  std::vector<int> hi(count, -1);
  for (std::size_t p = 0; p < alpha.pixel_count(); ++p) {
    const auto n = static_cast<std::size_t>(alpha.pixel_node(p));
    lo[n] = std::min(lo[n], static_cast<int>(image[p]));
    hi[n] = std::max(hi[n], static_cast<int>(image[p]));
  }
  for (std::size_t i = count; i-- > 1;) {
    const auto up = static_cast<std::size_t>(alpha.parent(static_cast<NodeId>(i)));
    lo[up] = std::min(lo[up], lo[i]);
    hi[up] = std::max(hi[up], hi[i]);
  }

  // A node survives when its range is strictly below its parent's; otherwise
  // it collapses into the largest ancestor sharing its range.
  std::vector<NodeId> rep(count);
  std::vector<NodeId> id(count, -1);
  std::vector<NodeId> parent;
  std::vector<double> level;
  for (std::size_t i = 0; i < count; ++i) {
    const auto up = static_cast<std::size_t>(alpha.parent(static_cast<NodeId>(i)));
    const bool keep = i == 0 || hi[i] - lo[i] < hi[up] - lo[up];
    if (keep) {
      id[i] = static_cast<NodeId>(parent.size());
      parent.push_back(i == 0 ? 0 : rep[up]);
      level.push_back(static_cast<double>(hi[i] - lo[i]));
      rep[i] = id[i];
    } else {
      rep[i] = rep[up];
    }
  }
  std::vector<NodeId> pixel_node(alpha.pixel_count());
  for (std::size_t p = 0; p < pixel_node.size(); ++p)
    pixel_node[p] = rep[static_cast<std::size_t>(alpha.pixel_node(p))];
  return Tree(TreeKind::OmegaTree, alpha.width(), alpha.height(), std::move(parent),
              std::move(level), std::move(pixel_node));
}

}  // namespace morpho
