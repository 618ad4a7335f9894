#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "morpho/error.hpp"
#include "morpho/tree.hpp"

namespace morpho {

std::string_view to_string(TreeKind kind) {
  switch (kind) {
    case TreeKind::MaxTree: return "max-tree";
    case TreeKind::MinTree: return "min-tree";
    case TreeKind::TreeOfShapes: return "tree-of-shapes";
    case TreeKind::AlphaTree: return "alpha-tree";
    case TreeKind::OmegaTree: return "omega-tree";
  }
  return "?";
}

Tree::Tree(TreeKind kind, int width, int height, std::vector<NodeId> parent,
           std::vector<double> level, std::vector<NodeId> pixel_node)
    : kind_(kind),
      width_(width),
      height_(height),
      parent_(std::move(parent)),
      level_(std::move(level)),
      pixel_node_(std::move(pixel_node)) {
  if (parent_.empty()) throw InvariantError("tree has no nodes");
  if (level_.size() != parent_.size()) throw InvariantError("level array size mismatch");
  if (pixel_node_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
    throw InvariantError("pixel map size mismatch");
  if (parent_[0] != 0) throw InvariantError("node 0 must be the root");
  for (std::size_t i = 1; i < parent_.size(); ++i)
    if (parent_[i] < 0 || static_cast<std::size_t>(parent_[i]) >= i)
      throw InvariantError("node " + std::to_string(i) + " is not topologically ordered");

  pixel_offset_.assign(parent_.size() + 1, 0);
  for (NodeId n : pixel_node_) {
    if (!valid(n)) throw InvariantError("pixel maps to an invalid node");
    ++pixel_offset_[static_cast<std::size_t>(n) + 1];
  }
  for (std::size_t i = 1; i < pixel_offset_.size(); ++i) pixel_offset_[i] += pixel_offset_[i - 1];
  pixel_list_.resize(pixel_node_.size());
  std::vector<std::int32_t> cursor(pixel_offset_.begin(), pixel_offset_.end() - 1);
  for (std::size_t p = 0; p < pixel_node_.size(); ++p)
    pixel_list_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(pixel_node_[p])]++)] =
        static_cast<std::int32_t>(p);
}

std::span<const std::int32_t> Tree::node_pixels(NodeId n) const {
  const auto i = static_cast<std::size_t>(n);
  return std::span<const std::int32_t>(pixel_list_)
      .subspan(static_cast<std::size_t>(pixel_offset_[i]),
               static_cast<std::size_t>(pixel_offset_[i + 1] - pixel_offset_[i]));
}

NodeId smallest_node(const Tree& tree, int x, int y) {
  if (x < 0 || y < 0 || x >= tree.width() || y >= tree.height())
    throw DataError("pixel (" + std::to_string(x) + ", " + std::to_string(y) +
                    ") outside the image");
  return tree.pixel_node(static_cast<std::size_t>(y) * static_cast<std::size_t>(tree.width()) +
                         static_cast<std::size_t>(x));
}

std::vector<std::int64_t> subtree_areas(const Tree& tree) {
  std::vector<std::int64_t> area(tree.node_count(), 0);
  for (NodeId n : tree.pixel_nodes()) ++area[static_cast<std::size_t>(n)];
  for (std::size_t i = tree.node_count(); i-- > 1;)
    area[static_cast<std::size_t>(tree.parent(static_cast<NodeId>(i)))] += area[i];
  return area;
}

std::vector<std::int32_t> component_pixels(const Tree& tree, NodeId node) {
  if (!tree.valid(node)) throw DataError("invalid node id");
  std::vector<char> inside(tree.node_count(), 0);
  inside[static_cast<std::size_t>(node)] = 1;
  for (std::size_t i = static_cast<std::size_t>(node) + 1; i < tree.node_count(); ++i)
    inside[i] = inside[static_cast<std::size_t>(tree.parent(static_cast<NodeId>(i)))];
  std::vector<std::int32_t> out;
  for (std::size_t p = 0; p < tree.pixel_count(); ++p)
    if (inside[static_cast<std::size_t>(tree.pixel_node(p))]) out.push_back(static_cast<std::int32_t>(p));
  return out;
}

void validate(const Tree& tree) {
  const auto fail = [](const std::string& what) { throw InvariantError(what); };
  const auto areas = subtree_areas(tree);
  for (std::size_t i = 0; i < tree.node_count(); ++i)
    if (areas[i] < 1) fail("node " + std::to_string(i) + " has an empty component");
  for (std::size_t i = 1; i < tree.node_count(); ++i) {
    const auto n = static_cast<NodeId>(i);
    const double child = tree.level(n);
    const double parent = tree.level(tree.parent(n));
    bool ordered = true;
    switch (tree.kind()) {
      case TreeKind::MaxTree: ordered = child > parent; break;
      case TreeKind::MinTree: ordered = child < parent; break;
      case TreeKind::TreeOfShapes:
        ordered = child != parent || std::floor(tree.level(0)) != tree.level(0);
        break;
      case TreeKind::AlphaTree:
      case TreeKind::OmegaTree: ordered = child < parent; break;
    }
    if (!ordered)
      fail("node " + std::to_string(i) + " violates the " + std::string(to_string(tree.kind())) +
           " level order");
  }
}

void dump_tree(std::ostream& out, const Tree& tree) {
  const auto areas = subtree_areas(tree);
  for (std::size_t i = 0; i < tree.node_count(); ++i) {
    const auto n = static_cast<NodeId>(i);
    out << i << ' ' << tree.parent(n) << ' ' << tree.level(n) << ' ' << areas[i] << '\n';
  }
}

}  // namespace morpho
