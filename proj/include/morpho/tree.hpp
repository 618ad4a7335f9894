#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace morpho {

enum class TreeKind { MaxTree, MinTree, TreeOfShapes, AlphaTree, OmegaTree };
enum class Connectivity { C4, C8 };

std::string_view to_string(TreeKind kind);

/// Index of a node in the Tree that issued it.
using NodeId = std::int32_t;

/// Parent-array hierarchy shared by every tree kind.
///
/// Nodes are numbered in topological order: the root is node 0 and every
/// other node has a smaller-numbered parent, so a reverse index sweep visits
/// children before parents. `pixel_node` maps each pixel to the smallest node
/// containing it; `node_pixels` lists only the pixels attached directly.
class Tree {
 public:
  Tree() = default;
  Tree(TreeKind kind, int width, int height, std::vector<NodeId> parent, std::vector<double> level,
       std::vector<NodeId> pixel_node);

  TreeKind kind() const noexcept { return kind_; }
  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept { return pixel_node_.size(); }
  std::size_t node_count() const noexcept { return parent_.size(); }
  static constexpr NodeId root() noexcept { return 0; }

  NodeId parent(NodeId n) const { return parent_[static_cast<std::size_t>(n)]; }
  double level(NodeId n) const { return level_[static_cast<std::size_t>(n)]; }
  NodeId pixel_node(std::size_t pixel) const { return pixel_node_[pixel]; }
  std::span<const std::int32_t> node_pixels(NodeId n) const;

  std::span<const NodeId> parents() const noexcept { return parent_; }
  std::span<const double> levels() const noexcept { return level_; }
  std::span<const NodeId> pixel_nodes() const noexcept { return pixel_node_; }

  bool valid(NodeId n) const noexcept {
    return n >= 0 && static_cast<std::size_t>(n) < parent_.size();
  }

 private:
  TreeKind kind_ = TreeKind::MaxTree;
  int width_ = 0;
  int height_ = 0;
  std::vector<NodeId> parent_;
  std::vector<double> level_;
  std::vector<NodeId> pixel_node_;
  std::vector<std::int32_t> pixel_offset_;  // CSR over node_pixels
  std::vector<std::int32_t> pixel_list_;
};

/// Smallest node containing pixel (x, y). Throws DataError when out of bounds.
NodeId smallest_node(const Tree& tree, int x, int y);

/// Number of pixels in each node's full component (subtree).
std::vector<std::int64_t> subtree_areas(const Tree& tree);

/// Full pixel set of a node, sorted ascending. Walks the subtree.
std::vector<std::int32_t> component_pixels(const Tree& tree, NodeId node);

/// Checks the structural invariants common to all kinds plus the kind-specific
/// level ordering. Throws InvariantError naming the first violation.
void validate(const Tree& tree);

/// One line per node: `id parent level area`.
void dump_tree(std::ostream& out, const Tree& tree);

}  // namespace morpho
