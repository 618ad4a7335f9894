#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "morpho/image.hpp"
#include "morpho/tree.hpp"

namespace morpho {

// 128-bit accumulators keep second-order sums exact for 2^16 x 2^16 images.
__extension__ using Wide = unsigned __int128;

struct BoundingBox {
  int xmin;
  int ymin;
  int xmax;
  int ymax;

  bool operator==(const BoundingBox&) const = default;
};

/// Accumulated statistics of one node's full component.
struct NodeStats {
  std::int64_t area = 0;
  std::int64_t sum_x = 0;
  std::int64_t sum_y = 0;
  Wide sum_xx = 0;
  Wide sum_yy = 0;
  std::int64_t gray_sum = 0;
  Wide gray_sum_sq = 0;
  int gray_min = 65536;
  int gray_max = -1;
  BoundingBox bbox{1 << 30, 1 << 30, -1, -1};

  void add_pixel(int x, int y, int gray);
  void merge(const NodeStats& child);

  bool operator==(const NodeStats&) const = default;
};

class AttributeTable {
 public:
  AttributeTable() = default;
  explicit AttributeTable(std::vector<NodeStats> stats) : stats_(std::move(stats)) {}

  std::size_t size() const noexcept { return stats_.size(); }
  const NodeStats& operator[](NodeId n) const { return stats_[static_cast<std::size_t>(n)]; }
  /// Checked access; throws DataError for an id the table does not cover.
  const NodeStats& at(NodeId n) const;
  std::span<const NodeStats> stats() const noexcept { return stats_; }

 private:
  std::vector<NodeStats> stats_;
};

/// Single bottom-up pass: pixels into their smallest node, then children into parents.
AttributeTable compute_attributes(const Tree& tree, const RasterImage& image);

std::int64_t attr_area(const AttributeTable& table, NodeId node);

/// (mu20 + mu02) / area^2 with central moments of the pixel coordinates.
double attr_moment_of_inertia(const AttributeTable& table, NodeId node);

/// Population standard deviation of the node's gray values.
double feat_std_dev(const AttributeTable& table, NodeId node);

/// One line per node: `id area inertia stddev`.
void dump_attributes(std::ostream& out, const AttributeTable& table);

}  // namespace morpho
