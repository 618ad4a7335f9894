#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "morpho/attributes.hpp"
#include "morpho/error.hpp"

namespace morpho {

void NodeStats::add_pixel(int x, int y, int gray) {
  ++area;
  sum_x += x;
  sum_y += y;
  sum_xx += static_cast<Wide>(static_cast<std::uint64_t>(x) * static_cast<std::uint64_t>(x));
  sum_yy += static_cast<Wide>(static_cast<std::uint64_t>(y) * static_cast<std::uint64_t>(y));
  gray_sum += gray;
  gray_sum_sq += static_cast<Wide>(static_cast<std::uint64_t>(gray) * static_cast<std::uint64_t>(gray));
  gray_min = std::min(gray_min, gray);
  gray_max = std::max(gray_max, gray);
  bbox.xmin = std::min(bbox.xmin, x);
  bbox.ymin = std::min(bbox.ymin, y);
  bbox.xmax = std::max(bbox.xmax, x);
  bbox.ymax = std::max(bbox.ymax, y);
}

void NodeStats::merge(const NodeStats& c) {
  area += c.area;
  sum_x += c.sum_x;
  sum_y += c.sum_y;
  sum_xx += c.sum_xx;
  sum_yy += c.sum_yy;
  gray_sum += c.gray_sum;
  gray_sum_sq += c.gray_sum_sq;
  gray_min = std::min(gray_min, c.gray_min);
  gray_max = std::max(gray_max, c.gray_max);
  bbox.xmin = std::min(bbox.xmin, c.bbox.xmin);
  bbox.ymin = std::min(bbox.ymin, c.bbox.ymin);
  bbox.xmax = std::max(bbox.xmax, c.bbox.xmax);
  bbox.ymax = std::max(bbox.ymax, c.bbox.ymax);
}

const NodeStats& AttributeTable::at(NodeId n) const {
  if (n < 0 || static_cast<std::size_t>(n) >= stats_.size())
    throw DataError("node id " + std::to_string(n) + " not in attribute table");
  return stats_[static_cast<std::size_t>(n)];
}

AttributeTable compute_attributes(const Tree& tree, const RasterImage& image) {
  if (tree.width() != image.width() || tree.height() != image.height())
    throw DataError("tree and image dimensions differ");
  std::vector<NodeStats> stats(tree.node_count());
  const int w = image.width();
  for (std::size_t p = 0; p < image.size(); ++p) {
    const int x = static_cast<int>(p % static_cast<std::size_t>(w));
    const int y = static_cast<int>(p / static_cast<std::size_t>(w));
    stats[static_cast<std::size_t>(tree.pixel_node(p))].add_pixel(x, y, image[p]);
  }
  for (std::size_t i = tree.node_count(); i-- > 1;)
    stats[static_cast<std::size_t>(tree.parent(static_cast<NodeId>(i)))].merge(stats[i]);
  return AttributeTable(std::move(stats));
}

std::int64_t attr_area(const AttributeTable& table, NodeId node) { return table.at(node).area; }

namespace {

// n * sum_sq - sum^2, exact; equals n^2 times the population variance.
double scaled_variance(std::int64_t n, std::int64_t sum, Wide sum_sq) {
  const Wide lhs = static_cast<Wide>(n) * sum_sq;
  const Wide rhs = static_cast<Wide>(sum) * static_cast<Wide>(sum);
  return lhs > rhs ? static_cast<double>(lhs - rhs) : 0.0;
}

}  // namespace

double attr_moment_of_inertia(const AttributeTable& table, NodeId node) {
  const NodeStats& s = table.at(node);
  const double a = static_cast<double>(s.area);
  // mu20 = sum_xx - sum_x^2 / area, so area * (mu20 + mu02) is an exact integer.
  const double scaled = scaled_variance(s.area, s.sum_x, s.sum_xx) +
                        scaled_variance(s.area, s.sum_y, s.sum_yy);
  return scaled / (a * a * a);
}

double feat_std_dev(const AttributeTable& table, NodeId node) {
  const NodeStats& s = table.at(node);
  const double a = static_cast<double>(s.area);
  return std::sqrt(scaled_variance(s.area, s.gray_sum, s.gray_sum_sq)) / a;
}

void dump_attributes(std::ostream& out, const AttributeTable& table) {
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto n = static_cast<NodeId>(i);
    out << i << ' ' << attr_area(table, n) << ' ' << attr_moment_of_inertia(table, n) << ' '
        << feat_std_dev(table, n) << '\n';
  }
}

}  // namespace morpho
