#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "grid.hpp"
#include "morpho/error.hpp"
#include "morpho/tree_of_shapes.hpp"

namespace morpho {

double border_median(const RasterImage& image) {
  const int w = image.width();
  const int h = image.height();
  std::vector<int> border;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (x == 0 || y == 0 || x == w - 1 || y == h - 1) border.push_back(image.at(x, y));
  std::sort(border.begin(), border.end());
  const std::size_t m = border.size() / 2;
  if (border.size() % 2 == 1) return border[m];
  return 0.5 * (border[m - 1] + border[m]);
}

namespace {

constexpr std::int32_t kRootShape = 0;

struct Region {
  std::int32_t parent;
  bool frame_side;
  std::int64_t area = 0;  // interior pixels of the region itself
  std::int32_t minpix = std::numeric_limits<std::int32_t>::max();
  std::int64_t sat_area = 0;  // region plus every region it encloses
  std::int32_t sat_minpix = std::numeric_limits<std::int32_t>::max();
};

// Region adjacency tree of one binary threshold of the framed grid.
// Region 0 contains the frame. Regions on the frame's side of the threshold
// are 8-connected and the others 4-connected; every region other than 0 is
// discovered from the one that encloses it.
class LevelSetRegions {
 public:
  LevelSetRegions(int width, int height)
      : w_(width), h_(height), fw_(width + 2), fh_(height + 2),
        label_(static_cast<std::size_t>(fw_) * static_cast<std::size_t>(fh_)) {}

  void compute(const std::vector<std::uint8_t>& fg) {
    std::fill(label_.begin(), label_.end(), -1);
    regions_.clear();
    seeds_.clear();
    seeds_.push_back({0, -1});
    while (!seeds_.empty()) {
      const auto [seed, parent] = seeds_.back();
      seeds_.pop_back();
      if (label_[static_cast<std::size_t>(seed)] != -1) continue;
      flood(fg, seed, parent);
    }
    for (std::size_t r = regions_.size(); r-- > 0;) {
      Region& reg = regions_[r];
      reg.sat_area += reg.area;
      reg.sat_minpix = std::min(reg.sat_minpix, reg.minpix);
      if (reg.parent >= 0) {
        Region& up = regions_[static_cast<std::size_t>(reg.parent)];
        up.sat_area += reg.sat_area;
        up.sat_minpix = std::min(up.sat_minpix, reg.sat_minpix);
      }
    }
  }

  const std::vector<Region>& regions() const noexcept { return regions_; }
  std::int32_t region_of_interior(std::int32_t p) const {
    const int x = p % w_ + 1;
    const int y = p / w_ + 1;
    return label_[static_cast<std::size_t>(y * fw_ + x)];
  }

 private:
  void flood(const std::vector<std::uint8_t>& fg, std::int32_t seed, std::int32_t parent) {
    const auto id = static_cast<std::int32_t>(regions_.size());
    const bool polarity = fg[static_cast<std::size_t>(seed)] != 0;
    const bool frame_side = polarity == (fg[0] != 0);
    regions_.push_back(Region{parent, frame_side});
    Region* reg = &regions_.back();
    const int count = frame_side ? 8 : 4;
    stack_.clear();
    stack_.push_back(seed);
    label_[static_cast<std::size_t>(seed)] = id;
    while (!stack_.empty()) {
      const std::int32_t p = stack_.back();
      stack_.pop_back();
      const int x = p % fw_;
      const int y = p / fw_;
      if (x >= 1 && y >= 1 && x <= w_ && y <= h_) {
        ++reg->area;
        reg->minpix = std::min(reg->minpix, static_cast<std::int32_t>((y - 1) * w_ + (x - 1)));
      }
      for (int k = 0; k < 8; ++k) {
        const int nx = x + detail::kNeighbours[k].dx;
        const int ny = y + detail::kNeighbours[k].dy;
        if (nx < 0 || ny < 0 || nx >= fw_ || ny >= fh_) continue;
        const auto q = static_cast<std::int32_t>(ny * fw_ + nx);
        const auto uq = static_cast<std::size_t>(q);
        if (label_[uq] != -1) continue;
        if ((fg[uq] != 0) == polarity) {
          if (k < count) {
            label_[uq] = id;
            stack_.push_back(q);
          }
        } else if (k < 4) {
          seeds_.push_back({q, id});
        }
      }
    }
  }

  int w_, h_, fw_, fh_;
  std::vector<std::int32_t> label_;
  std::vector<Region> regions_;
  std::vector<std::pair<std::int32_t, std::int32_t>> seeds_;
  std::vector<std::int32_t> stack_;
};

struct Shape {
  std::int64_t area;
  std::int32_t minpix;
};

// Enumerates the thresholds between consecutive values of the framed image,
// the frame value included; each splits the grid into an upper set and its
// complementary lower set.
// Values are doubled so that a half-integer frame value stays integral.
template <class Visit>
void for_each_level_set(const RasterImage& image, double frame, Visit&& visit) {
  const int w = image.width();
  const int h = image.height();
  const int fw = w + 2;
  const int fh = h + 2;
  const auto frame2 = static_cast<std::int32_t>(std::lround(2.0 * frame));
  std::vector<std::int32_t> v2(static_cast<std::size_t>(fw) * static_cast<std::size_t>(fh), frame2);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      v2[static_cast<std::size_t>((y + 1) * fw + x + 1)] = 2 * image.at(x, y);

  std::vector<int> distinct(v2.begin(), v2.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  // A frame value between two gray levels splits their gap in two; on either
  // half only the side away from the frame yields shapes.
  const bool frame_between = frame2 % 2 != 0;

  LevelSetRegions regions(w, h);
  std::vector<std::uint8_t> fg(v2.size());
  for (std::size_t i = 1; i < distinct.size(); ++i) {
    const int t = distinct[i];
    for (std::size_t k = 0; k < v2.size(); ++k) fg[k] = v2[k] >= t;
    regions.compute(fg);
    const bool beside_frame = frame_between && (t == frame2 || distinct[i - 1] == frame2);
    visit(regions, !beside_frame);
  }
}

std::uint64_t shape_key(std::int32_t minpix, std::int64_t area) {
  return (static_cast<std::uint64_t>(minpix) << 32) | static_cast<std::uint64_t>(area);
}

}  // namespace

Tree build_tree_of_shapes(const RasterImage& image) {
  const std::size_t n = image.size();
  const double frame = border_median(image);

  // Shapes are nested or disjoint, so (min pixel, area) identifies one.
  std::unordered_map<std::uint64_t, std::int32_t> index;
  std::vector<Shape> shapes;
  const auto intern = [&](std::int32_t minpix, std::int64_t area) {
    const auto [it, inserted] =
        index.try_emplace(shape_key(minpix, area), static_cast<std::int32_t>(shapes.size()));
    if (inserted) shapes.push_back(Shape{area, minpix});
    return it->second;
  };
  intern(0, static_cast<std::int64_t>(n));

  std::vector<std::int64_t> best_area(n, static_cast<std::int64_t>(n));
  std::vector<std::int32_t> best_shape(n, kRootShape);
  std::vector<std::int32_t> region_shape;

  // A region other than the frame's saturates to a shape, the smallest one at
  // this threshold holding the region's pixels. Frame-side regions skipped
  // beside a fractional frame value fall back to their enclosing shape.
  const auto assign_region_shapes = [&](const LevelSetRegions& level_set, bool frame_side_shapes,
                                        bool create) {
    const auto& regs = level_set.regions();
    region_shape.assign(regs.size(), kRootShape);
    for (std::size_t r = 1; r < regs.size(); ++r) {
      const Region& reg = regs[r];
      if (reg.frame_side && !frame_side_shapes)
        region_shape[r] = region_shape[static_cast<std::size_t>(reg.parent)];
      else
        region_shape[r] = create ? intern(reg.sat_minpix, reg.sat_area)
                                 : index.at(shape_key(reg.sat_minpix, reg.sat_area));
    }
  };

  for_each_level_set(image, frame, [&](const LevelSetRegions& level_set, bool frame_side_shapes) {
    assign_region_shapes(level_set, frame_side_shapes, true);
    for (std::size_t p = 0; p < n; ++p) {
      const auto r = static_cast<std::size_t>(level_set.region_of_interior(static_cast<std::int32_t>(p)));
      const std::int32_t s = region_shape[r];
      const std::int64_t a = shapes[static_cast<std::size_t>(s)].area;
      if (a < best_area[p]) {
        best_area[p] = a;
        best_shape[p] = s;
      }
    }
  });

  // Parent of a shape: the smallest strictly larger shape containing its
  // minimum pixel. Shapes containing one pixel form a chain, so walking the
  // region ancestry of that pixel at every threshold finds it.
  std::vector<std::int32_t> shape_parent(shapes.size(), kRootShape);
  std::vector<std::int64_t> parent_area(shapes.size(), static_cast<std::int64_t>(n) + 1);
  shape_parent[kRootShape] = kRootShape;
  std::vector<std::vector<std::int32_t>> owned(n);  // shapes keyed by their minimum pixel
  for (std::size_t s = 1; s < shapes.size(); ++s)
    owned[static_cast<std::size_t>(shapes[s].minpix)].push_back(static_cast<std::int32_t>(s));
  std::vector<std::int32_t> anchors;
  for (std::size_t p = 0; p < n; ++p)
    if (!owned[p].empty()) anchors.push_back(static_cast<std::int32_t>(p));

  for_each_level_set(image, frame, [&](const LevelSetRegions& level_set, bool frame_side_shapes) {
    assign_region_shapes(level_set, frame_side_shapes, false);
    const auto& regs = level_set.regions();
    for (std::int32_t q : anchors) {
      std::int32_t r = level_set.region_of_interior(q);
      std::int32_t last = -1;
      while (r >= 0) {
        const std::int32_t s = region_shape[static_cast<std::size_t>(r)];
        if (s != last) {
          last = s;
          const std::int64_t a = shapes[static_cast<std::size_t>(s)].area;
          for (std::int32_t child : owned[static_cast<std::size_t>(q)]) {
            const auto c = static_cast<std::size_t>(child);
            if (a > shapes[c].area && a < parent_area[c]) {
              parent_area[c] = a;
              shape_parent[c] = s;
            }
          }
        }
        r = regs[static_cast<std::size_t>(r)].parent;
      }
    }
  });

  // Number nodes by decreasing area: parents precede children.
  std::vector<std::int32_t> order(shapes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
    return shapes[static_cast<std::size_t>(a)].area > shapes[static_cast<std::size_t>(b)].area;
  });
  std::vector<NodeId> node_of(shapes.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    node_of[static_cast<std::size_t>(order[i])] = static_cast<NodeId>(i);

  std::vector<NodeId> parent(shapes.size());
  std::vector<double> level(shapes.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < order.size(); ++i)
    parent[i] = node_of[static_cast<std::size_t>(shape_parent[static_cast<std::size_t>(order[i])])];
  level[0] = frame;

  std::vector<NodeId> pixel_node(n);
  for (std::size_t p = 0; p < n; ++p) {
    const NodeId node = node_of[static_cast<std::size_t>(best_shape[p])];
    pixel_node[p] = node;
    if (node == 0) continue;
    const double v = image[p];
    auto& l = level[static_cast<std::size_t>(node)];
    if (std::isnan(l)) l = v;
    else if (l != v) throw InvariantError("tree of shapes: shape owns pixels of different levels");
  }
  // A shape owning no pixel is a frame-side component whose pixels split
  // further once the threshold crosses the frame; it sits at the frame value.
  for (std::size_t i = 1; i < level.size(); ++i)
    if (std::isnan(level[i])) level[i] = frame;

  return Tree(TreeKind::TreeOfShapes, image.width(), image.height(), std::move(parent),
              std::move(level), std::move(pixel_node));
}

}  // namespace morpho
