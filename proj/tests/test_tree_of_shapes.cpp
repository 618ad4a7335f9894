#include <doctest.h>

#include "morpho/component_tree.hpp"
#include "morpho/tree_of_shapes.hpp"
#include "oracles.hpp"
#include "random.hpp"

using namespace morpho;
using testing_support::Rng;

namespace {

std::vector<double> levels_of_pixels(const Tree& tree) {
  std::vector<double> out(tree.pixel_count());
  for (std::size_t p = 0; p < out.size(); ++p) out[p] = tree.level(tree.pixel_node(p));
  return out;
}

}  // namespace

TEST_CASE("nested rings give three shapes") {
  // clang-format off
  const RasterImage img(5, 5, 3, {0, 0, 0, 0, 0,
                                  0, 2, 2, 2, 0,
                                  0, 2, 1, 2, 0,
                                  0, 2, 2, 2, 0,
                                  0, 0, 0, 0, 0});
  // clang-format on
  const Tree t = build_tree_of_shapes(img);
  REQUIRE(t.node_count() == 3);
  const auto comps = testing_support::tree_components(t);
  CHECK(comps.at({0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 21, 22,
                  23, 24}) == 0);
  CHECK(comps.at({6, 7, 8, 11, 12, 13, 16, 17, 18}) == 2);
  CHECK(comps.at({12}) == 1);
  CHECK(t.kind() == TreeKind::TreeOfShapes);
}

TEST_CASE("constant image has only the root shape") {
  const Tree t = build_tree_of_shapes(RasterImage::filled(4, 3, 5, 2));
  CHECK(t.node_count() == 1);
  CHECK(t.level(0) == 2);
}

TEST_CASE("a bright square on flat ground has the max-tree's components") {
  auto v = std::vector<std::uint16_t>(64, 1);
  for (int y = 2; y < 5; ++y)
    for (int x = 3; x < 6; ++x) v[static_cast<std::size_t>(y * 8 + x)] = 4;
  const RasterImage img(8, 8, 5, v);
  CHECK(testing_support::tree_components(build_tree_of_shapes(img)) ==
        testing_support::tree_components(build_max_tree(img)));
}

TEST_CASE("border median uses the frame pixels") {
  CHECK(border_median(RasterImage(3, 1, 8, {1, 5, 7})) == 5);
  CHECK(border_median(RasterImage(2, 2, 8, {1, 2, 3, 7})) == 2.5);
  // clang-format off
  const RasterImage ring(3, 3, 10, {0, 1, 2,
                                    3, 9, 4,
                                    5, 6, 7});
  // clang-format on
  CHECK(border_median(ring) == 3.5);
  CHECK(testing_support::border_median(ring) == 3.5);
}

TEST_CASE("the root carries the border median, half levels included") {
  const Tree t = build_tree_of_shapes(RasterImage(2, 2, 8, {1, 2, 3, 7}));
  CHECK(t.level(0) == 2.5);
  validate(t);
}

TEST_CASE("shapes match the saturation oracle on random images") {
  Rng rng(23);
  for (int i = 0; i < 300; ++i) {
    const auto img = testing_support::random_image(rng, 12, 12, 6);
    const Tree t = build_tree_of_shapes(img);
    validate(t);
    REQUIRE(testing_support::tree_shapes(t) == testing_support::shapes(img));
    REQUIRE(t.node_count() == testing_support::shapes(img).size());
  }
}

TEST_CASE("shapes match the oracle on larger images with many levels") {
  Rng rng(24);
  for (int i = 0; i < 300; ++i) {
    const auto img = testing_support::random_image(rng, 16, 16, 14);
    const Tree t = build_tree_of_shapes(img);
    validate(t);
    REQUIRE(testing_support::tree_shapes(t) == testing_support::shapes(img));
  }
}

TEST_CASE("oracle shapes are laminar") {
  Rng rng(29);
  for (int i = 0; i < 60; ++i) {
    const auto img = testing_support::random_image(rng, 10, 10, 6);
    const auto s = testing_support::shapes(img);
    const std::vector<testing_support::PixelSet> list(s.begin(), s.end());
    for (std::size_t a = 0; a < list.size(); ++a)
      for (std::size_t b = a + 1; b < list.size(); ++b) {
        std::vector<std::int32_t> common;
        std::set_intersection(list[a].begin(), list[a].end(), list[b].begin(), list[b].end(),
                              std::back_inserter(common));
        const bool ok = common.empty() || common.size() == list[a].size() ||
                        common.size() == list[b].size();
        REQUIRE(ok);
      }
  }
}

TEST_CASE("tree of shapes reconstructs the image and is self-dual") {
  Rng rng(31);
  for (int i = 0; i < 300; ++i) {
    const auto img = testing_support::random_image(rng, 16, 16, 8);
    const Tree t = build_tree_of_shapes(img);
    const Tree d = build_tree_of_shapes(complement(img));
    const auto px = levels_of_pixels(t);
    for (std::size_t p = 0; p < img.size(); ++p) REQUIRE(px[p] == img[p]);
    REQUIRE(testing_support::tree_shapes(t) == testing_support::tree_shapes(d));
    const auto a = testing_support::tree_components(t);
    const auto b = testing_support::tree_components(d);
    for (const auto& [pixels, level] : a) REQUIRE(b.at(pixels) == img.levels() - 1 - level);
  }
}

TEST_CASE("a half-integer frame leaves the root without pixels") {
  const Tree t = build_tree_of_shapes(RasterImage(2, 2, 8, {1, 2, 3, 7}));
  CHECK(t.node_pixels(0).empty());
}
