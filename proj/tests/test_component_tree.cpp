#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "morpho/component_tree.hpp"
#include "morpho/error.hpp"
#include "morpho/profiles.hpp"
#include "oracles.hpp"
#include "random.hpp"

using namespace morpho;
using testing_support::Rng;

namespace {

RasterImage center_peak() {
  return RasterImage(3, 3, 4, {1, 1, 1, 1, 3, 1, 1, 1, 1});
}

std::vector<double> levels_of_pixels(const Tree& tree) {
  std::vector<double> out(tree.pixel_count());
  for (std::size_t p = 0; p < out.size(); ++p) out[p] = tree.level(tree.pixel_node(p));
  return out;
}

std::vector<double> as_double(const RasterImage& image) {
  return std::vector<double>(image.values().begin(), image.values().end());
}

}  // namespace

TEST_CASE("max-tree of a single bright pixel has two canonical nodes") {
  const Tree t = build_max_tree(center_peak());
  REQUIRE(t.node_count() == 2);
  CHECK(t.level(0) == 1);
  CHECK(t.level(1) == 3);
  CHECK(t.parent(1) == 0);
  const auto areas = subtree_areas(t);
  CHECK(areas[0] == 9);
  CHECK(areas[1] == 1);
  CHECK(t.kind() == TreeKind::MaxTree);
}

TEST_CASE("constant image gives a root-only tree") {
  const auto img = RasterImage::filled(5, 4, 8, 3);
  CHECK(build_max_tree(img).node_count() == 1);
  CHECK(build_min_tree(img).node_count() == 1);
  CHECK(smallest_node(build_max_tree(img), 2, 2) == 0);
}

TEST_CASE("max-tree of the row 0 2 1 2") {
  const Tree t = build_max_tree(RasterImage(4, 1, 3, {0, 2, 1, 2}));
  REQUIRE(t.node_count() == 4);
  const auto comps = testing_support::tree_components(t);
  CHECK(comps.at({0, 1, 2, 3}) == 0);
  CHECK(comps.at({1, 2, 3}) == 1);
  CHECK(comps.at({1}) == 2);
  CHECK(comps.at({3}) == 2);
}

TEST_CASE("min-tree of a single bright pixel") {
  const Tree t = build_min_tree(center_peak());
  REQUIRE(t.node_count() == 2);
  CHECK(t.level(0) == 3);
  CHECK(t.level(1) == 1);
  CHECK(subtree_areas(t)[1] == 8);
  CHECK(t.kind() == TreeKind::MinTree);
}

TEST_CASE("smallest_node resolves the containing component") {
  const Tree t = build_max_tree(center_peak());
  CHECK(t.level(smallest_node(t, 1, 1)) == 3);
  CHECK(smallest_node(t, 0, 0) == 0);
  CHECK_THROWS_AS(smallest_node(t, 3, 0), DataError);
  CHECK_THROWS_AS(smallest_node(t, 0, -1), DataError);
}

TEST_CASE("component trees match the level-set flood-fill oracle") {
  Rng rng(7);
  for (int i = 0; i < 300; ++i) {
    const auto img = testing_support::random_image(rng, 12, 12, 8);
    for (bool c8 : {false, true}) {
      const auto conn = c8 ? Connectivity::C8 : Connectivity::C4;
      const Tree max = build_max_tree(img, conn);
      const Tree min = build_min_tree(img, conn);
      validate(max);
      validate(min);
      REQUIRE(testing_support::tree_components(max) ==
              testing_support::upper_set_components(img, c8));
      REQUIRE(testing_support::tree_components(min) ==
              testing_support::lower_set_components(img, c8));
    }
  }
}

TEST_CASE("reconstruction identity and topological numbering on random images") {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const auto img = testing_support::random_image(rng, 32, 32, 16);
    for (auto conn : {Connectivity::C4, Connectivity::C8}) {
      for (const Tree& t : {build_max_tree(img, conn), build_min_tree(img, conn)}) {
        REQUIRE(levels_of_pixels(t) == as_double(img));
        for (std::size_t n = 1; n < t.node_count(); ++n)
          REQUIRE(t.parent(static_cast<NodeId>(n)) < static_cast<NodeId>(n));
        CHECK(t.parent(0) == 0);
      }
    }
  }
}

TEST_CASE("component nesting matches ancestry") {
  Rng rng(13);
  for (int i = 0; i < 50; ++i) {
    const auto img = testing_support::random_image(rng, 10, 10, 6);
    const Tree t = build_max_tree(img);
    const auto sets = testing_support::subtree_walk(t);
    const auto is_ancestor = [&](NodeId a, NodeId b) {
      while (true) {
        if (a == b) return true;
        if (b == t.parent(b)) return false;
        b = t.parent(b);
      }
    };
    for (std::size_t a = 0; a < sets.size(); ++a)
      for (std::size_t b = 0; b < sets.size(); ++b) {
        if (a == b) continue;
        const bool nested = std::includes(sets[a].begin(), sets[a].end(), sets[b].begin(), sets[b].end());
        REQUIRE(nested == is_ancestor(static_cast<NodeId>(a), static_cast<NodeId>(b)));
        if (!nested && !std::includes(sets[b].begin(), sets[b].end(), sets[a].begin(), sets[a].end())) {
          std::vector<std::int32_t> common;
          std::set_intersection(sets[a].begin(), sets[a].end(), sets[b].begin(), sets[b].end(),
                                std::back_inserter(common));
          REQUIRE(common.empty());
        }
      }
  }
}

TEST_CASE("min-tree is the max-tree of the complement") {
  Rng rng(17);
  for (int i = 0; i < 200; ++i) {
    const auto img = testing_support::random_image(rng, 16, 16, 10);
    const Tree min = build_min_tree(img);
    const Tree dual = build_max_tree(complement(img));
    REQUIRE(min.parents().size() == dual.parents().size());
    CHECK(std::equal(min.parents().begin(), min.parents().end(), dual.parents().begin()));
    CHECK(std::equal(min.pixel_nodes().begin(), min.pixel_nodes().end(), dual.pixel_nodes().begin()));
    for (std::size_t n = 0; n < min.node_count(); ++n)
      CHECK(min.level(static_cast<NodeId>(n)) ==
            img.levels() - 1 - dual.level(static_cast<NodeId>(n)));
  }
}

TEST_CASE("dump_tree writes id parent level area") {
  std::ostringstream out;
  dump_tree(out, build_max_tree(center_peak()));
  CHECK(out.str() == "0 0 1 9\n1 0 3 1\n");
}

TEST_CASE("validate rejects a broken level order") {
  Tree bad(TreeKind::MaxTree, 2, 1, {0, 0}, {2, 1}, {0, 1});
  CHECK_THROWS_AS(validate(bad), InvariantError);
}
