#include <doctest.h>

#include "morpho/component_tree.hpp"
#include "morpho/error.hpp"
#include "morpho/partition_tree.hpp"
#include "oracles.hpp"
#include "random.hpp"

using namespace morpho;
using testing_support::Rng;

TEST_CASE("alpha-tree of the row 0 1 3 4") {
  const RasterImage img(4, 1, 5, {0, 1, 3, 4});
  const Tree t = build_alpha_tree(img);
  REQUIRE(t.node_count() == 7);
  const auto comps = testing_support::tree_components(t);
  CHECK(comps.at({0}) == 0);
  CHECK(comps.at({3}) == 0);
  CHECK(comps.at({0, 1}) == 1);
  CHECK(comps.at({2, 3}) == 1);
  CHECK(comps.at({0, 1, 2, 3}) == 2);
  CHECK(t.kind() == TreeKind::AlphaTree);
}

TEST_CASE("edge list holds one weighted entry per adjacent pair") {
  const RasterImage img(2, 2, 8, {0, 3, 5, 1});
  const auto c4 = edge_list(img, Connectivity::C4);
  CHECK(c4.size() == 4);
  CHECK(edge_list(img, Connectivity::C8).size() == 6);
  for (const auto& e : c4)
    CHECK(e.weight == std::abs(double(img[static_cast<std::size_t>(e.a)]) -
                               double(img[static_cast<std::size_t>(e.b)])));
}

TEST_CASE("constant image gives one alpha node and one omega node") {
  const auto img = RasterImage::filled(3, 3, 4, 2);
  const Tree a = build_alpha_tree(img);
  CHECK(a.node_count() == 1);
  CHECK(build_omega_tree(a, img).node_count() == 1);
}

TEST_CASE("zero cut of the alpha-tree is the flat-zone partition") {
  Rng rng(41);
  for (int i = 0; i < 100; ++i) {
    const auto img = testing_support::random_image(rng, 14, 14, 5);
    const Tree t = build_alpha_tree(img);
    std::set<testing_support::PixelSet> leaves;
    for (const auto& [pixels, level] : testing_support::tree_components(t))
      if (level == 0) leaves.insert(pixels);
    std::vector<bool> all(img.size(), true);
    std::set<testing_support::PixelSet> zones;
    // Flat zones: 4-connected runs of equal gray.
    for (int v = 0; v < img.levels(); ++v) {
      std::vector<bool> inside(img.size());
      for (std::size_t p = 0; p < img.size(); ++p) inside[p] = img[p] == v;
      for (auto& c : testing_support::flood_components(img.width(), img.height(), inside, false))
        zones.insert(c);
    }
    REQUIRE(leaves == zones);
    for (std::size_t p = 0; p < img.size(); ++p) REQUIRE(t.level(t.pixel_node(p)) == 0);
  }
}

TEST_CASE("alpha-trees match the threshold-edge flood fill for every alpha") {
  Rng rng(43);
  for (int i = 0; i < 200; ++i) {
    const auto img = testing_support::random_image(rng, 12, 12, 8);
    for (bool c8 : {false, true}) {
      const Tree t = build_alpha_tree(img, c8 ? Connectivity::C8 : Connectivity::C4);
      validate(t);
      REQUIRE(testing_support::tree_components(t) == testing_support::alpha_components(img, c8));
    }
  }
}

TEST_CASE("alpha cuts are partitions that coarsen with alpha") {
  Rng rng(47);
  for (int i = 0; i < 50; ++i) {
    const auto img = testing_support::random_image(rng, 12, 12, 8);
    const Tree t = build_alpha_tree(img);
    std::vector<int> previous;
    for (int alpha = 0; alpha < img.levels(); ++alpha) {
      // Cut: each pixel's largest ancestor with level <= alpha.
      std::vector<int> label(img.size());
      for (std::size_t p = 0; p < img.size(); ++p) {
        NodeId n = t.pixel_node(p);
        while (n != t.parent(n) && t.level(t.parent(n)) <= alpha) n = t.parent(n);
        label[p] = n;
      }
      const auto oracle = testing_support::alpha_cut(img, alpha, false);
      for (std::size_t p = 0; p < img.size(); ++p)
        for (std::size_t q = 0; q < img.size(); ++q) {
          REQUIRE((label[p] == label[q]) == (oracle[p] == oracle[q]));
          if (!previous.empty() && previous[p] == previous[q]) REQUIRE(label[p] == label[q]);
        }
      previous = label;
    }
  }
}

TEST_CASE("omega-tree of the row 0 1 3 4") {
  const RasterImage img(4, 1, 5, {0, 1, 3, 4});
  const Tree w = build_omega_tree(build_alpha_tree(img), img);
  REQUIRE(w.node_count() == 7);
  const auto comps = testing_support::tree_components(w);
  CHECK(comps.at({0, 1}) == 1);
  CHECK(comps.at({2, 3}) == 1);
  CHECK(comps.at({0, 1, 2, 3}) == 4);
  CHECK(w.kind() == TreeKind::OmegaTree);
}

TEST_CASE("omega-tree of the row 0 2 4 keeps singletons under the root") {
  const RasterImage img(3, 1, 5, {0, 2, 4});
  const Tree a = build_alpha_tree(img);
  CHECK(a.node_count() == 4);
  CHECK(a.level(0) == 2);
  const Tree w = build_omega_tree(a, img);
  REQUIRE(w.node_count() == 4);
  CHECK(w.level(0) == 4);
  for (NodeId n = 1; n < 4; ++n) CHECK(w.level(n) == 0);
}

TEST_CASE("omega-trees match the constrained-connectivity oracle") {
  Rng rng(53);
  for (int i = 0; i < 200; ++i) {
    const auto img = testing_support::random_image(rng, 12, 12, 8);
    for (bool c8 : {false, true}) {
      const Tree a = build_alpha_tree(img, c8 ? Connectivity::C8 : Connectivity::C4);
      const Tree w = build_omega_tree(a, img);
      validate(w);
      REQUIRE(testing_support::tree_components(w) == testing_support::omega_components(img, c8));
      const auto sets = testing_support::subtree_walk(w);
      for (std::size_t n = 0; n < sets.size(); ++n) {
        const auto node = static_cast<NodeId>(n);
        REQUIRE(testing_support::gray_range(img, sets[n]) <= w.level(node));
        if (node != 0) REQUIRE(w.level(node) < w.level(w.parent(node)));
      }
    }
  }
}

TEST_CASE("omega components refine alpha components at the same bound") {
  Rng rng(59);
  for (int i = 0; i < 50; ++i) {
    const auto img = testing_support::random_image(rng, 10, 10, 8);
    const Tree a = build_alpha_tree(img);
    const Tree w = build_omega_tree(a, img);
    for (int k = 0; k < img.levels(); ++k) {
      const auto alpha = testing_support::alpha_cut(img, k, false);
      for (std::size_t p = 0; p < img.size(); ++p) {
        NodeId n = w.pixel_node(p);
        while (n != w.parent(n) && w.level(w.parent(n)) <= k) n = w.parent(n);
        for (auto q : component_pixels(w, n)) REQUIRE(alpha[static_cast<std::size_t>(q)] == alpha[p]);
      }
    }
  }
}

TEST_CASE("omega-tree rejects a mismatched input") {
  const RasterImage img(3, 1, 5, {0, 2, 4});
  CHECK_THROWS_AS(build_omega_tree(build_max_tree(img), img), DataError);
  CHECK_THROWS_AS(build_omega_tree(build_alpha_tree(img), RasterImage(1, 3, 5, {0, 2, 4})),
                  DataError);
}

TEST_CASE("multiband alpha-tree on one band equals the gray alpha-tree") {
  Rng rng(61);
  for (int i = 0; i < 30; ++i) {
    const auto img = testing_support::random_image(rng, 10, 10, 8);
    std::vector<double> v(img.values().begin(), img.values().end());
    const MultibandImage cube(img.width(), img.height(), 1, v);
    const Tree a = build_alpha_tree(img);
    const Tree b = build_alpha_tree(cube);
    CHECK(testing_support::tree_components(a) == testing_support::tree_components(b));
  }
}

TEST_CASE("multiband alpha-tree uses Euclidean band distance") {
  const MultibandImage cube(2, 1, 2, {0, 3, 0, 4});
  const Tree t = build_alpha_tree(cube);
  CHECK(t.node_count() == 3);
  CHECK(t.level(0) == 5);
}
