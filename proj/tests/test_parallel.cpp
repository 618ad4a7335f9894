#include <doctest.h>

#include <vector>

#include "morpho/imagery.hpp"
#include "morpho/kernels.hpp"
#include "morpho/profiles.hpp"
#include "random.hpp"

using namespace morpho;
using testing_support::Rng;

namespace {

std::vector<double> random_bsq(Rng& rng, std::size_t pixels, int bands) {
  std::vector<double> v(pixels * static_cast<std::size_t>(bands));
  for (auto& x : v) x = rng.real() * 1e4 - 3e3;
  return v;
}

}  // namespace

TEST_CASE("paint kernels agree") {
  Rng rng(1);
  for (int round = 0; round < 20; ++round) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform(1, 5000));
    const std::size_t nodes = static_cast<std::size_t>(rng.uniform(1, 300));
    std::vector<std::int32_t> pixel_node(n);
    for (auto& p : pixel_node) p = rng.uniform(0, static_cast<int>(nodes) - 1);
    std::vector<double> value(nodes);
    for (auto& v : value) v = rng.real();
    const std::size_t stride = static_cast<std::size_t>(rng.uniform(1, 6));
    const std::size_t offset = static_cast<std::size_t>(rng.uniform(0, static_cast<int>(stride) - 1));
    std::vector<double> a(n * stride, -1.0), b(n * stride, -1.0);
    kernels::serial::paint(pixel_node, value, a, stride, offset);
    kernels::omp::paint(pixel_node, value, b, stride, offset);
    REQUIRE(a == b);
  }
}

TEST_CASE("statistics kernels are bit identical") {
  Rng rng(2);
  for (int round = 0; round < 20; ++round) {
    const std::size_t pixels = static_cast<std::size_t>(rng.uniform(1, 20000));
    const int bands = rng.uniform(1, 12);
    const auto bsq = random_bsq(rng, pixels, bands);
    const auto ms = kernels::serial::band_means(bsq, pixels, bands);
    const auto mo = kernels::omp::band_means(bsq, pixels, bands);
    REQUIRE(ms == mo);
    const auto cs = kernels::serial::covariance(bsq, pixels, bands, ms);
    REQUIRE(cs == kernels::omp::covariance(bsq, pixels, bands, ms));
    const int components = rng.uniform(1, bands);
    std::vector<double> basis(static_cast<std::size_t>(bands * components));
    for (auto& x : basis) x = rng.real() - 0.5;
    REQUIRE(kernels::serial::project(bsq, pixels, bands, ms, basis, components) ==
            kernels::omp::project(bsq, pixels, bands, ms, basis, components));
  }
}

TEST_CASE("pca and profiles do not depend on the execution mode") {
  Rng rng(3);
  const int w = 40, h = 30, bands = 7;
  const MultibandImage cube(w, h, bands, random_bsq(rng, w * h, bands));
  const auto ps = pca(cube, 4, Exec::Serial);
  const auto po = pca(cube, 4, Exec::Parallel);
  CHECK(ps.eigenvalues == po.eigenvalues);
  CHECK(std::vector<double>(ps.components.values().begin(), ps.components.values().end()) ==
        std::vector<double>(po.components.values().begin(), po.components.values().end()));

  const std::vector<FilterSpec> specs{{Attribute::Area, {3, 12, 48}, Rule::Min},
                                      {Attribute::MomentOfInertia, {0.2, 0.4}, Rule::Direct}};
  const std::vector<Feature> features{Feature::StdDev, Feature::Area};
  for (auto set : {TreeSet::ComponentPair, TreeSet::TreeOfShapes, TreeSet::Alpha, TreeSet::Omega})
    for (auto mode : {ProfileMode::AP, ProfileMode::FP}) {
      ProfileOptions serial, parallel;
      serial.exec = Exec::Serial;
      parallel.exec = Exec::Parallel;
      const auto a = build_extended(cube, 2, set, specs, features, mode, serial);
      const auto b = build_extended(cube, 2, set, specs, features, mode, parallel);
      REQUIRE(a.layout == b.layout);
      REQUIRE(a.data == b.data);
    }
}
