// Times the serial reference loops against the OpenMP kernels.
// Usage: bench [pixels] [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <vector>

#include "morpho/forest.hpp"
#include "morpho/imagery.hpp"
#include "morpho/kernels.hpp"
#include "morpho/profiles.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace morpho;

namespace {

double best_of(int repeats, const std::function<void()>& body) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, double serial, double parallel, bool same) {
  std::printf("%-22s %10.2f %10.2f %8.2fx  %s\n", name, serial * 1e3, parallel * 1e3, serial / parallel,
              same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t pixels = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1u << 20;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 5;
  const int bands = 32, components = 4;
  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::printf("pixels %zu, bands %d, threads %d, best of %d\n", pixels, bands, threads, repeats);
  std::printf("%-22s %10s %10s %9s\n", "kernel", "serial ms", "omp ms", "speedup");

  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> dist(0.0, 4096.0);
  std::vector<double> bsq(pixels * bands);
  for (auto& x : bsq) x = dist(gen);

  std::vector<std::int32_t> pixel_node(pixels);
  std::vector<double> node_value(pixels / 4 + 1);
  for (auto& p : pixel_node) p = static_cast<std::int32_t>(gen() % node_value.size());
  for (auto& v : node_value) v = dist(gen);
  std::vector<double> a(pixels * 3), b(pixels * 3);
  const double tp_s = best_of(repeats, [&] { kernels::serial::paint(pixel_node, node_value, a, 3, 1); });
  const double tp_o = best_of(repeats, [&] { kernels::omp::paint(pixel_node, node_value, b, 3, 1); });
  row("paint", tp_s, tp_o, a == b);

  std::vector<double> ms, mo;
  const double tm_s = best_of(repeats, [&] { ms = kernels::serial::band_means(bsq, pixels, bands); });
  const double tm_o = best_of(repeats, [&] { mo = kernels::omp::band_means(bsq, pixels, bands); });
  row("band_means", tm_s, tm_o, ms == mo);

  std::vector<double> cs, co;
  const double tc_s = best_of(repeats, [&] { cs = kernels::serial::covariance(bsq, pixels, bands, ms); });
  const double tc_o = best_of(repeats, [&] { co = kernels::omp::covariance(bsq, pixels, bands, ms); });
  row("covariance", tc_s, tc_o, cs == co);

  std::vector<double> basis(bands * components);
  for (auto& x : basis) x = dist(gen) / 4096.0 - 0.5;
  std::vector<double> ps, po;
  const double tj_s = best_of(repeats, [&] { ps = kernels::serial::project(bsq, pixels, bands, ms, basis, components); });
  const double tj_o = best_of(repeats, [&] { po = kernels::omp::project(bsq, pixels, bands, ms, basis, components); });
  row("project", tj_s, tj_o, ps == po);

  const int side = 512;
  std::vector<double> cube(static_cast<std::size_t>(side) * side * 8);
  for (auto& x : cube) x = dist(gen);
  const MultibandImage image(side, side, 8, cube);
  const std::vector<FilterSpec> specs{default_filter(Attribute::Area, image.pixel_count())};
  const std::vector<Feature> features{Feature::StdDev, Feature::Area};
  ProfileOptions serial, parallel;
  serial.exec = Exec::Serial;
  parallel.exec = Exec::Parallel;
  ProfileStack fs, fo;
  const int profile_repeats = std::max(1, repeats / 2);
  const double tf_s = best_of(profile_repeats, [&] {
    fs = build_extended(image, 4, TreeSet::ComponentPair, specs, features, ProfileMode::FP, serial);
  });
  const double tf_o = best_of(profile_repeats, [&] {
    fo = build_extended(image, 4, TreeSet::ComponentPair, specs, features, ProfileMode::FP, parallel);
  });
  row("extended FP 512x512", tf_s, tf_o, fs.data == fo.data);

  const std::size_t n = 4000, dim = 40;
  SampleMatrix x(n, dim);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = static_cast<int>(i % 4) + 1;
    for (std::size_t j = 0; j < dim; ++j) x(i, j) = dist(gen) + (j % 4 == i % 4 ? 800.0 : 0.0);
  }
  ForestModel rs, ro;
  const double tr_s = best_of(profile_repeats, [&] { rs = train_forest(x, y, {50, 42, Exec::Serial}); });
  const double tr_o = best_of(profile_repeats, [&] { ro = train_forest(x, y, {50, 42, Exec::Parallel}); });
  row("forest 50 trees", tr_s, tr_o, serialize(rs) == serialize(ro));
  return 0;
}
