#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>

#include <json.hpp>

#include "morpho/error.hpp"
#include "morpho/imagery.hpp"
#include "morpho/pipeline.hpp"
#include "morpho/profile_io.hpp"
#include "random.hpp"
#include "scene.hpp"

using namespace morpho;
using testing_support::Rng;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(MORPHO_TEST_TMP) / "pipeline";
  fs::create_directories(dir);
  return dir / name;
}

ComparisonConfig small_config() {
  ComparisonConfig c;
  c.area_thresholds = {4, 16, 64};
  c.forest.n_trees = 8;
  c.forest.seed = 42;
  return c;
}

const testing_support::SyntheticScene& small_scene() {
  static const auto scene = testing_support::make_scene(40, 5, 0.2);
  return scene;
}

}  // namespace

TEST_CASE("scenes load by extension") {
  Rng rng(3);
  const auto img = testing_support::noise_image(rng, 5, 4, 256);
  save_pgm(scratch("scene.pgm"), img);
  const Scene gray = load_scene(scratch("scene.pgm"));
  CHECK(std::get<RasterImage>(gray) == img);
  CHECK(scene_width(gray) == 5);
  CHECK(scene_height(gray) == 4);

  std::vector<double> v(5 * 4 * 3);
  for (auto& x : v) x = rng.uniform(0, 255);
  save_multiband(scratch("scene.json"), MultibandImage(5, 4, 3, v), SampleType::U8);
  const Scene cube = load_scene(scratch("scene.json"));
  CHECK(std::get<MultibandImage>(cube).bands() == 3);
  CHECK(scene_bands(cube, 2, 256).size() == 2);
  CHECK(raw_profile(cube).dim() == 3);
  CHECK(raw_profile(gray).dim() == 1);
  CHECK_THROWS_AS(load_scene(scratch("absent.pgm")), InputError);
}

TEST_CASE("samples are gathered in raster order") {
  const RasterImage img(3, 1, 10, {7, 8, 9});
  const auto stack = raw_profile(Scene(img));
  const LabelMap labels{3, 1, {2, 0, 1}};
  const auto s = gather_samples(stack, labels);
  CHECK(s.x.rows == 2);
  CHECK(s.x(0, 0) == 7);
  CHECK(s.x(1, 0) == 9);
  CHECK(s.y == std::vector<int>{2, 1});
  CHECK_THROWS_AS(gather_samples(stack, LabelMap{2, 1, {1, 1}}), DataError);
}

TEST_CASE("multiband profiles stack the principal components") {
  Rng rng(5);
  std::vector<double> v(10 * 8 * 5);
  for (auto& x : v) x = rng.real() * 50;
  const Scene cube = MultibandImage(10, 8, 5, v);
  ProfileRequest r;
  r.specs = {FilterSpec{Attribute::Area, {2, 8}, Rule::Min}};
  r.n_pca = 3;
  CHECK(make_profile(cube, r).dim() == 3 * 2 * 5);
  r.mode = ProfileMode::AP;
  r.trees = TreeSet::Omega;
  CHECK(make_profile(cube, r).dim() == 3 * 3);
}

TEST_CASE("classification reports are reproducible") {
  const auto& s = small_scene();
  ProfileRequest r;
  r.specs = {FilterSpec{Attribute::Area, {4, 16, 64}, Rule::Min}};
  const auto stack = make_profile(Scene(s.image), r);
  const ForestOptions forest{10, 42};
  const auto a = classify(stack, s.train, s.test, forest);
  const auto b = classify(stack, s.train, s.test, forest);
  CHECK(report_json(a) == report_json(b));
  CHECK(a.dim == 14);
  CHECK(a.train_samples == s.train.labeled_count());
  CHECK(a.test_samples == s.test.labeled_count());
  const auto j = nlohmann::json::parse(report_json(a));
  CHECK(j["overall_accuracy"].get<double>() == a.evaluation.overall_accuracy);
  CHECK(j["confusion"].size() == 3);
  CHECK(!j.contains("seconds"));
  CHECK(report_text(a).find("kappa") != std::string::npos);

  LabelMap one = s.train;
  for (auto& l : one.labels) l = l ? 1 : 0;
  CHECK_THROWS_AS(classify(stack, one, s.test, forest), DataError);
  LabelMap none = s.train;
  std::fill(none.labels.begin(), none.labels.end(), 0);
  CHECK_THROWS_AS(classify(stack, none, s.test, forest), DataError);
}

TEST_CASE("full comparison table") {
  const auto& s = small_scene();
  const auto table = compare(Scene(s.image), s.train, s.test, small_config());
  REQUIRE(table.rows.size() == 8);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(table.rows[i].mode == (i < 4 ? ProfileMode::AP : ProfileMode::FP));
    for (const auto& cell : table.rows[i].cells) {
      CHECK(cell.present);
      CHECK(cell.oa > 0.0);
      CHECK(cell.oa <= 1.0);
    }
  }
  // Area thresholds K = 3, moment thresholds K = 4, two features.
  CHECK(table.rows[0].cells[0].dim == 7);
  CHECK(table.rows[0].cells[1].dim == 9);
  CHECK(table.rows[0].cells[2].dim == 16);
  CHECK(table.rows[1].cells[2].dim == 9);
  CHECK(table.rows[4].cells[2].dim == 32);
  CHECK(table.rows[5].cells[2].dim == 18);

  const std::string csv = comparison_csv(table);
  CHECK(csv.substr(0, csv.find('\n')) ==
        "mode,trees,area_oa,area_kappa,moment_oa,moment_kappa,both_oa,both_kappa");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
  const auto parsed = parse_comparison_csv(csv);
  const auto json = nlohmann::json::parse(comparison_json(table));
  REQUIRE(parsed.rows.size() == 8);
  REQUIRE(json["rows"].size() == 8);
  const char* names[] = {"area", "moment", "both"};
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(parsed.rows[i].mode == table.rows[i].mode);
    CHECK(parsed.rows[i].trees == table.rows[i].trees);
    for (std::size_t k = 0; k < 3; ++k) {
      const auto& cell = parsed.rows[i].cells[k];
      const auto& j = json["rows"][i][names[k]];
      CHECK(cell.oa == j["oa"].get<double>());
      CHECK(cell.kappa == j["kappa"].get<double>());
      CHECK(cell.oa == table.rows[i].cells[k].oa);
    }
  }
  CHECK(comparison_text(table).find("Moment") != std::string::npos);
}

TEST_CASE("partial comparisons") {
  const auto& s = small_scene();
  auto config = small_config();
  config.trees = {TreeSet::Alpha};
  config.attributes = {AttributeSet::Area};
  const auto table = compare(Scene(s.image), s.train, s.test, config);
  REQUIRE(table.rows.size() == 2);
  CHECK(table.rows[0].cells[0].present);
  CHECK(!table.rows[0].cells[1].present);
  CHECK(!table.rows[1].cells[2].present);
  const auto csv = comparison_csv(table);
  CHECK(csv.find("ap,alpha,") != std::string::npos);
  CHECK(parse_comparison_csv(csv).rows[1].cells[1].present == false);
  CHECK(nlohmann::json::parse(comparison_json(table))["rows"][0]["moment"].is_null());
  CHECK(compare(Scene(s.image), s.train, s.test, config) == table);
}

TEST_CASE("numbers read back exactly") {
  Rng rng(9);
  for (int i = 0; i < 2000; ++i) {
    const double x = (rng.real() - 0.5) * std::pow(10.0, rng.uniform(-8, 8));
    REQUIRE(std::stod(format_number(x)) == x);
  }
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(1.0) == "1");
}

TEST_CASE("names parse or raise input errors") {
  CHECK(parse_tree_set("component") == TreeSet::ComponentPair);
  CHECK(parse_tree_set("tos") == TreeSet::TreeOfShapes);
  CHECK(parse_tree_set("alpha") == TreeSet::Alpha);
  CHECK(parse_tree_set("omega") == TreeSet::Omega);
  CHECK(parse_mode("ap") == ProfileMode::AP);
  CHECK(parse_attribute("moment") == Attribute::MomentOfInertia);
  CHECK(parse_feature("stddev") == Feature::StdDev);
  CHECK_THROWS_AS(parse_tree_set("beta"), InputError);
  CHECK_THROWS_AS(parse_mode("xp"), InputError);
  CHECK_THROWS_AS(parse_attribute("volume"), InputError);
  CHECK_THROWS_AS(parse_feature("entropy"), InputError);
  CHECK_THROWS_AS(parse_comparison_csv("bad header\n"), InputError);
}

TEST_CASE("profile files round trip") {
  const auto& s = small_scene();
  ProfileRequest r;
  r.specs = {FilterSpec{Attribute::MomentOfInertia, {0.2, 0.4}, Rule::Direct}};
  r.trees = TreeSet::TreeOfShapes;
  const auto stack = make_profile(Scene(s.image), r);
  save_profile(scratch("p.json"), stack);
  const auto back = load_profile(scratch("p.json"));
  CHECK(back.width == stack.width);
  CHECK(back.height == stack.height);
  CHECK(back.layout == stack.layout);
  REQUIRE(back.data.size() == stack.data.size());
  for (std::size_t i = 0; i < stack.data.size(); ++i)
    REQUIRE(back.data[i] == static_cast<double>(static_cast<float>(stack.data[i])));
  CHECK(nlohmann::json::parse(layout_json(stack)).is_object());
  CHECK_THROWS_AS(load_profile(scratch("nope.json")), InputError);
}
