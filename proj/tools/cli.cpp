#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "morpho/attributes.hpp"
#include "morpho/cli.hpp"
#include "morpho/component_tree.hpp"
#include "morpho/error.hpp"
#include "morpho/imagery.hpp"
#include "morpho/partition_tree.hpp"
#include "morpho/pipeline.hpp"
#include "morpho/profile_io.hpp"
#include "morpho/tree_of_shapes.hpp"

namespace morpho {
namespace {

namespace fs = std::filesystem;

struct Flags {
  std::string image;
  std::string train;
  std::string test;
  std::string profile;
  std::vector<std::string> trees{"component"};
  std::string mode = "fp";
  std::vector<std::string> attributes{"area"};
  std::vector<std::string> features{"stddev", "area"};
  std::vector<double> area_thresholds;
  std::vector<double> moment_thresholds;
  int pca = 4;
  int rf_trees = 100;
  std::uint64_t seed = 42;
  int connectivity = 4;
  bool serial = false;
  bool raw = false;
  std::string out;
};

struct Experiment {
  std::vector<TreeSet> trees;
  std::vector<ProfileMode> modes;
  std::vector<Attribute> attributes;
  std::vector<Feature> features;
  ProfileOptions options;
  ForestOptions forest;
};

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw InputError(std::string("missing required option ") + flag);
}

Experiment experiment(const Flags& f) {
  Experiment e;
  for (const auto& t : f.trees) e.trees.push_back(parse_tree_set(t));
  if (f.mode == "both")
    e.modes = {ProfileMode::AP, ProfileMode::FP};
  else
    e.modes = {parse_mode(f.mode)};
  for (const auto& a : f.attributes) e.attributes.push_back(parse_attribute(a));
  for (const auto& x : f.features) e.features.push_back(parse_feature(x));
  if (f.pca < 1) throw InputError("--pca must be at least 1");
  if (f.rf_trees < 1) throw InputError("--rf-trees must be at least 1");
  e.options.connectivity = f.connectivity == 8 ? Connectivity::C8 : Connectivity::C4;
  e.options.exec = f.serial ? Exec::Serial : Exec::Parallel;
  e.forest.n_trees = f.rf_trees;
  e.forest.seed = f.seed;
  e.forest.exec = e.options.exec;
  return e;
}

std::vector<FilterSpec> filter_specs(const Flags& f, const Experiment& e, std::size_t pixels) {
  std::vector<FilterSpec> specs;
  for (Attribute a : e.attributes) {
    FilterSpec spec = default_filter(a, pixels);
    const auto& custom = a == Attribute::Area ? f.area_thresholds : f.moment_thresholds;
    if (!custom.empty()) spec.thresholds = custom;
    spec.validate();
    specs.push_back(std::move(spec));
  }
  return specs;
}

std::size_t pixels_of(const Scene& scene) {
  return static_cast<std::size_t>(scene_width(scene)) *
         static_cast<std::size_t>(scene_height(scene));
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot write " + path.string());
  file << text;
  if (!file) throw InputError("cannot write " + path.string());
}

fs::path output_dir(const Flags& f) {
  require(f.out, "--out");
  std::error_code ec;
  fs::create_directories(f.out, ec);
  if (ec) throw InputError("cannot create output directory " + f.out + ": " + ec.message());
  return fs::path(f.out);
}

std::string stem(ProfileMode mode, TreeSet set) {
  return std::string(to_string(mode)) + "_" + std::string(to_string(set));
}

ProfileRequest request_for(const Flags& f, const Experiment& e, const Scene& scene, TreeSet set,
                           ProfileMode mode) {
  ProfileRequest r;
  r.trees = set;
  r.mode = mode;
  r.specs = filter_specs(f, e, pixels_of(scene));
  r.features = e.features;
  r.n_pca = f.pca;
  r.options = e.options;
  return r;
}

void cmd_profile(const Flags& f, std::ostream& out) {
  require(f.image, "--image");
  const Experiment e = experiment(f);
  const Scene scene = load_scene(f.image);
  const fs::path dir = output_dir(f);
  for (ProfileMode mode : e.modes) {
    for (TreeSet set : e.trees) {
      const ProfileStack stack = make_profile(scene, request_for(f, e, scene, set, mode));
      const fs::path path = dir / (stem(mode, set) + ".json");
      save_profile(path, stack);
      out << path.string() << ": " << stack.width << "x" << stack.height << ", dim "
          << stack.dim() << "\n";
    }
  }
}

void run_classification(const ProfileStack& stack, const std::string& name, const Flags& f,
                        const Experiment& e, const LabelMap& train, const LabelMap& test,
                        std::ostream& out) {
  const auto report = classify(stack, train, test, e.forest);
  if (!f.out.empty()) write_text(output_dir(f) / ("report_" + name + ".json"), report_json(report));
  out << "== " << name << "\n" << report_text(report);
}

void cmd_classify(const Flags& f, std::ostream& out) {
  require(f.train, "--train");
  require(f.test, "--test");
  const Experiment e = experiment(f);
  if (!f.profile.empty()) {
    const ProfileStack stack = load_profile(f.profile);
    const LabelMap train = load_labels(f.train, stack.width, stack.height);
    const LabelMap test = load_labels(f.test, stack.width, stack.height);
    run_classification(stack, fs::path(f.profile).stem().string(), f, e, train, test, out);
    return;
  }
  require(f.image, "--image or --profile");
  const Scene scene = load_scene(f.image);
  const LabelMap train = load_labels(f.train, scene_width(scene), scene_height(scene));
  const LabelMap test = load_labels(f.test, scene_width(scene), scene_height(scene));
  if (f.raw) run_classification(raw_profile(scene), "raw", f, e, train, test, out);
  for (ProfileMode mode : e.modes)
    for (TreeSet set : e.trees)
      run_classification(make_profile(scene, request_for(f, e, scene, set, mode)), stem(mode, set),
                         f, e, train, test, out);
}

void cmd_compare(const Flags& f, const std::vector<std::string>& attrs_given, std::ostream& out) {
  require(f.image, "--image");
  require(f.train, "--train");
  require(f.test, "--test");
  const Experiment e = experiment(f);
  const Scene scene = load_scene(f.image);
  const LabelMap train = load_labels(f.train, scene_width(scene), scene_height(scene));
  const LabelMap test = load_labels(f.test, scene_width(scene), scene_height(scene));

  ComparisonConfig config;
  config.trees = e.trees;
  config.modes = e.modes;
  if (!attrs_given.empty()) {
    config.attributes.clear();
    const bool area = std::count(attrs_given.begin(), attrs_given.end(), "area") > 0;
    const bool moment = std::count(attrs_given.begin(), attrs_given.end(), "moment") > 0;
    if (area) config.attributes.push_back(AttributeSet::Area);
    if (moment) config.attributes.push_back(AttributeSet::Moment);
    if (area && moment) config.attributes.push_back(AttributeSet::Both);
  }
  config.area_thresholds = f.area_thresholds;
  config.moment_thresholds = f.moment_thresholds;
  config.features = e.features;
  config.n_pca = f.pca;
  config.options = e.options;
  config.forest = e.forest;
  const ComparisonTable table = compare(scene, train, test, config);
  if (!f.out.empty()) {
    const fs::path dir = output_dir(f);
    write_text(dir / "comparison.csv", comparison_csv(table));
    write_text(dir / "comparison.json", comparison_json(table));
  }
  out << comparison_text(table);
}

void cmd_tree_dump(const Flags& f, std::ostream& out) {
  require(f.image, "--image");
  const Experiment e = experiment(f);
  const RasterImage image = load_grayscale(f.image);
  for (TreeSet set : e.trees) {
    const Hierarchies h = build_hierarchies(image, set, e.options.connectivity, e.options.exec);
    for (std::size_t i = 0; i < h.trees.size(); ++i) {
      const std::string name(to_string(h.trees[i].kind()));
      if (f.out.empty()) {
        out << "# " << name << " (" << h.trees[i].node_count() << " nodes): id parent level area\n";
        dump_tree(out, h.trees[i]);
        continue;
      }
      const fs::path dir = output_dir(f);
      std::ostringstream tree_text;
      std::ostringstream attr_text;
      dump_tree(tree_text, h.trees[i]);
      dump_attributes(attr_text, h.tables[i]);
      write_text(dir / (name + ".tree.txt"), tree_text.str());
      write_text(dir / (name + ".attr.txt"), attr_text.str());
      out << name << ": " << h.trees[i].node_count() << " nodes\n";
    }
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Morphological tree profiles and random-forest pixel classification", "morpho"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value file; command-line flags take precedence");

  Flags f;
  app.add_option("--image", f.image, "PGM image, or .json header of a multiband cube");
  app.add_option("--train", f.train, "PGM label map of training pixels (0 = unlabeled)");
  app.add_option("--test", f.test, "PGM label map of test pixels (0 = unlabeled)");
  app.add_option("--tree", f.trees, "component, tos, alpha, omega")
      ->check(CLI::IsMember({"component", "tos", "alpha", "omega"}));
  app.add_option("--mode", f.mode, "ap, fp or both")->check(CLI::IsMember({"ap", "fp", "both"}));
  auto* attr = app.add_option("--attr", f.attributes, "area, moment")
                   ->check(CLI::IsMember({"area", "moment"}));
  app.add_option("--feature", f.features, "stddev, area")->check(CLI::IsMember({"stddev", "area"}));
  app.add_option("--area-thresholds", f.area_thresholds, "comma separated, ascending")
      ->delimiter(',');
  app.add_option("--moment-thresholds", f.moment_thresholds, "comma separated, ascending")
      ->delimiter(',');
  app.add_option("--pca", f.pca, "principal components kept for multiband input");
  app.add_option("--rf-trees", f.rf_trees, "trees in the random forest");
  app.add_option("--seed", f.seed, "seed of the random forest");
  app.add_option("--connectivity", f.connectivity, "pixel adjacency, 4 or 8")
      ->check(CLI::IsMember({4, 8}));
  app.add_flag("--serial", f.serial, "run the serial reference kernels");
  app.add_option("--out", f.out, "output directory");

  auto* profile = app.add_subcommand("profile", "write attribute or feature profiles");
  auto* classify_cmd = app.add_subcommand("classify", "train a random forest and report accuracy");
  classify_cmd->add_option("--profile", f.profile, "profile header written by `profile`");
  classify_cmd->add_flag("--raw", f.raw, "also classify the raw pixel values");
  auto* compare_cmd = app.add_subcommand("compare", "AP vs FP table over tree kinds and attributes");
  auto* dump = app.add_subcommand("tree-dump", "print trees as `id parent level area` lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (profile->parsed()) cmd_profile(f, out);
    if (classify_cmd->parsed()) cmd_classify(f, out);
    if (compare_cmd->parsed())
      cmd_compare(f, attr->count() > 0 ? f.attributes : std::vector<std::string>{}, out);
    if (dump->parsed()) cmd_tree_dump(f, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const InvariantError& e) {
    err << "internal error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"morpho"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace morpho
