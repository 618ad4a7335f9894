#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "morpho/forest.hpp"
#include "morpho/image.hpp"
#include "morpho/metrics.hpp"
#include "morpho/profiles.hpp"

namespace morpho {

/// A panchromatic image or a multiband cube.
using Scene = std::variant<RasterImage, MultibandImage>;

/// `.json` paths are read as multiband headers, anything else as PGM.
Scene load_scene(const std::filesystem::path& path);
int scene_width(const Scene& scene);
int scene_height(const Scene& scene);

struct ProfileRequest {
  TreeSet trees = TreeSet::ComponentPair;
  ProfileMode mode = ProfileMode::FP;
  std::vector<FilterSpec> specs;
  std::vector<Feature> features{Feature::StdDev, Feature::Area};
  int n_pca = 4;     // multiband scenes only
  int levels = 256;  // gray levels of the rescaled components
  ProfileOptions options;
};

/// Gray bands the trees are built on: the image itself, or its rescaled
/// principal components.
std::vector<RasterImage> scene_bands(const Scene& scene, int n_pca, int levels,
                                     Exec exec = Exec::Parallel);

/// AP or FP of every band, concatenated band by band.
ProfileStack make_profile(const Scene& scene, const ProfileRequest& request);

/// One column per band holding the band values.
ProfileStack raw_profile(const Scene& scene);

struct SampleSet {
  SampleMatrix x;
  std::vector<int> y;
};

/// Rows for the pixels with a nonzero label, in raster order.
SampleSet gather_samples(const ProfileStack& stack, const LabelMap& labels);

struct ClassificationReport {
  std::size_t dim = 0;
  std::size_t train_samples = 0;
  std::size_t test_samples = 0;
  int n_trees = 0;
  std::uint64_t seed = 0;
  Evaluation evaluation;
  double seconds = 0.0;  // wall time, kept out of the JSON form
};

ClassificationReport classify(const ProfileStack& stack, const LabelMap& train,
                              const LabelMap& test, const ForestOptions& forest);

std::string report_json(const ClassificationReport& report);
std::string report_text(const ClassificationReport& report);

enum class AttributeSet { Area, Moment, Both };
std::string_view to_string(AttributeSet s);

struct ComparisonConfig {
  std::vector<TreeSet> trees{TreeSet::ComponentPair, TreeSet::TreeOfShapes, TreeSet::Alpha,
                             TreeSet::Omega};
  std::vector<ProfileMode> modes{ProfileMode::AP, ProfileMode::FP};
  std::vector<AttributeSet> attributes{AttributeSet::Area, AttributeSet::Moment, AttributeSet::Both};
  std::vector<double> area_thresholds;  // empty: defaults for the image size
  std::vector<double> moment_thresholds;
  std::vector<Feature> features{Feature::StdDev, Feature::Area};
  int n_pca = 4;
  int levels = 256;
  ProfileOptions options;
  ForestOptions forest;
};

struct ComparisonCell {
  bool present = false;
  double oa = 0.0;
  double kappa = 0.0;
  std::size_t dim = 0;

  bool operator==(const ComparisonCell&) const = default;
};

struct ComparisonRow {
  ProfileMode mode = ProfileMode::AP;
  TreeSet trees = TreeSet::ComponentPair;
  std::array<ComparisonCell, 3> cells;  // indexed by AttributeSet

  bool operator==(const ComparisonRow&) const = default;
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;

  bool operator==(const ComparisonTable&) const = default;
};

/// Rows are modes (outer) by tree sets (inner); each requested attribute set
/// fills one OA / kappa cell pair.
ComparisonTable compare(const Scene& scene, const LabelMap& train, const LabelMap& test,
                        const ComparisonConfig& config);

/// Header: mode,trees,area_oa,area_kappa,moment_oa,moment_kappa,both_oa,both_kappa.
/// Numbers use the shortest form that reads back exactly; absent cells are empty.
std::string comparison_csv(const ComparisonTable& table);
ComparisonTable parse_comparison_csv(std::string_view csv);
std::string comparison_json(const ComparisonTable& table);
std::string comparison_text(const ComparisonTable& table);

/// Shortest round-trip decimal form of a double.
std::string format_number(double value);

TreeSet parse_tree_set(std::string_view name);
ProfileMode parse_mode(std::string_view name);
Attribute parse_attribute(std::string_view name);
Feature parse_feature(std::string_view name);

}  // namespace morpho
