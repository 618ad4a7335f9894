#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "morpho/attributes.hpp"
#include "morpho/exec.hpp"
#include "morpho/image.hpp"
#include "morpho/tree.hpp"

namespace morpho {

enum class Attribute { Area, MomentOfInertia };

/// Min: a node goes when its attribute is below the threshold or any ancestor
/// went. Direct: each node is judged on its own attribute.
enum class Rule { Min, Direct };

enum class Feature { StdDev, Area };

/// Which hierarchies a profile is built from.
enum class TreeSet { ComponentPair, TreeOfShapes, Alpha, Omega };

enum class ProfileMode { AP, FP };

enum class Polarity { Original, Thickening, Thinning, SelfDual };

std::string_view to_string(Attribute a);
std::string_view to_string(Rule r);
std::string_view to_string(Feature f);
std::string_view to_string(TreeSet t);
std::string_view to_string(ProfileMode m);
std::string_view to_string(Polarity p);

struct FilterSpec {
  Attribute attribute = Attribute::Area;
  std::vector<double> thresholds;  // strictly ascending, the lambda_1..lambda_K
  Rule rule = Rule::Min;

  /// Throws DataError when thresholds are empty, non-finite or not strictly ascending.
  void validate() const;
  std::size_t size() const noexcept { return thresholds.size(); }
};

/// Area thresholds {25, 100, ..., 150000}, scaled by pixels / 1e5 on images
/// smaller than 1e5 pixels.
std::vector<double> default_area_thresholds(std::size_t pixel_count);
std::vector<double> default_moment_thresholds();
/// Min for the increasing area, Direct for the non-increasing moment of inertia.
Rule default_rule(Attribute attribute);
FilterSpec default_filter(Attribute attribute, std::size_t pixel_count);

double attribute_value(const AttributeTable& table, NodeId node, Attribute attribute);
double feature_value(const AttributeTable& table, NodeId node, Feature feature);

/// Per-node retain flag; the root is always retained.
using RetainMask = std::vector<std::uint8_t>;

RetainMask filter_tree(const Tree& tree, const AttributeTable& table, Attribute attribute,
                       double threshold, Rule rule);

/// For each node, its smallest retained ancestor-or-self.
std::vector<NodeId> retained_representative(const Tree& tree, const RetainMask& mask);

/// Gray value restituted by a node: its level for component trees and the tree
/// of shapes, the rounded mean gray for partition trees.
double node_gray(const Tree& tree, const AttributeTable& table, NodeId node);

/// Each pixel takes the restituted value of its smallest retained node.
RealImage reconstruct(const Tree& tree, const RetainMask& mask, const AttributeTable& table);

/// Each pixel takes f(smallest retained node), f read from the unfiltered tree's table.
RealImage feature_map(const Tree& tree, const RetainMask& mask, const AttributeTable& table,
                      Feature feature);
RealImage feature_map(const Tree& tree, const RetainMask& mask,
                      const std::function<double(NodeId)>& feature);

/// Describes one profile column.
struct ColumnInfo {
  int band = 0;
  Polarity polarity = Polarity::Original;
  std::optional<TreeKind> tree;        // empty for the original-image column
  std::optional<Attribute> attribute;  // empty for the original-image column
  double threshold = 0.0;
  std::optional<Feature> feature;      // empty when the column holds gray values

  bool operator==(const ColumnInfo&) const = default;
};

/// Per-pixel feature vectors, stored pixel-major: data[p * dim + c].
struct ProfileStack {
  int width = 0;
  int height = 0;
  std::vector<ColumnInfo> layout;
  std::vector<double> data;

  std::size_t dim() const noexcept { return layout.size(); }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  double at(std::size_t pixel, std::size_t column) const { return data[pixel * dim() + column]; }
  std::vector<double> column(std::size_t c) const;
};

/// Concatenates columns of stacks over the same grid.
ProfileStack concat_columns(std::span<const ProfileStack> stacks);

struct ProfileOptions {
  Connectivity connectivity = Connectivity::C4;
  Exec exec = Exec::Parallel;
  int band = 0;  // recorded in the layout
};

/// Trees of one image with their attribute tables. For ComponentPair the
/// max-tree comes first, then the min-tree.
struct Hierarchies {
  TreeSet set = TreeSet::ComponentPair;
  std::vector<Tree> trees;
  std::vector<AttributeTable> tables;
};

Hierarchies build_hierarchies(const RasterImage& image, TreeSet set,
                              Connectivity connectivity = Connectivity::C4,
                              Exec exec = Exec::Parallel);

/// AP columns: ComponentPair gives [phi_K..phi_1, X, gamma_1..gamma_K] (2K+1),
/// single trees give [X, psi_1..psi_K] (K+1).
ProfileStack build_ap(const RasterImage& image, TreeSet trees, const FilterSpec& spec,
                      const ProfileOptions& options = {});

/// FP: one AP-shaped block per feature with feature maps in place of
/// reconstructions (the central column stays X), blocks concatenated.
ProfileStack build_fp(const RasterImage& image, TreeSet trees, const FilterSpec& spec,
                      std::span<const Feature> features, const ProfileOptions& options = {});

/// AP or FP from prebuilt hierarchies, one block per filter spec.
ProfileStack build_profile(const Hierarchies& hierarchies, const RasterImage& image,
                           ProfileMode mode, std::span<const FilterSpec> specs,
                           std::span<const Feature> features, const ProfileOptions& options = {});

/// First n_pca principal components, each rescaled to `levels` gray levels.
std::vector<RasterImage> pca_bands(const MultibandImage& image, int n_pca, int levels,
                                   Exec exec = Exec::Parallel);

/// PCA-reduce, rescale every component to `levels` gray levels and
/// concatenate the per-component profiles.
ProfileStack build_extended(const MultibandImage& image, int n_pca, TreeSet trees,
                            std::span<const FilterSpec> specs, std::span<const Feature> features,
                            ProfileMode mode, const ProfileOptions& options = {},
                            int levels = 256);

}  // namespace morpho
