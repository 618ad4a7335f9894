#include <cmath>
#include <string>

#include "morpho/component_tree.hpp"
#include "morpho/error.hpp"
#include "parallel.hpp"
#include "morpho/imagery.hpp"
#include "morpho/kernels.hpp"
#include "morpho/partition_tree.hpp"
#include "morpho/profiles.hpp"
#include "morpho/tree_of_shapes.hpp"

namespace morpho {

std::string_view to_string(Attribute a) {
  return a == Attribute::Area ? "area" : "moment";
}
std::string_view to_string(Rule r) { return r == Rule::Min ? "min" : "direct"; }
std::string_view to_string(Feature f) { return f == Feature::StdDev ? "stddev" : "area"; }
std::string_view to_string(TreeSet t) {
  switch (t) {
    case TreeSet::ComponentPair: return "component";
    case TreeSet::TreeOfShapes: return "tos";
    case TreeSet::Alpha: return "alpha";
    case TreeSet::Omega: return "omega";
  }
  return "?";
}
std::string_view to_string(ProfileMode m) { return m == ProfileMode::AP ? "ap" : "fp"; }
std::string_view to_string(Polarity p) {
  switch (p) {
    case Polarity::Original: return "original";
    case Polarity::Thickening: return "thickening";
    case Polarity::Thinning: return "thinning";
    case Polarity::SelfDual: return "self-dual";
  }
  return "?";
}

void FilterSpec::validate() const {
  if (thresholds.empty()) throw DataError("filter needs at least one threshold");
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!std::isfinite(thresholds[i])) throw DataError("filter threshold is not finite");
    if (i > 0 && !(thresholds[i] > thresholds[i - 1]))
      throw DataError("filter thresholds must be strictly ascending");
  }
}

std::vector<double> default_area_thresholds(std::size_t pixel_count) {
  std::vector<double> t{25, 100, 500, 1000, 5000, 10000, 20000, 50000, 100000, 150000};
  if (pixel_count < 100000) {
    const double scale = static_cast<double>(pixel_count) / 1e5;
    for (auto& v : t) v *= scale;
  }
  return t;
}

std::vector<double> default_moment_thresholds() { return {0.2, 0.3, 0.4, 0.5}; }

Rule default_rule(Attribute attribute) {
  return attribute == Attribute::Area ? Rule::Min : Rule::Direct;
}

FilterSpec default_filter(Attribute attribute, std::size_t pixel_count) {
  return FilterSpec{attribute,
                    attribute == Attribute::Area ? default_area_thresholds(pixel_count)
                                                 : default_moment_thresholds(),
                    default_rule(attribute)};
}

double attribute_value(const AttributeTable& table, NodeId node, Attribute attribute) {
  return attribute == Attribute::Area ? static_cast<double>(attr_area(table, node))
                                      : attr_moment_of_inertia(table, node);
}

double feature_value(const AttributeTable& table, NodeId node, Feature feature) {
  return feature == Feature::Area ? static_cast<double>(attr_area(table, node))
                                  : feat_std_dev(table, node);
}

RetainMask filter_tree(const Tree& tree, const AttributeTable& table, Attribute attribute,
                       double threshold, Rule rule) {
  if (table.size() != tree.node_count()) throw DataError("attribute table does not match tree");
  RetainMask keep(tree.node_count(), 1);
  for (std::size_t i = 1; i < tree.node_count(); ++i) {
    const auto n = static_cast<NodeId>(i);
    const bool passes = attribute_value(table, n, attribute) >= threshold;
    keep[i] = rule == Rule::Direct ? passes
                                   : passes && keep[static_cast<std::size_t>(tree.parent(n))];
  }
  return keep;
}

std::vector<NodeId> retained_representative(const Tree& tree, const RetainMask& mask) {
  if (mask.size() != tree.node_count()) throw DataError("retain mask does not match tree");
  std::vector<NodeId> rep(tree.node_count(), 0);
  for (std::size_t i = 1; i < tree.node_count(); ++i) {
    const auto n = static_cast<NodeId>(i);
    rep[i] = mask[i] ? n : rep[static_cast<std::size_t>(tree.parent(n))];
  }
  return rep;
}

double node_gray(const Tree& tree, const AttributeTable& table, NodeId node) {
  switch (tree.kind()) {
    case TreeKind::AlphaTree:
    case TreeKind::OmegaTree: {
      const NodeStats& s = table.at(node);
      // floor(mean + 1/2) in integers
      return static_cast<double>((2 * s.gray_sum + s.area) / (2 * s.area));
    }
    default:
      return tree.level(node);
  }
}

namespace {

// Paints one column: each pixel gets node_value[representative(pixel_node)].
void paint_column(const Tree& tree, const RetainMask& mask,
                  const std::function<double(NodeId)>& value, std::span<double> out,
                  std::size_t stride, std::size_t offset) {
  const auto rep = retained_representative(tree, mask);
  std::vector<double> node_value(tree.node_count());
  for (std::size_t i = 0; i < tree.node_count(); ++i) node_value[i] = value(rep[i]);
  kernels::serial::paint(tree.pixel_nodes(), node_value, out, stride, offset);
}

RealImage paint_image(const Tree& tree, const RetainMask& mask,
                      const std::function<double(NodeId)>& value) {
  RealImage img{tree.width(), tree.height(), std::vector<double>(tree.pixel_count())};
  paint_column(tree, mask, value, img.values, 1, 0);
  return img;
}

}  // namespace

RealImage reconstruct(const Tree& tree, const RetainMask& mask, const AttributeTable& table) {
  return paint_image(tree, mask, [&](NodeId n) { return node_gray(tree, table, n); });
}

RealImage feature_map(const Tree& tree, const RetainMask& mask, const AttributeTable& table,
                      Feature feature) {
  return paint_image(tree, mask, [&](NodeId n) { return feature_value(table, n, feature); });
}

RealImage feature_map(const Tree& tree, const RetainMask& mask,
                      const std::function<double(NodeId)>& feature) {
  return paint_image(tree, mask, feature);
}

std::vector<double> ProfileStack::column(std::size_t c) const {
  std::vector<double> out(pixel_count());
  for (std::size_t p = 0; p < out.size(); ++p) out[p] = at(p, c);
  return out;
}

ProfileStack concat_columns(std::span<const ProfileStack> stacks) {
  if (stacks.empty()) return {};
  ProfileStack out{stacks[0].width, stacks[0].height, {}, {}};
  for (const auto& s : stacks) {
    if (s.width != out.width || s.height != out.height)
      throw DataError("cannot concatenate profiles of different sizes");
    out.layout.insert(out.layout.end(), s.layout.begin(), s.layout.end());
  }
  const std::size_t n = out.pixel_count();
  out.data.resize(n * out.dim());
  std::size_t base = 0;
  for (const auto& s : stacks) {
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t c = 0; c < s.dim(); ++c) out.data[p * out.dim() + base + c] = s.at(p, c);
    base += s.dim();
  }
  return out;
}

Hierarchies build_hierarchies(const RasterImage& image, TreeSet set, Connectivity connectivity,
                              Exec exec) {
  Hierarchies h;
  h.set = set;
  switch (set) {
    case TreeSet::ComponentPair:
      h.trees.resize(2);
      h.tables.resize(2);
      detail::parallel_for(2, exec, [&](std::int64_t i) {
        const auto k = static_cast<std::size_t>(i);
        h.trees[k] = i == 0 ? build_max_tree(image, connectivity) : build_min_tree(image, connectivity);
        h.tables[k] = compute_attributes(h.trees[k], image);
      });
      return h;
    case TreeSet::TreeOfShapes:
      h.trees.push_back(build_tree_of_shapes(image));
      break;
    case TreeSet::Alpha:
      h.trees.push_back(build_alpha_tree(image, connectivity));
      break;
    case TreeSet::Omega:
      h.trees.push_back(build_omega_tree(build_alpha_tree(image, connectivity), image));
      break;
  }
  h.tables.push_back(compute_attributes(h.trees[0], image));
  return h;
}

namespace {

struct ColumnJob {
  int tree = -1;  // index into Hierarchies::trees, -1 for the original image
  ColumnInfo info;
  Rule rule = Rule::Min;
};

std::vector<ColumnJob> column_jobs(const Hierarchies& h, const FilterSpec& spec,
                                   std::optional<Feature> feature, int band) {
  std::vector<ColumnJob> jobs;
  const auto filtered = [&](int tree, Polarity polarity, double threshold) {
    ColumnInfo info{band, polarity, h.trees[static_cast<std::size_t>(tree)].kind(),
                    spec.attribute, threshold, feature};
    jobs.push_back(ColumnJob{tree, info, spec.rule});
  };
  const ColumnInfo original{band, Polarity::Original, std::nullopt, std::nullopt, 0.0, std::nullopt};
  if (h.set == TreeSet::ComponentPair) {
    for (std::size_t k = spec.size(); k-- > 0;) filtered(1, Polarity::Thickening, spec.thresholds[k]);
    jobs.push_back(ColumnJob{-1, original});
    for (double t : spec.thresholds) filtered(0, Polarity::Thinning, t);
  } else {
    jobs.push_back(ColumnJob{-1, original});
    for (double t : spec.thresholds) filtered(0, Polarity::SelfDual, t);
  }
  return jobs;
}

}  // namespace

ProfileStack build_profile(const Hierarchies& h, const RasterImage& image, ProfileMode mode,
                           std::span<const FilterSpec> specs, std::span<const Feature> features,
                           const ProfileOptions& options) {
  if (specs.empty()) throw DataError("profile needs at least one filter spec");
  if (mode == ProfileMode::FP && features.empty())
    throw DataError("feature profile needs at least one feature");
  for (const auto& s : specs) s.validate();
  for (const auto& t : h.trees)
    if (t.width() != image.width() || t.height() != image.height())
      throw DataError("hierarchy and image dimensions differ");

  std::vector<ColumnJob> jobs;
  for (const auto& spec : specs) {
    if (mode == ProfileMode::AP) {
      auto block = column_jobs(h, spec, std::nullopt, options.band);
      jobs.insert(jobs.end(), block.begin(), block.end());
    } else {
      for (Feature f : features) {
        auto block = column_jobs(h, spec, f, options.band);
        jobs.insert(jobs.end(), block.begin(), block.end());
      }
    }
  }

  ProfileStack out;
  out.width = image.width();
  out.height = image.height();
  for (const auto& j : jobs) out.layout.push_back(j.info);
  const std::size_t dim = out.dim();
  const std::size_t n = out.pixel_count();
  out.data.assign(n * dim, 0.0);

  const auto run = [&](std::size_t c) {
    const ColumnJob& job = jobs[c];
    if (job.tree < 0) {
      for (std::size_t p = 0; p < n; ++p) out.data[p * dim + c] = image[p];
      return;
    }
    const Tree& tree = h.trees[static_cast<std::size_t>(job.tree)];
    const AttributeTable& table = h.tables[static_cast<std::size_t>(job.tree)];
    const RetainMask mask =
        filter_tree(tree, table, *job.info.attribute, job.info.threshold, job.rule);
    if (job.info.feature) {
      const Feature f = *job.info.feature;
      paint_column(tree, mask, [&](NodeId node) { return feature_value(table, node, f); },
                   out.data, dim, c);
    } else {
      paint_column(tree, mask, [&](NodeId node) { return node_gray(tree, table, node); },
                   out.data, dim, c);
    }
  };

  detail::parallel_for(static_cast<std::int64_t>(dim), options.exec,
                       [&](std::int64_t c) { run(static_cast<std::size_t>(c)); });
  return out;
}

ProfileStack build_ap(const RasterImage& image, TreeSet trees, const FilterSpec& spec,
                      const ProfileOptions& options) {
  const auto h = build_hierarchies(image, trees, options.connectivity, options.exec);
  return build_profile(h, image, ProfileMode::AP, std::span(&spec, 1), {}, options);
}

ProfileStack build_fp(const RasterImage& image, TreeSet trees, const FilterSpec& spec,
                      std::span<const Feature> features, const ProfileOptions& options) {
  const auto h = build_hierarchies(image, trees, options.connectivity, options.exec);
  return build_profile(h, image, ProfileMode::FP, std::span(&spec, 1), features, options);
}

std::vector<RasterImage> pca_bands(const MultibandImage& image, int n_pca, int levels, Exec exec) {
  const MultibandImage components = pca_reduce(image, n_pca, exec);
  std::vector<RasterImage> bands;
  bands.reserve(static_cast<std::size_t>(n_pca));
  for (int b = 0; b < n_pca; ++b)
    bands.push_back(rescale_to_levels(components.band(b), image.width(), image.height(), levels));
  return bands;
}

ProfileStack build_extended(const MultibandImage& image, int n_pca, TreeSet trees,
                            std::span<const FilterSpec> specs, std::span<const Feature> features,
                            ProfileMode mode, const ProfileOptions& options, int levels) {
  const auto bands = pca_bands(image, n_pca, levels, options.exec);
  std::vector<ProfileStack> per_band(bands.size());
  detail::parallel_for(static_cast<std::int64_t>(bands.size()), options.exec, [&](std::int64_t i) {
    const auto b = static_cast<std::size_t>(i);
    ProfileOptions o = options;
    o.exec = Exec::Serial;
    o.band = static_cast<int>(b);
    const auto h = build_hierarchies(bands[b], trees, o.connectivity, Exec::Serial);
    per_band[b] = build_profile(h, bands[b], mode, specs, features, o);
  });
  return concat_columns(per_band);
}

}  // namespace morpho
