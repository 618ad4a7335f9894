#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "morpho/error.hpp"
#include "morpho/imagery.hpp"
#include "morpho/pipeline.hpp"
#include "parallel.hpp"

namespace morpho {

Scene load_scene(const std::filesystem::path& path) {
  if (path.extension() == ".json") return load_multiband(path);
  return load_grayscale(path);
}

int scene_width(const Scene& scene) {
  return std::visit([](const auto& s) { return s.width(); }, scene);
}

int scene_height(const Scene& scene) {
  return std::visit([](const auto& s) { return s.height(); }, scene);
}

std::vector<RasterImage> scene_bands(const Scene& scene, int n_pca, int levels, Exec exec) {
  if (const auto* gray = std::get_if<RasterImage>(&scene)) return {*gray};
  return pca_bands(std::get<MultibandImage>(scene), n_pca, levels, exec);
}

namespace {

ProfileStack profile_of_bands(const std::vector<RasterImage>& bands,
                              const std::vector<Hierarchies>& trees, ProfileMode mode,
                              std::span<const FilterSpec> specs, std::span<const Feature> features,
                              const ProfileOptions& options) {
  std::vector<ProfileStack> parts(bands.size());
  for (std::size_t b = 0; b < bands.size(); ++b) {
    ProfileOptions o = options;
    o.band = static_cast<int>(b);
    parts[b] = build_profile(trees[b], bands[b], mode, specs, features, o);
  }
  return parts.size() == 1 ? std::move(parts[0]) : concat_columns(parts);
}

std::vector<Hierarchies> hierarchies_of(const std::vector<RasterImage>& bands, TreeSet set,
                                        const ProfileOptions& options) {
  std::vector<Hierarchies> out;
  out.reserve(bands.size());
  for (const auto& band : bands)
    out.push_back(build_hierarchies(band, set, options.connectivity, options.exec));
  return out;
}

}  // namespace

ProfileStack make_profile(const Scene& scene, const ProfileRequest& request) {
  if (request.specs.empty()) throw DataError("no attribute filter requested");
  for (const auto& spec : request.specs) spec.validate();
  if (request.mode == ProfileMode::FP && request.features.empty())
    throw DataError("feature profiles need at least one feature");
  const auto bands = scene_bands(scene, request.n_pca, request.levels, request.options.exec);
  const auto trees = hierarchies_of(bands, request.trees, request.options);
  return profile_of_bands(bands, trees, request.mode, request.specs, request.features,
                          request.options);
}

ProfileStack raw_profile(const Scene& scene) {
  ProfileStack stack;
  stack.width = scene_width(scene);
  stack.height = scene_height(scene);
  const std::size_t n = stack.pixel_count();
  if (const auto* gray = std::get_if<RasterImage>(&scene)) {
    stack.layout.push_back(ColumnInfo{});
    stack.data.assign(gray->values().begin(), gray->values().end());
    return stack;
  }
  const auto& cube = std::get<MultibandImage>(scene);
  const auto bands = static_cast<std::size_t>(cube.bands());
  for (std::size_t b = 0; b < bands; ++b) {
    ColumnInfo info;
    info.band = static_cast<int>(b);
    stack.layout.push_back(info);
  }
  stack.data.resize(n * bands);
  for (std::size_t b = 0; b < bands; ++b) {
    const auto band = cube.band(static_cast<int>(b));
    for (std::size_t p = 0; p < n; ++p) stack.data[p * bands + b] = band[p];
  }
  return stack;
}

SampleSet gather_samples(const ProfileStack& stack, const LabelMap& labels) {
  if (labels.width != stack.width || labels.height != stack.height)
    throw DataError("label map is " + std::to_string(labels.width) + "x" +
                    std::to_string(labels.height) + " but the profile is " +
                    std::to_string(stack.width) + "x" + std::to_string(stack.height));
  const std::size_t dim = stack.dim();
  SampleSet out;
  out.x = SampleMatrix(labels.labeled_count(), dim);
  out.y.reserve(out.x.rows);
  std::size_t row = 0;
  for (std::size_t p = 0; p < labels.labels.size(); ++p) {
    if (labels.labels[p] == 0) continue;
    std::copy_n(stack.data.begin() + static_cast<std::ptrdiff_t>(p * dim), dim,
                out.x.values.begin() + static_cast<std::ptrdiff_t>(row * dim));
    out.y.push_back(labels.labels[p]);
    ++row;
  }
  return out;
}

ClassificationReport classify(const ProfileStack& stack, const LabelMap& train,
                              const LabelMap& test, const ForestOptions& forest) {
  const auto start = std::chrono::steady_clock::now();
  const SampleSet training = gather_samples(stack, train);
  const SampleSet testing = gather_samples(stack, test);
  if (testing.y.empty()) throw DataError("test label map has no labeled pixels");
  const ForestModel model = train_forest(training.x, training.y, forest);
  const auto predicted = predict(model, testing.x, forest.exec);
  ClassificationReport report;
  report.dim = stack.dim();
  report.train_samples = training.y.size();
  report.test_samples = testing.y.size();
  report.n_trees = forest.n_trees;
  report.seed = forest.seed;
  report.evaluation = evaluate(predicted, testing.y);
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string report_json(const ClassificationReport& report) {
  const auto& e = report.evaluation;
  nlohmann::ordered_json j;
  j["dim"] = report.dim;
  j["train_samples"] = report.train_samples;
  j["test_samples"] = report.test_samples;
  j["n_trees"] = report.n_trees;
  j["seed"] = report.seed;
  j["overall_accuracy"] = e.overall_accuracy;
  j["kappa"] = e.kappa;
  j["expected_agreement"] = e.expected_agreement;
  j["class_accuracy"] = e.class_accuracy;
  auto confusion = nlohmann::ordered_json::array();
  const int c = e.matrix.classes();
  for (int t = 1; t <= c; ++t) {
    auto row = nlohmann::ordered_json::array();
    for (int p = 1; p <= c; ++p) row.push_back(e.matrix(t, p));
    confusion.push_back(row);
  }
  j["confusion"] = confusion;
  return j.dump(2) + "\n";
}

std::string report_text(const ClassificationReport& report) {
  const auto& e = report.evaluation;
  std::ostringstream out;
  char line[128];
  out << "samples: " << report.train_samples << " train, " << report.test_samples
      << " test, dim " << report.dim << "\n";
  out << "forest:  " << report.n_trees << " trees, seed " << report.seed << "\n";
  for (std::size_t c = 0; c < e.class_accuracy.size(); ++c) {
    std::snprintf(line, sizeof line, "class %-3zu %7.2f%%  (%lld samples)\n", c + 1,
                  100.0 * e.class_accuracy[c],
                  static_cast<long long>(e.matrix.row_total(static_cast<int>(c) + 1)));
    out << line;
  }
  std::snprintf(line, sizeof line, "OA      %7.2f%%\nkappa   %8.4f\nruntime %8.2f s\n",
                100.0 * e.overall_accuracy, e.kappa, report.seconds);
  out << line;
  return out.str();
}

std::string_view to_string(AttributeSet s) {
  switch (s) {
    case AttributeSet::Area: return "area";
    case AttributeSet::Moment: return "moment";
    case AttributeSet::Both: return "both";
  }
  return "?";
}

ComparisonTable compare(const Scene& scene, const LabelMap& train, const LabelMap& test,
                        const ComparisonConfig& config) {
  const std::size_t pixels =
      static_cast<std::size_t>(scene_width(scene)) * static_cast<std::size_t>(scene_height(scene));
  FilterSpec area = default_filter(Attribute::Area, pixels);
  if (!config.area_thresholds.empty()) area.thresholds = config.area_thresholds;
  FilterSpec moment = default_filter(Attribute::MomentOfInertia, pixels);
  if (!config.moment_thresholds.empty()) moment.thresholds = config.moment_thresholds;
  area.validate();
  moment.validate();

  const auto bands = scene_bands(scene, config.n_pca, config.levels, config.options.exec);
  ComparisonTable table;
  for (ProfileMode mode : config.modes)
    for (TreeSet set : config.trees) table.rows.push_back(ComparisonRow{mode, set, {}});

  for (TreeSet set : config.trees) {
    const auto trees = hierarchies_of(bands, set, config.options);
    for (auto& row : table.rows) {
      if (row.trees != set) continue;
      for (AttributeSet attrs : config.attributes) {
        std::vector<FilterSpec> specs;
        if (attrs != AttributeSet::Moment) specs.push_back(area);
        if (attrs != AttributeSet::Area) specs.push_back(moment);
        const ProfileStack stack =
            profile_of_bands(bands, trees, row.mode, specs, config.features, config.options);
        const auto report = classify(stack, train, test, config.forest);
        auto& cell = row.cells[static_cast<std::size_t>(attrs)];
        cell.present = true;
        cell.oa = report.evaluation.overall_accuracy;
        cell.kappa = report.evaluation.kappa;
        cell.dim = report.dim;
      }
    }
  }
  return table;
}

std::string format_number(double value) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, r.ptr);
}

namespace {

constexpr std::array<AttributeSet, 3> kAttributeSets{AttributeSet::Area, AttributeSet::Moment,
                                                     AttributeSet::Both};

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view s, std::size_t offset) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw ParseError("bad number '" + std::string(s) + "'", offset);
  return v;
}

}  // namespace

constexpr std::string_view kCsvHeader =
    "mode,trees,area_oa,area_kappa,moment_oa,moment_kappa,both_oa,both_kappa";

std::string comparison_csv(const ComparisonTable& table) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& row : table.rows) {
    out += to_string(row.mode);
    out += ',';
    out += to_string(row.trees);
    for (const auto& cell : row.cells) {
      out += ',';
      if (cell.present) out += format_number(cell.oa);
      out += ',';
      if (cell.present) out += format_number(cell.kappa);
    }
    out += '\n';
  }
  return out;
}

ComparisonTable parse_comparison_csv(std::string_view csv) {
  ComparisonTable table;
  std::size_t offset = 0;
  bool header = true;
  for (auto line : split(csv, '\n')) {
    const std::size_t line_start = offset;
    offset += line.size() + 1;
    if (line.empty()) continue;
    if (header) {
      if (line != kCsvHeader) throw ParseError("unexpected comparison header", line_start);
      header = false;
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 8) throw ParseError("comparison row needs 8 fields", line_start);
    ComparisonRow row;
    row.mode = parse_mode(fields[0]);
    row.trees = parse_tree_set(fields[1]);
    for (std::size_t k = 0; k < 3; ++k) {
      const auto oa = fields[2 + 2 * k];
      const auto kappa = fields[3 + 2 * k];
      if (oa.empty() != kappa.empty()) throw ParseError("half-empty comparison cell", line_start);
      if (oa.empty()) continue;
      row.cells[k].present = true;
      row.cells[k].oa = parse_double(oa, line_start);
      row.cells[k].kappa = parse_double(kappa, line_start);
    }
    table.rows.push_back(row);
  }
  return table;
}

std::string comparison_json(const ComparisonTable& table) {
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json r;
    r["mode"] = to_string(row.mode);
    r["trees"] = to_string(row.trees);
    for (std::size_t k = 0; k < 3; ++k) {
      const auto& cell = row.cells[k];
      const std::string name(to_string(kAttributeSets[k]));
      if (cell.present) {
        r[name] = {{"oa", cell.oa}, {"kappa", cell.kappa}, {"dim", cell.dim}};
      } else {
        r[name] = nullptr;
      }
    }
    rows.push_back(r);
  }
  nlohmann::ordered_json j;
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

std::string comparison_text(const ComparisonTable& table) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-4s %-9s | %8s %7s | %8s %7s | %8s %7s\n", "", "", "Area", "",
                "Moment", "", "Both", "");
  out << line;
  std::snprintf(line, sizeof line, "%-4s %-9s | %8s %7s | %8s %7s | %8s %7s\n", "mode", "trees",
                "OA%", "kappa", "OA%", "kappa", "OA%", "kappa");
  out << line;
  for (const auto& row : table.rows) {
    std::snprintf(line, sizeof line, "%-4s %-9s", std::string(to_string(row.mode)).c_str(),
                  std::string(to_string(row.trees)).c_str());
    out << line;
    for (const auto& cell : row.cells) {
      if (cell.present)
        std::snprintf(line, sizeof line, " | %8.2f %7.4f", 100.0 * cell.oa, cell.kappa);
      else
        std::snprintf(line, sizeof line, " | %8s %7s", "-", "-");
      out << line;
    }
    out << "\n";
  }
  return out.str();
}

TreeSet parse_tree_set(std::string_view name) {
  for (auto t : {TreeSet::ComponentPair, TreeSet::TreeOfShapes, TreeSet::Alpha, TreeSet::Omega})
    if (to_string(t) == name) return t;
  throw InputError("unknown tree kind '" + std::string(name) +
                   "' (expected component, tos, alpha or omega)");
}

ProfileMode parse_mode(std::string_view name) {
  for (auto m : {ProfileMode::AP, ProfileMode::FP})
    if (to_string(m) == name) return m;
  throw InputError("unknown profile mode '" + std::string(name) + "'");
}

Attribute parse_attribute(std::string_view name) {
  for (auto a : {Attribute::Area, Attribute::MomentOfInertia})
    if (to_string(a) == name) return a;
  throw InputError("unknown attribute '" + std::string(name) + "' (expected area or moment)");
}

Feature parse_feature(std::string_view name) {
  for (auto f : {Feature::StdDev, Feature::Area})
    if (to_string(f) == name) return f;
  throw InputError("unknown feature '" + std::string(name) + "' (expected stddev or area)");
}

}  // namespace morpho
