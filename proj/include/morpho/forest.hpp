#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "morpho/exec.hpp"

namespace morpho {

/// SplitMix64 finalizer, used to derive independent per-tree seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of tree i: splitmix64(seed + (i + 1) * 0x9E3779B97F4A7C15).
std::uint64_t tree_seed(std::uint64_t seed, std::size_t tree);

/// xorshift64* generator:
///   x ^= x >> 12; x ^= x << 25; x ^= x >> 27; return x * 0x2545F4914F6CDD1D.
class Xorshift64Star {
 public:
  explicit Xorshift64Star(std::uint64_t seed) : state_(seed ? seed : 0x9E3779B97F4A7C15ull) {}

  std::uint64_t next() {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545F4914F6CDD1Dull;
  }

  /// Integer in [0, bound) from the high half of a 64x64 product.
  std::uint64_t below(std::uint64_t bound) {
    __extension__ using u128 = unsigned __int128;
    return static_cast<std::uint64_t>((static_cast<u128>(next()) * bound) >> 64);
  }

 private:
  std::uint64_t state_;
};

/// Row-major sample x feature matrix.
struct SampleMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  SampleMatrix() = default;
  SampleMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

  double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  double& operator()(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(values).subspan(r * cols, cols);
  }
};

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;     // samples with x[feature] <= threshold go left
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::int32_t leaf = -1;     // offset of the class distribution in `probabilities`
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // node 0 is the root
  std::vector<double> probabilities;
};

/// Class ids are 1..n_classes; leaf vectors index class c at c - 1.
struct ForestModel {
  int n_classes = 0;
  int n_features = 0;
  std::uint64_t seed = 0;
  std::vector<DecisionTree> trees;
};

struct ForestOptions {
  int n_trees = 100;
  std::uint64_t seed = 42;
  Exec exec = Exec::Parallel;
};

/// Random forest of CART trees: bootstrap of n draws with replacement, Gini
/// splits over ceil(sqrt(dim)) features drawn per node without replacement,
/// grown to purity. Further features are drawn when none of the first ones can
/// split the node. Results depend only on the data and the seed.
ForestModel train_forest(const SampleMatrix& samples, std::span<const int> labels,
                         const ForestOptions& options = {});

/// Majority vote over summed leaf distributions; ties go to the smaller class id.
std::vector<int> predict(const ForestModel& model, const SampleMatrix& samples,
                         Exec exec = Exec::Parallel);

/// Summed leaf distribution of one sample (length n_classes).
std::vector<double> vote(const ForestModel& model, std::span<const double> sample);

/// Versioned little-endian binary format:
///   "MPRF" u32 version=1 u32 n_classes u32 n_features u64 seed u32 n_trees
///   per tree: u32 n_nodes, then per node i32 feature and either
///   (f64 threshold, i32 left, i32 right) or n_classes f64 probabilities.
std::string serialize(const ForestModel& model);
ForestModel deserialize(std::string_view bytes);

/// Feature indices below n_features, child links in range, leaf sums 1 +- 1e-9.
void validate(const ForestModel& model);

}  // namespace morpho
