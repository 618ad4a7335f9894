#include <algorithm>
#include <cmath>
#include <bit>
#include <functional>
#include <numeric>
#include <type_traits>
#include <string>

#include "morpho/error.hpp"
#include "morpho/forest.hpp"
#include "parallel.hpp"

namespace morpho {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t tree_seed(std::uint64_t seed, std::size_t tree) {
  return splitmix64(seed + (static_cast<std::uint64_t>(tree) + 1) * 0x9E3779B97F4A7C15ull);
}

namespace {

__extension__ using u128 = unsigned __int128;

// Weighted Gini gain of a split as an exact fraction
// (sum_c l_c^2 / nl + sum_c r_c^2 / nr) = num / den; larger is better.
struct SplitScore {
  u128 num = 0;
  u128 den = 1;
  bool better_than(const SplitScore& o) const { return num * o.den > o.num * den; }
};

class TreeGrower {
 public:
  TreeGrower(const SampleMatrix& x, std::span<const int> y, int n_classes, std::uint64_t seed)
      : x_(x), y_(y), classes_(static_cast<std::size_t>(n_classes)), rng_(seed) {
    const std::size_t dim = x.cols;
    mtry_ = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(dim))));
    mtry_ = std::clamp<std::size_t>(mtry_, 1, dim);
  }

  DecisionTree grow() {
    const std::size_t n = x_.rows;
    samples_.resize(n);
    for (auto& s : samples_) s = static_cast<std::int32_t>(rng_.below(n));

    struct Pending {
      std::int32_t node;
      std::size_t begin;
      std::size_t end;
    };
    tree_.nodes.assign(1, TreeNode{});
    std::vector<Pending> stack{{0, 0, n}};
    while (!stack.empty()) {
      const Pending job = stack.back();
      stack.pop_back();
      std::size_t mid = 0;
      TreeNode split;
      if (!find_split(job.begin, job.end, split, mid)) {
        make_leaf(job.node, job.begin, job.end);
        continue;
      }
      split.left = static_cast<std::int32_t>(tree_.nodes.size());
      split.right = split.left + 1;
      tree_.nodes.push_back(TreeNode{});
      tree_.nodes.push_back(TreeNode{});
      tree_.nodes[static_cast<std::size_t>(job.node)] = split;
      // Right pushed first so the left subtree is grown (and draws) first.
      stack.push_back({split.right, mid, job.end});
      stack.push_back({split.left, job.begin, mid});
    }
    return std::move(tree_);
  }

 private:
  void make_leaf(std::int32_t node, std::size_t begin, std::size_t end) {
    std::vector<std::int64_t> counts(classes_, 0);
    for (std::size_t i = begin; i < end; ++i) ++counts[label(samples_[i])];
    TreeNode& leaf = tree_.nodes[static_cast<std::size_t>(node)];
    leaf.leaf = static_cast<std::int32_t>(tree_.probabilities.size());
    const double total = static_cast<double>(end - begin);
    for (auto c : counts) tree_.probabilities.push_back(static_cast<double>(c) / total);
  }

  std::size_t label(std::int32_t sample) const {
    return static_cast<std::size_t>(y_[static_cast<std::size_t>(sample)] - 1);
  }

  bool find_split(std::size_t begin, std::size_t end, TreeNode& split, std::size_t& mid) {
    const std::size_t m = end - begin;
    if (m < 2) return false;
    const std::size_t first = label(samples_[begin]);
    bool pure = true;
    for (std::size_t i = begin + 1; i < end && pure; ++i) pure = label(samples_[i]) == first;
    if (pure) return false;

    std::vector<std::int64_t> total(classes_, 0);
    for (std::size_t i = begin; i < end; ++i) ++total[label(samples_[i])];

    const std::size_t dim = x_.cols;
    features_.resize(dim);
    std::iota(features_.begin(), features_.end(), std::size_t{0});
    bool found = false;
    SplitScore best;
    std::vector<std::int64_t> left(classes_);
    for (std::size_t k = 0; k < dim; ++k) {
      if (k >= mtry_ && found) break;
      const std::size_t pick = k + static_cast<std::size_t>(rng_.below(dim - k));
      std::swap(features_[k], features_[pick]);
      const std::size_t f = features_[k];

      order_.assign(samples_.begin() + static_cast<std::ptrdiff_t>(begin),
                    samples_.begin() + static_cast<std::ptrdiff_t>(end));
      std::sort(order_.begin(), order_.end(), [&](std::int32_t a, std::int32_t b) {
        const double va = x_(static_cast<std::size_t>(a), f);
        const double vb = x_(static_cast<std::size_t>(b), f);
        return va < vb || (va == vb && a < b);
      });

      std::fill(left.begin(), left.end(), 0);
      u128 left_sq = 0;
      u128 right_sq = 0;
      for (auto c : total) right_sq += static_cast<u128>(c * c);
      for (std::size_t i = 0; i + 1 < m; ++i) {
        const std::size_t c = label(order_[i]);
        // Moving one sample of class c from right to left.
        left_sq += static_cast<u128>(2 * left[c] + 1);
        right_sq -= static_cast<u128>(2 * (total[c] - left[c]) - 1);
        ++left[c];
        const double v = x_(static_cast<std::size_t>(order_[i]), f);
        const double next = x_(static_cast<std::size_t>(order_[i + 1]), f);
        if (!(v < next)) continue;
        const auto nl = static_cast<u128>(i + 1);
        const auto nr = static_cast<u128>(m - i - 1);
        const SplitScore score{left_sq * nr + right_sq * nl, nl * nr};
        if (!found || score.better_than(best)) {
          found = true;
          best = score;
          double threshold = 0.5 * (v + next);
          if (!(threshold < next)) threshold = v;
          split.feature = static_cast<std::int32_t>(f);
          split.threshold = threshold;
        }
      }
    }
    if (!found) return false;

    const auto f = static_cast<std::size_t>(split.feature);
    const auto it = std::stable_partition(
        samples_.begin() + static_cast<std::ptrdiff_t>(begin),
        samples_.begin() + static_cast<std::ptrdiff_t>(end),
        [&](std::int32_t s) { return x_(static_cast<std::size_t>(s), f) <= split.threshold; });
    mid = static_cast<std::size_t>(it - samples_.begin());
    return true;
  }

  const SampleMatrix& x_;
  std::span<const int> y_;
  std::size_t classes_;
  Xorshift64Star rng_;
  std::size_t mtry_ = 1;
  DecisionTree tree_;
  std::vector<std::int32_t> samples_;
  std::vector<std::int32_t> order_;
  std::vector<std::size_t> features_;
};

}  // namespace

ForestModel train_forest(const SampleMatrix& samples, std::span<const int> labels,
                         const ForestOptions& options) {
  if (samples.rows == 0 || samples.cols == 0) throw DataError("no labeled samples to train on");
  if (labels.size() != samples.rows) throw DataError("label count does not match sample count");
  if (options.n_trees < 1) throw DataError("forest needs at least one tree");
  int n_classes = 0;
  for (int l : labels) {
    if (l < 1) throw DataError("class labels must be positive");
    n_classes = std::max(n_classes, l);
  }
  if (std::adjacent_find(labels.begin(), labels.end(), std::not_equal_to<>()) == labels.end())
    throw DataError("training labels contain a single class");
  for (double v : samples.values)
    if (std::isnan(v)) throw DataError("training features contain NaN");

  ForestModel model;
  model.n_classes = n_classes;
  model.n_features = static_cast<int>(samples.cols);
  model.seed = options.seed;
  model.trees.resize(static_cast<std::size_t>(options.n_trees));
  detail::parallel_for(options.n_trees, options.exec, [&](std::int64_t t) {
    TreeGrower grower(samples, labels, n_classes, tree_seed(options.seed, static_cast<std::size_t>(t)));
    model.trees[static_cast<std::size_t>(t)] = grower.grow();
  });
  return model;
}

std::vector<double> vote(const ForestModel& model, std::span<const double> sample) {
  std::vector<double> sum(static_cast<std::size_t>(model.n_classes), 0.0);
  for (const auto& tree : model.trees) {
    std::size_t node = 0;
    while (tree.nodes[node].feature >= 0) {
      const TreeNode& t = tree.nodes[node];
      node = static_cast<std::size_t>(sample[static_cast<std::size_t>(t.feature)] <= t.threshold
                                          ? t.left
                                          : t.right);
    }
    const auto offset = static_cast<std::size_t>(tree.nodes[node].leaf);
    for (std::size_t c = 0; c < sum.size(); ++c) sum[c] += tree.probabilities[offset + c];
  }
  return sum;
}

std::vector<int> predict(const ForestModel& model, const SampleMatrix& samples, Exec exec) {
  if (samples.cols != static_cast<std::size_t>(model.n_features))
    throw DataError("sample dimension " + std::to_string(samples.cols) +
                    " does not match model dimension " + std::to_string(model.n_features));
  std::vector<int> out(samples.rows);
  detail::parallel_for(static_cast<std::int64_t>(samples.rows), exec, [&](std::int64_t r) {
    const auto votes = vote(model, samples.row(static_cast<std::size_t>(r)));
    const auto best = std::max_element(votes.begin(), votes.end());  // first maximum
    out[static_cast<std::size_t>(r)] = static_cast<int>(best - votes.begin()) + 1;
  });
  return out;
}

namespace {

class Writer {
 public:
  template <class T>
  void put(T value) {
    std::uint64_t bits;
    if constexpr (std::is_same_v<T, double>) bits = std::bit_cast<std::uint64_t>(value);
    else bits = static_cast<std::uint64_t>(value);
    for (std::size_t k = 0; k < sizeof(T); ++k) out_.push_back(static_cast<char>((bits >> (8 * k)) & 0xFF));
  }
  std::string take() { return std::move(out_); }
  void raw(std::string_view s) { out_.append(s); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}
  template <class T>
  T get() {
    if (pos_ + sizeof(T) > in_.size()) throw ParseError("truncated forest model", pos_);
    std::uint64_t bits = 0;
    for (std::size_t k = sizeof(T); k-- > 0;)
      bits = (bits << 8) | static_cast<unsigned char>(in_[pos_ + k]);
    pos_ += sizeof(T);
    if constexpr (std::is_same_v<T, double>) return std::bit_cast<double>(bits);
    else return static_cast<T>(bits);
  }
  std::string_view take(std::size_t n) {
    if (pos_ + n > in_.size()) throw ParseError("truncated forest model", pos_);
    auto s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == in_.size(); }
  std::size_t offset() const { return pos_; }

 private:
  std::string_view in_;
  std::size_t pos_ = 0;
};

constexpr std::uint32_t kModelVersion = 1;

}  // namespace

std::string serialize(const ForestModel& model) {
  Writer w;
  w.raw("MPRF");
  w.put<std::uint32_t>(kModelVersion);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(model.n_classes));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(model.n_features));
  w.put<std::uint64_t>(model.seed);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(model.trees.size()));
  for (const auto& tree : model.trees) {
    w.put<std::uint32_t>(static_cast<std::uint32_t>(tree.nodes.size()));
    for (const auto& node : tree.nodes) {
      w.put<std::int32_t>(node.feature);
      if (node.feature >= 0) {
        w.put<double>(node.threshold);
        w.put<std::int32_t>(node.left);
        w.put<std::int32_t>(node.right);
      } else {
        for (int c = 0; c < model.n_classes; ++c)
          w.put<double>(tree.probabilities[static_cast<std::size_t>(node.leaf + c)]);
      }
    }
  }
  return w.take();
}

ForestModel deserialize(std::string_view bytes) {
  Reader r(bytes);
  if (r.take(4) != "MPRF") throw ParseError("not a forest model (bad magic)", 0);
  const auto version = r.get<std::uint32_t>();
  if (version != kModelVersion)
    throw ParseError("unsupported forest model version " + std::to_string(version), 4);
  ForestModel model;
  model.n_classes = static_cast<int>(r.get<std::uint32_t>());
  model.n_features = static_cast<int>(r.get<std::uint32_t>());
  model.seed = r.get<std::uint64_t>();
  model.trees.resize(r.get<std::uint32_t>());
  for (auto& tree : model.trees) {
    tree.nodes.resize(r.get<std::uint32_t>());
    for (auto& node : tree.nodes) {
      node.feature = r.get<std::int32_t>();
      if (node.feature >= 0) {
        node.threshold = r.get<double>();
        node.left = r.get<std::int32_t>();
        node.right = r.get<std::int32_t>();
      } else {
        node.leaf = static_cast<std::int32_t>(tree.probabilities.size());
        for (int c = 0; c < model.n_classes; ++c) tree.probabilities.push_back(r.get<double>());
      }
    }
  }
  if (!r.done()) throw ParseError("trailing bytes after forest model", r.offset());
  validate(model);
  return model;
}

void validate(const ForestModel& model) {
  for (const auto& tree : model.trees) {
    const auto count = static_cast<std::int32_t>(tree.nodes.size());
    if (count == 0) throw InvariantError("forest contains an empty tree");
    for (const auto& node : tree.nodes) {
      if (node.feature >= 0) {
        if (node.feature >= model.n_features) throw InvariantError("split feature out of range");
        if (node.left <= 0 || node.left >= count || node.right <= 0 || node.right >= count)
          throw InvariantError("split child out of range");
      } else {
        if (node.leaf < 0 ||
            static_cast<std::size_t>(node.leaf + model.n_classes) > tree.probabilities.size())
          throw InvariantError("leaf distribution out of range");
        double sum = 0.0;
        for (int c = 0; c < model.n_classes; ++c)
          sum += tree.probabilities[static_cast<std::size_t>(node.leaf + c)];
        if (std::abs(sum - 1.0) > 1e-9) throw InvariantError("leaf probabilities do not sum to 1");
      }
    }
  }
}

}  // namespace morpho
