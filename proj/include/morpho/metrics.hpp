#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace morpho {

/// counts(t, p): samples of true class t predicted as p. Classes are 1..classes().
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(int classes = 0);

  int classes() const { return classes_; }
  void add(int truth, int predicted);
  std::int64_t operator()(int truth, int predicted) const;
  std::int64_t total() const { return total_; }
  std::int64_t row_total(int truth) const;
  std::int64_t column_total(int predicted) const;
  std::int64_t trace() const;
  const std::vector<std::int64_t>& counts() const { return counts_; }

  /// Builds a matrix from row-major counts.
  static ConfusionMatrix from_counts(int classes, std::span<const std::int64_t> counts);

 private:
  int classes_;
  std::int64_t total_ = 0;
  std::vector<std::int64_t> counts_;
};

struct Evaluation {
  ConfusionMatrix matrix;
  double overall_accuracy = 0.0;
  double expected_agreement = 0.0;
  double kappa = 0.0;
  std::vector<double> class_accuracy;  // per true class; 0 for classes without samples
};

/// OA = trace / total, p_e = sum_c row_c * col_c / total^2, kappa = (OA - p_e) / (1 - p_e).
/// When p_e is 1 every sample is in one class on both sides and kappa is reported as 1.
Evaluation evaluate(const ConfusionMatrix& matrix);

/// Tallies labels 1..C pairwise; C is the largest label seen.
Evaluation evaluate(std::span<const int> predicted, std::span<const int> truth);

}  // namespace morpho
