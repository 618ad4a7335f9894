#include <algorithm>
#include <string>

#include "morpho/error.hpp"
#include "morpho/metrics.hpp"

namespace morpho {

ConfusionMatrix::ConfusionMatrix(int classes)
    : classes_(classes), counts_(static_cast<std::size_t>(classes) * static_cast<std::size_t>(classes), 0) {
  if (classes < 0) throw DataError("negative class count");
}

void ConfusionMatrix::add(int truth, int predicted) {
  if (truth < 1 || truth > classes_ || predicted < 1 || predicted > classes_)
    throw DataError("class label outside 1.." + std::to_string(classes_));
  ++counts_[static_cast<std::size_t>((truth - 1) * classes_ + (predicted - 1))];
  ++total_;
}

std::int64_t ConfusionMatrix::operator()(int truth, int predicted) const {
  return counts_[static_cast<std::size_t>((truth - 1) * classes_ + (predicted - 1))];
}

std::int64_t ConfusionMatrix::row_total(int truth) const {
  std::int64_t s = 0;
  for (int p = 1; p <= classes_; ++p) s += (*this)(truth, p);
  return s;
}

std::int64_t ConfusionMatrix::column_total(int predicted) const {
  std::int64_t s = 0;
  for (int t = 1; t <= classes_; ++t) s += (*this)(t, predicted);
  return s;
}

std::int64_t ConfusionMatrix::trace() const {
  std::int64_t s = 0;
  for (int c = 1; c <= classes_; ++c) s += (*this)(c, c);
  return s;
}

ConfusionMatrix ConfusionMatrix::from_counts(int classes, std::span<const std::int64_t> counts) {
  ConfusionMatrix m(classes);
  if (counts.size() != m.counts_.size()) throw DataError("confusion counts have the wrong size");
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < 0) throw DataError("negative confusion count");
    m.counts_[i] = counts[i];
    m.total_ += counts[i];
  }
  return m;
}

Evaluation evaluate(const ConfusionMatrix& matrix) {
  Evaluation e{matrix, 0.0, 0.0, 0.0, {}};
  const int c = matrix.classes();
  e.class_accuracy.assign(static_cast<std::size_t>(c), 0.0);
  for (int k = 1; k <= c; ++k) {
    const auto row = matrix.row_total(k);
    if (row > 0)
      e.class_accuracy[static_cast<std::size_t>(k - 1)] =
          static_cast<double>(matrix(k, k)) / static_cast<double>(row);
  }
  const auto total = matrix.total();
  if (total == 0) throw DataError("no samples to evaluate");
  __extension__ using i128 = __int128;
  i128 chance = 0;
  for (int k = 1; k <= c; ++k)
    chance += static_cast<i128>(matrix.row_total(k)) * matrix.column_total(k);
  const double n = static_cast<double>(total);
  e.overall_accuracy = static_cast<double>(matrix.trace()) / n;
  e.expected_agreement = static_cast<double>(chance) / (n * n);
  if (chance == static_cast<i128>(total) * total)
    e.kappa = 1.0;
  else
    e.kappa = (e.overall_accuracy - e.expected_agreement) / (1.0 - e.expected_agreement);
  return e;
}

Evaluation evaluate(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size())
    throw DataError("prediction count " + std::to_string(predicted.size()) +
                    " does not match truth count " + std::to_string(truth.size()));
  int classes = 0;
  for (int t : truth) {
    if (t < 1) throw DataError("truth labels must be positive");
    classes = std::max(classes, t);
  }
  for (int p : predicted) {
    if (p < 1) throw DataError("predicted labels must be positive");
    classes = std::max(classes, p);
  }
  ConfusionMatrix m(classes);
  for (std::size_t i = 0; i < truth.size(); ++i) m.add(truth[i], predicted[i]);
  return evaluate(m);
}

}  // namespace morpho
