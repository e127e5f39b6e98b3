#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mousedyn/learn.hpp"

namespace mousedyn {

// Brute-force Euclidean k-nearest-neighbour classifier over pre-scaled data.
class KnnModel {
 public:
  // Throws UsageError if k == 0 or k > train.size().
  KnnModel(std::span<const LabeledSample> train, std::size_t k);

  // Fraction of the k nearest training samples labelled Genuine. Equal
  // distances are ordered by training index.
  double score(std::span<const double> x) const;

  std::size_t k() const { return k_; }
  std::size_t size() const { return labels_.size(); }
  std::size_t dims() const { return dims_; }

 private:
  std::size_t k_;
  std::size_t dims_;
  std::vector<double> data_;  // row-major, size() x dims()
  std::vector<Label> labels_;
};

inline KnnModel knn_fit(std::span<const LabeledSample> train, std::size_t k) {
  return KnnModel(train, k);
}

// Scores each row of `queries`; OpenMP over queries.
std::vector<double> knn_score_batch(const KnnModel& model,
                                    std::span<const std::vector<double>> queries);

namespace serial {
std::vector<double> knn_score_batch(const KnnModel& model,
                                    std::span<const std::vector<double>> queries);
}  // namespace serial

}  // namespace mousedyn
