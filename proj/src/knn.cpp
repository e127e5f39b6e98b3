#include "mousedyn/knn.hpp"

#include <algorithm>
#include <utility>

#include "mousedyn/error.hpp"

namespace mousedyn {

KnnModel::KnnModel(std::span<const LabeledSample> train, std::size_t k)
    : k_(k), dims_(train.empty() ? 0 : train.front().features.size()) {
  if (k == 0) throw UsageError("k must be >= 1");
  if (k > train.size()) {
    throw UsageError("k = " + std::to_string(k) + " exceeds training size " +
                     std::to_string(train.size()));
  }
  data_.reserve(train.size() * dims_);
  labels_.reserve(train.size());
  for (const auto& s : train) {
    if (s.features.size() != dims_) throw UsageError("inconsistent feature dimensions");
    data_.insert(data_.end(), s.features.begin(), s.features.end());
    labels_.push_back(s.label);
  }
}

double KnnModel::score(std::span<const double> x) const {
  if (x.size() != dims_) throw UsageError("query dimension mismatch");
  const std::size_t n = labels_.size();
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = data_.data() + i * dims_;
    double d2 = 0.0;
    for (std::size_t j = 0; j < dims_; ++j) {
      const double diff = row[j] - x[j];
      d2 += diff * diff;
    }
    dist[i] = {d2, i};
  }
  const auto kth = dist.begin() + static_cast<std::ptrdiff_t>(k_);
  // pair ordering breaks distance ties by training index
  std::nth_element(dist.begin(), kth - 1, dist.end());
  std::size_t genuine = 0;
  for (auto it = dist.begin(); it != kth; ++it) {
    if (labels_[it->second] == Label::Genuine) ++genuine;
  }
  return static_cast<double>(genuine) / static_cast<double>(k_);
}

std::vector<double> knn_score_batch(const KnnModel& model,
                                    std::span<const std::vector<double>> queries) {
  std::vector<double> scores(queries.size());
  const auto n = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    scores[idx] = model.score(queries[idx]);
  }
  return scores;
}

namespace serial {

std::vector<double> knn_score_batch(const KnnModel& model,
                                    std::span<const std::vector<double>> queries) {
  std::vector<double> scores;
  scores.reserve(queries.size());
  for (const auto& q : queries) scores.push_back(model.score(q));
  return scores;
}

}  // namespace serial
}  // namespace mousedyn
