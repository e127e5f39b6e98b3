#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "mousedyn/forest.hpp"
#include "mousedyn/knn.hpp"
#include "mousedyn/learn.hpp"
#include "mousedyn/tree.hpp"

namespace mousedyn {

enum class ModelKind { DecisionTree, Knn, RandomForest };

std::string_view to_string(ModelKind kind);  // "dt", "knn", "rf"
ModelKind parse_model_kind(std::string_view text);

struct ModelConfig {
  std::size_t k = 5;
  std::size_t n_trees = 100;
  std::size_t max_depth = 0;
  std::size_t min_leaf = 1;
  std::size_t max_features = 0;  // forest only; 0 = floor(sqrt(dims))

  void validate() const;
};

// KNN with the scaler fitted on its training data.
struct ScaledKnn {
  Scaler scaler;
  KnnModel knn;
};

// A fitted classifier. KNN standardises features; trees use raw values.
class Model {
 public:
  static Model fit(ModelKind kind, const ModelConfig& cfg, std::span<const LabeledSample> train,
                   std::uint64_t seed);

  ModelKind kind() const;
  double score(std::span<const double> x) const;  // probability of Genuine
  std::vector<double> score_batch(std::span<const LabeledSample> samples) const;

 private:
  explicit Model(std::variant<ScaledKnn, TreeModel, ForestModel> impl) : impl_(std::move(impl)) {}

  std::variant<ScaledKnn, TreeModel, ForestModel> impl_;
};

}  // namespace mousedyn
