#include "mousedyn/model.hpp"

#include "mousedyn/error.hpp"

namespace mousedyn {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::DecisionTree: return "dt";
    case ModelKind::Knn: return "knn";
    case ModelKind::RandomForest: return "rf";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "dt") return ModelKind::DecisionTree;
  if (text == "knn") return ModelKind::Knn;
  if (text == "rf") return ModelKind::RandomForest;
  throw UsageError("unknown model '" + std::string(text) + "' (expected dt, knn or rf)");
}

void ModelConfig::validate() const {
  if (k < 1) throw UsageError("k must be >= 1");
  if (n_trees < 1) throw UsageError("n_trees must be >= 1");
  if (min_leaf < 1) throw UsageError("min_leaf must be >= 1");
}

Model Model::fit(ModelKind kind, const ModelConfig& cfg, std::span<const LabeledSample> train,
                 std::uint64_t seed) {
  cfg.validate();
  if (train.empty()) throw DataError("cannot fit a model on no samples");
  switch (kind) {
    case ModelKind::Knn: {
      auto scaler = Scaler::fit(train);
      const auto scaled = scaler.transform(train);
      return Model(ScaledKnn{std::move(scaler), KnnModel(scaled, cfg.k)});
    }
    case ModelKind::DecisionTree: {
      TreeConfig t;
      t.max_depth = cfg.max_depth;
      t.min_leaf = cfg.min_leaf;
      return Model(TreeModel::fit(train, t));
    }
    case ModelKind::RandomForest: {
      ForestConfig f;
      f.n_trees = cfg.n_trees;
      f.max_features = cfg.max_features;
      f.max_depth = cfg.max_depth;
      f.min_leaf = cfg.min_leaf;
      return Model(forest_fit(train, f, seed));
    }
  }
  throw UsageError("unknown model kind");
}

ModelKind Model::kind() const {
  switch (impl_.index()) {
    case 0: return ModelKind::Knn;
    case 1: return ModelKind::DecisionTree;
    default: return ModelKind::RandomForest;
  }
}

double Model::score(std::span<const double> x) const {
  return std::visit(
      [&](const auto& m) -> double {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, ScaledKnn>) {
          return m.knn.score(m.scaler.transform(x));
        } else {
          return m.score(x);
        }
      },
      impl_);
}

std::vector<double> Model::score_batch(std::span<const LabeledSample> samples) const {
  std::vector<double> scores(samples.size());
  const auto n = static_cast<std::ptrdiff_t>(samples.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    scores[idx] = score(samples[idx].features);
  }
  return scores;
}

}  // namespace mousedyn
