#include "mousedyn/forest.hpp"

#include <cmath>
#include <numeric>

#include "mousedyn/error.hpp"
#include "mousedyn/rng.hpp"

namespace mousedyn {

void ForestConfig::validate() const {
  if (n_trees < 1) throw UsageError("n_trees must be >= 1");
  if (min_leaf < 1) throw UsageError("min_leaf must be >= 1");
}

double ForestModel::score(std::span<const double> x) const {
  if (trees_.empty()) throw UsageError("scoring an empty forest");
  double sum = 0.0;
  for (const auto& t : trees_) sum += t.score(x);
  return sum / static_cast<double>(trees_.size());
}

namespace {

TreeConfig tree_config(const ForestConfig& cfg, std::size_t dims) {
  TreeConfig t;
  t.max_depth = cfg.max_depth;
  t.min_leaf = cfg.min_leaf;
  t.max_features = cfg.max_features > 0
                       ? cfg.max_features
                       : static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(dims))));
  if (t.max_features == 0 || t.max_features >= dims) t.max_features = 0;  // all features
  return t;
}

TreeModel fit_one(std::span<const LabeledSample> train, const ForestConfig& cfg,
                  const TreeConfig& tcfg, std::uint64_t seed, std::size_t index) {
  Rng rng(derive_seed(seed, index));
  std::vector<std::size_t> rows(train.size());
  if (cfg.bootstrap) {
    for (auto& r : rows) r = static_cast<std::size_t>(rng.uniform_index(train.size()));
  } else {
    std::iota(rows.begin(), rows.end(), std::size_t{0});
  }
  return TreeModel::fit(train, rows, tcfg, &rng);
}

void check(std::span<const LabeledSample> train, const ForestConfig& cfg) {
  cfg.validate();
  if (train.empty()) throw DataError("cannot fit a forest on no samples");
}

}  // namespace

ForestModel forest_fit(std::span<const LabeledSample> train, const ForestConfig& cfg,
                       std::uint64_t seed) {
  check(train, cfg);
  const auto tcfg = tree_config(cfg, train.front().features.size());
  std::vector<TreeModel> trees(cfg.n_trees);
  const auto n = static_cast<std::ptrdiff_t>(cfg.n_trees);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    trees[idx] = fit_one(train, cfg, tcfg, seed, idx);
  }
  return ForestModel(std::move(trees));
}

namespace serial {

ForestModel forest_fit(std::span<const LabeledSample> train, const ForestConfig& cfg,
                       std::uint64_t seed) {
  check(train, cfg);
  const auto tcfg = tree_config(cfg, train.front().features.size());
  std::vector<TreeModel> trees;
  trees.reserve(cfg.n_trees);
  for (std::size_t i = 0; i < cfg.n_trees; ++i) trees.push_back(fit_one(train, cfg, tcfg, seed, i));
  return ForestModel(std::move(trees));
}

}  // namespace serial
}  // namespace mousedyn
