#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mousedyn/learn.hpp"
#include "mousedyn/tree.hpp"

namespace mousedyn {

struct ForestConfig {
  std::size_t n_trees = 100;
  std::size_t max_features = 0;  // 0 = floor(sqrt(dims))
  bool bootstrap = true;
  std::size_t max_depth = 0;
  std::size_t min_leaf = 1;

  void validate() const;
};

class ForestModel {
 public:
  ForestModel() = default;
  explicit ForestModel(std::vector<TreeModel> trees) : trees_(std::move(trees)) {}

  // Mean of the trees' scores.
  double score(std::span<const double> x) const;

  const std::vector<TreeModel>& trees() const { return trees_; }

 private:
  std::vector<TreeModel> trees_;
};

// Trees are fitted in parallel; tree i draws from derive_seed(seed, i) so the
// result matches serial::forest_fit exactly.
ForestModel forest_fit(std::span<const LabeledSample> train, const ForestConfig& cfg,
                       std::uint64_t seed);

namespace serial {
ForestModel forest_fit(std::span<const LabeledSample> train, const ForestConfig& cfg,
                       std::uint64_t seed);
}  // namespace serial

}  // namespace mousedyn
