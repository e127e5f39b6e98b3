#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mousedyn/learn.hpp"

namespace mousedyn {

class Rng;

struct TreeConfig {
  std::size_t max_depth = 0;     // 0 = unlimited
  std::size_t min_leaf = 1;      // minimum samples on each side of a split
  std::size_t max_features = 0;  // candidate features per split; 0 = all

  void validate() const;
};

// Gini impurity of a node with the given class counts.
double gini(std::size_t impostors, std::size_t genuines);

struct TreeNode {
  // Internal nodes: feature/threshold/children. Leaves: left == right == kLeaf.
  static constexpr std::uint32_t kLeaf = 0xffffffffu;

  std::uint32_t feature = 0;
  double threshold = 0.0;  // x[feature] <= threshold goes left
  std::uint32_t left = kLeaf;
  std::uint32_t right = kLeaf;
  std::size_t impostors = 0;
  std::size_t genuines = 0;

  bool is_leaf() const { return left == kLeaf; }
};

// CART classification tree with Gini splits on midpoints between consecutive
// distinct values. Equal-impurity candidates resolve to the lowest feature
// index, then the lowest threshold.
class TreeModel {
 public:
  TreeModel() = default;

  static TreeModel fit(std::span<const LabeledSample> train, const TreeConfig& cfg);

  // `rows` selects training samples (repeats allowed, as in a bootstrap).
  // With cfg.max_features > 0, candidate features are drawn from `rng`.
  static TreeModel fit(std::span<const LabeledSample> train, std::span<const std::size_t> rows,
                       const TreeConfig& cfg, Rng* rng);

  // Genuine fraction of the leaf reached by x.
  double score(std::span<const double> x) const;

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::size_t depth() const;
  std::size_t leaf_count() const;

 private:
  std::vector<TreeNode> nodes_;
};

inline TreeModel tree_fit(std::span<const LabeledSample> train, const TreeConfig& cfg) {
  return TreeModel::fit(train, cfg);
}

}  // namespace mousedyn
