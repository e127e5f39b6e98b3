#include "mousedyn/tree.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <utility>

#include "mousedyn/error.hpp"
#include "mousedyn/rng.hpp"

namespace mousedyn {

void TreeConfig::validate() const {
  if (min_leaf < 1) throw UsageError("min_leaf must be >= 1");
}

double gini(std::size_t impostors, std::size_t genuines) {
  const double n = static_cast<double>(impostors + genuines);
  if (n == 0.0) return 0.0;
  const double pi = static_cast<double>(impostors) / n;
  const double pg = static_cast<double>(genuines) / n;
  return 1.0 - (pi * pi + pg * pg);
}

namespace {

using u128 = unsigned __int128;

// Minimising weighted Gini is maximising sum over children of
// (i^2 + g^2) / n_child. Kept as an exact fraction so ties are real ties.
struct SplitQuality {
  u128 num = 0;
  u128 den = 1;

  bool better_than(const SplitQuality& o) const { return num * o.den > o.num * den; }
  bool equals(const SplitQuality& o) const { return num * o.den == o.num * den; }
};

SplitQuality quality(std::size_t il, std::size_t gl, std::size_t ir, std::size_t gr) {
  const u128 nl = il + gl, nr = ir + gr;
  const u128 sl = u128(il) * il + u128(gl) * gl;
  const u128 sr = u128(ir) * ir + u128(gr) * gr;
  return {sl * nr + sr * nl, nl * nr};
}

struct Candidate {
  std::uint32_t feature = 0;
  double threshold = 0.0;
  SplitQuality q;
};

bool preferred(const Candidate& a, const Candidate& b) {
  if (a.q.better_than(b.q)) return true;
  if (!a.q.equals(b.q)) return false;
  if (a.feature != b.feature) return a.feature < b.feature;
  return a.threshold < b.threshold;
}

class Builder {
 public:
  Builder(std::span<const LabeledSample> train, const TreeConfig& cfg, Rng* rng)
      : train_(train), cfg_(cfg), rng_(rng),
        dims_(train.empty() ? 0 : train.front().features.size()) {}

  std::vector<TreeNode> build(std::vector<std::size_t> rows) {
    struct Work {
      std::uint32_t node;
      std::vector<std::size_t> rows;
      std::size_t depth;
    };
    std::vector<TreeNode> nodes;
    nodes.emplace_back();
    std::vector<Work> stack;
    stack.push_back({0, std::move(rows), 0});
    std::vector<std::pair<double, Label>> column;

    while (!stack.empty()) {
      Work w = std::move(stack.back());
      stack.pop_back();
      TreeNode& node = nodes[w.node];
      for (const auto r : w.rows) {
        if (train_[r].label == Label::Genuine) ++node.genuines; else ++node.impostors;
      }
      if (node.impostors == 0 || node.genuines == 0) continue;
      if (cfg_.max_depth > 0 && w.depth >= cfg_.max_depth) continue;
      if (w.rows.size() < 2 * cfg_.min_leaf) continue;

      const auto best = best_split(w.rows, column);
      if (!best) continue;

      std::vector<std::size_t> left, right;
      for (const auto r : w.rows) {
        (train_[r].features[best->feature] <= best->threshold ? left : right).push_back(r);
      }
      const auto left_id = static_cast<std::uint32_t>(nodes.size());
      node.feature = best->feature;
      node.threshold = best->threshold;
      node.left = left_id;
      node.right = left_id + 1;
      nodes.emplace_back();
      nodes.emplace_back();
      // right pushed first so the left subtree is expanded first
      stack.push_back({left_id + 1, std::move(right), w.depth + 1});
      stack.push_back({left_id, std::move(left), w.depth + 1});
    }
    return nodes;
  }

 private:
  std::vector<std::uint32_t> candidate_features() {
    std::vector<std::uint32_t> order(dims_);
    std::iota(order.begin(), order.end(), 0u);
    if (rng_ != nullptr && cfg_.max_features > 0 && cfg_.max_features < dims_) {
      rng_->shuffle(std::span(order));
    }
    return order;
  }

  std::optional<Candidate> best_split(const std::vector<std::size_t>& rows,
                                      std::vector<std::pair<double, Label>>& column) {
    const bool limited = cfg_.max_features > 0 && cfg_.max_features < dims_;
    std::size_t visited = 0;
    std::optional<Candidate> best;
    for (const auto f : candidate_features()) {
      if (limited && visited >= cfg_.max_features) break;
      column.clear();
      for (const auto r : rows) column.emplace_back(train_[r].features[f], train_[r].label);
      std::sort(column.begin(), column.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      if (column.front().first == column.back().first) continue;  // constant here
      ++visited;

      std::size_t il = 0, gl = 0, ir = 0, gr = 0;
      for (const auto& [v, label] : column) (label == Label::Genuine ? gr : ir)++;
      const std::size_t n = column.size();
      for (std::size_t i = 0; i + 1 < n; ++i) {
        if (column[i].second == Label::Genuine) { ++gl; --gr; } else { ++il; --ir; }
        const double lo = column[i].first, hi = column[i + 1].first;
        if (!(lo < hi)) continue;
        if (i + 1 < cfg_.min_leaf || n - i - 1 < cfg_.min_leaf) continue;
        double threshold = lo + (hi - lo) / 2.0;
        if (!(threshold < hi)) threshold = lo;
        Candidate c{f, threshold, quality(il, gl, ir, gr)};
        if (!best || preferred(c, *best)) best = c;
      }
    }
    return best;
  }

  std::span<const LabeledSample> train_;
  const TreeConfig& cfg_;
  Rng* rng_;
  std::size_t dims_;
};

}  // namespace

TreeModel TreeModel::fit(std::span<const LabeledSample> train, const TreeConfig& cfg) {
  std::vector<std::size_t> rows(train.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return fit(train, rows, cfg, nullptr);
}

TreeModel TreeModel::fit(std::span<const LabeledSample> train, std::span<const std::size_t> rows,
                         const TreeConfig& cfg, Rng* rng) {
  cfg.validate();
  if (train.empty() || rows.empty()) throw DataError("cannot fit a tree on no samples");
  TreeModel model;
  model.nodes_ = Builder(train, cfg, rng).build({rows.begin(), rows.end()});
  return model;
}

double TreeModel::score(std::span<const double> x) const {
  if (nodes_.empty()) throw UsageError("scoring an unfitted tree");
  std::uint32_t i = 0;
  while (!nodes_[i].is_leaf()) {
    i = x[nodes_[i].feature] <= nodes_[i].threshold ? nodes_[i].left : nodes_[i].right;
  }
  const auto& leaf = nodes_[i];
  return static_cast<double>(leaf.genuines) / static_cast<double>(leaf.genuines + leaf.impostors);
}

std::size_t TreeModel::depth() const {
  if (nodes_.empty()) return 0;
  std::size_t deepest = 0;
  std::vector<std::pair<std::uint32_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    const auto [i, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    if (!nodes_[i].is_leaf()) {
      stack.emplace_back(nodes_[i].left, d + 1);
      stack.emplace_back(nodes_[i].right, d + 1);
    }
  }
  return deepest;
}

std::size_t TreeModel::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

}  // namespace mousedyn
