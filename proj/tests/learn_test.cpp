#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "mousedyn/error.hpp"
#include "mousedyn/forest.hpp"
#include "mousedyn/knn.hpp"
#include "mousedyn/learn.hpp"
#include "mousedyn/model.hpp"
#include "mousedyn/rng.hpp"
#include "mousedyn/tree.hpp"
#include "support/oracles.hpp"
#include "support/samples.hpp"

using namespace mousedyn;
using namespace mousedyn::testing;

namespace {

LabeledSample sample(std::vector<double> f, Label l, std::size_t id = 0) {
  LabeledSample s;
  s.features = std::move(f);
  s.label = l;
  s.origin.action_id = id;
  return s;
}

std::vector<LabeledSample> labelled(std::size_t genuine, std::size_t impostor) {
  std::vector<LabeledSample> out;
  for (std::size_t i = 0; i < genuine + impostor; ++i) {
    out.push_back(sample({static_cast<double>(i)}, i < genuine ? Label::Genuine : Label::Impostor, i));
  }
  return out;
}

std::size_t count(const std::vector<LabeledSample>& xs, Label l) {
  return static_cast<std::size_t>(std::count_if(xs.begin(), xs.end(), [&](const auto& s) { return s.label == l; }));
}

std::vector<std::size_t> ids(const std::vector<LabeledSample>& xs) {
  std::vector<std::size_t> out;
  for (const auto& s : xs) out.push_back(s.origin.action_id);
  return out;
}

}  // namespace

TEST(Split, FloorPerLabel) {
  const auto split = train_test_split(labelled(6, 4), 0.7, 1);
  EXPECT_EQ(count(split.train, Label::Genuine), 4u);
  EXPECT_EQ(count(split.train, Label::Impostor), 2u);
  EXPECT_EQ(count(split.test, Label::Genuine), 2u);
  EXPECT_EQ(count(split.test, Label::Impostor), 2u);
}

TEST(Split, Deterministic) {
  const auto data = labelled(40, 35);
  for (std::uint64_t seed : {0ull, 7ull, 42ull}) {
    const auto a = train_test_split(data, 0.7, seed);
    const auto b = train_test_split(data, 0.7, seed);
    EXPECT_EQ(ids(a.train), ids(b.train));
    EXPECT_EQ(ids(a.test), ids(b.test));
  }
  EXPECT_NE(ids(train_test_split(data, 0.7, 1).train), ids(train_test_split(data, 0.7, 2).train));
}

TEST(Split, PartitionsInput) {
  const auto data = labelled(23, 17);
  const auto split = train_test_split(data, 0.7, 9);
  auto all = ids(split.train);
  const auto t = ids(split.test);
  all.insert(all.end(), t.begin(), t.end());
  std::sort(all.begin(), all.end());
  EXPECT_EQ(all, ids(data));
}

TEST(Split, Errors) {
  EXPECT_THROW(train_test_split(labelled(10, 0), 0.7, 1), DataError);
  EXPECT_THROW(train_test_split(labelled(10, 1), 0.7, 1), DataError);
  EXPECT_THROW(train_test_split(labelled(5, 5), 1.0, 1), UsageError);
  EXPECT_THROW(train_test_split(labelled(5, 5), 0.0, 1), UsageError);
  EXPECT_THROW(train_test_split({}, 0.7, 1), DataError);
}

TEST(ShuffleSplit, SingleClass) {
  const auto split = shuffle_split(labelled(10, 0), 0.7, 3);
  EXPECT_EQ(split.train.size(), 7u);
  EXPECT_EQ(split.test.size(), 3u);
}

TEST(Scaler, ColumnExample) {
  const std::vector<LabeledSample> train = {sample({1, 5}, Label::Genuine), sample({2, 5}, Label::Genuine),
                                            sample({3, 5}, Label::Impostor)};
  const auto sc = Scaler::fit(train);
  EXPECT_DOUBLE_EQ(sc.mean()[0], 2.0);
  EXPECT_NEAR(sc.sd()[0], std::sqrt(2.0 / 3.0), 1e-15);
  const auto z = sc.transform(train);
  EXPECT_NEAR(z[0].features[0], -1.2247, 1e-4);
  EXPECT_NEAR(z[1].features[0], 0.0, 1e-15);
  EXPECT_NEAR(z[2].features[0], 1.2247, 1e-4);
  for (const auto& s : z) EXPECT_EQ(s.features[1], 0.0);
}

TEST(Scaler, IdentityAndRoundTrip) {
  const auto id = Scaler::identity(3);
  const std::vector<double> x = {1.5, -2.0, 7.25};
  EXPECT_EQ(id.transform(x), x);
  Rng rng(5);
  const auto data = random_samples(50, 39, rng);
  const auto sc = Scaler::fit(data);
  for (const auto& s : data) {
    const auto back = sc.inverse_transform(sc.transform(s.features));
    for (std::size_t j = 0; j < back.size(); ++j) EXPECT_NEAR(back[j], s.features[j], 1e-9);
  }
}

TEST(Scaler, StandardisesTraining) {
  Rng rng(6);
  const auto data = random_samples(80, 5, rng);
  const auto z = Scaler::fit(data).transform(data);
  for (std::size_t j = 0; j < 5; ++j) {
    double m = 0, v = 0;
    for (const auto& s : z) m += s.features[j];
    m /= z.size();
    for (const auto& s : z) v += (s.features[j] - m) * (s.features[j] - m);
    EXPECT_NEAR(m, 0.0, 1e-12);
    EXPECT_NEAR(v / z.size(), 1.0, 1e-12);
  }
}

TEST(Knn, VoteExample) {
  const std::vector<LabeledSample> train = {sample({0, 0}, Label::Genuine), sample({0, 1}, Label::Genuine),
                                            sample({10, 10}, Label::Impostor)};
  const KnnModel m(train, 3);
  EXPECT_DOUBLE_EQ(m.score(std::vector<double>{0, 0.5}), 2.0 / 3.0);
}

TEST(Knn, OneNeighbourReturnsOwnLabel) {
  Rng rng(8);
  const auto train = consistent(random_samples(100, 4, rng, 5));
  const KnnModel m(train, 1);
  for (const auto& s : train) EXPECT_EQ(m.score(s.features), s.label == Label::Genuine ? 1.0 : 0.0);
}

TEST(Knn, TieBreakByIndex) {
  const std::vector<LabeledSample> train = {sample({1}, Label::Impostor), sample({-1}, Label::Genuine),
                                            sample({1}, Label::Genuine)};
  EXPECT_EQ(KnnModel(train, 1).score(std::vector<double>{0}), 0.0);
  EXPECT_EQ(KnnModel(train, 2).score(std::vector<double>{0}), 0.5);
}

TEST(Knn, MatchesBruteForceOracle) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto train = random_samples(200, 39, rng, trial % 2 ? 3 : 0);
    const auto queries = random_samples(30, 39, rng, trial % 2 ? 3 : 0);
    const std::size_t k = 1 + rng.uniform_index(train.size());
    const KnnModel m(train, k);
    for (const auto& q : queries) ASSERT_EQ(m.score(q.features), oracle::knn_score(train, q.features, k));
  }
}

TEST(Knn, RejectsBadK) {
  const auto train = labelled(2, 1);
  EXPECT_THROW(KnnModel(train, 0), UsageError);
  EXPECT_THROW(KnnModel(train, 4), UsageError);
}

TEST(Knn, BatchMatchesSerial) {
  Rng rng(12);
  const auto train = random_samples(300, 39, rng);
  const auto q = random_samples(500, 39, rng);
  std::vector<std::vector<double>> rows;
  for (const auto& s : q) rows.push_back(s.features);
  const KnnModel m(train, 5);
  EXPECT_EQ(knn_score_batch(m, rows), serial::knn_score_batch(m, rows));
}

TEST(Tree, Gini) {
  EXPECT_DOUBLE_EQ(gini(2, 2), 0.5);
  EXPECT_DOUBLE_EQ(gini(4, 0), 0.0);
  EXPECT_DOUBLE_EQ(gini(1, 3), 0.375);
}

TEST(Tree, SeparableOneDimension) {
  std::vector<LabeledSample> train;
  for (int i = 1; i <= 5; ++i) {
    train.push_back(sample({-static_cast<double>(i)}, Label::Genuine));
    train.push_back(sample({static_cast<double>(i)}, Label::Impostor));
  }
  const auto t = tree_fit(train, {});
  ASSERT_EQ(t.nodes().size(), 3u);
  EXPECT_EQ(t.nodes()[0].threshold, 0.0);
  EXPECT_EQ(t.leaf_count(), 2u);
  EXPECT_EQ(training_accuracy(train, [&](const auto& x) { return t.score(x); }), 1.0);
}

TEST(Tree, TieGoesToLowestFeature) {
  // both features separate perfectly
  const std::vector<LabeledSample> train = {sample({0, 0}, Label::Genuine), sample({1, 1}, Label::Impostor)};
  const auto t = tree_fit(train, {});
  EXPECT_EQ(t.nodes()[0].feature, 0u);
  EXPECT_EQ(t.nodes()[0].threshold, 0.5);
}

TEST(Tree, ConsistentDataFitsPerfectly) {
  Rng rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const auto train = consistent(random_samples(150, 6, rng, 4));
    const auto t = tree_fit(train, {});
    EXPECT_EQ(training_accuracy(train, [&](const auto& x) { return t.score(x); }), 1.0);
    std::size_t routed = 0;
    for (const auto& n : t.nodes()) {
      if (n.is_leaf()) routed += n.impostors + n.genuines;
      else EXPECT_NE(n.right, TreeNode::kLeaf);
    }
    EXPECT_EQ(routed, train.size());
  }
}

TEST(Tree, DepthAndLeafLimits) {
  Rng rng(14);
  const auto train = random_samples(200, 5, rng);
  TreeConfig cfg;
  cfg.max_depth = 3;
  EXPECT_LE(tree_fit(train, cfg).depth(), 3u);
  cfg = {};
  cfg.min_leaf = 20;
  const auto t = tree_fit(train, cfg);
  for (const auto& n : t.nodes()) {
    if (n.is_leaf()) EXPECT_GE(n.impostors + n.genuines, 20u);
  }
}

TEST(Forest, DegenerateEqualsTree) {
  Rng rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    const auto train = random_samples(120, 39, rng, trial % 2 ? 4 : 0);
    const auto test = random_samples(60, 39, rng, trial % 2 ? 4 : 0);
    ForestConfig fc;
    fc.n_trees = 1;
    fc.bootstrap = false;
    fc.max_features = 39;
    const auto f = forest_fit(train, fc, 99);
    const auto t = tree_fit(train, {});
    for (const auto& s : test) EXPECT_EQ(f.score(s.features), t.score(s.features));
  }
}

TEST(Forest, DeterministicAndMatchesSerial) {
  Rng rng(16);
  const auto train = random_samples(150, 39, rng);
  const auto test = random_samples(50, 39, rng);
  ForestConfig fc;
  fc.n_trees = 25;
  const auto a = forest_fit(train, fc, 5);
  const auto b = forest_fit(train, fc, 5);
  const auto c = serial::forest_fit(train, fc, 5);
  for (const auto& s : test) {
    EXPECT_EQ(a.score(s.features), b.score(s.features));
    EXPECT_EQ(a.score(s.features), c.score(s.features));
  }
}

TEST(Forest, ScoreIsMeanOfTrees) {
  Rng rng(17);
  const auto train = random_samples(100, 39, rng);
  ForestConfig fc;
  fc.n_trees = 10;
  fc.max_depth = 3;
  const auto f = forest_fit(train, fc, 1);
  ASSERT_EQ(f.trees().size(), 10u);
  for (const auto& s : random_samples(30, 39, rng)) {
    double sum = 0;
    for (const auto& t : f.trees()) sum += t.score(s.features);
    EXPECT_DOUBLE_EQ(f.score(s.features), sum / 10.0);
    EXPECT_GE(f.score(s.features), 0.0);
    EXPECT_LE(f.score(s.features), 1.0);
  }
}

TEST(Forest, HandCheckedTwoTreeToy) {
  // Tree 1 splits at 1.5 into pure leaves. Tree 2 cannot split under
  // min_leaf 4, so it is a single 3G/1I leaf scoring 3/4.
  const std::vector<LabeledSample> a = {sample({0}, Label::Genuine), sample({1}, Label::Genuine),
                                        sample({2}, Label::Impostor), sample({3}, Label::Impostor)};
  const std::vector<LabeledSample> b = {sample({0}, Label::Genuine), sample({1}, Label::Genuine),
                                        sample({2}, Label::Genuine), sample({3}, Label::Impostor)};
  TreeConfig stump;
  stump.min_leaf = 4;  // no split can leave 4 on both sides
  const ForestModel f({tree_fit(a, {}), tree_fit(b, stump)});
  EXPECT_DOUBLE_EQ(f.score(std::vector<double>{0.5}), (1.0 + 0.75) / 2);
  EXPECT_DOUBLE_EQ(f.score(std::vector<double>{2.5}), (0.0 + 0.75) / 2);
  EXPECT_DOUBLE_EQ(f.score(std::vector<double>{1.5}), (1.0 + 0.75) / 2);  // threshold 1.5 goes left
}

TEST(Models, MonotoneTransformKeepsTreeLabels) {
  // A midpoint threshold keeps its order only relative to the values it was
  // fitted on; a query lying between two of a node's values can land on the
  // other side after a nonlinear warp. The check therefore scores the fitted
  // samples themselves, and the forest skips bootstrapping so every tree saw
  // every sample.
  Rng rng(18);
  for (int trial = 0; trial < 10; ++trial) {
    const auto train = random_samples(120, 8, rng);
    const std::size_t j = rng.uniform_index(8);
    auto train2 = train;
    for (auto& s : train2) s.features[j] = std::exp(3.0 * s.features[j]) + 2.0;
    const auto t1 = tree_fit(train, {}), t2 = tree_fit(train2, {});
    ForestConfig fc;
    fc.n_trees = 15;
    fc.bootstrap = false;
    const auto f1 = forest_fit(train, fc, 3), f2 = forest_fit(train2, fc, 3);
    for (std::size_t i = 0; i < train.size(); ++i) {
      EXPECT_EQ(t1.score(train[i].features), t2.score(train2[i].features));
      EXPECT_EQ(f1.score(train[i].features), f2.score(train2[i].features));
    }
    TreeConfig shallow;
    shallow.max_depth = 3;
    const auto s1 = tree_fit(train, shallow), s2 = tree_fit(train2, shallow);
    for (std::size_t i = 0; i < train.size(); ++i) {
      EXPECT_EQ(s1.score(train[i].features), s2.score(train2[i].features));
    }
  }
}

TEST(Models, KnnIsScaledTreesAreNot) {
  // second feature dominates raw distance; after scaling both matter equally
  const std::vector<LabeledSample> train = {sample({0, 0}, Label::Genuine), sample({1, 1000}, Label::Impostor),
                                            sample({0, 2000}, Label::Genuine), sample({1, 3000}, Label::Impostor)};
  ModelConfig mc;
  mc.k = 1;
  const auto m = Model::fit(ModelKind::Knn, mc, train, 0);
  EXPECT_EQ(m.kind(), ModelKind::Knn);
  for (const auto& s : train) EXPECT_EQ(m.score(s.features), s.label == Label::Genuine ? 1.0 : 0.0);
  EXPECT_EQ(parse_model_kind("rf"), ModelKind::RandomForest);
  EXPECT_THROW(parse_model_kind("svm"), UsageError);
}
