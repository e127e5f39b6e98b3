// Acceptance suite: one PASS/FAIL/SKIP line per criterion, exit 1 on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "mousedyn/experiment.hpp"
#include "mousedyn/forest.hpp"
#include "mousedyn/knn.hpp"
#include "mousedyn/metrics.hpp"
#include "mousedyn/tree.hpp"
#include "support/feature_props.hpp"
#include "support/oracles.hpp"
#include "support/samples.hpp"
#include "support/synthetic.hpp"

using namespace mousedyn;
using namespace mousedyn::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  enum Status { Pass, Fail, Skip } status = Pass;
  std::string detail;
};

// Collects the first few failures of a criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (++failures_ <= 3) why_ += (why_.empty() ? "" : "; ") + what;
  }
  bool ok() const { return failures_ == 0; }
  Outcome done(std::string detail = {}) const {
    if (ok()) return {Outcome::Pass, std::move(detail)};
    return {Outcome::Fail, std::to_string(failures_) + " failure(s): " + why_};
  }

 private:
  std::size_t failures_ = 0;
  std::string why_;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

Outcome metric_identities() {
  Check c;
  Rng rng(101);
  for (int trial = 0; trial < 1000; ++trial) {
    ConfusionMatrix cm{rng.uniform_index(1000), rng.uniform_index(1000), rng.uniform_index(1000),
                       rng.uniform_index(1000)};
    if (trial % 10 == 0) cm.fp = cm.tn = 0;  // impostor rates undefined
    if (trial % 10 == 1) cm.tp = cm.fn = 0;  // genuine rates undefined
    const auto r = metrics(cm);
    const double total = static_cast<double>(cm.total());
    const double pos = static_cast<double>(cm.tp + cm.fn), neg = static_cast<double>(cm.tn + cm.fp);
    c.expect(cm.total() == 0 ? !r.acc : r.acc == static_cast<double>(cm.tp + cm.tn) / total, "acc");
    c.expect(pos == 0 ? !r.tpr && !r.fnr : r.tpr == cm.tp / pos && r.fnr == cm.fn / pos, "tpr/fnr");
    c.expect(neg == 0 ? !r.tnr && !r.fpr : r.tnr == cm.tn / neg && r.fpr == cm.fp / neg, "tnr/fpr");
    if (r.tpr) c.expect(*r.tpr + *r.fnr == 1.0, "tpr+fnr");
    if (r.tnr) c.expect(*r.tnr + *r.fpr == 1.0, "tnr+fpr");
  }
  return c.done();
}

Outcome hter_suite() {
  Check c;
  Rng rng(102);
  for (int trial = 0; trial < 1000; ++trial) {
    const double far = rng.uniform01(), frr = rng.uniform01();
    c.expect(half_total_error(far, frr) == (far + frr) / 2, "random pair");
  }
  const double table = half_total_error(0.049, 0.446);
  c.expect(std::fabs(table - 0.2475) <= 1e-12, "0.049/0.446 gave " + fmt(table));
  return c.done("half_total_error(0.049, 0.446) = " + fmt(table) + " (published average 0.186)");
}

Outcome auc_oracle() {
  Check c;
  const std::vector<double> ws = {0.9, 0.8, 0.4, 0.7, 0.3, 0.2};
  const std::vector<Label> wl = {Label::Genuine, Label::Genuine, Label::Genuine,
                                 Label::Impostor, Label::Impostor, Label::Impostor};
  c.expect(std::fabs(auc(roc_curve(ws, wl)) - 8.0 / 9.0) <= 1e-9, "worked 8/9 example");
  Rng rng(103);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(199);
    const std::size_t levels = trial % 3 == 0 ? 5 : 0;  // coarse levels force ties
    std::vector<double> s(n);
    std::vector<Label> l(n);
    for (std::size_t i = 0; i < n; ++i) {
      l[i] = i == 0 ? Label::Genuine : i == 1 ? Label::Impostor : rng.uniform_index(2) ? Label::Genuine : Label::Impostor;
      s[i] = levels ? static_cast<double>(rng.uniform_index(levels)) / levels : rng.uniform01();
      if (l[i] == Label::Genuine) s[i] += 0.1;
    }
    const double got = auc(roc_curve(s, l)), want = oracle::mann_whitney_auc(s, l);
    c.expect(std::fabs(got - want) <= 1e-9, "trial " + std::to_string(trial));
  }
  return c.done();
}

Outcome knn_oracle() {
  Check c;
  Rng rng(104);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(200);
    const auto train = random_samples(n, 39, rng, trial % 4 == 0 ? 2 : 0);
    const auto queries = random_samples(20, 39, rng, trial % 4 == 0 ? 2 : 0);
    const std::size_t k = 1 + rng.uniform_index(n);
    const KnnModel m(train, k);
    for (const auto* set : {&train, &queries}) {
      for (const auto& q : *set) {
        c.expect(m.score(q.features) == oracle::knn_score(train, q.features, k), "trial " + std::to_string(trial));
      }
    }
  }
  return c.done();
}

Outcome tree_forest_degeneracy() {
  Check c;
  Rng rng(105);
  std::size_t labels = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t levels = trial % 2 ? 3 : 0;
    const auto train = consistent(random_samples(20 + rng.uniform_index(180), 39, rng, levels));
    const auto test = random_samples(50, 39, rng, levels);
    ForestConfig fc;
    fc.n_trees = 1;
    fc.bootstrap = false;
    fc.max_features = 39;
    const auto forest = forest_fit(train, fc, rng.next());
    const auto tree = tree_fit(train, {});
    for (const auto* set : {&train, &test}) {
      for (const auto& s : *set) {
        c.expect((forest.score(s.features) >= 0.5) == (tree.score(s.features) >= 0.5),
                 "label mismatch in trial " + std::to_string(trial));
        ++labels;
      }
    }
    const double acc = training_accuracy(train, [&](const auto& x) { return tree.score(x); });
    c.expect(acc == 1.0, "training accuracy " + fmt(acc) + " in trial " + std::to_string(trial));
  }
  return c.done(std::to_string(labels) + " labels compared");
}

Outcome feature_invariance() {
  Check c;
  Rng rng(106);
  const FeatureConfig cfg;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 4 + rng.uniform_index(80);
    const auto grid = grid_action(rng, n);
    auto why = check_translation_and_time_shift(grid, cfg, 1e-9);
    c.expect(why.empty(), why);
    const auto smooth = make_action(random_trajectory(n, rng));
    why = check_rotation(smooth, 2 * std::numbers::pi * rng.uniform01() - std::numbers::pi, cfg, 1e-9);
    c.expect(why.empty(), why);
    why = check_scaling(smooth, 0.1 + 9.9 * rng.uniform01(), cfg, 1e-9);
    c.expect(why.empty(), why);
  }
  return c.done();
}

Outcome feature_oracle() {
  Check c;
  Rng rng(107);
  const FeatureConfig cfg;
  for (int trial = 0; trial < 100; ++trial) {
    const auto kind = kAllActionKinds[rng.uniform_index(3)];
    // every other action on whole pixels, which brings zero-length steps
    const auto a = trial % 2 ? grid_action(rng, 4 + rng.uniform_index(120))
                             : make_action(random_trajectory(4 + rng.uniform_index(120), rng), kind);
    FeatureVector want;
    want.values = oracle::features(a.points, a.kind, cfg.curvature_threshold);
    const auto why = compare(want, extract_features(a, cfg), 1e-9);
    c.expect(why.empty(), why);
  }
  return c.done();
}

const FeatureTable& separation_table() {
  static const FeatureTable table =
      extract_all(synthetic_dataset({{"A", fast_straight(), 5, 100}, {"B", slow_curvy(), 5, 100}}, 108), {}, {});
  return table;
}

Outcome synthetic_separation() {
  Check c;
  const auto& table = separation_table();
  std::size_t a = 0, b = 0;
  for (const auto& r : table) (r.user_id == "A" ? a : b) += 1;
  c.expect(a == 500 && b == 500, "action counts " + std::to_string(a) + "/" + std::to_string(b));
  ExperimentConfig cfg;
  cfg.model = ModelKind::Knn;
  const auto rep = run_scenario_a(table, cfg);
  c.expect(rep.users.size() == 2, "expected 2 user rows");
  std::string detail;
  for (const auto& u : rep.users) {
    c.expect(u.acc && *u.acc >= 0.90, "user " + u.user_id + " ACC " + fmt(u.acc.value_or(-1)));
    c.expect(u.auc && *u.auc >= 0.95, "user " + u.user_id + " AUC " + fmt(u.auc.value_or(-1)));
    detail += "user " + u.user_id + " ACC " + fmt(u.acc.value_or(-1)) + " AUC " + fmt(u.auc.value_or(-1)) + "; ";
  }
  return c.done(detail);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  Check c;
  TempDir dir("accept");
  const auto csv = dir.path() / "features.csv";
  {
    std::ofstream out(csv, std::ios::binary);
    write_feature_csv(out, separation_table());
  }
  std::vector<std::string> files;
  for (const char* run : {"run1", "run2"}) {
    std::ostringstream out, err;
    const int code = cli::run({"experiment", "--features", csv.string(), "--scenario", "a", "--model", "all",
                               "--n-trees", "30", "--seed", "42", "--output", (dir.path() / run).string()},
                              out, err);
    c.expect(code == 0, std::string(run) + " exit " + std::to_string(code) + ": " + err.str());
  }
  std::size_t compared = 0;
  for (const auto& e : fs::directory_iterator(dir.path() / "run1")) {
    const auto other = dir.path() / "run2" / e.path().filename();
    c.expect(fs::exists(other) && slurp(e.path()) == slurp(other), e.path().filename().string() + " differs");
    ++compared;
  }
  c.expect(compared >= 6, "only " + std::to_string(compared) + " files written");
  return c.done(std::to_string(compared) + " files identical");
}

Outcome verification() {
  Check c;
  for (auto kind : {ModelKind::DecisionTree, ModelKind::Knn, ModelKind::RandomForest}) {
    ExperimentConfig cfg;
    cfg.model = kind;
    cfg.model_cfg.n_trees = 20;
    const auto rep = run_verification(separation_table(), cfg);
    c.expect(rep.users.size() == 2, "user rows");
    for (const auto& u : rep.users) {
      c.expect(u.acc == 1.0, std::string(to_string(kind)) + " user " + u.user_id + " below 100%");
    }
  }
  return c.done("single-class train and test, so 100% holds by construction");
}

std::optional<fs::path> balabit_root() {
  std::vector<fs::path> candidates;
  if (const char* env = std::getenv("MOUSEDYN_BALABIT_ROOT"); env && *env) candidates.emplace_back(env);
  candidates.emplace_back(fs::path(MOUSEDYN_SOURCE_DIR) / "data" / "balabit");
  for (const auto& c : candidates) {
    if (fs::is_directory(c / "training_files")) return c / "training_files";
    if (fs::is_directory(c)) return c;
  }
  return std::nullopt;
}

Outcome dataset_targets() {
  const auto root = balabit_root();
  if (!root) return {Outcome::Skip, "Balabit dataset not found (set MOUSEDYN_BALABIT_ROOT)"};
  Check c;
  const auto table = extract_all(load_dataset(*root), {}, {});
  std::string detail;

  ExperimentConfig knn;
  knn.model = ModelKind::Knn;
  const auto pc = run_scenario_b(table, ActionKind::PC, knn);
  const double pc_acc = pc.average.acc.value_or(-1), pc_auc = pc.average.auc.value_or(-1);
  c.expect(pc_acc >= 0.90, "B/PC KNN ACC " + fmt(pc_acc));
  c.expect(pc_auc >= 0.95, "B/PC KNN AUC " + fmt(pc_auc));

  ExperimentConfig dt;
  dt.model = ModelKind::DecisionTree;
  const auto mm = run_scenario_b(table, ActionKind::MM, dt);
  const double mm_acc = mm.average.acc.value_or(-1) * 100;
  c.expect(std::fabs(mm_acc - 84.1) <= 10.0, "B/MM DT ACC " + fmt(mm_acc));

  const auto a = run_scenario_a(table, knn);
  const double a_acc = a.average.acc.value_or(-1) * 100;
  c.expect(std::fabs(a_acc - 94.4) <= 10.0, "A KNN ACC " + fmt(a_acc));

  detail = "B/PC KNN ACC " + fmt(pc_acc) + " AUC " + fmt(pc_auc) + "; B/MM DT ACC " + fmt(mm_acc) +
           "%; A KNN ACC " + fmt(a_acc) + "%";
  return c.ok() ? Outcome{Outcome::Pass, detail} : c.done();
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;  // 0 = no runtime bound
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "metric identities on 1000 random confusion matrices", 1, metric_identities},
      {2, "half total error formula on 1000 pairs and the table example", 0, hter_suite},
      {3, "trapezoidal AUC equals Mann-Whitney on 500 score sets", 5, auc_oracle},
      {4, "KNN equals exhaustive distance sort on 100 datasets", 10, knn_oracle},
      {5, "degenerate forest equals tree; tree fits consistent data", 0, tree_forest_degeneracy},
      {6, "feature translation, time, rotation and scaling behaviour", 0, feature_invariance},
      {7, "features match the definition-level oracle on 100 actions", 0, feature_oracle},
      {8, "two synthetic users separate under scenario A with KNN", 60, synthetic_separation},
      {9, "experiment reports byte-identical across runs", 0, determinism},
      {10, "verification stage reports 100% for every user", 0, verification},
      {11, "soft targets on the Balabit dataset", 900, dataset_targets},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = cr.run();
    } catch (const std::exception& e) {
      o = {Outcome::Fail, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.status != Outcome::Skip && cr.budget_s > 0 && secs > cr.budget_s) {
      o = {Outcome::Fail, "took " + fmt(secs) + " s, budget " + fmt(cr.budget_s) + " s; " + o.detail};
    }
    const char* tag = o.status == Outcome::Pass ? "PASS" : o.status == Outcome::Fail ? "FAIL" : "SKIP";
    std::printf("[%s] criterion %2d: %s (%.2f s)%s%s\n", tag, cr.id, cr.name, secs, o.detail.empty() ? "" : " -- ",
                o.detail.c_str());
    std::fflush(stdout);
    failed += o.status == Outcome::Fail;
  }
  std::printf("%d criterion(s) failed\n", failed);
  return failed == 0 ? 0 : 1;
}
