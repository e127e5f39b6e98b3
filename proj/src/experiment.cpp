#include "mousedyn/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>

#include "mousedyn/error.hpp"
#include "mousedyn/rng.hpp"

namespace mousedyn {

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::Verification: return "verify";
    case Scenario::AllActions: return "a";
    case Scenario::SingleAction: return "b";
  }
  return "?";
}

Scenario parse_scenario(std::string_view text) {
  if (text == "verify") return Scenario::Verification;
  if (text == "a" || text == "A") return Scenario::AllActions;
  if (text == "b" || text == "B") return Scenario::SingleAction;
  throw UsageError("unknown scenario '" + std::string(text) + "' (expected verify, a or b)");
}

void ExperimentConfig::validate() const {
  model_cfg.validate();
  if (!(split_ratio > 0.0 && split_ratio < 1.0)) throw UsageError("split ratio must be in (0, 1)");
  if (!(impostor_cap >= 0.0) || !std::isfinite(impostor_cap)) {
    throw UsageError("impostor cap must be a finite value >= 0");
  }
  if (min_user_actions < 2) throw UsageError("min_user_actions must be >= 2");
}

namespace {

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool natural_less(const std::string& a, const std::string& b) {
  const bool da = all_digits(a), db = all_digits(b);
  if (da && db) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
  if (da != db) return da;
  return a < b;
}

void mean_into(std::optional<double>& out, const std::vector<UserRow>& rows,
               std::optional<double> UserRow::*field) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : rows) {
    if (const auto& v = r.*field) {
      sum += *v;
      ++n;
    }
  }
  out = n == 0 ? std::nullopt : std::optional<double>(sum / static_cast<double>(n));
}

using UserRows = std::map<std::string, std::vector<const FeatureVector*>>;

UserRows group_by_user(const FeatureTable& table, std::optional<ActionKind> kind) {
  UserRows out;
  for (const auto& row : table) {
    auto& bucket = out[row.user_id];
    if (!kind || row.kind == *kind) bucket.push_back(&row);
  }
  return out;
}

LabeledSample to_sample(const FeatureVector& fv, Label label, bool drop_type) {
  LabeledSample s;
  s.features.assign(fv.values.begin() + (drop_type ? 1 : 0), fv.values.end());
  s.label = label;
  s.origin = {fv.user_id, fv.session_id, fv.action_id};
  return s;
}

struct UserOutcome {
  std::optional<UserRow> row;
  std::vector<std::string> warnings;
  std::exception_ptr error;
};

struct Plan {
  Scenario scenario;
  std::optional<ActionKind> kind;
  const ExperimentConfig* cfg;
  UserRows users;
  std::vector<std::string> order;
};

UserRow evaluate(const Plan& plan, const std::string& user, const Split& split,
                 std::uint64_t model_seed) {
  const auto& cfg = *plan.cfg;
  UserRow row;
  row.user_id = user;
  row.n_train = split.train.size();
  row.n_test = split.test.size();

  const auto model = Model::fit(cfg.model, cfg.model_cfg, split.train, model_seed);
  const auto scores = model.score_batch(split.test);
  std::vector<Label> labels;
  labels.reserve(split.test.size());
  for (const auto& s : split.test) labels.push_back(s.label);

  row.cm = confusion(scores, labels, 0.5);
  const auto rates = metrics(row.cm);
  row.acc = rates.acc;
  row.far = rates.fpr;
  row.frr = rates.fnr;
  if (row.far && row.frr) row.hter = half_total_error(*row.far, *row.frr);
  const bool both = row.cm.tp + row.cm.fn > 0 && row.cm.tn + row.cm.fp > 0;
  if (both) {
    row.roc = roc_curve(scores, labels);
    row.auc = auc(row.roc);
    row.eer_roc = eer_roc(row.roc);
  }
  return row;
}

bool knn_too_small(const Plan& plan, const Split& split, const std::string& user, UserOutcome& out) {
  if (plan.cfg->model == ModelKind::Knn && plan.cfg->model_cfg.k > split.train.size()) {
    out.warnings.push_back("user " + user + ": k exceeds the " + std::to_string(split.train.size()) +
                           " training samples; skipped");
    return true;
  }
  return false;
}

void run_user(const Plan& plan, std::size_t index, UserOutcome& out) {
  try {
    const auto& cfg = *plan.cfg;
    const auto& user = plan.order[index];
    const auto& genuine = plan.users.at(user);
    Rng user_rng(derive_seed(cfg.seed, index));
    const auto sample_seed = user_rng.next();
    const auto split_seed = user_rng.next();
    const auto model_seed = user_rng.next();

    const std::string what = plan.kind ? " " + std::string(to_string(*plan.kind)) : "";
    if (genuine.size() < cfg.min_user_actions) {
      out.warnings.push_back("user " + user + ": " + std::to_string(genuine.size()) + what +
                             " actions (< " + std::to_string(cfg.min_user_actions) + "); skipped");
      return;
    }
    const bool drop_type = plan.scenario == Scenario::SingleAction;

    std::vector<LabeledSample> samples;
    for (const auto* fv : genuine) samples.push_back(to_sample(*fv, Label::Genuine, drop_type));

    if (plan.scenario == Scenario::Verification) {
      const auto split = shuffle_split(samples, cfg.split_ratio, split_seed);
      if (knn_too_small(plan, split, user, out)) return;
      out.row = evaluate(plan, user, split, model_seed);
      return;
    }

    std::vector<const FeatureVector*> pool;
    for (const auto& other : plan.order) {
      if (other == user) continue;
      const auto& rows = plan.users.at(other);
      pool.insert(pool.end(), rows.begin(), rows.end());
    }
    std::size_t take = pool.size();
    if (cfg.impostor_cap > 0.0) {
      const auto cap = static_cast<std::size_t>(
          std::floor(cfg.impostor_cap * static_cast<double>(genuine.size())));
      take = std::min(take, cap);
    }
    if (take < 2) {
      out.warnings.push_back("user " + user + ": fewer than 2 impostor" + what +
                             " actions available; skipped");
      return;
    }
    Rng sampler(sample_seed);
    sampler.shuffle(std::span(pool));
    for (std::size_t i = 0; i < take; ++i) {
      samples.push_back(to_sample(*pool[i], Label::Impostor, drop_type));
    }

    const auto split = train_test_split(samples, cfg.split_ratio, split_seed);
    if (knn_too_small(plan, split, user, out)) return;
    out.row = evaluate(plan, user, split, model_seed);
  } catch (...) {
    out.error = std::current_exception();
  }
}

Plan make_plan(const FeatureTable& table, Scenario scenario, std::optional<ActionKind> kind,
               const ExperimentConfig& cfg) {
  cfg.validate();
  Plan plan{scenario, kind, &cfg, group_by_user(table, kind), {}};
  std::vector<std::string> ids;
  for (const auto& [user, rows] : plan.users) ids.push_back(user);
  plan.order = report_user_order(std::move(ids));
  return plan;
}

EvalReport finish(const Plan& plan, std::vector<UserOutcome> outcomes, std::vector<std::string> pre) {
  EvalReport report;
  report.scenario = plan.scenario;
  report.model = plan.cfg->model;
  report.action = plan.kind;
  report.seed = plan.cfg->seed;
  report.warnings = std::move(pre);
  for (auto& o : outcomes) {
    if (o.error) std::rethrow_exception(o.error);
    for (auto& w : o.warnings) report.warnings.push_back(std::move(w));
    if (o.row) report.users.push_back(std::move(*o.row));
  }
  report.average = average_of(report.users);
  return report;
}

EvalReport run_plan(const Plan& plan, std::vector<std::string> pre, bool parallel) {
  std::vector<UserOutcome> outcomes(plan.order.size());
  if (parallel) {
    const auto n = static_cast<std::ptrdiff_t>(plan.order.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      run_user(plan, static_cast<std::size_t>(i), outcomes[static_cast<std::size_t>(i)]);
    }
  } else {
    for (std::size_t i = 0; i < plan.order.size(); ++i) run_user(plan, i, outcomes[i]);
  }
  return finish(plan, std::move(outcomes), std::move(pre));
}

EvalReport scenario_a(const FeatureTable& table, const ExperimentConfig& cfg, bool parallel) {
  const auto plan = make_plan(table, Scenario::AllActions, std::nullopt, cfg);
  if (plan.order.size() < 2) throw DataError("scenario A needs at least two users");
  return run_plan(plan, {}, parallel);
}

EvalReport scenario_b(const FeatureTable& table, ActionKind kind, const ExperimentConfig& cfg,
                      bool parallel) {
  const auto plan = make_plan(table, Scenario::SingleAction, kind, cfg);
  if (plan.order.size() < 2) throw DataError("scenario B needs at least two users");
  std::vector<std::string> pre;
  const bool any = std::any_of(plan.users.begin(), plan.users.end(),
                               [](const auto& kv) { return !kv.second.empty(); });
  if (!any) {
    pre.push_back("no " + std::string(to_string(kind)) + " actions for any user");
    return finish(plan, {}, std::move(pre));
  }
  return run_plan(plan, std::move(pre), parallel);
}

}  // namespace

AverageRow average_of(const std::vector<UserRow>& rows) {
  AverageRow avg;
  mean_into(avg.acc, rows, &UserRow::acc);
  mean_into(avg.auc, rows, &UserRow::auc);
  mean_into(avg.far, rows, &UserRow::far);
  mean_into(avg.frr, rows, &UserRow::frr);
  mean_into(avg.hter, rows, &UserRow::hter);
  mean_into(avg.eer_roc, rows, &UserRow::eer_roc);
  return avg;
}

std::vector<std::string> report_user_order(std::vector<std::string> ids) {
  static const std::vector<std::string> known = {"35", "7",  "9",  "12", "15",
                                                 "16", "20", "21", "23", "29"};
  std::vector<std::string> ordered;
  for (const auto& k : known) {
    const auto it = std::find(ids.begin(), ids.end(), k);
    if (it != ids.end()) {
      ordered.push_back(k);
      ids.erase(it);
    }
  }
  std::sort(ids.begin(), ids.end(), natural_less);
  ordered.insert(ordered.end(), ids.begin(), ids.end());
  return ordered;
}

EvalReport run_verification(const FeatureTable& table, const ExperimentConfig& cfg) {
  const auto plan = make_plan(table, Scenario::Verification, std::nullopt, cfg);
  return run_plan(plan, {}, true);
}

EvalReport run_scenario_a(const FeatureTable& table, const ExperimentConfig& cfg) {
  return scenario_a(table, cfg, true);
}

EvalReport run_scenario_b(const FeatureTable& table, ActionKind kind, const ExperimentConfig& cfg) {
  return scenario_b(table, kind, cfg, true);
}

namespace serial {

EvalReport run_scenario_a(const FeatureTable& table, const ExperimentConfig& cfg) {
  return scenario_a(table, cfg, false);
}

EvalReport run_scenario_b(const FeatureTable& table, ActionKind kind, const ExperimentConfig& cfg) {
  return scenario_b(table, kind, cfg, false);
}

}  // namespace serial
}  // namespace mousedyn
