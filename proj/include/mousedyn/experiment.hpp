#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mousedyn/features.hpp"
#include "mousedyn/metrics.hpp"
#include "mousedyn/model.hpp"

namespace mousedyn {

enum class Scenario { Verification, AllActions, SingleAction };

std::string_view to_string(Scenario s);  // "verify", "a", "b"
Scenario parse_scenario(std::string_view text);

struct ExperimentConfig {
  ModelKind model = ModelKind::Knn;
  ModelConfig model_cfg;
  double split_ratio = 0.7;
  // Impostor samples per genuine sample; 0 disables the cap.
  double impostor_cap = 1.0;
  std::size_t min_user_actions = 10;
  std::uint64_t seed = 42;

  void validate() const;
};

struct UserRow {
  std::string user_id;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  ConfusionMatrix cm;
  std::optional<double> acc;
  std::optional<double> auc;
  std::optional<double> far;
  std::optional<double> frr;
  std::optional<double> hter;
  std::optional<double> eer_roc;
  RocCurve roc;  // empty when the test set holds a single class
};

struct AverageRow {
  std::optional<double> acc;
  std::optional<double> auc;
  std::optional<double> far;
  std::optional<double> frr;
  std::optional<double> hter;
  std::optional<double> eer_roc;
};

struct EvalReport {
  Scenario scenario = Scenario::AllActions;
  ModelKind model = ModelKind::Knn;
  std::optional<ActionKind> action;  // nullopt = all kinds
  std::uint64_t seed = 0;
  std::vector<UserRow> users;
  AverageRow average;
  std::vector<std::string> warnings;
};

// Column-wise mean over rows where the value is defined.
AverageRow average_of(const std::vector<UserRow>& rows);

// Known dataset users first in table order (35, 7, 9, ...), the rest sorted
// naturally.
std::vector<std::string> report_user_order(std::vector<std::string> ids);

// Single-class stage: each user trains and tests on their own actions only.
EvalReport run_verification(const FeatureTable& table, const ExperimentConfig& cfg);

// Genuine-vs-impostor per target user using every action kind.
EvalReport run_scenario_a(const FeatureTable& table, const ExperimentConfig& cfg);

// Same protocol restricted to one action kind; type_of_action is dropped.
EvalReport run_scenario_b(const FeatureTable& table, ActionKind kind, const ExperimentConfig& cfg);

namespace serial {
EvalReport run_scenario_a(const FeatureTable& table, const ExperimentConfig& cfg);
EvalReport run_scenario_b(const FeatureTable& table, ActionKind kind, const ExperimentConfig& cfg);
}  // namespace serial

}  // namespace mousedyn
