#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <omp.h>

#include <CLI11.hpp>

#include "mousedyn/error.hpp"
#include "mousedyn/experiment.hpp"
#include "mousedyn/features.hpp"
#include "mousedyn/ingest.hpp"
#include "mousedyn/report.hpp"

namespace mousedyn::cli {
namespace {

namespace fs = std::filesystem;

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw UsageError("invalid value for " + key + ": '" + text + "'");
  }
  return value;
}

struct Knob {
  std::string name;
  std::string help;
  std::function<std::string(const RunConfig&)> show;
  std::function<void(RunConfig&, const std::string&)> set;
  std::string type = "TEXT";
};

template <typename T>
std::string show_value(const T& v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

template <typename T>
Knob number_knob(std::string name, std::string help, T RunConfig::*field) {
  return {name, std::move(help),
          [field](const RunConfig& c) { return show_value(c.*field); },
          [field, name](RunConfig& c, const std::string& v) { c.*field = parse_number<T>(name, v); },
          "NUM"};
}

Knob text_knob(std::string name, std::string help, std::string RunConfig::*field) {
  return {std::move(name), std::move(help), [field](const RunConfig& c) { return c.*field; },
          [field](RunConfig& c, const std::string& v) { c.*field = v; }};
}

Knob path_knob(std::string name, std::string help, fs::path RunConfig::*field) {
  return {std::move(name), std::move(help), [field](const RunConfig& c) { return (c.*field).string(); },
          [field](RunConfig& c, const std::string& v) { c.*field = v; }, "PATH"};
}

const std::vector<Knob>& knobs() {
  static const std::vector<Knob> table = {
      path_knob("input", "dataset root (<root>/<user>/<session>)", &RunConfig::input),
      path_knob("features", "feature table CSV produced by extract", &RunConfig::features),
      path_knob("output", "output file (extract, roc overlay) or directory", &RunConfig::output),
      path_knob("report", "report JSON to plot (roc)", &RunConfig::report),
      number_knob("seed", "random seed (env MOUSEDYN_SEED overrides the default)", &RunConfig::seed),
      number_knob("split-ratio", "training fraction of each split", &RunConfig::split_ratio),
      number_knob("gap-threshold", "pause in seconds that ends an action", &RunConfig::gap_threshold),
      number_knob("min-points", "minimum points per action (>= 4)", &RunConfig::min_points),
      number_knob("curvature-threshold", "critical point curvature in rad/pixel",
                  &RunConfig::curvature_threshold),
      number_knob("k", "neighbours for knn", &RunConfig::k),
      number_knob("n-trees", "trees in the random forest", &RunConfig::n_trees),
      number_knob("max-depth", "tree depth limit, 0 = unlimited", &RunConfig::max_depth),
      number_knob("min-leaf", "minimum samples per leaf", &RunConfig::min_leaf),
      number_knob("max-features", "forest features per split, 0 = floor(sqrt(d))",
                  &RunConfig::max_features),
      number_knob("impostor-cap", "impostor samples per genuine sample, 0 = no cap",
                  &RunConfig::impostor_cap),
      number_knob("min-user-actions", "users with fewer actions are skipped",
                  &RunConfig::min_user_actions),
      text_knob("scenario", "verify | a | b", &RunConfig::scenario),
      text_knob("action", "mm | pc | dd | all", &RunConfig::action),
      text_knob("model", "dt | knn | rf | all", &RunConfig::model),
      text_knob("mode", "roc plot layout: overlay | split", &RunConfig::mode),
      number_knob("threads", "worker threads, 0 = OpenMP default", &RunConfig::threads),
  };
  return table;
}

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  out.close();
  if (!out) throw IoError("write failed for " + path.string());
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory " + dir.string());
}

SegmentConfig segment_config(const RunConfig& c) {
  SegmentConfig s;
  s.gap_threshold = c.gap_threshold;
  s.min_points = c.min_points;
  s.validate();
  return s;
}

FeatureConfig feature_config(const RunConfig& c) {
  FeatureConfig f;
  f.curvature_threshold = c.curvature_threshold;
  f.validate();
  return f;
}

FeatureTable extract_from_dataset(const RunConfig& c, std::ostream& err) {
  const auto dataset = load_dataset(c.input);
  for (const auto& w : dataset.warnings) err << "warning: " << w << '\n';
  return extract_all(dataset, segment_config(c), feature_config(c));
}

int cmd_extract(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.input.empty()) throw UsageError("extract requires --input");
  const fs::path output = c.output.empty() ? fs::path("features.csv") : c.output;
  const auto table = extract_from_dataset(c, err);
  if (table.empty()) throw DataError("no actions extracted from " + c.input.string());

  std::ostringstream csv;
  write_feature_csv(csv, table);
  write_file(output, csv.str());

  std::map<std::string, ActionCounts> counts;
  for (const auto& row : table) ++counts[row.user_id][static_cast<std::size_t>(row.kind)];
  out << "user        MM      PC      DD\n";
  std::vector<std::string> users;
  for (const auto& [u, n] : counts) users.push_back(u);
  for (const auto& u : report_user_order(users)) {
    const auto& n = counts[u];
    char line[96];
    std::snprintf(line, sizeof line, "%-8s %6zu  %6zu  %6zu\n", u.c_str(), n[0], n[1], n[2]);
    out << line;
  }
  out << "wrote " << table.size() << " actions to " << output.string() << '\n';
  return kOk;
}

ExperimentConfig experiment_config(const RunConfig& c) {
  ExperimentConfig e;
  e.model_cfg.k = c.k;
  e.model_cfg.n_trees = c.n_trees;
  e.model_cfg.max_depth = c.max_depth;
  e.model_cfg.min_leaf = c.min_leaf;
  e.model_cfg.max_features = c.max_features;
  e.split_ratio = c.split_ratio;
  e.impostor_cap = c.impostor_cap;
  e.min_user_actions = c.min_user_actions;
  e.seed = c.seed;
  e.validate();
  return e;
}

void write_report_files(const fs::path& dir, const EvalReport& report) {
  const auto stem = report_stem(report);
  std::ostringstream json, csv;
  write_report_json(json, report);
  write_report_csv(csv, report);
  write_file(dir / (stem + ".json"), json.str());
  write_file(dir / (stem + ".csv"), csv.str());
  for (const auto& u : report.users) {
    if (u.roc.points.empty()) continue;
    std::ostringstream roc;
    write_roc_csv(roc, u.roc);
    write_file(dir / (stem + "_roc_user" + u.user_id + ".csv"), roc.str());
  }
}

int cmd_experiment(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto scenario = parse_scenario(c.scenario);
  std::vector<ModelKind> models;
  if (c.model == "all") {
    models = {ModelKind::DecisionTree, ModelKind::Knn, ModelKind::RandomForest};
  } else {
    models = {parse_model_kind(c.model)};
  }
  std::vector<std::optional<ActionKind>> actions;
  if (scenario == Scenario::SingleAction) {
    if (c.action == "all") {
      actions.assign(kAllActionKinds.begin(), kAllActionKinds.end());
    } else {
      actions = {parse_action_kind(c.action)};
    }
  } else {
    if (c.action != "all") {
      throw UsageError("--action applies to scenario b only (scenario " + c.scenario + ")");
    }
    actions = {std::nullopt};
  }
  auto ecfg = experiment_config(c);

  FeatureTable table;
  if (!c.features.empty()) {
    std::ifstream in(c.features);
    if (!in) throw IoError("cannot open feature table " + c.features.string());
    table = read_feature_csv(in);
  } else if (!c.input.empty()) {
    table = extract_from_dataset(c, err);
  } else {
    throw UsageError("experiment requires --features or --input");
  }
  if (table.empty()) throw DataError("feature table has no rows");

  const fs::path dir = c.output.empty() ? fs::path("results") : c.output;
  ensure_directory(dir);
  for (const auto model : models) {
    ecfg.model = model;
    for (const auto& action : actions) {
      EvalReport report;
      switch (scenario) {
        case Scenario::Verification: report = run_verification(table, ecfg); break;
        case Scenario::AllActions: report = run_scenario_a(table, ecfg); break;
        case Scenario::SingleAction: report = run_scenario_b(table, *action, ecfg); break;
      }
      for (const auto& w : report.warnings) err << "warning: " << w << '\n';
      print_report_table(out, report);
      out << '\n';
      write_report_files(dir, report);
    }
  }
  return kOk;
}

int cmd_roc(const RunConfig& c, std::ostream& out, std::ostream&) {
  if (c.report.empty()) throw UsageError("roc requires --report");
  if (c.output.empty()) throw UsageError("roc requires --output");
  if (c.mode != "overlay" && c.mode != "split") {
    throw UsageError("--mode must be overlay or split");
  }
  std::ifstream in(c.report);
  if (!in) throw IoError("cannot open report " + c.report.string());
  const auto report = read_report_json(in);

  std::vector<RocPlotSeries> series;
  for (const auto& u : report.users) {
    if (u.roc.points.empty()) continue;
    series.push_back({"user " + u.user_id, u.roc, u.auc.value_or(auc(u.roc))});
  }
  if (series.empty()) throw DataError("report has no ROC data: " + c.report.string());

  const std::string tag = "scenario " + std::string(to_string(report.scenario)) + ", " +
                          std::string(to_string(report.model)) + ", " +
                          (report.action ? std::string(to_string(*report.action)) : "all actions");
  if (c.mode == "overlay") {
    write_file(c.output, render_roc_svg("ROC: " + tag, series));
    out << "wrote " << c.output.string() << " (" << series.size() << " curves)\n";
  } else {
    ensure_directory(c.output);
    const auto stem = report_stem(report);
    for (const auto& s : series) {
      const auto user = s.label.substr(5);
      const auto path = c.output / (stem + "_user" + user + ".svg");
      write_file(path, render_roc_svg("ROC: " + tag + ", " + s.label, {s}));
    }
    out << "wrote " << series.size() << " files to " << c.output.string() << '\n';
  }
  return kOk;
}

}  // namespace

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  const auto name = normalize_key(key);
  for (const auto& k : knobs()) {
    if (k.name == name) {
      k.set(cfg, value);
      return;
    }
  }
  throw UsageError("unknown configuration key '" + key + "'");
}

void apply_config_text(RunConfig& cfg, std::istream& text) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(text, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    apply_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mouse dynamics continuous authentication: feature extraction and evaluation"};
  app.name("mousedyn");
  app.require_subcommand(1);

  const RunConfig defaults;
  std::map<std::string, std::string> flags;
  std::string config_file;
  struct Command {
    const char* name;
    const char* help;
    CLI::App* app = nullptr;
  };
  std::vector<Command> commands = {
      {"extract", "segment sessions and write the feature table CSV"},
      {"experiment", "run verification, scenario a or scenario b and write reports"},
      {"roc", "render ROC curves from a report as SVG"},
  };
  for (auto& cmd : commands) {
    cmd.app = app.add_subcommand(cmd.name, cmd.help);
    cmd.app->add_option("--config", config_file, "key=value configuration file")->type_name("PATH");
    for (const auto& k : knobs()) {
      cmd.app->add_option("--" + k.name, flags[k.name], k.help)->default_str(k.show(defaults))->type_name(k.type);
    }
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    RunConfig cfg;
    if (const char* env = std::getenv("MOUSEDYN_SEED"); env != nullptr && *env != '\0') {
      apply_setting(cfg, "seed", env);
    }
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) throw IoError("cannot open config file " + config_file);
      apply_config_text(cfg, in);
    }
    const auto* chosen = app.get_subcommands().front();
    for (const auto& k : knobs()) {
      if (chosen->count("--" + k.name) > 0) k.set(cfg, flags[k.name]);
    }
    if (cfg.threads < 0) throw UsageError("--threads must be >= 0");
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);

    const std::string name = chosen->get_name();
    if (name == "extract") return cmd_extract(cfg, out, err);
    if (name == "experiment") return cmd_experiment(cfg, out, err);
    return cmd_roc(cfg, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const fs::filesystem_error& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  }
}

}  // namespace mousedyn::cli
