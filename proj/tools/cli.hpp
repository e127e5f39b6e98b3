#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mousedyn::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kIo = 3 };

struct RunConfig {
  std::filesystem::path input;     // dataset root
  std::filesystem::path features;  // feature table CSV
  std::filesystem::path output;    // file or directory, depending on the command
  std::filesystem::path report;    // roc: report JSON
  std::uint64_t seed = 42;
  double split_ratio = 0.7;
  double gap_threshold = 10.0;
  std::size_t min_points = 4;
  double curvature_threshold = 0.5;
  std::size_t k = 5;
  std::size_t n_trees = 100;
  std::size_t max_depth = 0;
  std::size_t min_leaf = 1;
  std::size_t max_features = 0;
  double impostor_cap = 1.0;
  std::size_t min_user_actions = 10;
  std::string scenario = "a";
  std::string action = "all";
  std::string model = "knn";
  std::string mode = "overlay";
  int threads = 0;
};

// Applies `key=value` lines ('#' comments allowed). Unknown keys and bad
// values throw UsageError.
void apply_config_text(RunConfig& cfg, std::istream& text);

// Sets one knob by name; names use dashes or underscores.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

// Runs the command line (without the program name). Output goes to `out`,
// diagnostics to `err`; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mousedyn::cli
