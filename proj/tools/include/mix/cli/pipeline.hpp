#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mix/cli/config.hpp"

namespace mix::cli {

enum class Stage { Solve, Schmidt, Induced, Effective, Smf, Observables, Report };

const std::vector<Stage>& all_stages();
std::string name(Stage stage);
/// Throws ConfigError for unknown stage names.
Stage parse_stage(const std::string& text);
/// Requested stages plus their prerequisites, in pipeline order. Empty selects all.
std::vector<Stage> resolve_stages(const std::vector<std::string>& requested);

inline constexpr const char* summary_schema = "mix.summary/1";

struct RunOutcome {
  bool success = false;
  std::vector<std::string> completed;
  std::string failed_stage;
  std::string error;
  nlohmann::json summary;
};

/// Execute the stages into `directory`. Artifacts of completed stages, summary.json
/// and the stage manifest are always written, also when a stage fails.
RunOutcome run(const RunConfig& config, const std::filesystem::path& directory);

struct CheckItem {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Re-verify stored artifacts of a run directory.
std::vector<CheckItem> check_run(const std::filesystem::path& directory);

struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

/// "key=a,b,c"; throws ConfigError for an empty range or unknown key.
SweepAxis parse_axis(const std::string& text);

struct SweepOutcome {
  int points = 0;
  int failures = 0;
};

/// Cartesian product of the axes, one run directory per point plus sweep.csv.
SweepOutcome sweep(const RunConfig& base, const std::vector<SweepAxis>& axes, const std::filesystem::path& directory,
                   int jobs = 1);

}  // namespace mix::cli
