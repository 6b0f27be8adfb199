#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mix/effective.hpp"
#include "mix/hamiltonian.hpp"
#include "mix/induced.hpp"

namespace mix::cli {

/// Flat key = value run configuration. Defaults are the two-plus-two benchmark.
struct RunConfig {
  int bosons = 2;
  int fermions = 2;
  int orbitals = 14;
  double g_bf = 1.0;
  double g_bb = 0.0;
  double g_ff = 0.0;
  int state_index = 0;
  GridSpec grid;
  int quadrature_order = 0;
  double lambda_floor = 1e-10;
  double entanglement_threshold = 0.3;
  double first_order_tolerance = 0.5;
  double denominator_floor = 1e-12;
  int max_terms = 0;
  bool strict = false;
  int effective_states = 6;
  SmfOptions smf;
  double density_floor = 1e-6;
  int kernel_stride = 4;
  int dense_cutoff = 4000;
  double eigen_tolerance = 1e-11;
  std::string output_dir = "run";
  std::vector<std::string> stages;  // empty = all

  MixtureModel model() const;
  InducedOptions induced_options() const;
  EigenOptions eigen_options() const;
};

/// Every accepted key, in file order.
const std::vector<std::string>& config_keys();

/// Set one key from its text value. Throws ConfigError on unknown keys or bad values.
void set_value(RunConfig& config, const std::string& key, const std::string& value);
/// "key=value" form used by --set and --vary.
void apply_override(RunConfig& config, const std::string& assignment);
/// Current value of a key as text (round-trips through set_value).
std::string get_value(const RunConfig& config, const std::string& key);

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
std::string format_config(const RunConfig& config);

}  // namespace mix::cli
