#include "mix/cli/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "mix/cli/io.hpp"
#include "mix/error.hpp"

namespace mix::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

int to_int(const std::string& key, const std::string& v) {
  int out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError("'" + key + "' expects an integer, got '" + v + "'");
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (v.empty() || used != v.size()) throw ConfigError("'" + key + "' expects a number, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("'" + key + "' expects a boolean, got '" + v + "'");
}

std::string num(double x) { return format_number(x); }

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct Field {
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <class T>
Field int_field(T RunConfig::*member) {
  return {[member](RunConfig& c, const std::string& k, const std::string& v) { c.*member = to_int(k, v); },
          [member](const RunConfig& c) { return std::to_string(c.*member); }};
}

Field double_field(double RunConfig::*member) {
  return {[member](RunConfig& c, const std::string& k, const std::string& v) { c.*member = to_double(k, v); },
          [member](const RunConfig& c) { return num(c.*member); }};
}

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      {"N_b", int_field(&RunConfig::bosons)},
      {"N_f", int_field(&RunConfig::fermions)},
      {"M", int_field(&RunConfig::orbitals)},
      {"g_bf", double_field(&RunConfig::g_bf)},
      {"g_bb", double_field(&RunConfig::g_bb)},
      {"g_ff", double_field(&RunConfig::g_ff)},
      {"state_index", int_field(&RunConfig::state_index)},
      {"grid.x_min", {[](RunConfig& c, const std::string& k, const std::string& v) { c.grid.x_min = to_double(k, v); },
                      [](const RunConfig& c) { return num(c.grid.x_min); }}},
      {"grid.x_max", {[](RunConfig& c, const std::string& k, const std::string& v) { c.grid.x_max = to_double(k, v); },
                      [](const RunConfig& c) { return num(c.grid.x_max); }}},
      {"grid.points", {[](RunConfig& c, const std::string& k, const std::string& v) { c.grid.points = to_int(k, v); },
                       [](const RunConfig& c) { return std::to_string(c.grid.points); }}},
      {"quadrature_order", int_field(&RunConfig::quadrature_order)},
      {"lambda_floor", double_field(&RunConfig::lambda_floor)},
      {"entanglement_threshold", double_field(&RunConfig::entanglement_threshold)},
      {"induced.first_order_tolerance", double_field(&RunConfig::first_order_tolerance)},
      {"induced.denominator_floor", double_field(&RunConfig::denominator_floor)},
      {"induced.max_terms", int_field(&RunConfig::max_terms)},
      {"induced.strict", {[](RunConfig& c, const std::string& k, const std::string& v) { c.strict = to_bool(k, v); },
                          [](const RunConfig& c) { return std::string(c.strict ? "true" : "false"); }}},
      {"effective.states", int_field(&RunConfig::effective_states)},
      {"smf.mixing", {[](RunConfig& c, const std::string& k, const std::string& v) { c.smf.mixing = to_double(k, v); },
                      [](const RunConfig& c) { return num(c.smf.mixing); }}},
      {"smf.tol", {[](RunConfig& c, const std::string& k, const std::string& v) { c.smf.tolerance = to_double(k, v); },
                   [](const RunConfig& c) { return num(c.smf.tolerance); }}},
      {"smf.max_iter",
       {[](RunConfig& c, const std::string& k, const std::string& v) { c.smf.max_iterations = to_int(k, v); },
        [](const RunConfig& c) { return std::to_string(c.smf.max_iterations); }}},
      {"density_floor", double_field(&RunConfig::density_floor)},
      {"output.kernel_stride", int_field(&RunConfig::kernel_stride)},
      {"eigen.dense_cutoff", int_field(&RunConfig::dense_cutoff)},
      {"eigen.tolerance", double_field(&RunConfig::eigen_tolerance)},
      {"output.dir", {[](RunConfig& c, const std::string&, const std::string& v) { c.output_dir = v; },
                      [](const RunConfig& c) { return c.output_dir; }}},
      {"stages", {[](RunConfig& c, const std::string&, const std::string& v) { c.stages = split_list(v); },
                  [](const RunConfig& c) {
                    std::string out;
                    for (const auto& s : c.stages) out += (out.empty() ? "" : ",") + s;
                    return out;
                  }}},
  };
  return table;
}

const Field& field(const std::string& key) {
  for (const auto& [k, f] : fields())
    if (k == key) return f;
  throw ConfigError("unknown configuration key '" + key + "'");
}

}  // namespace

MixtureModel RunConfig::model() const {
  MixtureModel m;
  m.bosons = bosons;
  m.fermions = fermions;
  m.orbitals = orbitals;
  m.couplings = {g_bf, g_bb, g_ff};
  m.grid = grid;
  m.quadrature_order = quadrature_order;
  return m;
}

InducedOptions RunConfig::induced_options() const {
  InducedOptions o;
  o.denominator_floor = denominator_floor;
  o.first_order_tolerance = first_order_tolerance;
  o.max_terms = max_terms;
  o.strict = strict;
  return o;
}

EigenOptions RunConfig::eigen_options() const {
  EigenOptions o;
  o.dense_cutoff = dense_cutoff;
  o.tolerance = eigen_tolerance;
  return o;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : fields()) k.push_back(f.first);
    return k;
  }();
  return keys;
}

void set_value(RunConfig& config, const std::string& key, const std::string& value) {
  field(key).set(config, key, trim(value));
}

std::string get_value(const RunConfig& config, const std::string& key) { return field(key).get(config); }

void apply_override(RunConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + assignment + "'");
  set_value(config, trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    try {
      set_value(c, trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const RunConfig& config) {
  std::string out;
  for (const auto& key : config_keys())
    if (key != "output.dir") out += key + " = " + get_value(config, key) + "\n";
  return out;
}

}  // namespace mix::cli
