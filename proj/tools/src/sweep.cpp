#include <atomic>
#include <cstdio>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

#include "mix/cli/io.hpp"
#include "mix/cli/pipeline.hpp"
#include "mix/error.hpp"

namespace mix::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

SweepAxis parse_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ConfigError("--vary expects key=a,b,c, got '" + text + "'");
  SweepAxis axis;
  axis.key = text.substr(0, eq);
  RunConfig probe;
  get_value(probe, axis.key);
  std::stringstream ss(text.substr(eq + 1));
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) axis.values.push_back(item);
  if (axis.values.empty()) throw ConfigError("empty range for '" + axis.key + "'");
  return axis;
}

namespace {

double lookup(const json& j, std::initializer_list<const char*> path) {
  const json* p = &j;
  for (const char* k : path) {
    if (!p->contains(k)) return std::numeric_limits<double>::quiet_NaN();
    p = &(*p)[k];
  }
  return p->is_number() ? p->get<double>() : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

SweepOutcome sweep(const RunConfig& base, const std::vector<SweepAxis>& axes, const fs::path& directory, int jobs) {
  if (axes.empty()) throw ConfigError("sweep needs at least one --vary range");
  std::vector<std::vector<std::string>> points = {{}};
  for (const auto& axis : axes) {
    if (axis.values.empty()) throw ConfigError("empty range for '" + axis.key + "'");
    std::vector<std::vector<std::string>> next;
    for (const auto& p : points)
      for (const auto& v : axis.values) {
        auto q = p;
        q.push_back(v);
        next.push_back(q);
      }
    points = next;
  }
  fs::create_directories(directory);

  struct Row {
    std::string status;
    json summary;
  };
  std::vector<Row> rows(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      char name[32];
      std::snprintf(name, sizeof name, "point_%04zu", i);
      try {
        RunConfig cfg = base;
        for (std::size_t a = 0; a < axes.size(); ++a) set_value(cfg, axes[a].key, points[i][a]);
        const RunOutcome r = run(cfg, directory / name);
        rows[i] = {r.success ? "ok" : "failed:" + r.failed_stage, r.summary};
      } catch (const std::exception& e) {
        std::cerr << name << ": " << e.what() << "\n";
        rows[i] = {"failed:config", json::object()};
      }
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(points.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  SweepOutcome out;
  out.points = static_cast<int>(points.size());
  std::string text = "point";
  for (const auto& axis : axes) text += "," + axis.key;
  text += ",status,E,E_int,E_kin,lambda_1,max_Hind_boson,max_Hind_fermion\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const json& s = rows[i].summary;
    if (rows[i].status != "ok") ++out.failures;
    text += std::to_string(i);
    for (const auto& v : points[i]) text += "," + v;
    double l1 = std::numeric_limits<double>::quiet_NaN();
    if (s.contains("schmidt") && !s["schmidt"]["lambda"].empty()) l1 = s["schmidt"]["lambda"][0].get<double>();
    text += "," + rows[i].status + "," + format_number(lookup(s, {"solve", "energy"})) + "," +
            format_number(lookup(s, {"solve", "E_int"})) + "," + format_number(lookup(s, {"solve", "E_kin"})) + "," +
            format_number(l1) + "," + format_number(lookup(s, {"induced", "boson", "max_abs_Hind"})) + "," +
            format_number(lookup(s, {"induced", "fermion", "max_abs_Hind"})) + "\n";
  }
  write_text(directory / "sweep.csv", text);
  return out;
}

}  // namespace mix::cli
