#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mix/cli/io.hpp"
#include "mix/cli/pipeline.hpp"
#include "mix/cli/plots.hpp"
#include "mix/error.hpp"
#include "mix/hamiltonian.hpp"

namespace mix::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string num(double x) {
  std::ostringstream o;
  o.precision(3);
  o << x;
  return o.str();
}

double trapezoid(const Vec& x, const Vec& f) {
  double s = 0.0;
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i) s += 0.5 * (x[i + 1] - x[i]) * (f[i] + f[i + 1]);
  return s;
}

}  // namespace

std::vector<CheckItem> check_run(const fs::path& dir) {
  std::vector<CheckItem> out;
  auto record = [&](const std::string& name, bool pass, const std::string& detail) {
    out.push_back({name, pass, detail});
  };
  auto guarded = [&](const std::string& name, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      record(name, false, e.what());
    }
  };

  json summary;
  guarded("summary schema", [&] {
    summary = json::parse(slurp(dir / "summary.json"));
    const bool ok = summary.value("schema", "") == summary_schema;
    record("summary schema", ok, summary.value("schema", "<missing>"));
  });

  json manifest;
  guarded("manifest files present", [&] {
    manifest = json::parse(slurp(dir / "manifest.json"));
    std::string missing;
    for (const auto& f : manifest.at("files")) {
      if (!fs::exists(dir / f.get<std::string>())) missing += " " + f.get<std::string>();
    }
    record("manifest files present", missing.empty(), missing.empty() ? "all present" : "missing:" + missing);
  });

  if (fs::exists(dir / "eigenstates.bin")) {
    guarded("eigenstates", [&] {
      const Checkpoint cp = read_checkpoint(dir / "eigenstates.bin");
      MixtureHamiltonian h(cp.model);
      double worst_norm = 0.0, worst_res = 0.0;
      for (const auto& s : cp.states) {
        worst_norm = std::max(worst_norm, std::abs(s.coefficients.norm() - 1.0));
        worst_res = std::max(worst_res, (h.apply(s.coefficients) - s.energy * s.coefficients).norm());
      }
      record("eigenstates normalized", worst_norm < 1e-10, "max |norm - 1| = " + num(worst_norm));
      record("eigenstates residual", worst_res < 1e-8, "max ||Hc - Ec|| = " + num(worst_res));
      if (summary.contains("solve")) {
        const int idx = summary["solve"]["state_index"].get<int>();
        const double e = summary["solve"]["energy"].get<double>();
        const bool ok = idx < static_cast<int>(cp.states.size()) &&
                        cp.states[static_cast<std::size_t>(idx)].energy == e;
        record("summary energy matches checkpoint", ok, num(e));
      }
    });
  }

  if (fs::exists(dir / "schmidt.csv")) {
    guarded("schmidt", [&] {
      const Vec l = read_table(dir / "schmidt.csv").values("lambda");
      bool sorted = true;
      for (Eigen::Index i = 0; i + 1 < l.size(); ++i) sorted = sorted && l[i] >= l[i + 1];
      record("schmidt weights sum to one", std::abs(l.sum() - 1.0) < 1e-12, "sum - 1 = " + num(l.sum() - 1.0));
      record("schmidt weights descending", sorted && l.minCoeff() >= 0.0, sorted ? "ok" : "unsorted");
    });
  }

  for (const std::string sp : {"boson", "fermion"}) {
    const fs::path hind = dir / ("hind_" + sp + ".csv");
    if (fs::exists(hind)) {
      guarded("hind " + sp, [&] {
        const Table t = read_table(hind);
        const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(t.rows.size()))));
        if (n * n != t.rows.size()) throw ShapeError("kernel file is not square");
        double asym = 0.0;
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b) asym = std::max(asym, std::abs(t.rows[a * n + b][2] - t.rows[b * n + a][2]));
        record("hind " + sp + " exchange symmetric", asym == 0.0, "max asymmetry " + num(asym));
      });
    }
    const fs::path vind = dir / ("vind_" + sp + ".csv");
    if (fs::exists(vind)) {
      guarded("vind " + sp, [&] {
        const Table t = read_table(vind);
        const Vec d = t.values("Veff") - t.values("half_x2") - t.values("V1") - t.values("Vno");
        const double err = d.cwiseAbs().maxCoeff();
        record("vind " + sp + " Veff decomposition", err < 1e-12, "max error " + num(err));
      });
    }
    const fs::path rho1 = dir / ("rho1_" + sp + ".csv");
    if (fs::exists(rho1)) {
      guarded("rho1 " + sp, [&] {
        const Table t = read_table(rho1);
        const Vec x = t.values("x");
        double worst = 0.0;
        for (std::size_t c = 1; c < t.header.size(); ++c) worst = std::max(worst, std::abs(trapezoid(x, t.values(t.header[c])) - 1.0));
        record("rho1 " + sp + " normalized", worst < 1e-8, "max |norm - 1| = " + num(worst));
      });
    }
  }

  std::vector<fs::directory_entry> entries(fs::directory_iterator(dir), fs::directory_iterator{});
  std::sort(entries.begin(), entries.end());
  for (const auto& entry : entries) {
    const std::string f = entry.path().filename().string();
    if (f.rfind("g2_fermion_", 0) == 0 && f.size() > 9 && f.substr(f.size() - 9) == "_diag.csv") {
      guarded(f, [&] {
        const Vec g = read_table(entry.path()).values("g2");
        double worst = 0.0;
        for (Eigen::Index i = 0; i < g.size(); ++i)
          if (!std::isnan(g[i])) worst = std::max(worst, std::abs(g[i]));
        record(f + " vanishes", worst < 1e-10, "max |g2| = " + num(worst));
      });
    }
    if (entry.path().extension() == ".gp") {
      guarded(f, [&] {
        std::string missing;
        for (const auto& input : script_inputs(slurp(entry.path())))
          if (!fs::exists(dir / input)) missing += " " + input;
        record(f + " inputs present", missing.empty(), missing.empty() ? "ok" : "missing:" + missing);
      });
    }
  }
  return out;
}

}  // namespace mix::cli
