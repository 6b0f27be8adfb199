#include "mix/cli/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <set>

#include "mix/cli/io.hpp"
#include "mix/cli/plots.hpp"
#include "mix/effective.hpp"
#include "mix/error.hpp"
#include "mix/induced.hpp"
#include "mix/observables.hpp"
#include "mix/schmidt.hpp"

namespace mix::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

const std::vector<Stage>& all_stages() {
  static const std::vector<Stage> stages = {Stage::Solve, Stage::Schmidt,     Stage::Induced, Stage::Effective,
                                            Stage::Smf,   Stage::Observables, Stage::Report};
  return stages;
}

std::string name(Stage stage) {
  switch (stage) {
    case Stage::Solve:
      return "solve";
    case Stage::Schmidt:
      return "schmidt";
    case Stage::Induced:
      return "induced";
    case Stage::Effective:
      return "effective";
    case Stage::Smf:
      return "smf";
    case Stage::Observables:
      return "observables";
    case Stage::Report:
      return "report";
  }
  return "unknown";
}

Stage parse_stage(const std::string& text) {
  for (Stage s : all_stages())
    if (name(s) == text) return s;
  throw ConfigError("unknown stage '" + text + "'");
}

namespace {

std::vector<Stage> prerequisites(Stage s) {
  switch (s) {
    case Stage::Schmidt:
      return {Stage::Solve};
    case Stage::Induced:
      return {Stage::Schmidt};
    case Stage::Effective:
      return {Stage::Induced};
    case Stage::Observables:
      return {Stage::Solve};
    default:
      return {};
  }
}

}  // namespace

std::vector<Stage> resolve_stages(const std::vector<std::string>& requested) {
  if (requested.empty()) return all_stages();
  std::set<Stage> wanted;
  std::vector<Stage> todo;
  for (const auto& r : requested) todo.push_back(parse_stage(r));
  while (!todo.empty()) {
    const Stage s = todo.back();
    todo.pop_back();
    if (!wanted.insert(s).second) continue;
    for (Stage p : prerequisites(s)) todo.push_back(p);
  }
  std::vector<Stage> out;
  for (Stage s : all_stages())
    if (wanted.count(s)) out.push_back(s);
  return out;
}

namespace {

constexpr Species kSpecies[] = {Species::Boson, Species::Fermion};

std::vector<double> to_vector(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

double max_abs(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }
double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

struct Context {
  Context(const RunConfig& cfg, fs::path out) : config(cfg), dir(std::move(out)) {}

  const RunConfig& config;
  fs::path dir;
  std::unique_ptr<MixtureHamiltonian> hamiltonian;
  std::optional<MixtureEigenstate> state;
  std::optional<SchmidtDecomposition> schmidt;
  std::unique_ptr<InducedAnalysis> induced;
  std::optional<EffectiveModel> effective[2];
  std::optional<EffectiveSolution> solution[2];
  std::optional<SmfResult> smf;
  json summary = json::object();
  std::set<std::string> files;

  fs::path file(const std::string& name) {
    files.insert(name);
    return dir / name;
  }
  const Grid& grid() const { return hamiltonian->basis().grid(); }
};

std::string sname(Species s) { return std::string(mix::name(s)); }

int slot(Species s) { return s == Species::Boson ? 0 : 1; }

MixtureHamiltonian& need_hamiltonian(Context& c) {
  if (!c.hamiltonian) c.hamiltonian = std::make_unique<MixtureHamiltonian>(c.config.model());
  return *c.hamiltonian;
}

// Second difference at the grid point closest to x = 0.
double curvature_at_origin(const Grid& g, const Vec& f) {
  const int i = g.nearest(0.0);
  if (i < 1 || i + 1 >= g.size()) return std::numeric_limits<double>::quiet_NaN();
  const double h = g.spacing();
  return (f[i + 1] - 2.0 * f[i] + f[i - 1]) / (h * h);
}

void stage_solve(Context& c) {
  MixtureHamiltonian& h = need_hamiltonian(c);
  const int idx = c.config.state_index;
  if (idx < 0) throw ConfigError("state_index must be non-negative");
  auto states = eigensolve(h, idx + 1, c.config.eigen_options());
  if (static_cast<std::size_t>(idx) >= states.size()) throw IndexError("state_index beyond the product space");
  c.state = states[static_cast<std::size_t>(idx)];
  write_checkpoint(c.file("eigenstates.bin"), h, states);

  const MixtureEigenstate& s = *c.state;
  json j;
  j["state_index"] = idx;
  j["dimension"] = {{"boson", h.boson_dimension()}, {"fermion", h.fermion_dimension()}, {"product", h.dimension()}};
  j["energy"] = s.energy;
  j["E_kin"] = s.parts.kinetic;
  j["E_trap"] = s.parts.trap;
  j["E_int"] = s.parts.interaction();
  j["E_bf"] = s.parts.boson_fermion;
  j["E_bb"] = s.parts.boson_boson;
  j["E_ff"] = s.parts.fermion_fermion;
  j["residual"] = s.residual;
  j["degenerate"] = s.degenerate;
  std::vector<double> spectrum;
  for (const auto& st : states) spectrum.push_back(st.energy);
  j["spectrum"] = spectrum;
  c.summary["solve"] = j;
}

void stage_schmidt(Context& c) {
  SchmidtOptions opt;
  opt.lambda_floor = c.config.lambda_floor;
  c.schmidt = decompose(*c.state, opt);
  const SchmidtDecomposition& d = *c.schmidt;
  const EntanglementReport rep = entanglement_report(d, c.config.entanglement_threshold);

  const Eigen::Index n = d.lambdas.size();
  Vec index(n);
  for (Eigen::Index i = 0; i < n; ++i) index[i] = static_cast<double>(i + 1);
  write_columns(c.file("schmidt.csv"), {"i", "lambda", "sqrt_lambda"}, {index, d.lambdas, d.sqrt_lambdas()});

  const Mat t = transition_amplitudes(d, *c.hamiltonian);
  const Vec mu = schmidt_projections(d, t);
  double mu_error = 0.0;
  for (int q = 0; q < d.kept; ++q) mu_error = std::max(mu_error, std::abs(mu[q] - d.lambdas[q] * d.energy));

  json j;
  j["rank"] = d.kept;
  j["lambda"] = to_vector(d.lambdas.head(d.kept));
  j["sqrt_lambda"] = to_vector(rep.sqrt_lambdas);
  j["lambda_sum"] = d.lambdas.sum();
  j["discarded_weight"] = d.discarded_weight;
  j["entropy"] = rep.entropy;
  j["dominance_ratio"] = rep.dominance_ratio;
  j["threshold"] = rep.threshold;
  j["verdict"] = rep.verdict();
  j["near_degenerate"] = rep.near_degenerate;
  j["t_symmetry_error"] = max_abs(Mat(t - t.transpose()));
  j["mu_identity_error"] = mu_error;
  write_text(c.file("schmidt.json"), j.dump(2) + "\n");
  c.summary["schmidt"] = j;
}

void write_vind(Context& c, Species s) {
  const Vec& x = c.grid().x();
  const Vec nan = Vec::Constant(x.size(), std::numeric_limits<double>::quiet_NaN());
  const Vec vsmf = c.smf ? c.smf->species(s).potential_grid : nan;
  write_columns(c.file("vind_" + sname(s) + ".csv"), {"x", "V1", "Vno", "Veff", "V_SMF", "half_x2"},
                {x, c.induced->v1(s), c.induced->vno(s), c.induced->veff(s), vsmf, Vec(0.5 * x.cwiseAbs2())});
}

json smf_gap(Context& c, Species s) {
  const Vec& x = c.grid().x();
  const Vec v1 = c.induced->v1(s);
  const Vec& vs = c.smf->species(s).potential_grid;
  double gap = 0.0, scale = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) > 3.0) continue;
    gap = std::max(gap, std::abs(v1[i] - vs[i]));
    scale = std::max(scale, std::abs(vs[i]));
  }
  return scale > 0.0 ? json(gap / scale) : json(gap);
}

void stage_induced(Context& c) {
  c.induced = std::make_unique<InducedAnalysis>(*c.schmidt, *c.hamiltonian, c.config.induced_options());
  const InducedAnalysis& ind = *c.induced;
  const Vec& x = c.grid().x();
  const Grid& g = c.grid();
  const double coupling = c.config.g_bf;

  json j;
  j["rank"] = ind.rank();
  j["active_terms"] = ind.active_terms();
  double tie = 0.0;
  for (int i = 1; i < ind.rank(); ++i) tie = std::max(tie, std::abs(ind.amplitudes()(0, i) - coupling * ind.ttilde()[i]));
  j["t1i_factorization_error"] = tie;

  for (Species s : kSpecies) {
    const std::string sn = sname(s);
    std::vector<std::string> gh = {"x"};
    std::vector<Vec> gc = {x};
    for (int i = 0; i < ind.rank(); ++i) {
      gh.push_back("gamma_1" + std::to_string(i + 1));
      gc.push_back(ind.gamma(s, i));
    }
    write_columns(c.file("gamma_" + sn + ".csv"), gh, gc);
    write_vind(c, s);

    const Mat kernel = ind.hind(s);
    write_kernel(c.file("hind_" + sn + ".csv"), "H_ind", x, kernel, c.config.kernel_stride);
    const Vec along_r = antidiagonal_cut(kernel);
    write_columns(c.file("hind_" + sn + "_cut_r.csv"), {"r", "H_ind"}, {Vec(2.0 * x), along_r});
    write_columns(c.file("hind_" + sn + "_cut_R.csv"), {"R", "H_ind"}, {x, diagonal_cut(kernel)});

    double parity = 0.0;
    const Eigen::Index n = kernel.rows();
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b) parity = std::max(parity, std::abs(kernel(a, b) - kernel(n - 1 - a, n - 1 - b)));
    const int center = g.nearest(0.0);
    const double peak = max_abs(along_r);
    double positive = 0.0, tail = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double r = std::abs(2.0 * x[i]);
      positive = std::max(positive, along_r[i]);
      if (r >= 6.0) tail = std::max(tail, std::abs(along_r[i]));
    }
    const Vec veff = ind.veff(s);
    json sj;
    sj["max_abs_V1"] = max_abs(ind.v1(s));
    sj["max_abs_Vno"] = max_abs(ind.vno(s));
    sj["max_abs_Hind"] = max_abs(kernel);
    sj["Hind_exchange_error"] = max_abs(Mat(kernel - kernel.transpose()));
    sj["Hind_parity_error"] = parity;
    sj["cut_r0"] = along_r[center];
    sj["cut_max_positive"] = positive;
    sj["cut_tail_ratio"] = peak > 0.0 ? tail / peak : 0.0;
    sj["Veff_curvature_at_0"] = curvature_at_origin(g, veff);
    sj["Veff_local_max_at_0"] = veff[center] > veff[center - 1] && veff[center] > veff[center + 1];
    sj["beta"] = to_vector(ind.beta(s));
    j[sn] = sj;
  }
  j["ttilde"] = to_vector(ind.ttilde());
  const double hb = j["boson"]["max_abs_Hind"].get<double>();
  j["Hind_peak_ratio_fermion_boson"] = hb > 0.0 ? j["fermion"]["max_abs_Hind"].get<double>() / hb : 0.0;

  std::string terms = "i,sqrt_lambda,ttilde,beta_boson,beta_fermion,first_order_ratio,status,"
                      "max_Vno_boson,max_Vno_fermion,max_Hind_boson,max_Hind_fermion\n";
  for (const auto& t : ind.terms()) {
    terms += std::to_string(t.index + 1) + ',' + format_number(t.sqrt_lambda) + ',' + format_number(t.ttilde) + ',' +
             format_number(t.beta_boson) + ',' + format_number(t.beta_fermion) + ',' +
             format_number(t.first_order_ratio) + ',' + t.status + ',' + format_number(t.vno_boson) + ',' +
             format_number(t.vno_fermion) + ',' + format_number(t.hind_boson) + ',' + format_number(t.hind_fermion) +
             '\n';
    if (t.status == "small-denominator") {
      std::cerr << "warning: Schmidt term " << t.index + 1 << " dropped, t~ below the denominator floor\n";
    }
  }
  write_text(c.file("induced_terms.csv"), terms);
  if (c.smf) {
    for (Species s : kSpecies) j[sname(s)]["V1_SMF_gap"] = smf_gap(c, s);
  }
  c.summary["induced"] = j;
}

void stage_effective(Context& c) {
  json j;
  for (Species s : kSpecies) {
    const int k = slot(s);
    c.effective[k] = build_effective(c.induced.get(), *c.schmidt, *c.hamiltonian, s);
    c.solution[k] = solve_effective(*c.effective[k], c.config.effective_states);
    const EffectiveSolution& sol = *c.solution[k];
    const Eigen::Index shown = std::min<Eigen::Index>(sol.spectrum.size(), std::max(c.config.effective_states, 1));
    json sj;
    sj["E1"] = sol.e1;
    sj["selected"] = sol.selected;
    sj["energy"] = sol.energy;
    sj["fidelity"] = sol.fidelity;
    sj["ambiguous"] = sol.ambiguous;
    sj["alternate"] = sol.alternate;
    sj["spectrum"] = to_vector(sol.spectrum.head(shown));
    sj["spectrum_span"] = {sol.spectrum[0], sol.spectrum[sol.spectrum.size() - 1]};
    write_text(c.file("effective_" + sname(s) + ".json"), sj.dump(2) + "\n");
    j[sname(s)] = sj;
  }
  c.summary["effective"] = j;
}

void stage_smf(Context& c) {
  c.smf = smf_solve(need_hamiltonian(c), c.config.smf);
  const SmfResult& r = *c.smf;
  json j;
  j["iterations"] = r.iterations;
  j["residuals"] = r.residuals;
  j["energies"] = r.energies;
  j["energy"] = r.energy;
  j["boson_energy"] = r.boson.energy;
  j["fermion_energy"] = r.fermion.energy;
  j["mixing"] = c.config.smf.mixing;
  j["tolerance"] = c.config.smf.tolerance;
  write_text(c.file("smf.json"), j.dump(2) + "\n");
  json sj = j;
  sj.erase("residuals");
  sj.erase("energies");
  if (c.induced) {
    for (Species s : kSpecies) {
      write_vind(c, s);
      c.summary["induced"][sname(s)]["V1_SMF_gap"] = smf_gap(c, s);
    }
  }
  c.summary["smf"] = sj;
}

double relative_l2(const Grid& g, const Mat& a, const Mat& b, double box) {
  const Vec& x = g.x();
  double num = 0.0, den = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) > box) continue;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      if (std::abs(x[k]) > box || std::isnan(a(i, k)) || std::isnan(b(i, k))) continue;
      num += (a(i, k) - b(i, k)) * (a(i, k) - b(i, k));
      den += a(i, k) * a(i, k);
    }
  }
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

// g2(x, -x) for 0 <= x <= box.
Vec offdiag_half_cut(const Grid& g, const Mat& g2, double box) {
  const Vec& x = g.x();
  const Eigen::Index n = x.size();
  std::vector<double> out;
  for (Eigen::Index i = 0; i < n; ++i)
    if (x[i] >= 0.0 && x[i] <= box) out.push_back(g2(i, n - 1 - i));
  return Eigen::Map<const Vec>(out.data(), static_cast<Eigen::Index>(out.size()));
}

void stage_observables(Context& c) {
  const MixtureHamiltonian& h = *c.hamiltonian;
  const OrbitalBasis& basis = h.basis();
  const Grid& g = c.grid();
  const Vec& x = g.x();
  json j;
  for (Species s : kSpecies) {
    const std::string sn = sname(s);
    const SpeciesSector& sector = h.sector(s);
    std::vector<std::pair<Provenance, Mat>> sources;
    sources.emplace_back(Provenance::Full,
                         s == Species::Boson ? c.state->coefficients : Mat(c.state->coefficients.transpose()));
    if (c.schmidt) sources.emplace_back(Provenance::Schmidt1, Mat(c.schmidt->vectors(s).col(0)));
    if (c.solution[slot(s)]) sources.emplace_back(Provenance::Effective, Mat(c.solution[slot(s)]->state));
    if (c.smf) sources.emplace_back(Provenance::Smf, Mat(c.smf->species(s).state));

    std::vector<std::string> header = {"x"};
    std::vector<Vec> columns = {x};
    std::vector<std::pair<Provenance, Mat>> g2s;
    json sj;
    for (const auto& [prov, states] : sources) {
      const Vec rho1 = rho1_grid(sector, states, basis);
      header.push_back(name(prov));
      columns.push_back(rho1);
      sj["rho1_norm_" + name(prov)] = g.integrate(rho1);
      if (sector.particles() < 2) continue;
      const Mat rho2 = rho2_grid(sector, states, basis);
      const Mat g2 = g2_grid(rho1, rho2, c.config.density_floor);
      const std::string stem = "g2_" + sn + "_" + name(prov);
      write_kernel(c.file(stem + ".csv"), "g2", x, g2, c.config.kernel_stride);
      const Eigen::Index n = x.size();
      Vec anti_x2(n);
      for (Eigen::Index i = 0; i < n; ++i) anti_x2[i] = x[n - 1 - i];
      write_columns(c.file(stem + "_diag.csv"), {"x1", "x2", "g2"}, {x, x, diagonal_cut(g2)});
      write_columns(c.file(stem + "_offdiag.csv"), {"x1", "x2", "g2"}, {x, anti_x2, antidiagonal_cut(g2)});
      if (prov == Provenance::Full) {
        Vec marginal(n);
        for (Eigen::Index i = 0; i < n; ++i) marginal[i] = g.integrate(rho2.row(i).transpose());
        sj["rho2_norm"] = g.integrate(marginal);
        sj["rho2_marginal_error"] = max_abs(Vec(marginal - rho1));
      }
      g2s.emplace_back(prov, g2);
    }
    write_columns(c.file("rho1_" + sn + ".csv"), header, columns);

    const int center = g.nearest(0.0);
    auto at = [&](const Mat& m, double x1, double x2) { return m(g.nearest(x1), g.nearest(x2)); };
    const Mat* full = nullptr;
    for (const auto& [prov, g2] : g2s) {
      if (prov == Provenance::Full) full = &g2;
    }
    for (const auto& [prov, g2] : g2s) {
      json pj;
      double diag = 0.0, dev = 0.0;
      for (Eigen::Index i = 0; i < g2.rows(); ++i)
        if (!std::isnan(g2(i, i))) diag = std::max(diag, std::abs(g2(i, i)));
      for (Eigen::Index i = 0; i < g2.size(); ++i)
        if (!std::isnan(g2.data()[i])) dev = std::max(dev, std::abs(g2.data()[i] - 1.0));
      pj["g2_origin"] = g2(center, center);
      pj["g2_at_1_m1"] = at(g2, 1.0, -1.0);
      pj["max_abs_diagonal"] = diag;
      pj["max_abs_deviation_from_1"] = dev;
      pj["offdiag_sign_pattern"] = sign_pattern(offdiag_half_cut(g, g2, 2.0), 5e-3);
      if (full && prov != Provenance::Full) {
        pj["relative_l2_vs_full"] = relative_l2(g, *full, g2, 2.0);
        pj["offdiag_sign_pattern_matches_full"] =
            pj["offdiag_sign_pattern"] == sign_pattern(offdiag_half_cut(g, *full, 2.0), 5e-3);
      }
      sj["g2_" + name(prov)] = pj;
    }
    j[sn] = sj;
  }
  c.summary["observables"] = j;
}

void stage_report(Context& c) {
  for (const auto& [file, text] : plot_scripts(c.files)) write_text(c.file(file), text);
}

void write_manifest(Context& c, const RunOutcome& out) {
  json m;
  m["schema"] = summary_schema;
  m["completed"] = out.completed;
  m["failed_stage"] = out.failed_stage.empty() ? json(nullptr) : json(out.failed_stage);
  std::set<std::string> files = c.files;
  files.insert("summary.json");
  files.insert("config.txt");
  m["files"] = std::vector<std::string>(files.begin(), files.end());
  write_text(c.dir / "manifest.json", m.dump(2) + "\n");
}

}  // namespace

RunOutcome run(const RunConfig& config, const fs::path& directory) {
  RunOutcome out;
  const std::vector<Stage> stages = resolve_stages(config.stages);
  fs::create_directories(directory);
  Context c{config, directory};
  write_text(c.file("config.txt"), format_config(config));

  for (Stage s : stages) {
    try {
      switch (s) {
        case Stage::Solve:
          stage_solve(c);
          break;
        case Stage::Schmidt:
          stage_schmidt(c);
          break;
        case Stage::Induced:
          stage_induced(c);
          break;
        case Stage::Effective:
          stage_effective(c);
          break;
        case Stage::Smf:
          stage_smf(c);
          break;
        case Stage::Observables:
          stage_observables(c);
          break;
        case Stage::Report:
          stage_report(c);
          break;
      }
      out.completed.push_back(name(s));
    } catch (const std::exception& e) {
      out.failed_stage = name(s);
      out.error = e.what();
      break;
    }
  }
  out.success = out.failed_stage.empty();

  json requested = json::array();
  for (Stage s : stages) requested.push_back(name(s));
  c.summary["schema"] = summary_schema;
  json cfg = json::object();
  for (const auto& key : config_keys())
    if (key != "output.dir") cfg[key] = get_value(config, key);
  c.summary["config"] = cfg;
  c.summary["stages"] = {{"requested", requested}, {"completed", out.completed}};
  if (!out.success) c.summary["stages"]["failed"] = {{"stage", out.failed_stage}, {"error", out.error}};
  if (c.summary.contains("schmidt")) c.summary["verdict"] = c.summary["schmidt"]["verdict"];
  write_text(c.file("summary.json"), c.summary.dump(2) + "\n");
  write_manifest(c, out);
  out.summary = c.summary;
  return out;
}

}  // namespace mix::cli
