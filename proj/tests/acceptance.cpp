#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mix/cli/config.hpp"
#include "mix/cli/pipeline.hpp"
#include "mix/hamiltonian.hpp"
#include "mix/induced.hpp"
#include "mix/observables.hpp"
#include "mix/schmidt.hpp"
#include "oracles.hpp"

using namespace mix;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int failures = 0;

void report(int id, const std::string& title, bool pass, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("%s  %2d %-28s %s\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double num(const json& j) { return j.get<double>(); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

cli::RunOutcome run_or_report(const cli::RunConfig& cfg, const fs::path& dir, double* seconds = nullptr) {
  const auto t0 = std::chrono::steady_clock::now();
  cli::RunOutcome out = cli::run(cfg, dir);
  if (seconds) *seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!out.success) std::printf("  run in %s failed at %s: %s\n", dir.c_str(), out.failed_stage.c_str(), out.error.c_str());
  return out;
}

MixtureEigenstate ground(int nb, int nf, int m, double g) {
  MixtureModel model;
  model.bosons = nb;
  model.fermions = nf;
  model.orbitals = m;
  model.couplings.boson_fermion = g;
  return eigenstate(MixtureHamiltonian(model), 0);
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "mix_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);

  const cli::RunConfig bench;
  double seconds = 0.0;
  const cli::RunOutcome b = run_or_report(bench, root / "benchmark", &seconds);
  const json& s = b.summary;
  const char* species[] = {"boson", "fermion"};

  // 1
  {
    const double e_int = num(s["solve"]["E_int"]), e_kin = num(s["solve"]["E_kin"]);
    const bool pass = b.success && std::abs(e_int - 0.82) <= 0.02 && std::abs(e_kin - 1.38) <= 0.02 && seconds < 300.0;
    report(1, "benchmark energies", pass,
           fmt("E_int=%.5f E_kin=%.5f E=%.9f (targets 0.82, 1.38 +-0.02) runtime=%.1fs", e_int, e_kin,
               num(s["solve"]["energy"]), seconds));
  }

  // 2
  {
    const MixtureEigenstate a = ground(2, 2, 14, 1.0), c = ground(2, 2, 16, 1.0);
    const double de = std::abs(c.energy - a.energy);
    const double di = std::abs(c.parts.interaction() - a.parts.interaction());
    const double dk = std::abs(c.parts.kinetic - a.parts.kinetic);
    report(2, "basis convergence M=14->16", de < 1e-3 && di < 0.01 && dk < 0.01,
           fmt("|dE|=%.3e (<1e-3) |dE_int|=%.3e |dE_kin|=%.3e (<0.01)", de, di, dk));
  }

  // 3
  {
    const Checkpoint cp = read_checkpoint(root / "benchmark" / "eigenstates.bin");
    const MixtureHamiltonian h(cp.model);
    const SchmidtDecomposition d = decompose(cp.states.at(0));
    const Mat t = transition_amplitudes(d, h);
    const Vec mu = schmidt_projections(d, t);
    const InducedAnalysis ind(d, h);
    double mu_err = 0.0, fact_err = 0.0;
    for (int q = 0; q < d.kept; ++q) mu_err = std::max(mu_err, std::abs(mu[q] - d.lambdas[q] * cp.states[0].energy));
    for (int i = 1; i < ind.rank(); ++i)
      fact_err = std::max(fact_err, std::abs(t(0, i) - ind.coupling() * ind.ttilde()[i]));
    const double sum_err = std::abs(d.lambdas.sum() - 1.0);
    const double sym = (t - t.transpose()).cwiseAbs().maxCoeff();
    report(3, "Schmidt identities", sum_err < 1e-12 && sym < 1e-9 && mu_err < 1e-8 && fact_err < 1e-9,
           fmt("|sum-1|=%.1e sym=%.1e mu=%.1e t1i=%.1e over %d pairs", sum_err, sym, mu_err, fact_err, d.kept));
  }

  // 4
  {
    cli::RunConfig cfg;
    cli::apply_override(cfg, "g_bf=0");
    cfg.stages = {"induced"};
    const cli::RunOutcome r = run_or_report(cfg, root / "uncoupled");
    const json& j = r.summary;
    const double l1 = num(j["schmidt"]["lambda"][0]);
    double vno = 0.0, hind = 0.0;
    for (const char* sp : species) {
      vno = std::max(vno, num(j["induced"][sp]["max_abs_Vno"]));
      hind = std::max(hind, num(j["induced"][sp]["max_abs_Hind"]));
    }
    report(4, "nonentangled limit", r.success && std::abs(l1 - 1.0) < 1e-12 && vno < 1e-10 && hind < 1e-10,
           fmt("|lambda_1-1|=%.1e max|Vno|=%.1e max|Hind|=%.1e verdict=%s", std::abs(l1 - 1.0), vno, hind,
               j["schmidt"]["verdict"].get<std::string>().c_str()));
  }

  // 5
  {
    bool pass = b.success;
    std::string detail;
    for (const char* sp : species) {
      const json& k = s["induced"][sp];
      const bool ok = num(k["Hind_exchange_error"]) == 0.0 && num(k["Hind_parity_error"]) < 1e-9 &&
                      num(k["cut_r0"]) < 0.0 && num(k["cut_max_positive"]) > 0.0 && num(k["cut_tail_ratio"]) < 0.01;
      pass = pass && ok;
      detail += fmt("%s: exch=%.0e par=%.1e H(r=0)=%.3f max+=%.3f tail=%.1e; ", sp, num(k["Hind_exchange_error"]),
                    num(k["Hind_parity_error"]), num(k["cut_r0"]), num(k["cut_max_positive"]), num(k["cut_tail_ratio"]));
    }
    const double ratio = num(s["induced"]["Hind_peak_ratio_fermion_boson"]);
    pass = pass && ratio >= 1.5 && ratio <= 2.5;
    report(5, "induced kernel structure", pass, detail + fmt("peak ratio f/b=%.3f", ratio));
  }

  // 6
  {
    const json& k = s["induced"];
    const bool fmax = k["fermion"]["Veff_local_max_at_0"].get<bool>();
    const double curv = num(k["boson"]["Veff_curvature_at_0"]);
    const double gb = num(k["boson"]["V1_SMF_gap"]), gf = num(k["fermion"]["V1_SMF_gap"]);
    report(6, "effective potentials", b.success && fmax && curv > 1.0 && gb < 0.1 && gf < 0.1,
           fmt("fermion local max at 0=%s boson curvature=%.3f V1/SMF gap b=%.3f f=%.3f", fmax ? "yes" : "no", curv, gb,
               gf));
  }

  // 7
  {
    const json& o = s["observables"];
    const double origin = num(o["boson"]["g2_full"]["g2_origin"]);
    const double far = num(o["boson"]["g2_full"]["g2_at_1_m1"]);
    const double fdiag = num(o["fermion"]["g2_full"]["max_abs_diagonal"]);
    const double smf = num(o["boson"]["g2_smf"]["max_abs_deviation_from_1"]);
    report(7, "pair correlations", b.success && origin > 1.0 && far < 1.0 && fdiag < 1e-10 && smf < 1e-8,
           fmt("boson g2(0,0)=%.4f g2(1,-1)=%.4f fermion max|g2 diag|=%.1e SMF boson max|g2-1|=%.1e", origin, far,
               fdiag, smf));
  }

  // 8
  {
    bool pass = b.success;
    std::string detail;
    for (const char* sp : species) {
      const json& e = s["observables"][sp]["g2_effective"];
      const bool match = e["offdiag_sign_pattern_matches_full"].get<bool>();
      const double l2 = num(e["relative_l2_vs_full"]);
      pass = pass && match && l2 < 0.2;
      detail += fmt("%s: pattern eff=%s full=%s L2=%.3f; ", sp, e["offdiag_sign_pattern"].get<std::string>().c_str(),
                    s["observables"][sp]["g2_full"]["offdiag_sign_pattern"].get<std::string>().c_str(), l2);
    }
    report(8, "effective vs full g2", pass, detail);
  }

  // 9
  {
    const double grid = oracle::grid_ground_energy_extrapolated(1.0, 7.0, 69);
    const double e50 = ground(1, 1, 50, 1.0).energy;
    const double e14 = ground(1, 1, 14, 1.0).energy;
    report(9, "real-space grid oracle", std::abs(e50 - grid) < 1e-2,
           fmt("grid=%.6f ED(M=50)=%.6f diff=%.2e (<1e-2); ED(M=14)=%.6f diff=%.2e", grid, e50, std::abs(e50 - grid), e14,
               std::abs(e14 - grid)));
  }

  // 10
  {
    std::vector<double> peaks;
    for (int nf = 1; nf <= 3; ++nf) {
      cli::RunConfig cfg;
      cfg.bosons = 1;
      cfg.fermions = nf;
      cfg.stages = {"induced"};
      const cli::RunOutcome r = run_or_report(cfg, root / ("scaling_nf" + std::to_string(nf)));
      peaks.push_back(r.success ? num(r.summary["induced"]["fermion"]["max_abs_Hind"]) : NAN);
    }
    const bool pass = peaks[1] < peaks[0] && peaks[2] < peaks[1];
    report(10, "system-bath scaling", pass,
           fmt("max|Hind_f| for N_f=1,2,3 (N_b=1): %.4f %.4f %.4f", peaks[0], peaks[1], peaks[2]));
  }

  // 11
  {
    const Checkpoint cp = read_checkpoint(root / "benchmark" / "eigenstates.bin");
    const MixtureHamiltonian h(cp.model);
    const SchmidtDecomposition d = decompose(cp.states.at(0));
    SchmidtDecomposition flipped = d;
    for (int i = 0; i < d.kept; i += 2) flip_pair(flipped, i);
    const InducedAnalysis a(d, h), f(flipped, h);
    double gauge = (a.ttilde() - f.ttilde()).cwiseAbs().maxCoeff();
    gauge = std::max(gauge, (a.amplitudes() - f.amplitudes()).cwiseAbs().maxCoeff());
    for (Species sp : {Species::Boson, Species::Fermion}) {
      gauge = std::max(gauge, (a.v1(sp) - f.v1(sp)).cwiseAbs().maxCoeff());
      gauge = std::max(gauge, (a.vno(sp) - f.vno(sp)).cwiseAbs().maxCoeff());
      gauge = std::max(gauge, (a.hind(sp) - f.hind(sp)).cwiseAbs().maxCoeff());
    }
    double marginal = 0.0;
    for (const char* sp : species) marginal = std::max(marginal, num(s["observables"][sp]["rho2_marginal_error"]));

    const cli::RunOutcome again = run_or_report(bench, root / "benchmark_rerun");
    int files = 0, differing = 0;
    for (const auto& e : fs::directory_iterator(root / "benchmark")) {
      ++files;
      if (slurp(e.path()) != slurp(root / "benchmark_rerun" / e.path().filename())) ++differing;
    }
    report(11, "property suites", again.success && gauge < 1e-10 && marginal < 1e-8 && differing == 0 && files > 0,
           fmt("gauge flip max diff=%.1e rho2 marginal=%.1e rerun: %d/%d files identical", gauge, marginal,
               files - differing, files));
  }

  std::printf("%s: %d criteria failed\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}
