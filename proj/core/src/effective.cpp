#include "mix/effective.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "mix/error.hpp"

namespace mix {

Mat separable_tensor(const OrbitalBasis& basis, const SeparableKernel& kernel) {
  const int m = basis.size();
  Mat v = Mat::Zero(m * m, m * m);
  for (int k = 0; k < kernel.size(); ++k) {
    const Vec f = basis.density_at_nodes(2, kernel.factors[static_cast<std::size_t>(k)]);
    const Mat a = basis.project(2, f);
    const double c = kernel.coefficients[k];
    for (int b = 0; b < m; ++b)
      for (int a1 = 0; a1 < m; ++a1)
        for (int d = 0; d < m; ++d)
          for (int c1 = 0; c1 < m; ++c1) v(a1 * m + b, c1 * m + d) += c * a(a1, c1) * a(b, d);
  }
  return v;
}

EffectiveModel build_effective(const InducedAnalysis* induced, const SchmidtDecomposition& d,
                               const MixtureHamiltonian& h, Species s) {
  if (induced == nullptr) throw DependencyError("effective model needs the induced stage");
  return build_effective(*induced, d, h, s);
}

EffectiveModel build_effective(const InducedAnalysis& induced, const SchmidtDecomposition& d,
                               const MixtureHamiltonian& h, Species s) {
  if (&induced.basis() != &h.basis() || d.kept < induced.rank() ||
      d.vectors(s).rows() != static_cast<Eigen::Index>(h.sector(s).dimension())) {
    throw DependencyError("induced data does not belong to this Hamiltonian and decomposition");
  }
  const OrbitalBasis& basis = h.basis();
  EffectiveModel e{s, h.sector(s), {}, {}, {}, {}, {}, {}, 0.0};
  const Mat p1 = basis.project(2, induced.v1_at_nodes(s, 2));
  const Mat pno = basis.project(3, induced.vno_at_nodes(s, 3));
  e.induced_potential = p1 + pno;
  e.one_body = single_particle_operators(basis.size()).h + e.induced_potential;
  e.kernel = induced.kernel(s);
  e.two_body = separable_tensor(basis, e.kernel);

  e.hamiltonian = h.species_hamiltonian(s) + e.sector.one_body().operator_matrix(e.induced_potential);
  if (e.kernel.size() > 0) e.hamiltonian += e.sector.pairs().operator_matrix(e.two_body);
  e.hamiltonian = 0.5 * (e.hamiltonian + e.hamiltonian.transpose()).eval();
  e.reference = d.vectors(s).col(0);
  e.e1 = e.reference.dot(e.hamiltonian * e.reference);
  return e;
}

EffectiveSolution solve_effective(const EffectiveModel& model, int count, double tie_tolerance) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(model.hamiltonian);
  if (eig.info() != Eigen::Success) throw ConvergenceError("effective diagonalization failed", 0.0);
  EffectiveSolution out;
  out.spectrum = eig.eigenvalues();
  out.e1 = model.e1;
  const Eigen::Index n = out.spectrum.size();
  const Eigen::Index k = std::min<Eigen::Index>(std::max(count, 1), n);
  out.low_states = eig.eigenvectors().leftCols(k);
  for (Eigen::Index j = 0; j < k; ++j) fix_sign(out.low_states.col(j));

  Eigen::Index best = 0;
  (out.spectrum.array() - model.e1).abs().minCoeff(&best);
  const double dist = std::abs(out.spectrum[best] - model.e1);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j == best) continue;
    if (std::abs(std::abs(out.spectrum[j] - model.e1) - dist) <= tie_tolerance &&
        std::abs(out.spectrum[j] - out.spectrum[best]) > tie_tolerance) {
      out.ambiguous = true;
      out.alternate = static_cast<int>(j);
      out.alternate_state = eig.eigenvectors().col(j);
      fix_sign(out.alternate_state);
      break;
    }
  }
  out.selected = static_cast<int>(best);
  out.state = eig.eigenvectors().col(best);
  fix_sign(out.state);
  out.energy = out.spectrum[best];
  out.fidelity = std::abs(out.state.dot(model.reference));
  return out;
}

namespace {

struct SectorSolve {
  Vec state;
  double energy;
};

SectorSolve ground(const Mat& hamiltonian) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(hamiltonian);
  if (eig.info() != Eigen::Success) throw ConvergenceError("sector diagonalization failed", 0.0);
  Vec v = eig.eigenvectors().col(0);
  fix_sign(v);
  return {v, eig.eigenvalues()[0]};
}

}  // namespace

SmfResult smf_solve(const MixtureHamiltonian& h, const SmfOptions& options) {
  if (!(options.mixing > 0.0 && options.mixing <= 1.0)) throw Error("SMF mixing must lie in (0, 1]");
  const OrbitalBasis& basis = h.basis();
  const double g = h.model().couplings.boson_fermion;
  const int m = basis.size();
  const SpeciesSector& sb = h.sector(Species::Boson);
  const SpeciesSector& sf = h.sector(Species::Fermion);

  // Potentials are kept as orbital expansions K so every projection is exact.
  auto solve = [&](Species s, const Mat& k) {
    const Mat proj = basis.project(2, basis.density_at_nodes(2, k));
    return ground(h.species_hamiltonian(s) + h.sector(s).one_body().operator_matrix(proj));
  };
  auto density = [&](const SpeciesSector& sector, const Vec& v) { return sector.one_body().transition(v, v); };
  auto linf = [&](const Mat& k) { return basis.density_on_grid(k).cwiseAbs().maxCoeff(); };

  SmfResult r;
  Mat kb = Mat::Zero(m, m);
  Mat kf = Mat::Zero(m, m);
  SectorSolve b{}, f{};
  bool converged = false;
  for (int it = 1; it <= options.max_iterations; ++it) {
    f = solve(Species::Fermion, kf);
    const Mat tb = g * density(sf, f.state);
    const double rb = linf(tb - kb);
    kb = (1.0 - options.mixing) * kb + options.mixing * tb;
    b = solve(Species::Boson, kb);
    const Mat tf = g * density(sb, b.state);
    const double rf = linf(tf - kf);
    kf = (1.0 - options.mixing) * kf + options.mixing * tf;

    const Mat db = density(sb, b.state);
    const Mat df = density(sf, f.state);
    const Quadrature& q = basis.rule(2);
    const double cross = g * q.weights.dot(basis.density_at_nodes(2, db).cwiseProduct(basis.density_at_nodes(2, df)));
    const double eb = b.state.dot(h.species_hamiltonian(Species::Boson) * b.state);
    const double ef = f.state.dot(h.species_hamiltonian(Species::Fermion) * f.state);
    r.energies.push_back(eb + ef + cross);
    r.residuals.push_back(std::max(rb, rf));
    r.iterations = it;
    if (r.residuals.back() < options.tolerance) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "SMF iteration did not converge in " << options.max_iterations << " steps; residuals";
    const std::size_t n = r.residuals.size();
    for (std::size_t i = n > 5 ? n - 5 : 0; i < n; ++i) msg << ' ' << r.residuals[i];
    throw ConvergenceError(msg.str(), r.residuals.empty() ? 0.0 : r.residuals.back());
  }
  // Final potentials are the targets generated by the final states.
  kb = g * density(sf, f.state);
  kf = g * density(sb, b.state);
  b = solve(Species::Boson, kb);
  f = solve(Species::Fermion, kf);
  r.boson = {b.state, b.energy, kb, basis.density_on_grid(kb)};
  r.fermion = {f.state, f.energy, kf, basis.density_on_grid(kf)};
  r.energy = r.energies.back();
  return r;
}

}  // namespace mix
