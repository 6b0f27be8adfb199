#pragma once

#include <vector>

#include "mix/hamiltonian.hpp"
#include "mix/induced.hpp"
#include "mix/schmidt.hpp"

namespace mix {

/// Single-species Hamiltonian  H_s + V1 + Vno + H_ind  on the species Fock sector.
struct EffectiveModel {
  Species species = Species::Boson;
  SpeciesSector sector;
  /// h + projected V1 + Vno (orbital space).
  Mat one_body;
  /// Projected induced potential alone.
  Mat induced_potential;
  /// Separable induced kernel (orbital-space factors).
  SeparableKernel kernel;
  /// V[(a,b),(c,d)] = integral phi_a(x1) phi_b(x2) H_ind(x1,x2) phi_c(x1) phi_d(x2).
  Mat two_body;
  /// Full operator on the sector.
  Mat hamiltonian;
  /// Dominant Schmidt state of the species and its energy under `hamiltonian`.
  Vec reference;
  double e1 = 0.0;
};

/// Throws DependencyError when `induced` is null or was built from another decomposition.
EffectiveModel build_effective(const InducedAnalysis* induced, const SchmidtDecomposition& decomposition,
                               const MixtureHamiltonian& hamiltonian, Species species);
EffectiveModel build_effective(const InducedAnalysis& induced, const SchmidtDecomposition& decomposition,
                               const MixtureHamiltonian& hamiltonian, Species species);

/// Orbital tensor of a separable kernel, V[(a,b),(c,d)] = sum_k c_k A^k_ac A^k_bd.
Mat separable_tensor(const OrbitalBasis& basis, const SeparableKernel& kernel);

struct EffectiveSolution {
  Vec spectrum;         // all eigenvalues, ascending
  Mat low_states;       // lowest `count` eigenvectors
  int selected = 0;     // index into spectrum
  Vec state;
  double energy = 0.0;
  double e1 = 0.0;
  double fidelity = 0.0;          // |<selected|reference>|
  bool ambiguous = false;
  int alternate = -1;             // second candidate when ambiguous
  Vec alternate_state;
};

/// Diagonalize the effective model and select the eigenvalue closest to E1.
/// Equidistant candidates (within tie_tolerance) raise the ambiguity flag.
EffectiveSolution solve_effective(const EffectiveModel& model, int count = 6, double tie_tolerance = 1e-10);

struct SmfOptions {
  double mixing = 0.5;
  double tolerance = 1e-10;
  int max_iterations = 500;
};

struct SmfSpecies {
  Vec state;
  double energy = 0.0;           // eigenvalue in h + V
  Mat potential;                 // orbital coefficients K: V(x) = sum K_mn phi_m phi_n
  Vec potential_grid;
};

struct SmfResult {
  SmfSpecies boson;
  SmfSpecies fermion;
  int iterations = 0;
  std::vector<double> residuals;
  std::vector<double> energies;  // product-state energy per iteration
  double energy = 0.0;

  const SmfSpecies& species(Species s) const { return s == Species::Boson ? boson : fermion; }
};

/// Damped self-consistent product-state solution. Each species is solved exactly
/// (full diagonalization in its sector) in the trap plus g times the partner density.
/// Throws ConvergenceError when max_iterations is exceeded.
SmfResult smf_solve(const MixtureHamiltonian& hamiltonian, const SmfOptions& options = {});

}  // namespace mix
