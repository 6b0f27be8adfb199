#pragma once

#include <filesystem>
#include <memory>
#include <vector>

#include "mix/basis.hpp"
#include "mix/eigensolver.hpp"
#include "mix/fock.hpp"
#include "mix/types.hpp"

namespace mix {

struct Couplings {
  double boson_fermion = 1.0;
  double boson_boson = 0.0;
  double fermion_fermion = 0.0;
};

/// Parameters of a trapped Bose-Fermi mixture in harmonic units.
struct MixtureModel {
  int bosons = 2;
  int fermions = 2;
  int orbitals = 14;
  Couplings couplings;
  GridSpec grid;
  int quadrature_order = 0;  // 0 -> 4 * orbitals
};

struct EnergyDecomposition {
  double kinetic = 0.0;
  double trap = 0.0;
  double boson_fermion = 0.0;
  double boson_boson = 0.0;
  double fermion_fermion = 0.0;

  double interaction() const { return boson_fermion + boson_boson + fermion_fermion; }
  double total() const { return kinetic + trap + interaction(); }
};

/// Eigenstate on the product Fock space. coefficients(b, f) multiplies |b>|f>.
struct MixtureEigenstate {
  Mat coefficients;
  double energy = 0.0;
  EnergyDecomposition parts;
  double residual = 0.0;
  bool degenerate = false;
  int index = 0;
};

/// H = H_b + H_f + H_bf on the product space, applied in factorized form.
///
/// Vectors are laid out boson-major: element b * dim_f + f. The interspecies
/// contact term is evaluated as
///   g_bf * sum_q W_q rho_b(x_q) C rho_f(x_q)^T
/// with rho_s(x) = sum_mn phi_m(x) phi_n(x) a^dagger_m a_n and a Gauss-Hermite
/// rule that integrates four-orbital products exactly.
class MixtureHamiltonian {
 public:
  explicit MixtureHamiltonian(const MixtureModel& model, std::size_t dimension_cap = 20'000'000);

  const MixtureModel& model() const { return model_; }
  const OrbitalBasis& basis() const { return *basis_; }
  std::shared_ptr<const OrbitalBasis> shared_basis() const { return basis_; }
  const SpeciesSector& sector(Species s) const { return s == Species::Boson ? bosons_ : fermions_; }

  Eigen::Index dimension() const { return dim_b_ * dim_f_; }
  Eigen::Index boson_dimension() const { return dim_b_; }
  Eigen::Index fermion_dimension() const { return dim_f_; }

  /// Single-species operator H_s: one-body h plus intraspecies contact term.
  const Mat& species_hamiltonian(Species s) const { return pick(s).hamiltonian; }
  const Mat& kinetic(Species s) const { return pick(s).kinetic; }
  const Mat& trap(Species s) const { return pick(s).trap; }
  const Mat& intraspecies(Species s) const { return pick(s).intra; }
  /// rho_s(x_q) at the interaction-rule nodes.
  const std::vector<Mat>& density_operators(Species s) const { return pick(s).density; }
  /// Weights of the interaction rule (coupling not included).
  const Vec& interaction_weights() const { return weights_; }

  /// H C for a coefficient matrix (dim_b x dim_f).
  Mat apply(const Mat& coefficients) const;
  Mat apply_interspecies(const Mat& coefficients) const;
  void apply(const Vec& x, Vec& y) const;
  LinearOperator as_operator() const;

  /// Dense matrix; intended for small product spaces and tests.
  Mat dense() const;

 private:
  struct SpeciesOperators {
    Mat hamiltonian, kinetic, trap, intra;
    std::vector<Mat> density;
  };
  const SpeciesOperators& pick(Species s) const { return s == Species::Boson ? boson_ops_ : fermion_ops_; }

  MixtureModel model_;
  std::shared_ptr<const OrbitalBasis> basis_;
  SpeciesSector bosons_;
  SpeciesSector fermions_;
  Eigen::Index dim_b_;
  Eigen::Index dim_f_;
  SpeciesOperators boson_ops_;
  SpeciesOperators fermion_ops_;
  Vec weights_;
};

EnergyDecomposition energy_decomposition(const MixtureHamiltonian& hamiltonian, const Mat& coefficients);

/// Lowest `count` eigenstates (extended over a degenerate cluster at the boundary).
std::vector<MixtureEigenstate> eigensolve(const MixtureHamiltonian& hamiltonian, int count,
                                          const EigenOptions& options = {});

/// Eigenstate number `index` (0 = ground state) with its degeneracy flag.
MixtureEigenstate eigenstate(const MixtureHamiltonian& hamiltonian, int index, const EigenOptions& options = {});

/// Product-space parity: coefficients(b, f) -> (-1)^(parity(b) + parity(f)) coefficients(b, f).
Mat parity_transform(const MixtureHamiltonian& hamiltonian, const Mat& coefficients);

struct Checkpoint {
  MixtureModel model;
  Eigen::Index boson_dimension = 0;
  Eigen::Index fermion_dimension = 0;
  std::vector<MixtureEigenstate> states;
};

/// Versioned little-endian binary checkpoint of eigenpairs.
void write_checkpoint(const std::filesystem::path& path, const MixtureHamiltonian& hamiltonian,
                      const std::vector<MixtureEigenstate>& states);
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace mix
