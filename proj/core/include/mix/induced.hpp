#pragma once

#include <string>
#include <vector>

#include "mix/hamiltonian.hpp"
#include "mix/schmidt.hpp"

namespace mix {

struct InducedOptions {
  /// Terms with |t~_1i| below floor * max_j |t~_1j| are dropped.
  double denominator_floor = 1e-12;
  /// A term i is kept when sqrt(lambda_i) agrees with its first-order estimate
  ///   sqrt(lambda_1) g t~_1i / (E - t_ii)
  /// to within this relative tolerance. Infinity disables the filter.
  double first_order_tolerance = 0.5;
  /// Only Schmidt indices below this count enter the sums (0 = all kept pairs).
  int max_terms = 0;
  /// Throw SmallDenominatorError instead of dropping terms under the floor.
  bool strict = false;
};

/// Diagnostics for one Schmidt index i >= 1 (0-based; index 0 is the dominant pair).
struct InducedTerm {
  int index = 0;
  double sqrt_lambda = 0.0;
  double ttilde = 0.0;
  double beta_boson = 0.0;
  double beta_fermion = 0.0;
  double first_order_ratio = 0.0;
  bool active = false;
  std::string status;           // "active", "small-denominator", "higher-order", "truncated"
  double vno_boson = 0.0;       // max |contribution| to V_no of each species
  double vno_fermion = 0.0;
  double hind_boson = 0.0;      // max |contribution| to H_ind of each species
  double hind_fermion = 0.0;
};

/// Separable kernel H(x1, x2) = sum_k c_k f_k(x1) f_k(x2) with f_k = sum_mn D_k,mn phi_m phi_n.
struct SeparableKernel {
  Vec coefficients;
  std::vector<Mat> factors;

  int size() const { return static_cast<int>(factors.size()); }
};

/// Transition density gamma_ij(x) of one species on the basis grid. i, j index Schmidt pairs.
Vec gamma_grid(const SchmidtDecomposition& decomposition, const SpeciesSector& sector, Species species,
               const OrbitalBasis& basis, int i, int j);

/// Entanglement-induced potentials and interactions for both species.
///
/// Quantities for species s are built from the partner species:
///   V1_s   = g gamma_11
///   Vno_s  = sum_i sqrt(lambda_i)/t~_1i [g gamma_1i^2 + 2 beta_1i gamma_1i]
///   Hind_s = sum_i 2 g sqrt(lambda_i)/t~_1i gamma_1i(x1) gamma_1i(x2)
/// where gamma and beta belong to the partner species.
class InducedAnalysis {
 public:
  InducedAnalysis(const SchmidtDecomposition& decomposition, const MixtureHamiltonian& hamiltonian,
                  const InducedOptions& options = {});

  int rank() const { return rank_; }
  double coupling() const { return coupling_; }
  const InducedOptions& options() const { return options_; }
  const OrbitalBasis& basis() const { return *basis_; }
  const Grid& grid() const { return basis_->grid(); }

  /// Orbital-space transition density D_1i of species s (<psi_1| a^dagger_m a_n |psi_i>).
  const Mat& transition(Species s, int i) const;
  /// gamma_1i of species s on the grid.
  Vec gamma(Species s, int i) const;
  /// t~_1i = integral gamma_1i^b gamma_1i^f.
  const Vec& ttilde() const { return ttilde_; }
  /// beta_1i of species s: <psi_1| H_s |psi_i>.
  const Vec& beta(Species s) const { return s == Species::Boson ? beta_b_ : beta_f_; }
  /// Full transition amplitudes t_qj over the kept pairs.
  const Mat& amplitudes() const { return amplitudes_; }

  const std::vector<InducedTerm>& terms() const { return terms_; }
  std::vector<int> active_terms() const;

  /// Induced potentials of species s on the grid.
  Vec v1(Species s) const;
  Vec vno(Species s) const;
  Vec veff(Species s) const;
  /// Same potentials at the nodes of basis().rule(power).
  Vec v1_at_nodes(Species s, int power) const;
  Vec vno_at_nodes(Species s, int power) const;

  /// Induced two-body kernel of species s.
  SeparableKernel kernel(Species s) const;
  /// Kernel sampled on the grid; exactly symmetric. `stride` thins the grid.
  Mat hind(Species s, int stride = 1) const;

 private:
  Species partner(Species s) const { return other(s); }
  const std::vector<Mat>& transitions(Species s) const { return s == Species::Boson ? d_b_ : d_f_; }
  Vec evaluate(const Mat& table, Species s, bool no_term) const;

  InducedOptions options_;
  std::shared_ptr<const OrbitalBasis> basis_;
  double coupling_;
  int rank_;
  Vec sqrt_lambda_;
  std::vector<Mat> d_b_;
  std::vector<Mat> d_f_;
  Vec ttilde_;
  Vec beta_b_;
  Vec beta_f_;
  Mat amplitudes_;
  std::vector<InducedTerm> terms_;
};

}  // namespace mix
