#pragma once

#include <string>
#include <vector>

#include "mix/hamiltonian.hpp"
#include "mix/types.hpp"

namespace mix {

struct SchmidtOptions {
  /// Pairs with lambda below this are dropped (their weight is reported).
  double lambda_floor = 1e-10;
  /// Neighbouring Schmidt numbers closer than this are flagged as near-degenerate.
  double degeneracy_gap = 1e-12;
  /// Decompose even when the source eigenvalue is flagged degenerate.
  bool allow_degenerate = false;
};

/// Schmidt decomposition of a mixture eigenstate across the species cut:
///   C = sum_i sqrt(lambda_i) u_i v_i^T
///
/// All min(dim_b, dim_f) pairs are stored; the first `kept` satisfy the floor.
/// Gauge: the largest-magnitude entry of every bosonic vector u_i is positive and
/// the fermionic partner follows from C.
struct SchmidtDecomposition {
  Vec lambdas;     // descending
  Mat bosonic;     // columns u_i
  Mat fermionic;   // columns v_i
  int kept = 0;
  double discarded_weight = 0.0;
  double energy = 0.0;
  std::vector<int> near_degenerate;  // i such that |lambda_i - lambda_{i+1}| < gap (0-based)

  const Mat& vectors(Species s) const { return s == Species::Boson ? bosonic : fermionic; }
  Vec sqrt_lambdas() const { return lambdas.cwiseMax(0.0).cwiseSqrt(); }
  /// Coefficients rebuilt from the first `rank` pairs.
  Mat reconstruct(int rank) const;
};

/// Throws DegenerateStateError when the state is part of a degenerate cluster.
SchmidtDecomposition decompose(const MixtureEigenstate& state, const SchmidtOptions& options = {});

/// Flip the sign of pair i (u_i and v_i together); used to probe gauge invariance.
void flip_pair(SchmidtDecomposition& decomposition, int i);

/// t_qj = <u_q v_q| H |u_j v_j> for q, j < rank (rank <= 0 selects `kept`).
Mat transition_amplitudes(const SchmidtDecomposition& decomposition, const MixtureHamiltonian& hamiltonian,
                          int rank = 0);

/// mu_q = sum_j sqrt(lambda_q lambda_j) t_qj.
Vec schmidt_projections(const SchmidtDecomposition& decomposition, const Mat& amplitudes);

struct EntanglementReport {
  Vec sqrt_lambdas;
  double entropy = 0.0;          // -sum lambda ln lambda
  double dominance_ratio = 0.0;  // sqrt(lambda_2 / lambda_1)
  double discarded_weight = 0.0;
  double threshold = 0.3;
  bool nonentangled = false;
  bool weakly_entangled = false;
  std::vector<int> near_degenerate;

  std::string verdict() const;
};

/// `threshold` is the largest sqrt(lambda_2) still called weakly entangled.
EntanglementReport entanglement_report(const SchmidtDecomposition& decomposition, double threshold = 0.3);
EntanglementReport entanglement_report(const Vec& lambdas, double threshold = 0.3);

}  // namespace mix
