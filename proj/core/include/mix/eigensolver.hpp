#pragma once

#include <cstdint>
#include <functional>

#include "mix/types.hpp"

namespace mix {

/// y = A x for a real symmetric operator of the given dimension.
struct LinearOperator {
  Eigen::Index dimension = 0;
  std::function<void(const Vec& x, Vec& y)> apply;
};

struct EigenOptions {
  /// Use a dense solver at or below this dimension.
  Eigen::Index dense_cutoff = 4000;
  /// Krylov subspace size; 0 picks max(40, 2 * wanted + 20).
  int krylov_dim = 0;
  int max_restarts = 500;
  /// Ritz-residual estimate that counts as converged.
  double tolerance = 1e-11;
  /// Final explicit residual ||Av - ev|| each pair must meet.
  double residual_limit = 1e-9;
  /// Eigenvalues closer than this are treated as one degenerate cluster.
  double degeneracy_gap = 1e-10;
};

struct EigenResult {
  Vec values;               // ascending
  Mat vectors;              // columns, unit norm, largest-|entry| positive
  Vec residuals;            // ||A v - e v||
  std::vector<bool> degenerate;
  int matvecs = 0;
};

/// Lowest `count` eigenpairs of a symmetric operator, extended to cover the
/// whole degenerate cluster at the boundary.
///
/// Dense path at or below `dense_cutoff`; otherwise thick-restart Lanczos with
/// full (twice-applied) reorthogonalization, started from the normalized
/// all-ones vector. Every Krylov run is followed by a deflated probe from an
/// independent deterministic vector, so eigenvectors orthogonal to the start
/// vector (symmetry sectors, degenerate partners) are not silently missed.
/// Throws ConvergenceError carrying the worst residual when the iteration stalls.
EigenResult lowest_eigenpairs(const LinearOperator& op, int count, const EigenOptions& options = {});

/// Dense variant on an explicit symmetric matrix (same sign and degeneracy conventions).
EigenResult lowest_eigenpairs(const Mat& matrix, int count, double degeneracy_gap = 1e-10);

/// Flip v so that its largest-magnitude entry (first one on ties) is positive.
void fix_sign(Eigen::Ref<Vec> v);

/// Deterministic pseudo-random unit vector (platform-independent bit stream).
Vec deterministic_vector(Eigen::Index dimension, std::uint64_t seed);

}  // namespace mix
