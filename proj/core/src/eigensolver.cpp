#include "mix/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "mix/error.hpp"

namespace mix {

void fix_sign(Eigen::Ref<Vec> v) {
  Eigen::Index best = 0;
  double mag = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > mag * (1.0 + 1e-12)) {
      mag = a;
      best = i;
    }
  }
  if (v.size() > 0 && v[best] < 0.0) v = -v;
}

Vec deterministic_vector(Eigen::Index dimension, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Vec v(dimension);
  for (Eigen::Index i = 0; i < dimension; ++i) v[i] = static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5;
  return v.normalized();
}

namespace {

void mark_degenerate(EigenResult& r, double gap) {
  const auto n = r.values.size();
  r.degenerate.assign(static_cast<std::size_t>(n), false);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (r.values[i + 1] - r.values[i] < gap) {
      r.degenerate[static_cast<std::size_t>(i)] = true;
      r.degenerate[static_cast<std::size_t>(i + 1)] = true;
    }
  }
}

// Subtract the projection onto the columns of `basis` twice (classical Gram-Schmidt with one refinement).
void orthogonalize(const Mat& basis, Eigen::Index cols, Vec& w, Vec* coefficients = nullptr) {
  if (cols == 0) return;
  auto block = basis.leftCols(cols);
  Vec h = block.transpose() * w;
  w.noalias() -= block * h;
  Vec h2 = block.transpose() * w;
  w.noalias() -= block * h2;
  if (coefficients) *coefficients = h + h2;
}

struct KrylovOutcome {
  Vec values;
  Mat vectors;
  int matvecs = 0;
};

// Thick-restart Lanczos for the `wanted` lowest eigenpairs in the orthogonal
// complement of `locked`.
KrylovOutcome krylov_lowest(const LinearOperator& op, int wanted, const Mat& locked, Vec start,
                            const EigenOptions& opt) {
  const Eigen::Index n = op.dimension;
  const Eigen::Index free_dim = n - locked.cols();
  wanted = static_cast<int>(std::min<Eigen::Index>(wanted, free_dim));
  Eigen::Index m = opt.krylov_dim > 0 ? opt.krylov_dim : std::max<Eigen::Index>(40, 2 * wanted + 20);
  m = std::min(m, free_dim);

  KrylovOutcome out;
  Mat basis(n, m + 1);
  Mat t = Mat::Zero(m, m);
  Vec w(n);
  std::uint64_t refill_seed = 0x9e3779b97f4a7c15ULL;

  orthogonalize(locked, locked.cols(), start);
  double norm = start.norm();
  if (norm < 1e-10) {
    start = deterministic_vector(n, refill_seed++);
    orthogonalize(locked, locked.cols(), start);
    norm = start.norm();
  }
  basis.col(0) = start / norm;

  Eigen::Index kept = 0;
  double last_residual = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    double beta = 0.0;
    for (Eigen::Index j = kept; j < m; ++j) {
      op.apply(basis.col(j), w);
      ++out.matvecs;
      orthogonalize(locked, locked.cols(), w);
      Vec h;
      orthogonalize(basis, j + 1, w, &h);
      orthogonalize(locked, locked.cols(), w);
      for (Eigen::Index i = 0; i <= j; ++i) {
        t(i, j) = h[i];
        t(j, i) = h[i];
      }
      beta = w.norm();
      const double scale = std::max(1.0, t.topLeftCorner(j + 1, j + 1).cwiseAbs().maxCoeff());
      if (beta < 1e-12 * scale) {
        // Invariant subspace: continue with a fresh direction orthogonal to everything so far.
        beta = 0.0;
        if (j + 1 < free_dim) {
          for (int attempt = 0; attempt < 4; ++attempt) {
            w = deterministic_vector(n, refill_seed++);
            orthogonalize(locked, locked.cols(), w);
            orthogonalize(basis, j + 1, w);
            orthogonalize(locked, locked.cols(), w);
            if (w.norm() > 1e-8) break;
          }
        }
        const double wn = w.norm();
        if (wn < 1e-8) {
          m = j + 1;  // the whole free space is spanned
          break;
        }
        basis.col(j + 1) = w / wn;
      } else {
        basis.col(j + 1) = w / beta;
      }
    }

    Eigen::SelfAdjointEigenSolver<Mat> small(t.topLeftCorner(m, m));
    const Vec& theta = small.eigenvalues();
    const Mat& s = small.eigenvectors();
    const int k = static_cast<int>(std::min<Eigen::Index>(wanted, m));
    double worst = 0.0;
    for (int i = 0; i < k; ++i) worst = std::max(worst, std::abs(beta * s(m - 1, i)));
    last_residual = worst;
    if (worst < opt.tolerance || beta == 0.0) {
      out.values = theta.head(k);
      out.vectors = basis.leftCols(m) * s.leftCols(k);
      return out;
    }

    // Thick restart: keep the lowest Ritz vectors plus the residual direction.
    const Eigen::Index keep = std::min<Eigen::Index>(m - 1, std::max<Eigen::Index>(k + (m - k) / 2, k + 1));
    Mat ritz = basis.leftCols(m) * s.leftCols(keep);
    basis.leftCols(keep) = ritz;
    basis.col(keep) = basis.col(m);
    t.setZero();
    for (Eigen::Index i = 0; i < keep; ++i) t(i, i) = theta[i];
    kept = keep;
  }
  throw ConvergenceError("Lanczos did not converge within the restart budget", last_residual);
}

EigenResult finalize(const LinearOperator& op, Mat vectors, int matvecs, double gap) {
  EigenResult r;
  const Eigen::Index k = vectors.cols();
  r.values.resize(k);
  r.residuals.resize(k);
  Vec hv(op.dimension);
  for (Eigen::Index i = 0; i < k; ++i) {
    vectors.col(i).normalize();
    op.apply(vectors.col(i), hv);
    ++matvecs;
    r.values[i] = vectors.col(i).dot(hv);
    r.residuals[i] = (hv - r.values[i] * vectors.col(i)).norm();
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return r.values[a] < r.values[b]; });
  EigenResult sorted;
  sorted.values.resize(k);
  sorted.residuals.resize(k);
  sorted.vectors.resize(op.dimension, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto src = order[static_cast<std::size_t>(i)];
    sorted.values[i] = r.values[src];
    sorted.residuals[i] = r.residuals[src];
    sorted.vectors.col(i) = vectors.col(src);
    fix_sign(sorted.vectors.col(i));
  }
  sorted.matvecs = matvecs;
  mark_degenerate(sorted, gap);
  return sorted;
}

}  // namespace

EigenResult lowest_eigenpairs(const Mat& matrix, int count, double degeneracy_gap) {
  if (count < 1) throw Error("eigenpair count must be at least 1");
  if (matrix.rows() != matrix.cols()) throw ShapeError("matrix must be square");
  const Eigen::Index n = matrix.rows();
  Eigen::SelfAdjointEigenSolver<Mat> solver(matrix);
  if (solver.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", NAN);
  const Vec& values = solver.eigenvalues();
  Eigen::Index k = std::min<Eigen::Index>(count, n);
  while (k < n && values[k] - values[k - 1] < degeneracy_gap) ++k;
  EigenResult r;
  r.values = values.head(k);
  r.vectors = solver.eigenvectors().leftCols(k);
  r.residuals.resize(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    fix_sign(r.vectors.col(i));
    r.residuals[i] = (matrix * r.vectors.col(i) - r.values[i] * r.vectors.col(i)).norm();
  }
  mark_degenerate(r, degeneracy_gap);
  return r;
}

EigenResult lowest_eigenpairs(const LinearOperator& op, int count, const EigenOptions& options) {
  if (count < 1) throw Error("eigenpair count must be at least 1");
  const Eigen::Index n = op.dimension;
  if (n <= options.dense_cutoff) {
    Mat dense(n, n);
    Vec e = Vec::Zero(n), col(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      e[i] = 1.0;
      op.apply(e, col);
      dense.col(i) = col;
      e[i] = 0.0;
    }
    dense = 0.5 * (dense + dense.transpose()).eval();
    EigenResult r = lowest_eigenpairs(dense, count, options.degeneracy_gap);
    r.matvecs = static_cast<int>(n);
    return r;
  }

  // One extra pair to see whether the boundary sits inside a degenerate cluster.
  int wanted = static_cast<int>(std::min<Eigen::Index>(count + 1, n));
  int matvecs = 0;
  Mat found(n, 0);
  Vec values;
  std::uint64_t probe_seed = 0x243f6a8885a308d3ULL;
  for (int round = 0; round < 64; ++round) {
    if (found.cols() < wanted) {
      const Mat none(n, 0);
      KrylovOutcome run = krylov_lowest(op, wanted, none, Vec::Ones(n), options);
      matvecs += run.matvecs;
      found = run.vectors;
      values = run.values;
    }
    // Deflated probe: lowest eigenvalue orthogonal to everything found so far.
    bool extended = false;
    if (found.cols() < n) {
      KrylovOutcome probe = krylov_lowest(op, 1, found, deterministic_vector(n, probe_seed++), options);
      matvecs += probe.matvecs;
      if (probe.values.size() > 0 && probe.values[0] < values[values.size() - 1] + options.degeneracy_gap) {
        Mat merged(n, found.cols() + 1);
        merged << found, probe.vectors.col(0);
        Vec mv(values.size() + 1);
        mv << values, probe.values[0];
        found = merged;
        values = mv;
        extended = true;
      }
    }
    if (extended) {
      // Re-orthonormalize the merged set through a Rayleigh-Ritz step.
      Eigen::HouseholderQR<Mat> qr(found);
      Mat q = qr.householderQ() * Mat::Identity(n, found.cols());
      Mat hq(n, q.cols());
      Vec tmp(n);
      for (Eigen::Index i = 0; i < q.cols(); ++i) {
        op.apply(q.col(i), tmp);
        ++matvecs;
        hq.col(i) = tmp;
      }
      Mat proj = q.transpose() * hq;
      Eigen::SelfAdjointEigenSolver<Mat> rr(0.5 * (proj + proj.transpose()));
      found = q * rr.eigenvectors();
      values = rr.eigenvalues();
      continue;
    }
    // Sort and decide whether the wanted block ends inside a degenerate cluster.
    EigenResult r = finalize(op, found, matvecs, options.degeneracy_gap);
    Eigen::Index k = std::min<Eigen::Index>(count, r.values.size());
    while (k < r.values.size() && r.values[k] - r.values[k - 1] < options.degeneracy_gap) ++k;
    if (k == r.values.size() && k < n && wanted <= k) {
      wanted = static_cast<int>(std::min<Eigen::Index>(k + 2, n));
      found.resize(n, 0);
      continue;
    }
    double worst = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) worst = std::max(worst, r.residuals[i]);
    if (worst > options.residual_limit) {
      throw ConvergenceError("eigenpair residual above limit", worst);
    }
    EigenResult out;
    out.values = r.values.head(k);
    out.vectors = r.vectors.leftCols(k);
    out.residuals = r.residuals.head(k);
    out.matvecs = r.matvecs;
    mark_degenerate(out, options.degeneracy_gap);
    return out;
  }
  throw ConvergenceError("eigensolver could not settle the degenerate cluster", NAN);
}

}  // namespace mix
