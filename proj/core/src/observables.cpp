#include "mix/observables.hpp"

#include <cmath>
#include <limits>

#include "mix/error.hpp"

namespace mix {

namespace {

void check_states(const SpeciesSector& sector, const Mat& states) {
  if (states.rows() != static_cast<Eigen::Index>(sector.dimension())) {
    throw ShapeError("states do not match sector dimension");
  }
}

}  // namespace

Mat one_body_density_matrix(const SpeciesSector& sector, const Mat& states) {
  check_states(sector, states);
  return sector.one_body().transition(states, states);
}

Mat two_body_density_matrix(const SpeciesSector& sector, const Mat& states) {
  check_states(sector, states);
  if (sector.particles() < 2) throw ObservableError("two-body density needs at least two particles");
  return sector.pairs().density(states);
}

Vec rho1_grid(const SpeciesSector& sector, const Mat& states, const OrbitalBasis& basis) {
  if (sector.particles() < 1) throw ObservableError("one-body density needs at least one particle");
  return basis.density_on_grid(one_body_density_matrix(sector, states)) / sector.particles();
}

Mat rho2_grid(const SpeciesSector& sector, const Mat& states, const OrbitalBasis& basis) {
  const Mat d2 = two_body_density_matrix(sector, states);
  const int m = basis.size();
  const Mat& phi = basis.grid_table();
  const Eigen::Index n = phi.rows();
  // P[x, (i,k)] = phi_i(x) phi_k(x); rho2 = P D2' P^T with D2'[(i,k),(j,l)] = D2[(i,j),(k,l)].
  Mat p(n, m * m);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k) p.col(i * m + k) = phi.col(i).cwiseProduct(phi.col(k));
  Mat r(m * m, m * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) r(i * m + k, j * m + l) = d2(i * m + j, k * m + l);
  Mat out = p * r * p.transpose();
  const double norm = static_cast<double>(sector.particles()) * (sector.particles() - 1);
  out /= norm;
  Mat sym = 0.5 * (out + out.transpose());
  return sym;
}

Mat g2_grid(const Vec& rho1, const Mat& rho2, double density_floor) {
  if (rho2.rows() != rho1.size() || rho2.cols() != rho1.size()) throw ShapeError("rho1 and rho2 sizes differ");
  const double cut = density_floor * rho1.maxCoeff();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  Mat g(rho2.rows(), rho2.cols());
  for (Eigen::Index b = 0; b < g.cols(); ++b)
    for (Eigen::Index a = 0; a < g.rows(); ++a) {
      g(a, b) = (rho1[a] > cut && rho1[b] > cut) ? rho2(a, b) / (rho1[a] * rho1[b]) : nan;
    }
  return g;
}

std::string name(Provenance p) {
  switch (p) {
    case Provenance::Full:
      return "full";
    case Provenance::Smf:
      return "smf";
    case Provenance::Effective:
      return "effective";
    case Provenance::Schmidt1:
      return "schmidt1";
  }
  return "unknown";
}

CorrelationSet correlations(const SpeciesSector& sector, const Mat& states, const OrbitalBasis& basis,
                            Provenance provenance, double density_floor) {
  CorrelationSet c;
  c.provenance = provenance;
  c.rho1 = rho1_grid(sector, states, basis);
  c.rho2 = rho2_grid(sector, states, basis);
  c.g2 = g2_grid(c.rho1, c.rho2, density_floor);
  return c;
}

Vec diagonal_cut(const Mat& kernel) { return kernel.diagonal(); }

Vec antidiagonal_cut(const Mat& kernel) {
  const Eigen::Index n = kernel.rows();
  Vec out(n);
  for (Eigen::Index i = 0; i < n; ++i) out[i] = kernel(i, n - 1 - i);
  return out;
}

std::string sign_pattern(const Vec& values, double dead_band) {
  std::string out;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double d = values[i] - 1.0;
    if (std::isnan(d) || std::abs(d) < dead_band) continue;
    const char c = d > 0.0 ? '+' : '-';
    if (out.empty() || out.back() != c) out += c;
  }
  return out;
}

}  // namespace mix
