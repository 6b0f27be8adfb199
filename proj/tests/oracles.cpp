#include "oracles.hpp"

#include <cmath>
#include <mutex>
#include <tuple>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

namespace oracle {

double hermite_function(int n, double x) {
  // H_n as an explicit coefficient list.
  std::vector<long double> prev = {1.0L}, cur = {0.0L, 2.0L};
  std::vector<long double> h = n == 0 ? prev : cur;
  for (int k = 2; k <= n; ++k) {
    std::vector<long double> next(static_cast<std::size_t>(k + 1), 0.0L);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += 2.0L * cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= 2.0L * (k - 1) * prev[i];
    prev = cur;
    cur = next;
    h = cur;
  }
  long double value = 0.0L, power = 1.0L;
  for (long double c : h) {
    value += c * power;
    power *= x;
  }
  long double fact = 1.0L;
  for (int k = 2; k <= n; ++k) fact *= k;
  const long double norm = 1.0L / std::sqrt(std::pow(2.0L, n) * fact * std::sqrt(3.14159265358979323846264L));
  return static_cast<double>(norm * value * std::exp(-0.5L * x * x));
}

double integrate(const std::function<double(double)>& f, double l, int points) {
  const double h = 2.0 * l / (points - 1);
  double s = 0.5 * (f(-l) + f(l));
  for (int i = 1; i + 1 < points; ++i) s += f(-l + i * h);
  return s * h;
}

ProductFock::ProductFock(mix::Statistics statistics, int orbitals, int cutoff)
    : orbitals_(orbitals), local_(statistics == mix::Statistics::Fermi ? 2 : cutoff + 1) {
  dim_ = 1;
  for (int m = 0; m < orbitals; ++m) dim_ *= local_;
  Mat local = Mat::Zero(local_, local_);
  for (int k = 1; k < local_; ++k) local(k - 1, k) = std::sqrt(static_cast<double>(k));
  Mat z = Mat::Identity(local_, local_);
  if (statistics == mix::Statistics::Fermi) z(1, 1) = -1.0;
  for (int m = 0; m < orbitals; ++m) {
    Mat op = Mat::Ones(1, 1);
    for (int k = 0; k < orbitals; ++k) {
      const Mat& f = k < m ? z : (k == m ? local : Mat(Mat::Identity(local_, local_)));
      Mat next(op.rows() * f.rows(), op.cols() * f.cols());
      for (Eigen::Index i = 0; i < op.rows(); ++i)
        for (Eigen::Index j = 0; j < op.cols(); ++j) next.block(i * f.rows(), j * f.cols(), f.rows(), f.cols()) = op(i, j) * f;
      op = next;
    }
    a_.push_back(op);
  }
}

int ProductFock::index(const mix::Occupation& occ) const {
  int idx = 0;
  for (int m = 0; m < orbitals_; ++m) idx = idx * local_ + occ[static_cast<std::size_t>(m)];
  return idx;
}

double ProductFock::bilinear(const mix::Occupation& to, int m, int n, const mix::Occupation& from) const {
  Vec ket = Vec::Zero(dim_);
  ket[index(from)] = 1.0;
  const Vec out = annihilator(m).transpose() * (annihilator(n) * ket);
  return out[index(to)];
}

double grid_ground_energy(double g, int points, double l) {
  const double h = 2.0 * l / (points + 1);  // Dirichlet walls at +-l
  const int n = points;
  std::vector<Eigen::Triplet<double>> t;
  auto id = [n](int i, int j) { return i * n + j; };
  const double kin = 0.5 / (h * h);
  for (int i = 0; i < n; ++i) {
    const double x = -l + (i + 1) * h;
    for (int j = 0; j < n; ++j) {
      const double y = -l + (j + 1) * h;
      double diag = 4.0 * kin + 0.5 * (x * x + y * y);
      if (i == j) diag += g / h;
      t.emplace_back(id(i, j), id(i, j), diag);
      if (i > 0) t.emplace_back(id(i, j), id(i - 1, j), -kin);
      if (i + 1 < n) t.emplace_back(id(i, j), id(i + 1, j), -kin);
      if (j > 0) t.emplace_back(id(i, j), id(i, j - 1), -kin);
      if (j + 1 < n) t.emplace_back(id(i, j), id(i, j + 1), -kin);
    }
  }
  Eigen::SparseMatrix<double> a(n * n, n * n);
  a.setFromTriplets(t.begin(), t.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(a);
  Vec v = Vec::Ones(n * n).normalized();
  double e = 0.0;
  for (int it = 0; it < 500; ++it) {
    Vec w = solver.solve(v);
    w.normalize();
    const double next = w.dot(a * w);
    v = w;
    if (std::abs(next - e) < 1e-13) {
      e = next;
      break;
    }
    e = next;
  }
  return e;
}

double grid_ground_energy_extrapolated(double g, double l, int coarse) {
  // Grids with spacings h, h/2, h/4 (points = 2^k (coarse + 1) - 1).
  const int n1 = coarse, n2 = 2 * (coarse + 1) - 1, n3 = 4 * (coarse + 1) - 1;
  const double e1 = grid_ground_energy(g, n1, l);
  const double e2 = grid_ground_energy(g, n2, l);
  const double e3 = grid_ground_energy(g, n3, l);
  // E(h) = E0 + a h + b h^2 solved on h, h/2, h/4.
  return (8.0 * e3 - 6.0 * e2 + e1) / 3.0;
}

Mat two_particle_density(const mix::SpeciesSector& sector, const Vec& state, const Vec& x) {
  const int m = sector.orbitals();
  Mat phi(x.size(), m);
  for (Eigen::Index i = 0; i < x.size(); ++i)
    for (int k = 0; k < m; ++k) phi(i, k) = hermite_function(k, x[i]);
  Mat psi = Mat::Zero(x.size(), x.size());
  const bool fermi = sector.statistics() == mix::Statistics::Fermi;
  for (std::size_t c = 0; c < sector.dimension(); ++c) {
    const auto& occ = sector.config(c);
    std::vector<int> orbs;
    for (int k = 0; k < m; ++k)
      for (int r = 0; r < occ[static_cast<std::size_t>(k)]; ++r) orbs.push_back(k);
    const int i = orbs[0], j = orbs[1];
    Mat term;
    if (i == j) {
      term = phi.col(i) * phi.col(i).transpose();
    } else {
      const double s = fermi ? -1.0 : 1.0;
      term = (phi.col(i) * phi.col(j).transpose() + s * phi.col(j) * phi.col(i).transpose()) / std::sqrt(2.0);
    }
    psi += state[static_cast<Eigen::Index>(c)] * term;
  }
  return psi.cwiseAbs2();
}

Mat dense_amplitudes(const mix::SchmidtDecomposition& d, const mix::MixtureHamiltonian& h, int rank) {
  const Mat dense = h.dense();
  const Eigen::Index nb = h.boson_dimension(), nf = h.fermion_dimension();
  auto product = [&](int q) {
    Vec v(nb * nf);
    for (Eigen::Index b = 0; b < nb; ++b)
      for (Eigen::Index f = 0; f < nf; ++f) v[b * nf + f] = d.bosonic(b, q) * d.fermionic(f, q);
    return v;
  };
  std::vector<Vec> p;
  for (int q = 0; q < rank; ++q) p.push_back(product(q));
  Mat t(rank, rank);
  for (int q = 0; q < rank; ++q)
    for (int j = 0; j < rank; ++j) t(q, j) = p[static_cast<std::size_t>(q)].dot(dense * p[static_cast<std::size_t>(j)]);
  return t;
}

Mat kernel_tensor_2d(const mix::OrbitalBasis& basis, const Mat& kernel, const Vec& x) {
  const int m = basis.size();
  const Eigen::Index n = x.size();
  const double h = x[1] - x[0];
  Vec w = Vec::Constant(n, h);
  w[0] = w[n - 1] = 0.5 * h;
  Mat phi(n, m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (int k = 0; k < m; ++k) phi(i, k) = hermite_function(k, x[i]);
  Mat v(m * m, m * m);
  for (int a = 0; a < m; ++a)
    for (int c = 0; c < m; ++c) {
      const Vec left = w.cwiseProduct(phi.col(a)).cwiseProduct(phi.col(c));
      const Vec reduced = kernel.transpose() * left;  // integrate over x1
      for (int b = 0; b < m; ++b)
        for (int dd = 0; dd < m; ++dd) {
          v(a * m + b, c * m + dd) = reduced.dot(w.cwiseProduct(phi.col(b)).cwiseProduct(phi.col(dd)));
        }
    }
  return v;
}

const Solved& solved(int bosons, int fermions, int orbitals, double g_bf) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int, double>, std::unique_ptr<Solved>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(bosons, fermions, orbitals, g_bf);
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;
  mix::MixtureModel model;
  model.bosons = bosons;
  model.fermions = fermions;
  model.orbitals = orbitals;
  model.couplings.boson_fermion = g_bf;
  auto s = std::make_unique<Solved>();
  s->h = std::make_unique<mix::MixtureHamiltonian>(model);
  s->state = mix::eigenstate(*s->h, 0);
  s->d = mix::decompose(s->state);
  s->induced = std::make_unique<mix::InducedAnalysis>(s->d, *s->h);
  return *cache.emplace(key, std::move(s)).first->second;
}

}  // namespace oracle
