#include "mix/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "mix/error.hpp"

namespace mix {

namespace {

// phi_0..phi_{count-1} at x via
//   phi_{n+1} = sqrt(2/(n+1)) x phi_n - sqrt(n/(n+1)) phi_{n-1}
void fill_orbitals(int count, double x, double* out) {
  if (count <= 0) return;
  out[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  if (count == 1) return;
  out[1] = std::sqrt(2.0) * x * out[0];
  for (int n = 1; n + 1 < count; ++n) {
    const double nn = static_cast<double>(n);
    out[n + 1] = std::sqrt(2.0 / (nn + 1.0)) * x * out[n] - std::sqrt(nn / (nn + 1.0)) * out[n - 1];
  }
}

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

double eval_orbital(int n, double x) {
  if (n < 0) throw IndexError("orbital index must be non-negative");
  std::vector<double> buf(static_cast<std::size_t>(n) + 1);
  fill_orbitals(n + 1, x, buf.data());
  return buf.back();
}

Vec eval_orbitals(int count, double x) {
  Vec out(count);
  fill_orbitals(count, x, out.data());
  return out;
}

Mat orbital_table(int count, const Vec& points) {
  Mat table(points.size(), count);
  std::vector<double> buf(static_cast<std::size_t>(count));
  for (Eigen::Index p = 0; p < points.size(); ++p) {
    fill_orbitals(count, points[p], buf.data());
    for (int n = 0; n < count; ++n) table(p, n) = buf[static_cast<std::size_t>(n)];
  }
  return table;
}

Quadrature gauss_hermite(int order, double gaussian_power) {
  if (order < 1) throw IndexError("quadrature order must be positive");
  if (!(gaussian_power > 0.0)) throw Error("gaussian power must be positive");

  // Golub-Welsch: Jacobi matrix of the Hermite weight exp(-y^2).
  Vec diag = Vec::Zero(order);
  Vec sub(std::max(order - 1, 0));
  for (int k = 1; k < order; ++k) sub[k - 1] = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Mat> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  Vec y = solver.eigenvalues();

  // Newton polish on phi_order(y) = 0 using phi_n' = sqrt(2n) phi_{n-1} - y phi_n.
  std::vector<double> buf(static_cast<std::size_t>(order) + 1);
  for (int q = 0; q < order; ++q) {
    for (int it = 0; it < 3; ++it) {
      fill_orbitals(order + 1, y[q], buf.data());
      const double f = buf[static_cast<std::size_t>(order)];
      const double df = std::sqrt(2.0 * order) * buf[static_cast<std::size_t>(order) - 1] - y[q] * f;
      if (df == 0.0) break;
      y[q] -= f / df;
    }
  }
  // Enforce exact mirror symmetry of the node set.
  for (int q = 0; q < order / 2; ++q) {
    const double a = 0.5 * (y[order - 1 - q] - y[q]);
    y[q] = -a;
    y[order - 1 - q] = a;
  }
  if (order % 2 == 1) y[order / 2] = 0.0;

  Quadrature rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const double scale = 1.0 / std::sqrt(gaussian_power);
  for (int q = 0; q < order; ++q) {
    fill_orbitals(order, y[q], buf.data());
    double s = 0.0;
    for (int n = 0; n < order; ++n) s += buf[static_cast<std::size_t>(n)] * buf[static_cast<std::size_t>(n)];
    rule.nodes[q] = y[q] * scale;
    rule.weights[q] = scale / s;
  }
  return rule;
}

Grid::Grid(GridSpec spec) : spec_(spec) {
  if (spec.points < 2 || !(spec.x_max > spec.x_min)) throw Error("grid needs at least two points and x_max > x_min");
  x_.resize(spec.points);
  spacing_ = (spec.x_max - spec.x_min) / (spec.points - 1);
  for (int i = 0; i < spec.points; ++i) {
    // Fill from both ends so a symmetric grid is mirrored bit-exactly.
    const int j = spec.points - 1 - i;
    if (i <= j) {
      x_[i] = spec.x_min + i * spacing_;
      x_[j] = spec.x_max - i * spacing_;
    }
  }
  if (symmetric()) {
    for (int i = 0; i < size() / 2; ++i) x_[mirror(i)] = -x_[i];
    if (size() % 2 == 1) x_[size() / 2] = 0.0;
  }
}

bool Grid::symmetric() const { return std::abs(spec_.x_min + spec_.x_max) <= 1e-14 * std::abs(spec_.x_max); }

double Grid::integrate(const Vec& f) const {
  if (f.size() != x_.size()) throw ShapeError("grid function has wrong length");
  return spacing_ * (f.sum() - 0.5 * (f[0] + f[f.size() - 1]));
}

int Grid::nearest(double x) const {
  const double t = (x - spec_.x_min) / spacing_;
  return std::clamp(static_cast<int>(std::lround(t)), 0, size() - 1);
}

Mat kinetic_matrix(int num_orbitals) {
  Mat t = Mat::Zero(num_orbitals, num_orbitals);
  for (int n = 0; n < num_orbitals; ++n) {
    t(n, n) = (2.0 * n + 1.0) / 4.0;
    if (n + 2 < num_orbitals) {
      t(n, n + 2) = t(n + 2, n) = -std::sqrt((n + 1.0) * (n + 2.0)) / 4.0;
    }
  }
  return t;
}

Mat trap_matrix(int num_orbitals) {
  Mat v = Mat::Zero(num_orbitals, num_orbitals);
  for (int n = 0; n < num_orbitals; ++n) {
    v(n, n) = (2.0 * n + 1.0) / 4.0;
    if (n + 2 < num_orbitals) {
      v(n, n + 2) = v(n + 2, n) = std::sqrt((n + 1.0) * (n + 2.0)) / 4.0;
    }
  }
  return v;
}

SingleParticleOperators single_particle_operators(int num_orbitals) {
  SingleParticleOperators ops;
  ops.kinetic = kinetic_matrix(num_orbitals);
  ops.trap = trap_matrix(num_orbitals);
  ops.h = ops.kinetic + ops.trap;
  return ops;
}

OrbitalBasis::OrbitalBasis(int num_orbitals, GridSpec grid, int quadrature_order)
    : num_orbitals_(num_orbitals),
      quadrature_order_(quadrature_order > 0 ? quadrature_order : 4 * num_orbitals),
      grid_(grid) {
  if (num_orbitals < 1) throw IndexError("basis needs at least one orbital");
  if (quadrature_order_ < 2 * num_orbitals_ + 2) {
    throw Error("quadrature order must be at least 2M + 2");
  }
  grid_table_ = orbital_table(num_orbitals_, grid_.x());
  for (int p = 1; p <= 3; ++p) {
    rules_[p - 1] = gauss_hermite(quadrature_order_, static_cast<double>(p));
    rule_tables_[p - 1] = orbital_table(num_orbitals_, rules_[p - 1].nodes);
  }
}

double OrbitalBasis::eval(int n, double x) const {
  if (n < 0 || n >= num_orbitals_) throw IndexError("orbital index out of range");
  return eval_orbital(n, x);
}

const Quadrature& OrbitalBasis::rule(int power) const {
  if (power < 1 || power > 3) throw IndexError("quadrature power must be 1, 2 or 3");
  return rules_[power - 1];
}

const Mat& OrbitalBasis::rule_table(int power) const {
  if (power < 1 || power > 3) throw IndexError("quadrature power must be 1, 2 or 3");
  return rule_tables_[power - 1];
}

Mat OrbitalBasis::project(int power, const Vec& values_at_nodes) const {
  const Quadrature& q = rule(power);
  const Mat& phi = rule_table(power);
  if (values_at_nodes.size() != q.size()) throw ShapeError("values do not match quadrature nodes");
  const Vec w = q.weights.cwiseProduct(values_at_nodes);
  Mat out = phi.transpose() * w.asDiagonal() * phi;
  return 0.5 * (out + out.transpose());
}

Vec OrbitalBasis::density_at_nodes(int power, const Mat& coefficients) const {
  const Mat& phi = rule_table(power);
  if (coefficients.rows() != num_orbitals_ || coefficients.cols() != num_orbitals_) {
    throw ShapeError("density coefficients must be M x M");
  }
  return (phi * coefficients).cwiseProduct(phi).rowwise().sum();
}

Vec OrbitalBasis::density_on_grid(const Mat& coefficients) const {
  if (coefficients.rows() != num_orbitals_ || coefficients.cols() != num_orbitals_) {
    throw ShapeError("density coefficients must be M x M");
  }
  return (grid_table_ * coefficients).cwiseProduct(grid_table_).rowwise().sum();
}

ContactTensor::ContactTensor(const OrbitalBasis& basis, double coupling)
    : num_orbitals_(basis.size()), coupling_(coupling) {
  const std::size_t m = static_cast<std::size_t>(num_orbitals_);
  values_.assign(binomial(m + 3, 4), 0.0);
  const Quadrature& q = basis.rule(2);
  const Mat& phi = basis.rule_table(2);
  for (int d = 0; d < num_orbitals_; ++d)
    for (int c = 0; c <= d; ++c)
      for (int b = 0; b <= c; ++b)
        for (int a = 0; a <= b; ++a) {
          if ((a + b + c + d) % 2 != 0) continue;
          double s = 0.0;
          for (int n = 0; n < q.size(); ++n) s += q.weights[n] * phi(n, a) * phi(n, b) * phi(n, c) * phi(n, d);
          values_[packed_index(a, b, c, d)] = coupling * s;
        }
}

std::size_t ContactTensor::packed_index(int i, int j, int k, int l) const {
  std::array<int, 4> s{i, j, k, l};
  std::sort(s.begin(), s.end());
  // Combinatorial number system for multisets: a <= b <= c <= d -> a < b+1 < c+2 < d+3.
  return static_cast<std::size_t>(s[0]) + binomial(static_cast<std::size_t>(s[1]) + 1, 2) +
         binomial(static_cast<std::size_t>(s[2]) + 2, 3) + binomial(static_cast<std::size_t>(s[3]) + 3, 4);
}

double ContactTensor::operator()(int i, int j, int k, int l) const {
  const int m = num_orbitals_;
  if (i < 0 || j < 0 || k < 0 || l < 0 || i >= m || j >= m || k >= m || l >= m) {
    throw IndexError("contact tensor index out of range");
  }
  return values_[packed_index(i, j, k, l)];
}

Mat ContactTensor::pair_matrix() const {
  const int m = num_orbitals_;
  Mat v(m * m, m * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) v(i * m + j, k * m + l) = values_[packed_index(i, j, k, l)];
  return v;
}

}  // namespace mix
