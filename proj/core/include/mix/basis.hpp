#pragma once

#include <array>
#include <vector>

#include "mix/types.hpp"

namespace mix {

/// Nodes and weights such that  integral f(x) dx  ~=  sum_q weights[q] * f(nodes[q]).
struct Quadrature {
  Vec nodes;
  Vec weights;

  int size() const { return static_cast<int>(nodes.size()); }
};

/// Gauss-Hermite rule in "function" form for integrands that decay like exp(-k x^2).
///
/// The rule with `order` nodes integrates exp(-k x^2) p(x) exactly for polynomials p
/// of degree <= 2*order - 1. Products of r harmonic-oscillator orbitals carry
/// exp(-r x^2 / 2), so k = 1 handles pairs and k = 2 handles quadruples.
/// Nodes come from the Golub-Welsch eigenproblem polished by Newton steps; weights
/// use the Christoffel formula 1 / sum_n phi_n(y)^2, which avoids overflow of exp(y^2).
Quadrature gauss_hermite(int order, double gaussian_power = 1.0);

/// phi_n(x), the normalized harmonic-oscillator eigenfunction (hbar = m = omega = 1).
/// Evaluated with the normalized three-term recurrence; no factorials are formed.
double eval_orbital(int n, double x);

/// All orbitals phi_0..phi_{count-1} at x.
Vec eval_orbitals(int count, double x);

/// Rows = points, columns = orbitals.
Mat orbital_table(int count, const Vec& points);

struct GridSpec {
  double x_min = -8.0;
  double x_max = 8.0;
  int points = 401;
};

/// Uniform real-space sampling grid.
class Grid {
 public:
  explicit Grid(GridSpec spec = {});

  const Vec& x() const { return x_; }
  int size() const { return static_cast<int>(x_.size()); }
  double spacing() const { return spacing_; }
  const GridSpec& spec() const { return spec_; }

  /// Index of the point at -x[i]; valid when the grid is symmetric.
  int mirror(int i) const { return size() - 1 - i; }
  bool symmetric() const;

  /// Trapezoid rule over the grid.
  double integrate(const Vec& f) const;
  /// Index of the grid point closest to x.
  int nearest(double x) const;

 private:
  GridSpec spec_;
  Vec x_;
  double spacing_;
};

struct SingleParticleOperators {
  Mat h;        // -1/2 d^2/dx^2 + 1/2 x^2
  Mat kinetic;  // -1/2 d^2/dx^2
  Mat trap;     // 1/2 x^2
};

Mat kinetic_matrix(int num_orbitals);
Mat trap_matrix(int num_orbitals);
SingleParticleOperators single_particle_operators(int num_orbitals);

/// Harmonic-oscillator orbital basis with its quadrature rules and sampling grid.
class OrbitalBasis {
 public:
  /// `quadrature_order` <= 0 selects 4 * num_orbitals.
  explicit OrbitalBasis(int num_orbitals, GridSpec grid = {}, int quadrature_order = 0);

  int size() const { return num_orbitals_; }
  int quadrature_order() const { return quadrature_order_; }

  /// Throws IndexError when n is outside [0, size()).
  double eval(int n, double x) const;

  const Grid& grid() const { return grid_; }
  /// Orbitals sampled on the grid (grid points x orbitals).
  const Mat& grid_table() const { return grid_table_; }

  /// Rule for integrands decaying as exp(-power x^2), power in {1, 2, 3}.
  const Quadrature& rule(int power) const;
  /// Orbitals at the nodes of rule(power) (nodes x orbitals).
  const Mat& rule_table(int power) const;

  /// Orbital matrix  A_ab = integral f(x) phi_a phi_b dx  for f given at the nodes of rule(power).
  Mat project(int power, const Vec& values_at_nodes) const;

  /// f(x) = sum_mn D_mn phi_m(x) phi_n(x) evaluated at the nodes of rule(power).
  Vec density_at_nodes(int power, const Mat& coefficients) const;
  /// Same expansion sampled on the grid.
  Vec density_on_grid(const Mat& coefficients) const;

 private:
  int num_orbitals_;
  int quadrature_order_;
  Grid grid_;
  Mat grid_table_;
  std::array<Quadrature, 3> rules_;
  std::array<Mat, 3> rule_tables_;
};

/// Contact interaction tensor  U_ijkl = g * integral phi_i phi_j phi_k phi_l dx.
///
/// The integrand is invariant under every permutation of (i, j, k, l), so only
/// sorted index quadruples are stored.
class ContactTensor {
 public:
  ContactTensor(const OrbitalBasis& basis, double coupling);

  int size() const { return num_orbitals_; }
  double coupling() const { return coupling_; }
  double operator()(int i, int j, int k, int l) const;
  std::size_t stored_entries() const { return values_.size(); }

  /// Dense M^2 x M^2 form V[(i,j),(k,l)] = U_ijkl.
  Mat pair_matrix() const;

 private:
  std::size_t packed_index(int i, int j, int k, int l) const;

  int num_orbitals_;
  double coupling_;
  std::vector<double> values_;
};

inline ContactTensor contact_tensor(const OrbitalBasis& basis, double coupling) {
  return ContactTensor(basis, coupling);
}

}  // namespace mix
