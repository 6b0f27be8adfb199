#include "mix/hamiltonian.hpp"

#include <cmath>

#include "mix/error.hpp"

namespace mix {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

int config_parity(const Occupation& occ) {
  int p = 0;
  for (std::size_t m = 0; m < occ.size(); ++m) p += occ[m] * static_cast<int>(m);
  return p % 2;
}

}  // namespace

MixtureHamiltonian::MixtureHamiltonian(const MixtureModel& model, std::size_t dimension_cap)
    : model_(model),
      basis_(std::make_shared<OrbitalBasis>(model.orbitals, model.grid, model.quadrature_order)),
      bosons_(SpeciesSector::enumerate(Statistics::Bose, model.bosons, model.orbitals)),
      fermions_(SpeciesSector::enumerate(Statistics::Fermi, model.fermions, model.orbitals)),
      dim_b_(static_cast<Eigen::Index>(bosons_.dimension())),
      dim_f_(static_cast<Eigen::Index>(fermions_.dimension())) {
  if (static_cast<double>(dim_b_) * static_cast<double>(dim_f_) > static_cast<double>(dimension_cap)) {
    throw CapacityError("product dimension " + std::to_string(dim_b_) + " x " + std::to_string(dim_f_) +
                        " exceeds the configured cap");
  }
  const int m = model.orbitals;
  const SingleParticleOperators ops = single_particle_operators(m);

  // Smallest rule that is exact for four-orbital products.
  const Quadrature rule = gauss_hermite(2 * m + 2, 2.0);
  const Mat phi = orbital_table(m, rule.nodes);
  weights_ = rule.weights;

  auto build = [&](const SpeciesSector& sector, double intra_coupling, SpeciesOperators& out) {
    const OneBodyTable& table = sector.one_body();
    out.kinetic = table.operator_matrix(ops.kinetic);
    out.trap = table.operator_matrix(ops.trap);
    const auto d = static_cast<Eigen::Index>(sector.dimension());
    if (intra_coupling != 0.0 && sector.particles() >= 2) {
      out.intra = sector.pairs().operator_matrix(ContactTensor(*basis_, intra_coupling).pair_matrix());
    } else {
      out.intra = Mat::Zero(d, d);
    }
    out.hamiltonian = table.operator_matrix(ops.h) + out.intra;
    out.density.reserve(static_cast<std::size_t>(rule.size()));
    for (int q = 0; q < rule.size(); ++q) {
      const Vec p = phi.row(q).transpose();
      out.density.push_back(table.operator_matrix(p * p.transpose()));
    }
  };
  build(bosons_, model.couplings.boson_boson, boson_ops_);
  build(fermions_, model.couplings.fermion_fermion, fermion_ops_);
}

Mat MixtureHamiltonian::apply_interspecies(const Mat& c) const {
  Mat out = Mat::Zero(dim_b_, dim_f_);
  const double g = model_.couplings.boson_fermion;
  if (g == 0.0) return out;
  Mat tmp(dim_b_, dim_f_);
  for (std::size_t q = 0; q < boson_ops_.density.size(); ++q) {
    tmp.noalias() = boson_ops_.density[q] * c;
    out.noalias() += (g * weights_[static_cast<Eigen::Index>(q)]) * (tmp * fermion_ops_.density[q]);
  }
  return out;
}

Mat MixtureHamiltonian::apply(const Mat& c) const {
  if (c.rows() != dim_b_ || c.cols() != dim_f_) throw ShapeError("coefficient matrix has wrong shape");
  Mat out = boson_ops_.hamiltonian * c;
  out.noalias() += c * fermion_ops_.hamiltonian;  // H_f is symmetric
  out += apply_interspecies(c);
  return out;
}

void MixtureHamiltonian::apply(const Vec& x, Vec& y) const {
  if (x.size() != dimension()) throw ShapeError("vector has wrong dimension");
  const Mat c = Eigen::Map<const RowMat>(x.data(), dim_b_, dim_f_);
  y.resize(dimension());
  Eigen::Map<RowMat>(y.data(), dim_b_, dim_f_) = apply(c);
}

LinearOperator MixtureHamiltonian::as_operator() const {
  return {dimension(), [this](const Vec& x, Vec& y) { apply(x, y); }};
}

Mat MixtureHamiltonian::dense() const {
  const Eigen::Index n = dimension();
  Mat out(n, n);
  Vec e = Vec::Zero(n), col(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    e[i] = 1.0;
    apply(e, col);
    out.col(i) = col;
    e[i] = 0.0;
  }
  return out;
}

EnergyDecomposition energy_decomposition(const MixtureHamiltonian& h, const Mat& c) {
  auto expect = [&](const Mat& ob, const Mat& of) {
    return (c.cwiseProduct(ob * c)).sum() + (c.cwiseProduct(c * of)).sum();
  };
  EnergyDecomposition e;
  e.kinetic = expect(h.kinetic(Species::Boson), h.kinetic(Species::Fermion));
  e.trap = expect(h.trap(Species::Boson), h.trap(Species::Fermion));
  e.boson_boson = c.cwiseProduct(h.intraspecies(Species::Boson) * c).sum();
  e.fermion_fermion = c.cwiseProduct(c * h.intraspecies(Species::Fermion)).sum();
  e.boson_fermion = c.cwiseProduct(h.apply_interspecies(c)).sum();
  return e;
}

std::vector<MixtureEigenstate> eigensolve(const MixtureHamiltonian& h, int count, const EigenOptions& options) {
  const EigenResult r = lowest_eigenpairs(h.as_operator(), count, options);
  std::vector<MixtureEigenstate> out;
  out.reserve(static_cast<std::size_t>(r.values.size()));
  for (Eigen::Index i = 0; i < r.values.size(); ++i) {
    MixtureEigenstate s;
    s.coefficients = Eigen::Map<const RowMat>(r.vectors.col(i).data(), h.boson_dimension(), h.fermion_dimension());
    s.energy = r.values[i];
    s.residual = r.residuals[i];
    s.degenerate = r.degenerate[static_cast<std::size_t>(i)];
    s.index = static_cast<int>(i);
    s.parts = energy_decomposition(h, s.coefficients);
    out.push_back(std::move(s));
  }
  return out;
}

MixtureEigenstate eigenstate(const MixtureHamiltonian& h, int index, const EigenOptions& options) {
  if (index < 0) throw IndexError("state index must be non-negative");
  auto states = eigensolve(h, index + 1, options);
  if (static_cast<std::size_t>(index) >= states.size()) throw IndexError("state index beyond the product space");
  return states[static_cast<std::size_t>(index)];
}

Mat parity_transform(const MixtureHamiltonian& h, const Mat& c) {
  Mat out = c;
  const auto& sb = h.sector(Species::Boson);
  const auto& sf = h.sector(Species::Fermion);
  for (Eigen::Index b = 0; b < c.rows(); ++b) {
    const int pb = config_parity(sb.config(static_cast<std::size_t>(b)));
    for (Eigen::Index f = 0; f < c.cols(); ++f) {
      if ((pb + config_parity(sf.config(static_cast<std::size_t>(f)))) % 2 == 1) out(b, f) = -out(b, f);
    }
  }
  return out;
}

}  // namespace mix
