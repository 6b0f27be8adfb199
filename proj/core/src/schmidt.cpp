#include "mix/schmidt.hpp"

#include <cmath>

#include <Eigen/SVD>

#include "mix/error.hpp"

namespace mix {

SchmidtDecomposition decompose(const MixtureEigenstate& state, const SchmidtOptions& options) {
  if (state.degenerate && !options.allow_degenerate) {
    throw DegenerateStateError("eigenvalue " + std::to_string(state.energy) +
                               " belongs to a degenerate cluster; the Schmidt states are not unique");
  }
  const Mat& c = state.coefficients;
  const double norm = c.norm();
  if (std::abs(norm - 1.0) > 1e-8) throw Error("state is not normalized");

  Eigen::JacobiSVD<Mat> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vec& s = svd.singularValues();

  SchmidtDecomposition d;
  d.energy = state.energy;
  d.lambdas = s.cwiseProduct(s);
  d.bosonic = svd.matrixU();
  d.fermionic = svd.matrixV();
  for (Eigen::Index i = 0; i < d.lambdas.size(); ++i) {
    Eigen::Index arg;
    d.bosonic.col(i).cwiseAbs().maxCoeff(&arg);
    if (d.bosonic(arg, i) < 0.0) {
      d.bosonic.col(i) *= -1.0;
      d.fermionic.col(i) *= -1.0;
    }
  }
  d.kept = 0;
  d.discarded_weight = 0.0;
  for (Eigen::Index i = 0; i < d.lambdas.size(); ++i) {
    if (d.lambdas[i] >= options.lambda_floor) {
      ++d.kept;
    } else {
      d.discarded_weight += d.lambdas[i];
    }
  }
  for (int i = 0; i + 1 < d.kept; ++i) {
    if (std::abs(d.lambdas[i] - d.lambdas[i + 1]) < options.degeneracy_gap) d.near_degenerate.push_back(i);
  }
  return d;
}

Mat SchmidtDecomposition::reconstruct(int rank) const {
  const Vec w = sqrt_lambdas().head(rank);
  return bosonic.leftCols(rank) * w.asDiagonal() * fermionic.leftCols(rank).transpose();
}

void flip_pair(SchmidtDecomposition& d, int i) {
  if (i < 0 || i >= d.lambdas.size()) throw IndexError("Schmidt index out of range");
  d.bosonic.col(i) *= -1.0;
  d.fermionic.col(i) *= -1.0;
}

Mat transition_amplitudes(const SchmidtDecomposition& d, const MixtureHamiltonian& h, int rank) {
  const int k = rank > 0 ? rank : d.kept;
  if (k > d.lambdas.size()) throw IndexError("rank exceeds the number of Schmidt pairs");
  const Mat u = d.bosonic.leftCols(k);
  const Mat v = d.fermionic.leftCols(k);
  const Mat hb = u.transpose() * h.species_hamiltonian(Species::Boson) * u;
  const Mat hf = v.transpose() * h.species_hamiltonian(Species::Fermion) * v;
  const Mat ob = u.transpose() * u;
  const Mat of = v.transpose() * v;
  Mat t = hb.cwiseProduct(of) + ob.cwiseProduct(hf);
  const double g = h.model().couplings.boson_fermion;
  if (g != 0.0) {
    const auto& rb = h.density_operators(Species::Boson);
    const auto& rf = h.density_operators(Species::Fermion);
    const Vec& w = h.interaction_weights();
    for (std::size_t q = 0; q < rb.size(); ++q) {
      const Mat ab = u.transpose() * rb[q] * u;
      const Mat af = v.transpose() * rf[q] * v;
      t += (g * w[static_cast<Eigen::Index>(q)]) * ab.cwiseProduct(af);
    }
  }
  return t;
}

Vec schmidt_projections(const SchmidtDecomposition& d, const Mat& t) {
  const Vec s = d.sqrt_lambdas().head(t.rows());
  return s.cwiseProduct(t * s);
}

std::string EntanglementReport::verdict() const {
  if (nonentangled) return "nonentangled";
  if (weakly_entangled) return "weakly entangled";
  return "not weakly entangled";
}

EntanglementReport entanglement_report(const Vec& lambdas, double threshold) {
  EntanglementReport r;
  r.threshold = threshold;
  r.sqrt_lambdas = lambdas.cwiseMax(0.0).cwiseSqrt();
  for (Eigen::Index i = 0; i < lambdas.size(); ++i) {
    if (lambdas[i] > 0.0) r.entropy -= lambdas[i] * std::log(lambdas[i]);
  }
  const double l1 = lambdas.size() > 0 ? lambdas[0] : 0.0;
  const double l2 = lambdas.size() > 1 ? lambdas[1] : 0.0;
  r.dominance_ratio = l1 > 0.0 ? std::sqrt(std::max(l2, 0.0) / l1) : 0.0;
  r.nonentangled = 1.0 - l1 < 1e-12;
  r.weakly_entangled = r.nonentangled || std::sqrt(std::max(l2, 0.0)) < threshold;
  return r;
}

EntanglementReport entanglement_report(const SchmidtDecomposition& d, double threshold) {
  EntanglementReport r = entanglement_report(Vec(d.lambdas.head(d.kept)), threshold);
  r.discarded_weight = d.discarded_weight;
  r.near_degenerate = d.near_degenerate;
  return r;
}

}  // namespace mix
