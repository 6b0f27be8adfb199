#include "mix/induced.hpp"

#include <algorithm>
#include <cmath>

#include "mix/error.hpp"

namespace mix {

namespace {

Vec expand(const Mat& table, const Mat& d) { return (table * d).cwiseProduct(table).rowwise().sum(); }

}  // namespace

Vec gamma_grid(const SchmidtDecomposition& d, const SpeciesSector& sector, Species species,
               const OrbitalBasis& basis, int i, int j) {
  if (i < 0 || j < 0 || i >= d.kept || j >= d.kept) throw IndexError("Schmidt index outside the kept rank");
  const Mat& v = d.vectors(species);
  return basis.density_on_grid(one_body_transition(sector, v.col(i), v.col(j)));
}

InducedAnalysis::InducedAnalysis(const SchmidtDecomposition& d, const MixtureHamiltonian& h,
                                 const InducedOptions& options)
    : options_(options), basis_(h.shared_basis()), coupling_(h.model().couplings.boson_fermion) {
  if (d.bosonic.rows() != h.boson_dimension() || d.fermionic.rows() != h.fermion_dimension()) {
    throw ShapeError("Schmidt decomposition does not match the Hamiltonian");
  }
  rank_ = d.kept;
  if (options_.max_terms > 0) rank_ = std::min(rank_, options_.max_terms);
  if (rank_ < 1) throw Error("empty Schmidt decomposition");
  sqrt_lambda_ = d.sqrt_lambdas().head(rank_);

  const Mat u = d.bosonic.leftCols(rank_);
  const Mat v = d.fermionic.leftCols(rank_);
  const OneBodyTable& ob = h.sector(Species::Boson).one_body();
  const OneBodyTable& of = h.sector(Species::Fermion).one_body();
  for (int i = 0; i < rank_; ++i) {
    d_b_.push_back(ob.transition(u.col(0), u.col(i)));
    d_f_.push_back(of.transition(v.col(0), v.col(i)));
  }
  beta_b_ = u.transpose() * (h.species_hamiltonian(Species::Boson) * u.col(0));
  beta_f_ = v.transpose() * (h.species_hamiltonian(Species::Fermion) * v.col(0));

  const Quadrature& q = basis_->rule(2);
  const Mat& phi = basis_->rule_table(2);
  ttilde_.resize(rank_);
  for (int i = 0; i < rank_; ++i) {
    ttilde_[i] = q.weights.dot(expand(phi, d_b_[i]).cwiseProduct(expand(phi, d_f_[i])));
  }
  amplitudes_ = transition_amplitudes(d, h, rank_);

  const double tmax = rank_ > 1 ? ttilde_.tail(rank_ - 1).cwiseAbs().maxCoeff() : 0.0;
  const Mat& table = basis_->grid_table();
  for (int i = 1; i < rank_; ++i) {
    InducedTerm t;
    t.index = i;
    t.sqrt_lambda = sqrt_lambda_[i];
    t.ttilde = ttilde_[i];
    t.beta_boson = beta_b_[i];
    t.beta_fermion = beta_f_[i];
    const double gap = d.energy - amplitudes_(i, i);
    t.first_order_ratio = sqrt_lambda_[0] * coupling_ * ttilde_[i] / (sqrt_lambda_[i] * gap);
    if (std::abs(ttilde_[i]) <= options_.denominator_floor * tmax || ttilde_[i] == 0.0) {
      if (options_.strict) {
        throw SmallDenominatorError("t~_1" + std::to_string(i + 1) + " = " + std::to_string(ttilde_[i]) +
                                        " is below the denominator floor",
                                    i);
      }
      t.status = "small-denominator";
    } else if (!(std::abs(1.0 - t.first_order_ratio) <= options_.first_order_tolerance)) {
      t.status = "higher-order";
    } else {
      t.status = "active";
      t.active = true;
    }
    if (t.active) {
      const double c = sqrt_lambda_[i] / ttilde_[i];
      const Vec gb = expand(table, d_b_[i]);
      const Vec gf = expand(table, d_f_[i]);
      // Contributions to species s use the partner's gamma and beta.
      t.vno_fermion = (c * (coupling_ * gb.cwiseProduct(gb) + 2.0 * beta_b_[i] * gb)).cwiseAbs().maxCoeff();
      t.vno_boson = (c * (coupling_ * gf.cwiseProduct(gf) + 2.0 * beta_f_[i] * gf)).cwiseAbs().maxCoeff();
      t.hind_fermion = std::abs(2.0 * coupling_ * c) * gb.cwiseAbs2().maxCoeff();
      t.hind_boson = std::abs(2.0 * coupling_ * c) * gf.cwiseAbs2().maxCoeff();
    }
    terms_.push_back(std::move(t));
  }
}

const Mat& InducedAnalysis::transition(Species s, int i) const {
  if (i < 0 || i >= rank_) throw IndexError("Schmidt index outside the kept rank");
  return transitions(s)[static_cast<std::size_t>(i)];
}

Vec InducedAnalysis::gamma(Species s, int i) const { return expand(basis_->grid_table(), transition(s, i)); }

std::vector<int> InducedAnalysis::active_terms() const {
  std::vector<int> out;
  for (const auto& t : terms_)
    if (t.active) out.push_back(t.index);
  return out;
}

Vec InducedAnalysis::evaluate(const Mat& table, Species s, bool no_term) const {
  const std::vector<Mat>& dp = transitions(partner(s));
  const Vec& bp = beta(partner(s));
  if (!no_term) return coupling_ * expand(table, dp[0]);
  Vec out = Vec::Zero(table.rows());
  for (const auto& t : terms_) {
    if (!t.active) continue;
    const Vec gi = expand(table, dp[static_cast<std::size_t>(t.index)]);
    const double c = sqrt_lambda_[t.index] / ttilde_[t.index];
    out += c * (coupling_ * gi.cwiseProduct(gi) + 2.0 * bp[t.index] * gi);
  }
  return out;
}

Vec InducedAnalysis::v1(Species s) const { return evaluate(basis_->grid_table(), s, false); }
Vec InducedAnalysis::vno(Species s) const { return evaluate(basis_->grid_table(), s, true); }

Vec InducedAnalysis::veff(Species s) const {
  const Vec& x = basis_->grid().x();
  return 0.5 * x.cwiseAbs2() + v1(s) + vno(s);
}

Vec InducedAnalysis::v1_at_nodes(Species s, int power) const {
  return evaluate(basis_->rule_table(power), s, false);
}

Vec InducedAnalysis::vno_at_nodes(Species s, int power) const {
  return evaluate(basis_->rule_table(power), s, true);
}

SeparableKernel InducedAnalysis::kernel(Species s) const {
  const std::vector<Mat>& dp = transitions(partner(s));
  SeparableKernel k;
  std::vector<double> c;
  for (const auto& t : terms_) {
    if (!t.active) continue;
    c.push_back(2.0 * coupling_ * sqrt_lambda_[t.index] / ttilde_[t.index]);
    k.factors.push_back(dp[static_cast<std::size_t>(t.index)]);
  }
  k.coefficients = Eigen::Map<const Vec>(c.data(), static_cast<Eigen::Index>(c.size()));
  return k;
}

Mat InducedAnalysis::hind(Species s, int stride) const {
  if (stride < 1) throw Error("kernel stride must be positive");
  const SeparableKernel k = kernel(s);
  const Mat& full = basis_->grid_table();
  const Eigen::Index n = (full.rows() - 1) / stride + 1;
  Mat table(n, full.cols());
  for (Eigen::Index r = 0; r < n; ++r) table.row(r) = full.row(r * stride);
  Mat f(n, k.size());
  for (int i = 0; i < k.size(); ++i) f.col(i) = expand(table, k.factors[static_cast<std::size_t>(i)]);
  Mat out = Mat::Zero(n, n);
  for (Eigen::Index b = 0; b < n; ++b) {
    for (Eigen::Index a = 0; a <= b; ++a) {
      double acc = 0.0;
      for (int i = 0; i < k.size(); ++i) acc += k.coefficients[i] * f(a, i) * f(b, i);
      out(a, b) = acc;
      out(b, a) = acc;
    }
  }
  return out;
}

}  // namespace mix
