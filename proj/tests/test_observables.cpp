#include <doctest.h>

#include <cmath>

#include "mix/effective.hpp"
#include "mix/error.hpp"
#include "mix/observables.hpp"
#include "oracles.hpp"

using namespace mix;

namespace {

Vec single_config(const SpeciesSector& s, const Occupation& occ) {
  Vec v = Vec::Zero(static_cast<Eigen::Index>(s.dimension()));
  v[static_cast<Eigen::Index>(s.index_of(occ))] = 1.0;
  return v;
}

double phi2(int n, double x) { return std::pow(oracle::hermite_function(n, x), 2); }

}  // namespace

TEST_SUITE("observables") {
  TEST_CASE("noninteracting densities") {
    OrbitalBasis basis(6);
    const Vec& x = basis.grid().x();
    const SpeciesSector b = enumerate(Statistics::Bose, 2, 6);
    const SpeciesSector f = enumerate(Statistics::Fermi, 2, 6);
    const Vec rb = rho1_grid(b, single_config(b, {2, 0, 0, 0, 0, 0}), basis);
    const Vec rf = rho1_grid(f, single_config(f, {1, 1, 0, 0, 0, 0}), basis);
    const Mat pb = rho2_grid(b, single_config(b, {2, 0, 0, 0, 0, 0}), basis);
    const Mat pf = rho2_grid(f, single_config(f, {1, 1, 0, 0, 0, 0}), basis);
    for (Eigen::Index i = 0; i < x.size(); i += 7) {
      CHECK(std::abs(rb[i] - phi2(0, x[i])) < 1e-14);
      CHECK(std::abs(rf[i] - 0.5 * (phi2(0, x[i]) + phi2(1, x[i]))) < 1e-14);
      CHECK(std::abs(pf(i, i)) < 1e-14);
      for (Eigen::Index j = 0; j < x.size(); j += 11) CHECK(std::abs(pb(i, j) - phi2(0, x[i]) * phi2(0, x[j])) < 1e-14);
    }
  }

  TEST_CASE("pair density against the first-quantized wavefunction") {
    OrbitalBasis basis(5, GridSpec{-6.0, 6.0, 121});
    for (auto stat : {Statistics::Bose, Statistics::Fermi}) {
      const SpeciesSector s = enumerate(stat, 2, 5);
      Vec v = Vec::LinSpaced(static_cast<Eigen::Index>(s.dimension()), 0.3, 1.7);
      v.normalize();
      const Mat rho2 = rho2_grid(s, v, basis);
      const Mat ref = oracle::two_particle_density(s, v, basis.grid().x());
      CHECK((rho2 - ref).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  TEST_CASE("normalization, symmetry and marginals of the benchmark state") {
    const auto& s = oracle::solved(2, 2, 14, 1.0);
    const OrbitalBasis& basis = s.h->basis();
    const Grid& g = basis.grid();
    for (Species sp : {Species::Boson, Species::Fermion}) {
      const Mat states = sp == Species::Boson ? Mat(s.state.coefficients) : Mat(s.state.coefficients.transpose());
      const Vec r1 = rho1_grid(s.h->sector(sp), states, basis);
      const Mat r2 = rho2_grid(s.h->sector(sp), states, basis);
      CHECK(std::abs(g.integrate(r1) - 1.0) < 1e-8);
      Vec marginal(g.size());
      for (int i = 0; i < g.size(); ++i) marginal[i] = g.integrate(r2.row(i).transpose());
      CHECK(std::abs(g.integrate(marginal) - 1.0) < 1e-8);
      CHECK((marginal - r1).cwiseAbs().maxCoeff() < 1e-8);
      CHECK((r2 - r2.transpose()).cwiseAbs().maxCoeff() < 1e-14);
      CHECK((r1 - r1.reverse()).cwiseAbs().maxCoeff() < 1e-9);
      const Mat g2 = g2_grid(r1, r2);
      const Mat g2m = g2.reverse();
      for (int i = 0; i < g.size(); ++i)
        for (int j = 0; j < g.size(); ++j)
          if (!std::isnan(g2(i, j))) CHECK(std::abs(g2(i, j) - g2m(i, j)) < 1e-9);
      if (sp == Species::Fermion) CHECK(r2.diagonal().cwiseAbs().maxCoeff() < 1e-10);
    }
  }

  TEST_CASE("fewer than two particles") {
    const SpeciesSector s = enumerate(Statistics::Bose, 1, 4);
    OrbitalBasis basis(4);
    CHECK_THROWS_AS(rho2_grid(s, single_config(s, {1, 0, 0, 0}), basis), ObservableError);
    CHECK_THROWS_AS(two_body_density_matrix(s, single_config(s, {1, 0, 0, 0})), ObservableError);
  }

  TEST_CASE("product states have unit bosonic g2") {
    OrbitalBasis basis(6);
    const SpeciesSector b = enumerate(Statistics::Bose, 3, 6);
    const auto c = correlations(b, single_config(b, {3, 0, 0, 0, 0, 0}), basis, Provenance::Full);
    // three bosons in one orbital: rho2 / rho1^2 = 1 after the per-pair normalization
    double worst = 0.0;
    for (Eigen::Index i = 0; i < c.g2.size(); ++i)
      if (!std::isnan(c.g2.reshaped()[i])) worst = std::max(worst, std::abs(c.g2.reshaped()[i] - 1.0));
    CHECK(worst < 1e-12);
  }

  TEST_CASE("SMF bosonic pair correlation is flat") {
    const auto& s = oracle::solved(2, 2, 10, 1.0);
    const SmfResult r = smf_solve(*s.h);
    const auto c = correlations(s.h->sector(Species::Boson), r.boson.state, s.h->basis(), Provenance::Smf);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < c.g2.size(); ++i)
      if (!std::isnan(c.g2.reshaped()[i])) worst = std::max(worst, std::abs(c.g2.reshaped()[i] - 1.0));
    CHECK(worst < 1e-8);
  }

  TEST_CASE("masking in the tails") {
    Vec r1(3);
    r1 << 1e-9, 1.0, 0.5;
    Mat r2 = Mat::Constant(3, 3, 0.25);
    const Mat g2 = g2_grid(r1, r2);
    CHECK(std::isnan(g2(0, 1)));
    CHECK(std::isnan(g2(1, 0)));
    CHECK(g2(1, 2) == doctest::Approx(0.5));
  }

  TEST_CASE("cuts and sign patterns") {
    Mat k(3, 3);
    k << 1, 2, 3, 4, 5, 6, 7, 8, 9;
    CHECK(diagonal_cut(k) == Vec::LinSpaced(3, 1, 9));
    Vec anti(3);
    anti << 3, 5, 7;
    CHECK(antidiagonal_cut(k) == anti);
    Vec v(7);
    v << 1.2, 1.1, 1.001, 0.9, 0.8, 1.3, std::nan("");
    CHECK(sign_pattern(v, 5e-3) == "+-+");
    CHECK(sign_pattern(Vec::Ones(4), 5e-3) == "");
  }

  TEST_CASE("density matrices") {
    const SpeciesSector f = enumerate(Statistics::Fermi, 2, 4);
    const Vec v = single_config(f, {1, 0, 1, 0});
    const Mat d = one_body_density_matrix(f, v);
    CHECK(d.trace() == doctest::Approx(2.0));
    const Mat d2 = two_body_density_matrix(f, v);
    CHECK(d2.trace() == doctest::Approx(2.0));  // N (N - 1)
    CHECK(d2(0 * 4 + 2, 0 * 4 + 2) == doctest::Approx(1.0));
    CHECK(d2(0 * 4 + 2, 2 * 4 + 0) == doctest::Approx(-1.0));
  }
}
