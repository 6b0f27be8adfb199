#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mix/basis.hpp"
#include "mix/error.hpp"
#include "oracles.hpp"

using namespace mix;

TEST_SUITE("basis") {
  TEST_CASE("ground orbital at origin") {
    CHECK(eval_orbital(0, 0.0) == doctest::Approx(std::pow(std::numbers::pi, -0.25)).epsilon(1e-14));
    CHECK(std::abs(eval_orbital(1, 0.0)) < 1e-15);
  }

  TEST_CASE("orbitals match explicit Hermite polynomials") {
    for (int n = 0; n < 20; ++n)
      for (double x : {-4.3, -1.7, -0.2, 0.0, 0.9, 2.5, 5.1}) {
        CAPTURE(n);
        CAPTURE(x);
        CHECK(std::abs(eval_orbital(n, x) - oracle::hermite_function(n, x)) < 1e-12);
      }
  }

  TEST_CASE("orbital parity") {
    for (int n = 0; n < 16; ++n)
      for (double x : {0.3, 1.1, 2.7}) {
        const double s = n % 2 == 0 ? 1.0 : -1.0;
        CHECK(std::abs(eval_orbital(n, -x) - s * eval_orbital(n, x)) < 1e-14);
      }
  }

  TEST_CASE("orbital index outside basis throws") {
    OrbitalBasis basis(6);
    CHECK_THROWS_AS(basis.eval(6, 0.0), IndexError);
    CHECK_THROWS_AS(basis.eval(-1, 0.0), IndexError);
    CHECK_NOTHROW(basis.eval(5, 0.0));
  }

  TEST_CASE("quadrature orthonormality") {
    for (int m : {4, 14, 20}) {
      OrbitalBasis basis(m);
      const Quadrature& q = basis.rule(1);
      const Mat& t = basis.rule_table(1);
      const Mat overlap = t.transpose() * q.weights.asDiagonal() * t;
      CHECK((overlap - Mat::Identity(m, m)).cwiseAbs().maxCoeff() < 1e-10);
    }
  }

  TEST_CASE("quadrature order covers four-orbital products") {
    OrbitalBasis basis(14);
    CHECK(basis.quadrature_order() >= 2 * 14 + 2);
  }

  TEST_CASE("gaussian power rules integrate moments exactly") {
    for (double k : {1.0, 2.0, 3.0}) {
      const Quadrature q = gauss_hermite(12, k);
      // integral exp(-k x^2) x^4 dx = 3/4 sqrt(pi) k^(-5/2)
      double s = 0.0;
      for (int i = 0; i < q.size(); ++i) {
        const double x = q.nodes[i];
        s += q.weights[i] * std::exp(-k * x * x) * std::pow(x, 4);
      }
      CHECK(s == doctest::Approx(0.75 * std::sqrt(std::numbers::pi) * std::pow(k, -2.5)).epsilon(1e-12));
    }
  }

  TEST_CASE("completeness sum at origin is monotone in M") {
    double prev = 0.0;
    for (int m = 12; m <= 24; ++m) {
      double s = 0.0;
      for (int n = 0; n < m; ++n) s += eval_orbital(n, 0.0) * eval_orbital(n, 0.0);
      CHECK(s >= prev);
      prev = s;
    }
  }

  TEST_CASE("grid is symmetric") {
    Grid g;
    CHECK(g.symmetric());
    for (int i = 0; i < g.size(); ++i) CHECK(g.x()[i] == -g.x()[g.mirror(i)]);
  }

  TEST_CASE("kinetic matrix entries") {
    const Mat t = kinetic_matrix(8);
    CHECK(t(0, 0) == doctest::Approx(0.25));
    CHECK(t(0, 2) == doctest::Approx(-std::sqrt(2.0) / 4.0));
    CHECK(t(0, 1) == 0.0);
    for (int n = 0; n < 8; ++n) {
      CHECK(t(n, n) == doctest::Approx((2.0 * n + 1.0) / 4.0));
      if (n + 2 < 8) CHECK(t(n + 2, n) == doctest::Approx(-std::sqrt((n + 1.0) * (n + 2.0)) / 4.0));
    }
    CHECK((t - t.transpose()).norm() == 0.0);
  }

  TEST_CASE("kinetic and trap matrices against numerical integrals") {
    const int m = 6;
    const Mat t = kinetic_matrix(m), v = trap_matrix(m);
    const double h = 1e-4;
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        const double kin = oracle::integrate([&](double x) {
          const double d2 = (oracle::hermite_function(b, x + h) - 2.0 * oracle::hermite_function(b, x) +
                             oracle::hermite_function(b, x - h)) / (h * h);
          return -0.5 * oracle::hermite_function(a, x) * d2;
        });
        const double pot = oracle::integrate(
            [&](double x) { return 0.5 * x * x * oracle::hermite_function(a, x) * oracle::hermite_function(b, x); });
        CHECK(std::abs(t(a, b) - kin) < 1e-6);
        CHECK(std::abs(v(a, b) - pot) < 1e-10);
      }
  }

  TEST_CASE("single-particle operator structure") {
    const SingleParticleOperators ops = single_particle_operators(14);
    for (int i = 0; i < 14; ++i)
      for (int j = 0; j < 14; ++j) {
        const double expected = i == j ? i + 0.5 : 0.0;
        CHECK(std::abs(ops.h(i, j) - expected) < 1e-12);
      }
    CHECK((ops.h - ops.kinetic - ops.trap).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((ops.trap - ops.trap.transpose()).norm() == 0.0);
  }

  TEST_CASE("contact tensor values and symmetry") {
    OrbitalBasis basis(8);
    ContactTensor u(basis, 1.0);
    CHECK(u(0, 0, 0, 0) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-13));
    CHECK(std::abs(u(0, 0, 0, 1)) < 1e-15);
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> pick(0, 7);
    for (int r = 0; r < 50; ++r) {
      const int i = pick(rng), j = pick(rng), k = pick(rng), l = pick(rng);
      CHECK(u(i, j, k, l) == u(j, i, l, k));
      CHECK(u(i, j, k, l) == u(k, l, i, j));
    }
  }

  TEST_CASE("contact tensor against fine real-space integrals") {
    OrbitalBasis basis(7);
    ContactTensor u(basis, 0.7);
    for (auto [i, j, k, l] : {std::array{0, 0, 0, 0}, {1, 1, 2, 0}, {6, 6, 6, 6}, {3, 5, 2, 4}, {6, 5, 1, 0}}) {
      const double ref = 0.7 * oracle::integrate([&](double x) {
        return oracle::hermite_function(i, x) * oracle::hermite_function(j, x) * oracle::hermite_function(k, x) *
               oracle::hermite_function(l, x);
      });
      CHECK(std::abs(u(i, j, k, l) - ref) < 1e-12);
    }
  }

  TEST_CASE("projection and density expansion are consistent") {
    OrbitalBasis basis(6);
    // f(x) = x^2 projected matches 2 * trap matrix.
    const Vec x = basis.rule(1).nodes;
    const Mat p = basis.project(1, x.cwiseAbs2());
    CHECK((p - 2.0 * trap_matrix(6)).cwiseAbs().maxCoeff() < 1e-12);
    Mat d = Mat::Zero(6, 6);
    d(0, 0) = 1.0;
    const Vec g = basis.density_on_grid(d);
    for (int i = 0; i < basis.grid().size(); i += 37) {
      const double xi = basis.grid().x()[i];
      CHECK(std::abs(g[i] - std::pow(oracle::hermite_function(0, xi), 2)) < 1e-14);
    }
  }
}
