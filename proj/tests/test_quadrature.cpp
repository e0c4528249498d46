#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "newton_lab/chebyshev.h"
#include "newton_lab/errors.h"
#include "newton_lab/quadrature.h"
#include "oracles.h"
#include "support.h"

using namespace newton_lab;

TEST_SUITE("quadrature") {
  TEST_CASE("Gauss-Legendre integrates monomials up to degree 2k-1") {
    for (int k = 1; k <= 24; ++k) {
      const GaussRule& rule = gauss_legendre(k);
      for (int d = 0; d <= 2 * k - 1; ++d) {
        double s = 0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], d);
        const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
        CHECK(std::abs(s - exact) < 2e-15);
      }
    }
    CHECK_THROWS_AS(gauss_legendre(0), DomainError);
  }

  TEST_CASE("lp_norm_cube on [-1, 1]") {
    const GridSpec g;
    CHECK(lp_norm_cube(Polynomial::constant(1, 1.0), 1, 2, g).value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(lp_norm_cube(Polynomial::variable(1, 0), 1, 2, g).value == doctest::Approx(std::sqrt(2.0 / 3)).epsilon(1e-14));
    const NormResult l1 = lp_norm_cube(Polynomial::variable(1, 0), 1, 1, g);
    CHECK(l1.value == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(l1.converged);
    CHECK_THROWS_AS(lp_norm_cube(Polynomial::variable(1, 0), 1, kInfinity, g), DomainError);
    CHECK_THROWS_AS(lp_norm_cube(Polynomial::variable(1, 0), -1, 2, g), DomainError);
  }

  TEST_CASE("lp_norm_cube: monomials against closed forms in two variables") {
    const GridSpec g;
    // int_{[-2,2]^2} x^4 y^2 = (2 * 2^5 / 5) (2 * 2^3 / 3)
    const double exact = std::sqrt(2 * std::pow(2.0, 5) / 5 * 2 * std::pow(2.0, 3) / 3);
    CHECK(lp_norm_cube(Polynomial::monomial({2, 1}), 2, 2, g).value == doctest::Approx(exact).epsilon(1e-13));
  }

  TEST_CASE("sup_norm_cube") {
    const GridSpec g;
    CHECK(sup_norm_cube(chebyshev_T(4), 1, g) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(sup_norm_cube(Polynomial::monomial({1, 1}), 1, g) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sup_norm_cube(Polynomial::constant(3, {3, 4}), 1, g) == doctest::Approx(5.0).epsilon(1e-14));
    // 1 - (x - y)^2 reaches -3 at (1, -1).
    Polynomial q = Polynomial::constant(2, 1.0) - Polynomial::monomial({2, 0}) - Polynomial::monomial({0, 2}) +
                   Polynomial::monomial({1, 1}, 2.0);
    CHECK(sup_norm_cube(q, 1, g) == doctest::Approx(3.0).epsilon(1e-10));
  }

  TEST_CASE("lp_norm_body: areas and a one-dimensional case") {
    const GridSpec g;
    CHECK(lp_norm_body(Polynomial::constant(2, 1.0), ConvexBody::octahedron(2), 1, g).value ==
          doctest::Approx(2.0).epsilon(1e-6));
    CHECK(lp_norm_body(Polynomial::constant(2, 1.0), ConvexBody::ball(2), 2, g).value ==
          doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-6));
    CHECK(lp_norm_body(Polynomial::variable(1, 0), ConvexBody::cube(1), 2, g).value ==
          doctest::Approx(std::sqrt(2.0 / 3)).epsilon(1e-6));
  }

  TEST_CASE("lp_norm_body: Dirichlet moments on lambda-bodies") {
    const GridSpec g;
    for (double lam : {1.0, 1.5, 2.0, 3.0}) {
      const ConvexBody body(lam, {1.0, 1.0});
      // ||x^2 y||_2^2 = int x^4 y^2 = moment with q = (5, 3).
      const double exact = std::sqrt(oracle::dirichlet_moment({5, 3}, lam));
      CHECK(lp_norm_body(Polynomial::monomial({2, 1}), body, 2, g).value == doctest::Approx(exact).epsilon(1e-6));
    }
    const ConvexBody ball3 = ConvexBody::ball(3);
    CHECK(lp_norm_body(Polynomial::constant(3, 1.0), ball3, 1, g).value ==
          doctest::Approx(4 * std::numbers::pi / 3).epsilon(1e-6));
  }

  TEST_CASE("lp_norm_body at p = inf is a sup over the body") {
    const GridSpec g;
    // x + y over the unit disc peaks at sqrt(2).
    const Polynomial p = Polynomial::variable(2, 0) + Polynomial::variable(2, 1);
    CHECK(lp_norm_body(p, ConvexBody::ball(2), kInfinity, g).value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
    CHECK(lp_norm_body(p, ConvexBody::octahedron(2), kInfinity, g).value == doctest::Approx(1.0).epsilon(1e-8));
  }

  TEST_CASE("gram_matrix on cubes") {
    const auto g1 = gram_matrix({MultiIndex{0}, MultiIndex{1}}, 1.0);
    CHECK(g1.matrix(0, 0) == doctest::Approx(2));
    CHECK(g1.matrix(0, 1) == 0);
    CHECK(g1.matrix(1, 1) == doctest::Approx(2.0 / 3));
    const auto g2 = gram_matrix({MultiIndex{0, 0}, MultiIndex{1, 1}}, 1.0);
    CHECK(g2.matrix(0, 0) == doctest::Approx(4));
    CHECK(g2.matrix(1, 1) == doctest::Approx(4.0 / 9));
    CHECK(g2.matrix(0, 1) == 0);
    const auto g3 = gram_matrix({MultiIndex{0}, MultiIndex{1}, MultiIndex{2}}, 1.0);
    CHECK(g3.matrix(0, 2) == doctest::Approx(2.0 / 3));
    CHECK_THROWS_AS(gram_matrix({}, 1.0), DomainError);
  }

  TEST_CASE("gram_matrix over bodies matches Dirichlet moments") {
    const GridSpec g;
    const ConvexBody body(1.5, {1.0, 1.0});
    const std::vector<MultiIndex> basis{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
    const GramMatrix gm = gram_matrix(basis, body, g);
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = 0; j < basis.size(); ++j) {
        const int e0 = basis[i][0] + basis[j][0], e1 = basis[i][1] + basis[j][1];
        const double exact = (e0 % 2 || e1 % 2) ? 0.0 : oracle::dirichlet_moment({e0 + 1.0, e1 + 1.0}, 1.5);
        CHECK(std::abs(gm.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - exact) < 1e-9);
      }
  }

  TEST_CASE("Gram matrices from lattice points are positive definite") {
    const GridSpec g;
    for (const auto& body : {ConvexBody::octahedron(2), ConvexBody::ball(2), ConvexBody(3.0, {1.0, 0.5})}) {
      for (double a : {1.0, 2.0, 3.0}) {
        const auto basis = lattice_points(body, a);
        CHECK(gram_matrix(basis, 1.0).min_eigenvalue > 0);
        CHECK(gram_matrix(basis, body, g).min_eigenvalue > 0);
      }
    }
  }

  TEST_CASE("gram_solve raises on a singular matrix") {
    Eigen::MatrixXd g(2, 2);
    g << 1, 1, 1, 1;
    Eigen::VectorXcd r(2);
    r << 1, 0;
    CHECK_THROWS_AS(gram_solve(g, r), IllConditioned);
  }

  TEST_CASE("quasinorm triangle inequality") {
    std::mt19937_64 rng(17);
    const GridSpec g;
    const ConvexBody oct = ConvexBody::octahedron(2);
    for (int k = 0; k < 10; ++k) {
      const Polynomial f1 = support::random_polynomial(oct, 3, rng), f2 = support::random_polynomial(oct, 3, rng);
      for (double p : {0.5, 1.0, 2.0, kInfinity}) {
        auto norm = [&](const Polynomial& f) {
          return p == kInfinity ? sup_norm_cube(f, 1, g) : lp_norm_cube(f, 1, p, g).value;
        };
        const double pt = std::min(1.0, p);
        const double lhs = std::pow(norm(f1 + f2), pt), rhs = std::pow(norm(f1), pt) + std::pow(norm(f2), pt);
        CHECK(lhs <= rhs * (1 + 1e-7));
      }
    }
  }

  TEST_CASE("normalised lp means increase towards the sup norm") {
    std::mt19937_64 rng(23);
    const GridSpec g;
    for (int k = 0; k < 5; ++k) {
      const Polynomial f = support::random_polynomial(ConvexBody::ball(2), 3, rng);
      const double sup = sup_norm_cube(f, 1, g);
      double prev = 0;
      for (double p : {1.0, 2.0, 8.0, 64.0}) {
        const double mean = lp_norm_cube(f, 1, p, g).value * std::pow(4.0, -1 / p);
        CHECK(mean >= prev * (1 - 1e-10));
        CHECK(mean <= sup * (1 + 1e-10));
        prev = mean;
      }
      CHECK(prev > 0.8 * sup);
    }
  }

  TEST_CASE("grid spec validation") {
    GridSpec g;
    g.points_per_axis = 1;
    CHECK_THROWS_AS(g.validate(), DomainError);
    g.points_per_axis = 16;
    g.refinement_levels = 30;
    CHECK_THROWS_AS(g.validate(), DomainError);
  }
}
