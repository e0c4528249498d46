#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "newton_lab/chebyshev.h"
#include "newton_lab/constants.h"
#include "newton_lab/errors.h"
#include "newton_lab/json_io.h"
#include "newton_lab/quadrature.h"
#include "oracles.h"
#include "support.h"

using namespace newton_lab;

namespace {

const GridSpec kGrid{};

// value reproduced from the returned extremal: a^{-N-m/p} |D(U)(0)| / ||U||_{L_p(Q^m(1))}.
double reproduce(const SharpConstantResult& r) {
  REQUIRE(r.extremal.has_value());
  const Polynomial& u = *r.extremal;
  const int m = u.dim();
  const double norm = r.p == kInfinity ? sup_norm_cube(u, 1, kGrid) : lp_norm_cube(u, 1, r.p, kGrid).value;
  return std::pow(r.a, -r.op.order() - (r.p == kInfinity ? 0.0 : m / r.p)) * std::abs(apply_operator_at_zero(r.op, u)) /
         norm;
}

// sqrt(L^H G^{-1} L) in the monomial basis with an LDLT solve, independent of the library's basis choice.
double monomial_rayleigh(const DiffOperator& d, double a, const ConvexBody& body) {
  const auto basis = lattice_points(body, a);
  const int n = static_cast<int>(basis.size());
  Eigen::MatrixXd g(n, n);
  Eigen::VectorXcd l(n);
  for (int i = 0; i < n; ++i) {
    l(i) = apply_operator_at_zero(d, Polynomial::monomial(basis[static_cast<std::size_t>(i)]));
    for (int j = 0; j < n; ++j) {
      double v = 1;
      for (int k = 0; k < body.dim(); ++k) {
        const int e = basis[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] +
                      basis[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
        v *= e % 2 ? 0.0 : 2.0 / (e + 1);
      }
      g(i, j) = v;
    }
  }
  const Eigen::VectorXcd x = g.cast<std::complex<double>>().ldlt().solve(l);
  return std::pow(a, -d.order() - body.dim() / 2.0) * std::sqrt(std::abs(l.dot(x)));
}

}  // namespace

TEST_SUITE("constants") {
  TEST_CASE("tilde_m at p = inf with the identity is 1") {
    for (const auto& body : {ConvexBody::cube(1), ConvexBody::octahedron(2), ConvexBody::ball(2)})
      for (double a : {1.0, 2.5, 4.0}) CHECK(tilde_m(kInfinity, DiffOperator::identity(body.dim()), a, body).value ==
                                             doctest::Approx(1.0).epsilon(1e-9));
  }

  TEST_CASE("tilde_m golden values on [-1, 1]") {
    const ConvexBody line = ConvexBody::cube(1);
    const auto r = tilde_m(2, DiffOperator::identity(1), 2, line);
    CHECK(r.value == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(r.method == ConstantMethod::gram_rayleigh);
    CHECK(r.value == doctest::Approx(oracle::labelle_sum(0, 2)).epsilon(1e-14));
    const auto s = tilde_m(kInfinity, DiffOperator::univariate(1), 3, line);
    CHECK(s.value == doctest::Approx(oracle::mu(1, 3)).epsilon(1e-9));
    CHECK(s.method == ConstantMethod::lp_discretized);
    CHECK(s.converged);
  }

  TEST_CASE("tilde_m errors") {
    const ConvexBody line = ConvexBody::cube(1);
    CHECK_THROWS_AS(tilde_m(0, DiffOperator::identity(1), 2, line), DomainError);
    CHECK_THROWS_AS(tilde_m(2, DiffOperator::identity(1), 0.5, line), DomainError);
    CHECK_THROWS_AS(tilde_m(2, DiffOperator::identity(2), 2, line), DimensionMismatch);
    CHECK_THROWS_AS(tilde_m(2, DiffOperator::univariate(3), 2, line), DomainError);
  }

  TEST_CASE("extremal reproduces the value") {
    for (double p : {2.0, kInfinity}) {
      for (const auto& [d, body, a] :
           {std::tuple{DiffOperator::univariate(2), ConvexBody::cube(1), 5.0},
            std::tuple{DiffOperator::partial({1, 1}), ConvexBody::ball(2), 3.0},
            std::tuple{DiffOperator::identity(2), ConvexBody::octahedron(2), 3.0}}) {
        const auto r = tilde_m(p, d, a, body);
        CHECK(reproduce(r) == doctest::Approx(r.value).epsilon(std::max(1e-8, 2 * r.tolerance)));
      }
    }
  }

  TEST_CASE("Rayleigh certificate at p = 2 against the monomial Gram solve") {
    std::mt19937_64 rng(31);
    for (const auto& body : {ConvexBody::cube(1), ConvexBody::octahedron(2), ConvexBody::ball(2)}) {
      for (double a : {2.0, 3.0, 4.5}) {
        DiffOperator d = body.dim() == 1 ? DiffOperator::univariate(1) : DiffOperator(2, 1);
        if (body.dim() == 2) {
          d.add_term({1, 0}, {0.5, -1});
          d.add_term({0, 1}, 2.0);
        }
        const auto r = tilde_m(2, d, a, body);
        CHECK(r.value == doctest::Approx(monomial_rayleigh(d, a, body)).epsilon(1e-9));
        // G c is proportional to conj(L) for the monomial coefficients c of U.
        const auto basis = lattice_points(body, a);
        const int n = static_cast<int>(basis.size());
        const GramMatrix gm = gram_matrix(basis, 1.0);
        Eigen::VectorXcd c(n), l(n);
        for (int i = 0; i < n; ++i) {
          c(i) = r.extremal->coefficient(basis[static_cast<std::size_t>(i)]);
          l(i) = std::conj(apply_operator_at_zero(d, Polynomial::monomial(basis[static_cast<std::size_t>(i)])));
        }
        const Eigen::VectorXcd gc = gm.matrix.cast<std::complex<double>>() * c;
        const std::complex<double> kappa = l.dot(gc) / l.squaredNorm();
        CHECK((gc - kappa * l).norm() <= 1e-9 * gc.norm());
      }
    }
  }

  TEST_CASE("discretized sup-norm problem brackets the closed form") {
    const ConvexBody line = ConvexBody::cube(1);
    for (int n = 2; n <= 9; ++n) {
      const auto r = tilde_m(kInfinity, DiffOperator::univariate(2), n, line);
      const double truth = oracle::mu(2, n);
      CHECK(r.value <= truth * (1 + 1e-9));
      CHECK(r.upper_bound >= truth * (1 - 1e-9));
      CHECK(r.tolerance <= 1e-5);
    }
  }

  TEST_CASE("scale covariance: (a, sigma) -> (a / c, c sigma) multiplies by c^{N + m/p}") {
    for (double p : {2.0, kInfinity}) {
      for (double c : {0.5, 2.0}) {
        const ConvexBody base(2.0, {1.0, 1.5});
        const ConvexBody scaled(2.0, {c, 1.5 * c});
        const DiffOperator d = DiffOperator::partial({1, 0});
        const double a = 4;
        const double v0 = tilde_m(p, d, a, base).value;
        const double v1 = tilde_m(p, d, a / c, scaled).value;
        const double expo = 1 + (p == kInfinity ? 0.0 : 2 / p);
        CHECK(v1 == doctest::Approx(std::pow(c, expo) * v0).epsilon(1e-8));
      }
    }
  }

  TEST_CASE("unscaled supremum is monotone in a") {
    const ConvexBody oct = ConvexBody::octahedron(2);
    const DiffOperator d = DiffOperator::partial({1, 1});
    for (double p : {2.0, kInfinity}) {
      double prev = 0;
      for (double a : {2.0, 2.5, 3.0, 3.7, 4.0, 5.0}) {
        const double v = tilde_m(p, d, a, oct).value * std::pow(a, 2 + (p == kInfinity ? 0.0 : 2 / p));
        CHECK(v >= prev * (1 - 1e-9));
        prev = v;
      }
    }
  }

  TEST_CASE("complex operator phase leaves the constant unchanged") {
    const ConvexBody ball = ConvexBody::ball(2);
    DiffOperator d(2, 1);
    d.add_term({1, 0}, 1.0);
    d.add_term({0, 1}, 0.5);
    DiffOperator rotated = d;
    rotated *= std::polar(1.0, 0.7);
    for (double p : {2.0, kInfinity}) {
      const auto a = tilde_m(p, d, 3, ball), b = tilde_m(p, rotated, 3, ball);
      CHECK(b.value == doctest::Approx(a.value).epsilon(1e-6));
      // Real data give real extremals.
      double imag = 0, total = 0;
      for (const auto& [beta, coef] : a.extremal->terms()) {
        imag = std::max(imag, std::abs(coef.imag()));
        total = std::max(total, std::abs(coef));
      }
      CHECK(imag <= 1e-9 * total);
    }
  }

  TEST_CASE("golden values stay bounded away from zero") {
    CHECK(tilde_m(2, DiffOperator::univariate(5), 20, ConvexBody::cube(1)).value > 1e-3);
    CHECK(tilde_m(kInfinity, DiffOperator::univariate(4), 12, ConvexBody::cube(1)).value > 1e-3);
    CHECK(tilde_m(2, DiffOperator::partial({1, 1}), 10, ConvexBody::ball(2)).value > 1e-3);
  }

  TEST_CASE("other exponents use multistart and agree with p = 2 nearby") {
    const ConvexBody line = ConvexBody::cube(1);
    const auto r2 = tilde_m(2, DiffOperator::univariate(1), 4, line);
    const auto r = tilde_m(2.0001, DiffOperator::univariate(1), 4, line);
    CHECK(r.method == ConstantMethod::multistart);
    CHECK(r.value == doctest::Approx(r2.value).epsilon(1e-3));
    // Determinism under a fixed seed.
    const auto again = tilde_m(2.0001, DiffOperator::univariate(1), 4, line);
    CHECK(again.value == r.value);
    // Other exponents reproduce their value from the extremal.
    for (double p : {1.0, 3.0}) {
      const auto q = tilde_m(p, DiffOperator::univariate(1), 4, line);
      CHECK(reproduce(q) == doctest::Approx(q.value).epsilon(1e-6));
    }
  }

  TEST_CASE("markov_m: duality with tilde_m on the octahedron") {
    const ConvexBody oct = ConvexBody::octahedron(2);
    for (double p : {2.0, kInfinity})
      for (int n : {1, 2, 4}) {
        const DiffOperator d = n >= 2 ? DiffOperator::partial({1, 1}) : DiffOperator::identity(2);
        CHECK(markov_m(p, d, n, oct).value == doctest::Approx(tilde_m(p, d, n, oct).value).epsilon(1e-6));
      }
    CHECK(markov_m(kInfinity, DiffOperator::identity(2), 3, ConvexBody::ball(2)).value ==
          doctest::Approx(1.0).epsilon(1e-6));
    CHECK(markov_m(2, DiffOperator::identity(1), 2, ConvexBody::cube(1)).value == doctest::Approx(0.75).epsilon(1e-9));
    CHECK_THROWS_AS(markov_m(2, DiffOperator::identity(1), 0, ConvexBody::cube(1)), DomainError);
  }

  TEST_CASE("trig_p_constant at p = 2") {
    const ConvexBody line = ConvexBody::cube(1);
    const auto r = trig_p_constant(2, DiffOperator::identity(1), 1, line);
    CHECK(r.value == doctest::Approx(std::sqrt(3 / (2 * std::numbers::pi))).epsilon(1e-14));
    // Random trigonometric polynomials never beat the closed form.
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-1, 1);
    double best = 0;
    for (int k = 0; k < 2000; ++k) {
      const Complex c0(u(rng), u(rng)), c1(u(rng), u(rng)), cm(u(rng), u(rng));
      // ||T||_2^2 on [-pi, pi] = 2 pi sum |c|^2.
      const double ratio = std::abs(c0 + c1 + cm) / std::sqrt(2 * std::numbers::pi * (std::norm(c0) + std::norm(c1) + std::norm(cm)));
      best = std::max(best, ratio);
    }
    CHECK(best <= r.value * (1 + 1e-12));
    CHECK(best > 0.9 * r.value);
    CHECK(trig_p_constant(2, DiffOperator::identity(1), 2000, line).value ==
          doctest::Approx(1 / std::sqrt(std::numbers::pi)).epsilon(1e-3));
    CHECK_THROWS_AS(trig_p_constant(3, DiffOperator::identity(1), 2, line), DomainError);
  }

  TEST_CASE("trig_p_constant at p = inf") {
    CHECK(trig_p_constant(kInfinity, DiffOperator::identity(2), 2, ConvexBody::ball(2)).value ==
          doctest::Approx(1.0).epsilon(1e-6));
    // Bernstein: |T'(0)| <= n ||T||, sharp for sin(n t); normalised by a^{-1} this is 1 at integer a.
    CHECK(trig_p_constant(kInfinity, DiffOperator::univariate(1), 3, ConvexBody::cube(1)).value ==
          doctest::Approx(1.0).epsilon(1e-6));
  }

  TEST_CASE("entire_e2 closed forms") {
    for (int order = 0; order <= 3; ++order)
      CHECK(entire_e2(DiffOperator::univariate(order), ConvexBody::cube(1)).value ==
            doctest::Approx(1 / std::sqrt(std::numbers::pi * (2 * order + 1))).epsilon(1e-8));
    CHECK(entire_e2(DiffOperator::identity(2), ConvexBody::cube(2)).value ==
          doctest::Approx(1 / std::numbers::pi).epsilon(1e-8));
    // Mixed partial on the disc: (2 pi)^{-1} sqrt(int t1^2 t2^2) with a Dirichlet moment.
    CHECK(entire_e2(DiffOperator::partial({1, 1}), ConvexBody::ball(2)).value ==
          doctest::Approx(std::sqrt(oracle::dirichlet_moment({3, 3}, 2)) / (2 * std::numbers::pi)).epsilon(1e-8));
    DiffOperator d = DiffOperator::partial({1, 1});
    const double base = entire_e2(d, ConvexBody::octahedron(2)).value;
    d *= Complex(3, -4);
    CHECK(entire_e2(d, ConvexBody::octahedron(2)).value == doctest::Approx(5 * base).epsilon(1e-10));
  }

  TEST_CASE("extremal_polynomial normalisation") {
    const ConvexBody line = ConvexBody::cube(1);
    const Polynomial one = extremal_polynomial(kInfinity, DiffOperator::identity(1), 3, line);
    CHECK(std::abs(one.coefficient({0}) - Complex(1)) < 1e-8);
    // Extremals at p = inf need not be unique; only the normalisation is fixed.
    CHECK(sup_norm_cube(one, 3, kGrid) == doctest::Approx(1.0).epsilon(1e-6));

    const Polynomial p2 = extremal_polynomial(2, DiffOperator::identity(1), 2, line);
    CHECK(std::abs(apply_operator_at_zero(DiffOperator::identity(1), p2) - Complex(1)) < 1e-12);
    CHECK(lp_norm_cube(p2, 2, 2, kGrid).value == doctest::Approx(1 / 0.75).epsilon(1e-10));

    const Polynomial odd = extremal_polynomial(kInfinity, DiffOperator::univariate(1), 3, line);
    CHECK(std::abs(apply_operator_at_zero(DiffOperator::univariate(1), odd) - Complex(1)) < 1e-10);
    double even = 0;
    for (const auto& [beta, c] : odd.terms())
      if (beta[0] % 2 == 0) even = std::max(even, std::abs(c));
    CHECK(even < 1e-6);
    // Equioscillation of |P| at the Chebyshev extrema of [-3, 3].
    for (double x : {-3.0, -1.5, 1.5, 3.0}) {
      const std::vector<double> pt{x};
      CHECK(std::abs(odd(pt)) == doctest::Approx(1.0).epsilon(1e-5));
    }
  }

  TEST_CASE("lift norm inequality") {
    const GridSpec g;
    CHECK(lift_norm_inequality_check(Polynomial::constant(2, 2.0), 3, 0.8, 1.0, 2, g));
    std::mt19937_64 rng(43);
    const ConvexBody oct = ConvexBody::octahedron(2);
    for (int k = 0; k < 10; ++k) {
      const Polynomial p = support::random_polynomial(oct, 2, rng);
      const double a = 2, tau = 0.8;
      CHECK(lift_norm_inequality_check(p, a, tau, a * tau / std::sqrt(2.0), 2, g));
      CHECK(lift_norm_inequality_check(p, a, tau, 0.7, 2, g));
      CHECK(lift_norm_inequality_check(p, a, tau, 0.9, kInfinity, g));
    }
    CHECK_THROWS_AS(lift_norm_inequality_check(Polynomial::constant(1, 1.0), 2, 1.2, 1, 2, g), DomainError);
    CHECK_THROWS_AS(lift_norm_inequality_check(Polynomial::constant(1, 1.0), 2, 0.5, 2, 2, g), DomainError);
  }

  TEST_CASE("convergence study: Labelle values and mu values") {
    const ConvexBody line = ConvexBody::cube(1);
    std::vector<double> as;
    for (int a = 2; a <= 20; ++a) as.push_back(a);
    const auto t = convergence_study(2, DiffOperator::identity(1), line, as, kGrid, 4);
    REQUIRE(t.rows.size() == as.size());
    for (const auto& row : t.rows)
      CHECK(row.tilde_m == doctest::Approx(oracle::labelle_sum(0, static_cast<int>(row.a))).epsilon(1e-10));
    CHECK(t.rows.back().rel_gap < t.rows.front().rel_gap);
    CHECK(t.final_gap == t.rows.back().rel_gap);

    std::vector<double> ns{3, 4, 5, 6, 7, 8, 9, 10};
    const auto inf = convergence_study(kInfinity, DiffOperator::univariate(2), line, ns, kGrid, 2);
    for (const auto& row : inf.rows) {
      CHECK(row.reference == doctest::Approx(oracle::mu(2, static_cast<int>(row.a))).epsilon(1e-12));
      CHECK(row.tilde_m == doctest::Approx(row.reference).epsilon(1e-5));
    }
    CHECK_THROWS_AS(convergence_study(2, DiffOperator::identity(1), line, {3, 2}, kGrid), DomainError);
  }

  TEST_CASE("convergence study: octahedron gap shrinks from a = 5 to a = 20") {
    const auto t = convergence_study(2, DiffOperator::identity(2), ConvexBody::octahedron(2), {5, 20}, kGrid, 2);
    CHECK(t.rows[1].rel_gap < t.rows[0].rel_gap);
  }

  TEST_CASE("result JSON layout") {
    const auto r = tilde_m(2, DiffOperator::identity(1), 2, ConvexBody::cube(1));
    const Json j = to_json(r);
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"kind", "p", "a", "N", "body", "value", "method", "tolerance", "extremal"});
    CHECK(j["kind"] == "tildeM");
    CHECK(j["method"] == "gram_rayleigh");
    CHECK(to_json(tilde_m(kInfinity, DiffOperator::identity(1), 2, ConvexBody::cube(1)))["p"] == "inf");
  }
}
