#include "newton_lab/approx.h"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "newton_lab/errors.h"
#include "newton_lab/quadrature.h"

namespace newton_lab {

namespace {

constexpr int kMaxRemezIterations = 100;
constexpr double kLevelTolerance = 1e-10;
constexpr int kExpGridPoints = 10'000;

double clenshaw(const std::vector<double>& c, double t) {
  double b1 = 0, b2 = 0;
  for (std::size_t k = c.size(); k-- > 1;) {
    const double b0 = 2 * t * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + c[0];
}

Polynomial chebyshev_to_monomial(const std::vector<double>& c, double gamma) {
  // Monomial coefficients of T_k(t), t = x / gamma, by the three-term recurrence.
  const std::size_t n = c.size();
  std::vector<double> prev(n, 0.0), cur(n, 0.0), total(n, 0.0);
  prev[0] = 1.0;
  if (n > 1) cur[1] = 1.0;
  for (std::size_t i = 0; i < n; ++i) total[i] += c[0] * prev[i];
  if (n > 1)
    for (std::size_t i = 0; i < n; ++i) total[i] += c[1] * cur[i];
  for (std::size_t k = 2; k < n; ++k) {
    std::vector<double> next(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) next[i + 1] += 2 * cur[i];
    for (std::size_t i = 0; i < n; ++i) next[i] -= prev[i];
    for (std::size_t i = 0; i < n; ++i) total[i] += c[k] * next[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  Polynomial p(1);
  for (std::size_t i = 0; i < n; ++i)
    p.add_term(MultiIndex(std::vector<int>{static_cast<int>(i)}), total[i] / std::pow(gamma, static_cast<double>(i)));
  return p;
}

struct Extremum {
  double t;
  double e;
};

// Alternating extrema of e on [-1, 1]: one per maximal run of constant sign on a dense
// grid, each polished by Brent's method on the neighbouring grid cells.
std::vector<Extremum> alternating_extrema(const std::function<double(double)>& e, int grid_points) {
  std::vector<double> t(static_cast<std::size_t>(grid_points)), v(t.size());
  for (int j = 0; j < grid_points; ++j) {
    t[j] = -std::cos(std::numbers::pi * j / (grid_points - 1));
    v[j] = e(t[j]);
  }
  std::vector<Extremum> out;
  std::size_t j = 0;
  while (j < t.size()) {
    const bool positive = v[j] >= 0;
    std::size_t best = j, end = j;
    while (end < t.size() && (v[end] >= 0) == positive) {
      if (std::abs(v[end]) > std::abs(v[best])) best = end;
      ++end;
    }
    const double lo = t[best > 0 ? best - 1 : best];
    const double hi = t[best + 1 < t.size() ? best + 1 : best];
    Extremum ex{t[best], v[best]};
    if (hi > lo) {
      const double sign = positive ? 1.0 : -1.0;
      auto [arg, val] = boost::math::tools::brent_find_minima([&](double s) { return -sign * e(s); }, lo, hi, 52);
      if (-val > sign * ex.e) ex = {arg, -sign * val};
    }
    out.push_back(ex);
    j = end;
  }
  return out;
}

double sup_abs(const std::function<double(double)>& e, int grid_points) {
  double best = 0;
  for (const auto& ex : alternating_extrema(e, grid_points)) best = std::max(best, std::abs(ex.e));
  return best;
}

}  // namespace

double ApproxResult::operator()(double x) const { return clenshaw(chebyshev, x / gamma); }

ApproxResult remez_best_approx(const std::function<double(double)>& f, int degree, double gamma) {
  if (degree < 0) throw DomainError("Remez degree must be nonnegative");
  if (!(gamma > 0)) throw DomainError("Remez half-width gamma must be positive");
  const int n = degree;
  const int refs = n + 2;
  const int grid_points = std::max(64 * refs, 2001);
  const auto g = [&](double t) { return f(gamma * t); };

  std::vector<double> ref(static_cast<std::size_t>(refs));
  for (int i = 0; i < refs; ++i) ref[i] = -std::cos(std::numbers::pi * i / (refs - 1));

  ApproxResult r;
  r.gamma = gamma;
  std::vector<double> coeffs(static_cast<std::size_t>(n + 1), 0.0);
  double levelled = 0;
  double f_scale = 0;
  for (int j = 0; j < 257; ++j) f_scale = std::max(f_scale, std::abs(g(-std::cos(std::numbers::pi * j / 256))));

  for (int it = 1; it <= kMaxRemezIterations; ++it) {
    Eigen::MatrixXd a(refs, refs);
    Eigen::VectorXd rhs(refs);
    for (int i = 0; i < refs; ++i) {
      double t0 = 1, t1 = ref[i];
      for (int k = 0; k <= n; ++k) {
        a(i, k) = k == 0 ? 1.0 : (k == 1 ? ref[i] : 0.0);
        if (k >= 2) {
          const double t2 = 2 * ref[i] * t1 - t0;
          t0 = t1;
          t1 = t2;
          a(i, k) = t2;
        }
      }
      a(i, n + 1) = i % 2 ? -1.0 : 1.0;
      rhs[i] = g(ref[i]);
    }
    const Eigen::VectorXd sol = a.fullPivLu().solve(rhs);
    for (int k = 0; k <= n; ++k) coeffs[k] = sol[k];
    levelled = sol[n + 1];
    r.iterations = it;

    const auto e = [&](double t) { return g(t) - clenshaw(coeffs, t); };
    auto extrema = alternating_extrema(e, grid_points);
    double top = 0;
    std::size_t top_index = 0;
    for (std::size_t i = 0; i < extrema.size(); ++i)
      if (std::abs(extrema[i].e) > top) top = std::abs(extrema[i].e), top_index = i;
    r.measured_error = top;
    // Residuals below the rounding level of f cannot be levelled further.
    const double noise = 64 * std::numeric_limits<double>::epsilon() * std::max(1.0, f_scale);
    if (top <= noise || (top - std::abs(levelled)) <= kLevelTolerance * top + noise) {
      r.converged = true;
      break;
    }

    if (extrema.size() >= static_cast<std::size_t>(refs)) {
      // Multi-point exchange: keep refs consecutive alternating extrema containing the largest.
      std::size_t lo = 0, hi = extrema.size() - 1;
      while (hi - lo + 1 > static_cast<std::size_t>(refs)) {
        const bool drop_low = lo != top_index && (hi == top_index || std::abs(extrema[lo].e) < std::abs(extrema[hi].e));
        drop_low ? ++lo : --hi;
      }
      for (int i = 0; i < refs; ++i) ref[i] = extrema[lo + i].t;
    } else {
      // Single-point exchange keeping the sign pattern (-1)^i of the levelled residual.
      const double z = extrema[top_index].t;
      const double ez = extrema[top_index].e;
      const double sign_e = levelled >= 0 ? 1.0 : -1.0;
      auto ref_sign = [&](int i) { return (i % 2 ? -1.0 : 1.0) * sign_e; };
      if (z < ref.front()) {
        if ((ez >= 0) == (ref_sign(0) > 0)) {
          ref.front() = z;
        } else {
          ref.pop_back();
          ref.insert(ref.begin(), z);
        }
      } else if (z > ref.back()) {
        if ((ez >= 0) == (ref_sign(refs - 1) > 0)) {
          ref.back() = z;
        } else {
          ref.erase(ref.begin());
          ref.push_back(z);
        }
      } else {
        int i = 0;
        while (i + 1 < refs && ref[i + 1] < z) ++i;
        if (i + 1 >= refs) i = refs - 2;
        if ((ez >= 0) == (ref_sign(i) > 0)) {
          ref[i] = z;
        } else {
          ref[i + 1] = z;
        }
      }
    }
  }

  r.chebyshev = coeffs;
  r.levelled_error = std::abs(levelled);
  r.polynomial = chebyshev_to_monomial(coeffs, gamma).pruned(0.0);
  r.equioscillation_points.resize(ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) r.equioscillation_points[i] = gamma * ref[i];
  return r;
}

bool scaling_identity_check(const std::function<double(double)>& f, double mu, int degree, double gamma) {
  if (mu == 0 || !std::isfinite(mu)) throw DomainError("mu must be a nonzero finite real");
  const ApproxResult base = remez_best_approx(f, degree, gamma);
  const double scaled_gamma = gamma / std::abs(mu);
  const ApproxResult scaled = remez_best_approx([&](double v) { return f(mu * v); }, degree, scaled_gamma);

  double scale = 0;
  for (double c : base.chebyshev) scale += std::abs(c);
  bool ok = true;
  for (int i = 0; i < 50; ++i) {
    const double v = scaled_gamma * (-1.0 + 2.0 * (i + 0.5) / 50.0);
    if (std::abs(scaled(v) - base(mu * v)) > 1e-8 * std::max(1.0, scale)) ok = false;
  }
  const double f_norm = sup_abs([&](double t) { return f(gamma * t); }, 2001);
  const double r_norm = sup_abs([&](double t) { return base(gamma * t); }, 2001);
  return ok && r_norm <= 2 * f_norm * (1 + 1e-12);
}

RateConstants rate_constants(double tau) {
  if (!(tau > 0 && tau < 1)) throw DomainError("tau must lie in (0, 1)");
  const double s = std::sqrt(1 - tau * tau);
  RateConstants rc{tau, 2 * (1 + 1 / s), std::log1p(s) - std::log(tau) - s};
  if (!(rc.C2 > 0)) throw DomainError("rate constant C2 is not positive at this tau");
  return rc;
}

ExpApprox best_approx_exp(double lambda, double a, double tau) {
  if (lambda == 0 || !std::isfinite(lambda)) throw DomainError("lambda must be a nonzero finite real");
  if (!(a >= 1)) throw DomainError("a must be at least 1");
  const RateConstants rc = rate_constants(tau);
  ExpApprox out;
  out.degree = static_cast<int>(std::floor(a));
  out.gamma = a * tau / std::abs(lambda);
  const ApproxResult rc_cos = remez_best_approx([&](double x) { return std::cos(lambda * x); }, out.degree, out.gamma);
  const ApproxResult rc_sin = remez_best_approx([&](double x) { return std::sin(lambda * x); }, out.degree, out.gamma);
  out.cos_error = rc_cos.measured_error;
  out.sin_error = rc_sin.measured_error;
  out.polynomial = rc_cos.polynomial + rc_sin.polynomial * Complex(0, 1);

  const Integrand err = [&](std::span<const double> x) {
    return Complex(std::cos(lambda * x[0]) - rc_cos(x[0]), std::sin(lambda * x[0]) - rc_sin(x[0]));
  };
  const double hw[1] = {out.gamma};
  const auto maxima = local_maxima_box(err, hw, kExpGridPoints, 16, SupGrid::uniform);
  out.measured_error = maxima.empty() ? 0.0 : maxima.front().value;
  out.bound = rc.C1 * std::exp(-rc.C2 * a);
  if (out.measured_error > out.bound)
    throw BoundViolation("best_approx_exp error exceeds C1(tau) exp(-C2(tau) a)");
  return out;
}

TensorExpApprox tensor_exp_approx(const std::vector<double>& t, const std::vector<double>& u, double a, double tau) {
  if (t.size() != u.size() || t.empty()) throw DimensionMismatch("t and u must have the same positive length");
  if (!(a >= 1)) throw DomainError("a must be at least 1");
  const RateConstants rc = rate_constants(tau);
  const int m = static_cast<int>(t.size());
  double u_min = kInfinity;
  for (int j = 0; j < m; ++j) {
    if (!(u[j] > 0)) throw DomainError("half-widths u must be positive");
    if (std::abs(t[j]) > u[j] * (1 + 1e-12)) throw DomainError("|t_j| must not exceed u_j");
    u_min = std::min(u_min, u[j]);
  }

  TensorExpApprox out;
  out.polynomial = Polynomial::constant(m, 1.0);
  out.axis_errors.assign(static_cast<std::size_t>(m), 0.0);
  for (int j = 0; j < m; ++j) {
    if (t[j] == 0) continue;
    const ExpApprox axis = best_approx_exp(1.0, a * u[j], tau);
    out.axis_errors[j] = axis.measured_error;
    // R(y) with y = t_j x_j, lifted to m variables on axis j.
    Polynomial lifted(m);
    for (const auto& [beta, c] : axis.polynomial.terms()) {
      std::vector<int> e(static_cast<std::size_t>(m), 0);
      e[j] = beta[0];
      lifted.add_term(MultiIndex(e), c * std::pow(t[j], beta[0]));
    }
    out.polynomial = out.polynomial * lifted;
  }
  out.bound = m * std::pow(2.0, m - 1) * rc.C1 * std::exp(-u_min * rc.C2 * a);

  const double half = a * tau;
  const std::vector<double> hw(static_cast<std::size_t>(m), half);
  const Integrand err = [&](std::span<const double> x) {
    double phase = 0;
    for (int j = 0; j < m; ++j) phase += t[j] * x[j];
    return std::polar(1.0, phase) - out.polynomial(x);
  };
  const int per_axis = std::max(8, static_cast<int>(std::pow(65536.0, 1.0 / m)));
  const auto maxima = local_maxima_box(err, hw, per_axis, 16, SupGrid::uniform);
  out.measured_error = maxima.empty() ? 0.0 : maxima.front().value;
  if (out.measured_error > out.bound)
    throw BoundViolation("tensor_exp_approx error exceeds m 2^{m-1} C1 exp(-min u C2 a)");
  return out;
}

}  // namespace newton_lab
