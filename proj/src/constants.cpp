#include "newton_lab/constants.h"

#include <algorithm>
#include <atomic>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <numbers>
#include <thread>

#include "newton_lab/chebyshev.h"
#include "newton_lab/discrete_chebyshev.h"
#include "newton_lab/errors.h"
#include "newton_lab/lift.h"
#include "newton_lab/tensor_basis.h"

namespace newton_lab {

namespace {

constexpr double kBracketTarget = 1e-9;
constexpr double kLevelChange = 1e-5;
constexpr int kExchangeRounds = 40;
constexpr std::size_t kMaxCheckPoints = 1 << 17;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_exponent(double p) {
  if (!(p > 0)) throw DomainError("exponent p must lie in (0, inf]");
}

void check_dims(const DiffOperator& d, const ConvexBody& body) {
  if (d.dim() != body.dim()) throw DimensionMismatch("operator and body dimensions differ");
}

double normalisation(double a, int order, int m, double p) {
  const double exponent = p == kInfinity ? order : order + m / p;
  return std::pow(a, -exponent);
}

int max_axis_degree(const std::vector<MultiIndex>& indices) {
  int deg = 0;
  for (const auto& b : indices)
    for (int j = 0; j < b.dim(); ++j) deg = std::max(deg, b[j]);
  return deg;
}

void require_nonzero_functional(const Eigen::VectorXcd& functional) {
  if (functional.cwiseAbs().maxCoeff() == 0.0)
    throw DomainError("operator annihilates every polynomial of the class; the constant is zero");
}

// ---------------------------------------------------------------------------
// Semi-infinite sup-norm problem: maximise Re(L.c) subject to |sum_i c_i phi_i(x)| <= 1 on a domain.

using BasisFn = std::function<void(std::span<const double>, Eigen::Ref<Eigen::VectorXd>)>;
using PointsFn = std::function<std::vector<std::vector<double>>(int)>;
using MaximaFn = std::function<std::vector<SupPoint>(const Integrand&, int)>;

struct SupProblem {
  Eigen::VectorXcd functional;
  BasisFn basis;
  PointsFn points;   // discretisation with n points per axis
  MaximaFn maxima;   // local maxima of |f| with a check grid of n points per axis
  int dim = 1;
  int degree = 0;    // largest per-axis degree or frequency
  GridSpec grid;
};

struct SupOutcome {
  Eigen::VectorXcd coefficients;  // normalised so that sup |P| = 1
  double lower = 0;
  double upper = kInfinity;
  int levels = 0;
  double tolerance = 1;
};

SupOutcome solve_sup_problem(const SupProblem& sp) {
  const Eigen::Index k = sp.functional.size();
  const bool real_mode = sp.functional.imag().cwiseAbs().maxCoeff() <= 1e-15 * sp.functional.cwiseAbs().maxCoeff();
  const Eigen::Index q = real_mode ? k : 2 * k;

  DiscreteChebyshevProblem lp;
  lp.objective.resize(q);
  lp.objective.head(k) = sp.functional.real();
  if (!real_mode) lp.objective.tail(k) = -sp.functional.imag();

  const int n0 = std::max(sp.grid.points_per_axis, 2 * sp.degree + 2);
  const double check_budget = std::pow(static_cast<double>(kMaxCheckPoints), 1.0 / sp.dim);

  std::vector<std::vector<double>> extra;
  Eigen::VectorXd phi(k);
  SupOutcome out;
  double previous_lower = -1;

  auto to_coefficients = [&](const Eigen::VectorXd& y) {
    Eigen::VectorXcd c(k);
    for (Eigen::Index i = 0; i < k; ++i) c[i] = real_mode ? Complex(y[i], 0) : Complex(y[i], y[k + i]);
    return c;
  };

  for (int level = 0; level <= sp.grid.refinement_levels; ++level) {
    const long long n = static_cast<long long>(n0 - 1) * (1LL << level) + 1;
    if (level > 0 && std::pow(static_cast<double>(n), sp.dim) > sp.grid.cap) break;
    const auto grid_points = sp.points(static_cast<int>(n));
    const int n_check = static_cast<int>(
        std::min<double>(std::max<double>(4.0 * static_cast<double>(n), 16.0 * sp.degree + 1), std::max(check_budget, 8.0)));
    lp.facets = real_mode ? 0 : (level == 0 ? 32 : 0);

    for (int round = 0; round < kExchangeRounds; ++round) {
      const std::size_t count = grid_points.size() + extra.size();
      lp.rows_re.setZero(static_cast<Eigen::Index>(count), q);
      if (!real_mode) lp.rows_im.setZero(static_cast<Eigen::Index>(count), q);
      for (std::size_t i = 0; i < count; ++i) {
        const auto& x = i < grid_points.size() ? grid_points[i] : extra[i - grid_points.size()];
        sp.basis(x, phi);
        const auto r = static_cast<Eigen::Index>(i);
        lp.rows_re.row(r).head(k) = phi.transpose();
        if (!real_mode) lp.rows_im.row(r).tail(k) = phi.transpose();
      }
      const DiscreteChebyshevSolution sol = solve_discrete_chebyshev(lp);
      const Eigen::VectorXcd c = to_coefficients(sol.y);
      out.upper = std::min(out.upper, sol.upper_bound);

      const Integrand f = [&](std::span<const double> x) {
        Eigen::VectorXd v(k);
        sp.basis(x, v);
        return Complex(v.dot(c.real()), v.dot(c.imag()));
      };
      const auto maxima = sp.maxima(f, n_check);
      const double sup = std::max(1.0, maxima.empty() ? 1.0 : maxima.front().value);
      if (sol.value / sup > out.lower) {
        out.lower = sol.value / sup;
        out.coefficients = c / sup;
      }
      out.levels = level;
      bool added = false;
      for (const auto& mx : maxima)
        if (mx.value > 1 + 1e-13) {
          extra.push_back(mx.x);
          added = true;
        }
      if (sup <= 1 + 1e-12 || !added) break;
    }
    out.tolerance = std::max(0.0, (out.upper - out.lower) / out.upper);
    const double change = previous_lower > 0 ? std::abs(out.lower - previous_lower) / out.lower : kInfinity;
    if (out.tolerance <= kBracketTarget || (change < kLevelChange && out.tolerance < kLevelChange)) break;
    previous_lower = out.lower;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Quasinorm-normalised ascent for exponents outside {2, inf}.

struct MultistartOutcome {
  Eigen::VectorXcd coefficients;
  double ratio = 0;  // |L.c| / (sum w |Phi c|^p)^{1/p}
  double last_change = 0;
  bool converged = false;
};

MultistartOutcome multistart_ascent(const Eigen::VectorXcd& functional, const Eigen::MatrixXd& phi,
                                    const Eigen::VectorXd& weights, double p, const MultistartOptions& opts,
                                    const Eigen::VectorXcd& warm_start) {
  if (opts.starts < 1) throw DomainError("multistart needs at least one start");
  const Eigen::Index k = functional.size();
  const bool real_mode = functional.imag().cwiseAbs().maxCoeff() == 0.0;
  const Eigen::Index q = real_mode ? k : 2 * k;

  auto split = [&](const Eigen::VectorXd& y) {
    Eigen::VectorXcd c(k);
    for (Eigen::Index i = 0; i < k; ++i) c[i] = real_mode ? Complex(y[i], 0) : Complex(y[i], y[k + i]);
    return c;
  };
  // log |L.c| - (1/p) log sum w |Phi c|^p and its gradient in y.
  auto objective = [&](const Eigen::VectorXd& y, Eigen::VectorXd* grad) {
    const Eigen::VectorXcd c = split(y);
    const Complex g = (functional.array() * c.array()).sum();
    const Eigen::VectorXcd v = phi * c;
    const Eigen::VectorXd mod = v.cwiseAbs();
    const double eps = 1e-12 * std::max(mod.maxCoeff(), 1e-300);
    double mass = 0;
    Eigen::VectorXd dens(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double r2 = mod[i] * mod[i] + eps * eps;
      dens[i] = weights[i] * std::pow(r2, (p - 2) / 2);
      mass += weights[i] * std::pow(r2, p / 2);
    }
    const double value = std::log(std::abs(g)) - std::log(mass) / p;
    if (grad) {
      const double g2 = std::norm(g);
      const Eigen::VectorXd re = phi.transpose() * dens.cwiseProduct(v.real());
      grad->resize(q);
      grad->head(k) = (std::conj(g) * functional).real() / g2 - re / mass;
      if (!real_mode) {
        const Eigen::VectorXd im = phi.transpose() * dens.cwiseProduct(v.imag());
        grad->tail(k) = -(std::conj(g) * functional).imag() / g2 - im / mass;
      }
    }
    return value;
  };

  boost::random::mt19937_64 rng(opts.seed);
  boost::random::normal_distribution<double> normal;
  MultistartOutcome best;
  best.ratio = -1;
  for (int start = 0; start < opts.starts; ++start) {
    Eigen::VectorXd y(q);
    if (start == 0) {
      y.head(k) = warm_start.real();
      if (!real_mode) y.tail(k) = warm_start.imag();
    } else {
      for (Eigen::Index i = 0; i < q; ++i) y[i] = normal(rng);
    }
    y.normalize();
    Eigen::VectorXd grad;
    double value = objective(y, &grad);
    double step = 1.0, change = kInfinity;
    bool converged = false;
    for (int it = 0; it < opts.max_iterations; ++it) {
      const Eigen::VectorXd tangent = grad - grad.dot(y) * y;
      if (tangent.norm() < 1e-14) {
        converged = true;
        change = 0;
        break;
      }
      bool moved = false;
      for (int back = 0; back < 60; ++back) {
        Eigen::VectorXd trial = (y + step * tangent).normalized();
        Eigen::VectorXd trial_grad;
        const double trial_value = objective(trial, &trial_grad);
        if (std::isfinite(trial_value) && trial_value >= value + 1e-4 * step * tangent.squaredNorm()) {
          change = trial_value - value;
          y = std::move(trial);
          grad = std::move(trial_grad);
          value = trial_value;
          step *= 2;
          moved = true;
          break;
        }
        step /= 2;
      }
      if (!moved || change < 1e-13) {
        converged = true;
        if (!moved) change = 0;
        break;
      }
    }
    const double ratio = std::exp(value);
    if (ratio > best.ratio) {
      best.ratio = ratio;
      best.coefficients = split(y);
      best.last_change = std::expm1(std::max(change, 0.0));
      best.converged = converged;
    }
  }
  return best;
}

// Fixed tensor Gauss rule on the box prod [-s_j, s_j] or a body rule.
void box_gauss(std::span<const double> half_widths, int panels, int points, std::vector<std::vector<double>>& nodes,
               std::vector<double>& weights) {
  const ConvexBody box = ConvexBody::parallelepiped({half_widths.begin(), half_widths.end()});
  BodyRule rule = body_rule(box, panels, points);
  nodes = std::move(rule.nodes);
  weights = std::move(rule.weights);
}

// ---------------------------------------------------------------------------
// Bases.

Eigen::VectorXcd functional_of(const TensorBasis& basis, const DiffOperator& d) {
  return basis.operator_at_zero(d);
}

// Real trigonometric basis 1, cos(theta.x), sin(theta.x) over half of a symmetric spectrum.
struct TrigBasis {
  std::vector<Frequency> reps;  // reps[0] is zero when present

  explicit TrigBasis(const std::vector<Frequency>& spectrum) {
    for (const auto& t : spectrum) {
      int lead = 0;
      for (int j = 0; j < t.dim() && lead == 0; ++j) lead = t[j];
      if (lead >= 0) reps.push_back(t);
    }
  }
  bool has_zero() const { return !reps.empty() && reps.front().is_zero(); }
  Eigen::Index size() const { return static_cast<Eigen::Index>(2 * reps.size() - (has_zero() ? 1 : 0)); }

  void evaluate(std::span<const double> x, Eigen::Ref<Eigen::VectorXd> out) const {
    Eigen::Index col = 0;
    for (const auto& t : reps) {
      double phase = 0;
      for (int j = 0; j < t.dim(); ++j) phase += t[j] * x[j];
      if (t.is_zero()) {
        out[col++] = 1.0;
      } else {
        out[col++] = std::cos(phase);
        out[col++] = std::sin(phase);
      }
    }
  }

  Eigen::VectorXcd functional(const DiffOperator& d) const {
    Eigen::VectorXcd out(size());
    Eigen::Index col = 0;
    std::vector<double> t(static_cast<std::size_t>(d.dim())), minus(t.size());
    for (const auto& theta : reps) {
      for (int j = 0; j < theta.dim(); ++j) {
        t[j] = theta[j];
        minus[j] = -theta[j];
      }
      const Complex plus_sym = d.symbol(t);
      if (theta.is_zero()) {
        out[col++] = plus_sym;
      } else {
        const Complex minus_sym = d.symbol(minus);
        out[col++] = (plus_sym + minus_sym) / 2.0;
        out[col++] = (plus_sym - minus_sym) / Complex(0, 2);
      }
    }
    return out;
  }

  TrigPolynomial to_trig(const Eigen::VectorXcd& c) const {
    const int m = reps.front().dim();
    TrigPolynomial out(m);
    Eigen::Index col = 0;
    for (const auto& theta : reps) {
      if (theta.is_zero()) {
        out.add_term(theta, c[col++]);
        continue;
      }
      std::vector<int> neg(theta.entries().begin(), theta.entries().end());
      for (auto& v : neg) v = -v;
      const Frequency minus(neg);
      const Complex a = c[col++], b = c[col++];
      out.add_term(theta, a / 2.0 + b / Complex(0, 2));
      out.add_term(minus, a / 2.0 - b / Complex(0, 2));
    }
    return out;
  }
};

std::vector<std::vector<double>> box_points(std::span<const double> hw, int n, SupGrid kind) {
  // The uniform grid is periodic: the right endpoint duplicates the left one and is dropped.
  const int m = static_cast<int>(hw.size());
  const int count = kind == SupGrid::chebyshev ? n : n - 1;
  std::vector<std::vector<double>> axes(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    axes[j].resize(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
      axes[j][i] = kind == SupGrid::chebyshev ? -hw[j] * std::cos(std::numbers::pi * i / (n - 1))
                                               : -hw[j] + 2.0 * hw[j] * i / (n - 1);
  }
  std::vector<std::vector<double>> out;
  std::vector<int> idx(static_cast<std::size_t>(m), 0);
  while (true) {
    std::vector<double> x(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) x[j] = axes[j][idx[j]];
    out.push_back(std::move(x));
    int j = 0;
    while (j < m && idx[j] + 1 == count) idx[j] = 0, ++j;
    if (j == m) break;
    ++idx[j];
  }
  return out;
}

// Gram matrix of a tensor basis over a body by the iterated body rule, refined until stable.
Eigen::MatrixXd body_gram(const TensorBasis& basis, const ConvexBody& body, const GridSpec& grid, double& change) {
  const Eigen::Index k = static_cast<Eigen::Index>(basis.size());
  const int m = body.dim();
  const int points = std::max(grid.points_per_axis, max_axis_degree(basis.indices()) + 2);
  Eigen::MatrixXd prev, cur(k, k);
  Eigen::VectorXd phi(k);
  change = kInfinity;
  for (int level = 0; level <= grid.refinement_levels; ++level) {
    const int panels = 2 << level;
    if (level > 0 && std::pow(static_cast<double>(panels) * points, m) > 4e6) break;
    const BodyRule rule = body_rule(body, panels, points);
    cur.setZero();
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      basis.evaluate(rule.nodes[i], phi);
      cur.noalias() += rule.weights[i] * phi * phi.transpose();
    }
    if (prev.size()) {
      change = (cur - prev).cwiseAbs().maxCoeff() / cur.cwiseAbs().maxCoeff();
      if (change <= 1e-14) break;
    }
    prev = cur;
  }
  return cur;
}

// Shared driver for tilde_m and markov_m: basis on `indices`, norm over `domain`.
SharpConstantResult polynomial_constant(ConstantKind kind, double p, const DiffOperator& d, double scale_a,
                                        const std::vector<MultiIndex>& indices, const ConvexBody& domain,
                                        bool domain_is_reference_cube, const GridSpec& grid,
                                        const MultistartOptions& multistart) {
  check_exponent(p);
  grid.validate();
  if (indices.empty()) throw DomainError("lattice aV intersected with Z^m_+ is empty");
  const int m = domain.dim();
  const TensorBasis basis(BasisFamily::legendre, indices, domain.sigma());
  const Eigen::VectorXcd functional = functional_of(basis, d);
  require_nonzero_functional(functional);
  const double norm_factor = normalisation(scale_a, d.order(), m, p);

  SharpConstantResult r;
  r.kind = kind;
  r.p = p;
  r.a = scale_a;
  r.op = d;

  if (p == 2.0) {
    r.method = ConstantMethod::gram_rayleigh;
    Eigen::VectorXcd coeffs;
    double quad = 0;
    if (domain_is_reference_cube) {
      // Orthogonal basis: L^H G^{-1} L = sum |L_i|^2 / ||phi_i||^2.
      coeffs.resize(functional.size());
      for (Eigen::Index i = 0; i < functional.size(); ++i) {
        const double n2 = basis.legendre_norm_squared(static_cast<std::size_t>(i));
        coeffs[i] = std::conj(functional[i]) / n2;
        quad += std::norm(functional[i]) / n2;
      }
      r.tolerance = 1e-15 * std::sqrt(static_cast<double>(functional.size()));
    } else {
      double change = 0;
      const Eigen::MatrixXd gram = body_gram(basis, domain, grid, change);
      coeffs = gram_solve(gram, functional.conjugate());
      quad = std::abs(functional.dot(coeffs.conjugate()));
      r.tolerance = std::max(change, 1e-14);
      r.converged = change <= 1e-10;
    }
    r.value = norm_factor * std::sqrt(quad);
    r.extremal = basis.to_polynomial(coeffs);
    return r;
  }

  const std::vector<double> hw = domain.sigma();
  if (p == kInfinity) {
    r.method = ConstantMethod::lp_discretized;
    SupProblem sp;
    sp.functional = functional;
    sp.basis = [&](std::span<const double> x, Eigen::Ref<Eigen::VectorXd> out) { basis.evaluate(x, out); };
    sp.dim = m;
    sp.degree = max_axis_degree(indices);
    sp.grid = grid;
    if (domain.is_parallelepiped()) {
      sp.points = [&](int n) { return box_points(hw, n, SupGrid::chebyshev); };
      sp.maxima = [&](const Integrand& f, int n) {
        return local_maxima_box(f, hw, n, 4 * static_cast<int>(basis.size()) + 8);
      };
    } else {
      sp.points = [&](int n) { return body_grid(domain, n); };
      sp.maxima = [&](const Integrand& f, int n) {
        return local_maxima_body(f, domain, n, 4 * static_cast<int>(basis.size()) + 8);
      };
    }
    const SupOutcome out = solve_sup_problem(sp);
    r.value = norm_factor * out.lower;
    r.upper_bound = norm_factor * out.upper;
    r.tolerance = out.tolerance;
    r.levels_used = out.levels;
    r.converged = out.tolerance <= kLevelChange;
    r.extremal = basis.to_polynomial(out.coefficients);
    return r;
  }

  // Other exponents: non-certified ascent on a fixed quadrature rule, then re-measured.
  r.method = ConstantMethod::multistart;
  std::vector<std::vector<double>> nodes;
  std::vector<double> w;
  const int points = std::max(grid.points_per_axis, max_axis_degree(indices) + 2);
  if (domain.is_parallelepiped()) {
    box_gauss(hw, 4, points, nodes, w);
  } else {
    BodyRule rule = body_rule(domain, 4, points);
    nodes = std::move(rule.nodes);
    w = std::move(rule.weights);
  }
  Eigen::MatrixXd phi(static_cast<Eigen::Index>(nodes.size()), static_cast<Eigen::Index>(basis.size()));
  Eigen::VectorXd weights(static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    Eigen::VectorXd row(static_cast<Eigen::Index>(basis.size()));
    basis.evaluate(nodes[i], row);
    phi.row(static_cast<Eigen::Index>(i)) = row.transpose();
    weights[static_cast<Eigen::Index>(i)] = w[i];
  }
  Eigen::VectorXcd warm(functional.size());
  for (Eigen::Index i = 0; i < functional.size(); ++i)
    warm[i] = std::conj(functional[i]) / basis.legendre_norm_squared(static_cast<std::size_t>(i));
  const MultistartOutcome out = multistart_ascent(functional, phi, weights, p, multistart, warm);
  const Polynomial extremal = basis.to_polynomial(out.coefficients);
  const NormResult norm = domain.is_parallelepiped() && hw == std::vector<double>(hw.size(), hw.front())
                              ? lp_norm_cube(extremal, hw.front(), p, grid)
                              : lp_norm_body(extremal, domain, p, grid);
  r.value = norm_factor * std::abs(apply_operator_at_zero(d, extremal)) / norm.value;
  r.tolerance = std::max(out.last_change, norm.last_change);
  r.converged = out.converged && norm.converged;
  r.extremal = extremal;
  return r;
}

}  // namespace

std::string to_string(ConstantKind kind) {
  switch (kind) {
    case ConstantKind::tilde_m: return "tildeM";
    case ConstantKind::markov_m: return "markovM";
    case ConstantKind::trig_p: return "trigP";
    case ConstantKind::entire_e: return "entireE";
  }
  return "unknown";
}

std::string to_string(ConstantMethod method) {
  switch (method) {
    case ConstantMethod::closed_form: return "closed_form";
    case ConstantMethod::gram_rayleigh: return "gram_rayleigh";
    case ConstantMethod::lp_discretized: return "lp_discretized";
    case ConstantMethod::multistart: return "multistart";
  }
  return "unknown";
}

SharpConstantResult tilde_m(double p, const DiffOperator& d, double a, const ConvexBody& body, const GridSpec& grid,
                            const MultistartOptions& multistart) {
  check_dims(d, body);
  if (!(a >= 1)) throw DomainError("a must be at least 1");
  auto r = polynomial_constant(ConstantKind::tilde_m, p, d, a, lattice_points(body, a), ConvexBody::cube(body.dim()),
                               true, grid, multistart);
  r.body = body;
  return r;
}

SharpConstantResult markov_m(double p, const DiffOperator& d, int n, const ConvexBody& body, const GridSpec& grid,
                             const MultistartOptions& multistart) {
  check_dims(d, body);
  if (n < 1) throw DomainError("n must be a positive integer");
  auto r = polynomial_constant(ConstantKind::markov_m, p, d, n, lattice_points(ConvexBody::octahedron(body.dim()), n),
                               polar(body), false, grid, multistart);
  r.body = body;
  return r;
}

SharpConstantResult trig_p_constant(double p, const DiffOperator& d, double a, const ConvexBody& body,
                                    const GridSpec& grid) {
  check_dims(d, body);
  check_exponent(p);
  grid.validate();
  if (!(a >= 1)) throw DomainError("a must be at least 1");
  if (p != 2.0 && p != kInfinity) throw DomainError("trig_p_constant supports p = 2 and p = inf only");
  const int m = body.dim();
  const auto spectrum = lattice_points_signed(body, a);
  if (spectrum.empty()) throw DomainError("spectrum aV intersected with Z^m is empty");

  SharpConstantResult r;
  r.kind = ConstantKind::trig_p;
  r.p = p;
  r.a = a;
  r.op = d;
  r.body = body;
  const double norm_factor = normalisation(a, d.order(), m, p);

  if (p == 2.0) {
    r.method = ConstantMethod::closed_form;
    TrigPolynomial extremal(m);
    std::vector<double> t(static_cast<std::size_t>(m));
    double sum = 0;
    for (const auto& theta : spectrum) {
      for (int j = 0; j < m; ++j) t[j] = theta[j];
      const Complex s = d.symbol(t);
      sum += std::norm(s);
      extremal.add_term(theta, std::conj(s));
    }
    if (sum == 0) throw DomainError("operator annihilates every trigonometric polynomial of the class");
    r.value = norm_factor * std::pow(2 * std::numbers::pi, -m / 2.0) * std::sqrt(sum);
    r.tolerance = 1e-15 * std::sqrt(static_cast<double>(spectrum.size()));
    r.trig_extremal = std::move(extremal);
    return r;
  }

  r.method = ConstantMethod::lp_discretized;
  const TrigBasis basis(spectrum);
  const Eigen::VectorXcd functional = basis.functional(d);
  require_nonzero_functional(functional);
  const std::vector<double> hw(static_cast<std::size_t>(m), std::numbers::pi);
  int degree = 0;
  for (const auto& theta : spectrum)
    for (int j = 0; j < m; ++j) degree = std::max(degree, std::abs(theta[j]));
  SupProblem sp;
  sp.functional = functional;
  sp.basis = [&](std::span<const double> x, Eigen::Ref<Eigen::VectorXd> out) { basis.evaluate(x, out); };
  sp.points = [&](int n) { return box_points(hw, n, SupGrid::uniform); };
  sp.maxima = [&](const Integrand& f, int n) {
    return local_maxima_box(f, hw, n, 4 * static_cast<int>(basis.size()) + 8, SupGrid::uniform);
  };
  sp.dim = m;
  // A uniform grid needs about twice the points of a Chebyshev grid to pin a trigonometric polynomial.
  sp.degree = 2 * degree;
  sp.grid = grid;
  const SupOutcome out = solve_sup_problem(sp);
  r.value = norm_factor * out.lower;
  r.upper_bound = norm_factor * out.upper;
  r.tolerance = out.tolerance;
  r.levels_used = out.levels;
  r.converged = out.tolerance <= kLevelChange;
  r.trig_extremal = basis.to_trig(out.coefficients);
  return r;
}

SharpConstantResult entire_e2(const DiffOperator& d, const ConvexBody& body, const GridSpec& grid) {
  check_dims(d, body);
  grid.validate();
  const int m = body.dim();
  const Polynomial symbol = d.symbol_polynomial();
  const NormResult norm = lp_norm_body(symbol, body, 2.0, grid);
  SharpConstantResult r;
  r.kind = ConstantKind::entire_e;
  r.p = 2;
  r.a = 0;
  r.op = d;
  r.body = body;
  r.method = ConstantMethod::closed_form;
  r.value = std::pow(2 * std::numbers::pi, -m / 2.0) * norm.value;
  r.tolerance = norm.last_change;
  r.converged = norm.converged;
  return r;
}

Polynomial extremal_polynomial(double p, const DiffOperator& d, double a, const ConvexBody& body,
                               const GridSpec& grid) {
  const SharpConstantResult r = tilde_m(p, d, a, body, grid);
  const Polynomial& u = *r.extremal;
  const Complex at_zero = apply_operator_at_zero(d, u);
  if (std::abs(at_zero) == 0) throw DomainError("degenerate extremal: D(U)(0) vanishes");
  const std::vector<double> s(static_cast<std::size_t>(body.dim()), 1.0 / a);
  return u.scale_arguments(s) * (std::pow(a, d.order()) / at_zero);
}

bool lift_norm_inequality_check(const Polynomial& poly, double a, double tau, double half_width, double p,
                                const GridSpec& grid) {
  check_exponent(p);
  if (!(a > 0)) throw DomainError("a must be positive");
  if (!(tau > 0 && tau < 1)) throw DomainError("tau must lie in (0, 1)");
  const int m = poly.dim();
  const double b = a * tau;
  if (!(half_width > 0 && half_width <= b / std::sqrt(static_cast<double>(m)) * (1 + 1e-12)))
    throw DomainError("M must lie in (0, a tau / sqrt(m)]");

  const TrigPolynomial lift = trig_lift(poly, b);
  const Integrand r = [&](std::span<const double> s) {
    std::vector<double> t(s.begin(), s.end());
    for (auto& v : t) v /= b;
    return lift(t);
  };
  const std::vector<double> hw(static_cast<std::size_t>(m), half_width);
  double lhs, rhs;
  if (p == kInfinity) {
    lhs = sup_norm_cube(poly, a, grid);
    rhs = sup_norm_box(r, hw, grid);
  } else {
    lhs = lp_norm_cube(poly, a, p, grid).value;
    const double factor = std::pow(std::max(0.0, 1 - m * half_width * half_width / (b * b)), 1 / p);
    rhs = factor * lp_norm_box(r, hw, p, grid).value;
  }
  return lhs >= rhs * (1 - 1e-9);
}

double closed_form_reference(const DiffOperator& d, double a, const ConvexBody& body) {
  if (!body.is_parallelepiped() || d.terms().size() != 1) return kNaN;
  const auto& [alpha, b] = *d.terms().begin();
  try {
    return std::abs(b) * bernstein_product_constant(alpha, a, body.sigma());
  } catch (const DomainError&) {
    return kNaN;
  }
}

ConvergenceTable convergence_study(double p, const DiffOperator& d, const ConvexBody& body,
                                   const std::vector<double>& a_values, const GridSpec& grid, int jobs) {
  check_exponent(p);
  if (a_values.empty()) throw DomainError("convergence study needs at least one a value");
  for (std::size_t i = 0; i < a_values.size(); ++i) {
    if (!(a_values[i] >= 1)) throw DomainError("every a must be at least 1");
    if (i && !(a_values[i] > a_values[i - 1])) throw DomainError("a values must be strictly increasing");
  }
  const double e2 = p == 2.0 ? entire_e2(d, body, grid).value : kNaN;

  ConvergenceTable table;
  table.rows.resize(a_values.size());
  std::vector<std::exception_ptr> failures(a_values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < a_values.size(); i = next++) {
      try {
        auto& row = table.rows[i];
        row.a = a_values[i];
        row.tilde_m = tilde_m(p, d, row.a, body, grid).value;
        row.reference = p == 2.0 ? e2 : p == kInfinity ? closed_form_reference(d, row.a, body) : kNaN;
        row.rel_gap = std::abs(row.tilde_m - row.reference) / row.reference;
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), 1, a_values.size());
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);

  std::size_t decreases = 0;
  for (std::size_t i = 1; i < table.rows.size(); ++i)
    if (table.rows[i].rel_gap < table.rows[i - 1].rel_gap) ++decreases;
  table.monotone_fraction =
      table.rows.size() > 1 ? static_cast<double>(decreases) / static_cast<double>(table.rows.size() - 1) : 1.0;
  table.final_gap = table.rows.back().rel_gap;
  return table;
}

}  // namespace newton_lab
