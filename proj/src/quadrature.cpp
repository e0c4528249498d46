#include "newton_lab/quadrature.h"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <mutex>
#include <shared_mutex>

namespace newton_lab {

namespace {

constexpr std::size_t kMaxQuadratureNodes = 4'000'000;
constexpr std::size_t kMaxSupGridPoints = 1 << 18;
constexpr int kRefineCandidates = 8;

double pow_abs(Complex v, double p) {
  const double a = std::abs(v);
  if (p == 2.0) return a * a;
  if (p == 1.0) return a;
  return a == 0 ? 0.0 : std::pow(a, p);
}

bool is_even_integer(double p) { return p == std::floor(p) && std::fmod(p, 2.0) == 0.0; }

// Composite Gauss-Legendre on [-h, h] with `panels` equal panels.
void composite_rule(double h, int panels, int points, std::vector<double>& x, std::vector<double>& w) {
  const auto& rule = gauss_legendre(points);
  x.clear();
  w.clear();
  const double width = 2.0 * h / panels;
  for (int k = 0; k < panels; ++k) {
    const double lo = -h + k * width;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      x.push_back(lo + 0.5 * width * (rule.nodes[i] + 1.0));
      w.push_back(0.5 * width * rule.weights[i]);
    }
  }
}

template <class Visit>
void for_each_tensor_node(const std::vector<std::vector<double>>& xs, const std::vector<std::vector<double>>& ws,
                          Visit&& visit) {
  const std::size_t m = xs.size();
  std::vector<std::size_t> pos(m, 0);
  std::vector<double> pt(m);
  while (true) {
    double weight = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
      pt[j] = xs[j][pos[j]];
      weight *= ws[j][pos[j]];
    }
    visit(std::span<const double>(pt), weight);
    std::size_t j = 0;
    while (j < m && pos[j] + 1 == xs[j].size()) pos[j] = 0, ++j;
    if (j == m) return;
    ++pos[j];
  }
}

double box_integral(const Integrand& f, std::span<const double> hw, double p, int panels, int points) {
  std::vector<std::vector<double>> xs(hw.size()), ws(hw.size());
  for (std::size_t j = 0; j < hw.size(); ++j) composite_rule(hw[j], panels, points, xs[j], ws[j]);
  double sum = 0;
  for_each_tensor_node(xs, ws, [&](std::span<const double> x, double w) { sum += w * pow_abs(f(x), p); });
  return sum;
}

std::vector<double> chebyshev_lobatto(double h, int n) {
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) x[k] = -h * std::cos(std::numbers::pi * k / (n - 1));
  return x;
}

int sup_points_per_axis(const GridSpec& grid, int m) {
  int n = std::min(grid.points_per_axis << grid.refinement_levels, grid.cap);
  const double budget = std::pow(static_cast<double>(kMaxSupGridPoints), 1.0 / m);
  n = std::min(n, std::max(2, static_cast<int>(budget)));
  return std::max(n, 2);
}

// Cyclic coordinate golden-section ascent of |f| inside per-coordinate ranges.
template <class Range>
double refine_max(const Integrand& f, std::vector<double>& x, std::span<const double> window, Range&& range) {
  double best = std::abs(f(x));
  for (int sweep = 0; sweep < 40; ++sweep) {
    const double before = best;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const auto [lo_lim, hi_lim] = range(x, j);
      const double lo = std::max(lo_lim, x[j] - window[j]);
      const double hi = std::min(hi_lim, x[j] + window[j]);
      if (!(hi > lo)) continue;
      auto g = [&](double v) {
        const double keep = x[j];
        x[j] = v;
        const double r = -std::abs(f(x));
        x[j] = keep;
        return r;
      };
      auto [arg, val] = boost::math::tools::brent_find_minima(g, lo, hi, 50);
      if (-val > best) {
        best = -val;
        x[j] = arg;
      }
    }
    if (best <= before * (1 + 1e-15)) break;
  }
  return best;
}

double chord_radius(const ConvexBody& body, std::span<const double> x, std::size_t j) {
  if (body.lambda() == kInfinity) return body.sigma()[j];
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (i != j) s += std::pow(std::abs(x[i]) / body.sigma()[i], body.lambda());
  return s >= 1 ? 0.0 : body.sigma()[j] * std::pow(1 - s, 1 / body.lambda());
}

// Discrete local maxima of values laid out as an n^m tensor grid (axis 0 fastest).
std::vector<std::size_t> grid_local_maxima(const std::vector<double>& values, int n, int m) {
  std::vector<std::size_t> stride(static_cast<std::size_t>(m), 1);
  for (int j = 1; j < m; ++j) stride[j] = stride[j - 1] * static_cast<std::size_t>(n);
  std::vector<std::size_t> out;
  std::vector<int> idx(static_cast<std::size_t>(m));
  std::vector<int> off(static_cast<std::size_t>(m));
  for (std::size_t flat = 0; flat < values.size(); ++flat) {
    std::size_t rest = flat;
    for (int j = 0; j < m; ++j) {
      idx[j] = static_cast<int>(rest % static_cast<std::size_t>(n));
      rest /= static_cast<std::size_t>(n);
    }
    bool is_max = true;
    std::fill(off.begin(), off.end(), -1);
    while (is_max) {
      bool centre = true;
      long long nb = static_cast<long long>(flat);
      bool inside = true;
      for (int j = 0; j < m; ++j) {
        const int q = idx[j] + off[j];
        if (q < 0 || q >= n) inside = false;
        if (off[j] != 0) centre = false;
        nb += static_cast<long long>(off[j]) * static_cast<long long>(stride[j]);
      }
      if (inside && !centre && values[static_cast<std::size_t>(nb)] > values[flat]) is_max = false;
      int j = 0;
      while (j < m && off[j] == 1) off[j] = -1, ++j;
      if (j == m) break;
      ++off[j];
    }
    if (is_max) out.push_back(flat);
  }
  return out;
}

template <class Range>
std::vector<SupPoint> polish(const Integrand& f, const std::vector<std::vector<double>>& pts,
                             const std::vector<double>& values, int n, int candidates, std::span<const double> window,
                             Range&& range) {
  const int m = static_cast<int>(window.size());
  std::vector<std::size_t> maxima = grid_local_maxima(values, n, m);
  std::sort(maxima.begin(), maxima.end(), [&](std::size_t a, std::size_t b) {
    return values[a] != values[b] ? values[a] > values[b] : a < b;
  });
  if (maxima.size() > static_cast<std::size_t>(candidates)) maxima.resize(static_cast<std::size_t>(candidates));
  std::vector<SupPoint> out;
  out.reserve(maxima.size());
  for (std::size_t flat : maxima) {
    SupPoint sp{0, pts[flat]};
    sp.value = refine_max(f, sp.x, window, range);
    out.push_back(std::move(sp));
  }
  std::sort(out.begin(), out.end(), [](const SupPoint& a, const SupPoint& b) { return a.value > b.value; });
  return out;
}

double sup_body(const Integrand& f, const ConvexBody& body, const GridSpec& grid) {
  const auto maxima = local_maxima_body(f, body, sup_points_per_axis(grid, body.dim()), kRefineCandidates);
  return maxima.empty() ? 0.0 : maxima.front().value;
}

void check_exponent(double p) {
  if (!(p > 0)) throw DomainError("exponent p must lie in (0, inf]");
}

}  // namespace

void GridSpec::validate() const {
  if (points_per_axis < 2) throw DomainError("grid points_per_axis must be at least 2");
  if (refinement_levels < 0) throw DomainError("grid refinement_levels must be nonnegative");
  check_exponent(p);
  if (refinement_levels > 30 || (static_cast<long long>(points_per_axis) << refinement_levels) > cap)
    throw DomainError("grid points_per_axis * 2^refinement_levels exceeds the cap");
}

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw DomainError("Gauss-Legendre rule needs at least one node");
  static std::shared_mutex mutex;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(n); it != cache.end()) return *it->second;
  }
  std::unique_lock lock(mutex);
  if (auto it = cache.find(n); it != cache.end()) return *it->second;
  auto rule = std::make_unique<GaussRule>();
  rule->nodes.resize(static_cast<std::size_t>(n));
  rule->weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
    }
    const double w = 2.0 / ((1 - x * x) * dp * dp);
    rule->nodes[i] = -x;
    rule->nodes[n - 1 - i] = x;
    rule->weights[i] = rule->weights[n - 1 - i] = w;
  }
  if (n % 2) rule->nodes[n / 2] = 0.0;
  auto& ref = *rule;
  cache.emplace(n, std::move(rule));
  return ref;
}

NormResult lp_norm_box(const Integrand& f, std::span<const double> hw, double p, const GridSpec& grid, double tol) {
  check_exponent(p);
  if (p == kInfinity) return {sup_norm_box(f, hw, grid), true, 0, 0};
  const int m = static_cast<int>(hw.size());
  NormResult r;
  double prev = -1;
  for (int level = 0; level <= grid.refinement_levels; ++level) {
    const int panels = 1 << level;
    const double nodes = std::pow(static_cast<double>(panels) * grid.points_per_axis, m);
    if (nodes > kMaxQuadratureNodes || panels * grid.points_per_axis > grid.cap) break;
    const double value = std::pow(box_integral(f, hw, p, panels, grid.points_per_axis), 1.0 / p);
    r.value = value;
    r.levels_used = level;
    if (prev >= 0) {
      r.last_change = std::abs(value - prev) / std::max(std::abs(value), 1e-300);
      if (r.last_change < tol || value == prev) {
        r.converged = true;
        break;
      }
    }
    prev = value;
  }
  return r;
}

double sup_norm_box(const Integrand& f, std::span<const double> hw, const GridSpec& grid) {
  const auto maxima = local_maxima_box(f, hw, sup_points_per_axis(grid, static_cast<int>(hw.size())), kRefineCandidates);
  return maxima.empty() ? 0.0 : maxima.front().value;
}

std::vector<SupPoint> local_maxima_box(const Integrand& f, std::span<const double> hw, int n, int candidates,
                                       SupGrid kind) {
  const int m = static_cast<int>(hw.size());
  if (m == 0) throw DomainError("box must have at least one axis");
  if (n < 2) throw DomainError("sup grid needs at least two points per axis");
  std::vector<std::vector<double>> xs(static_cast<std::size_t>(m)), ws(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    if (kind == SupGrid::chebyshev) {
      xs[j] = chebyshev_lobatto(hw[j], n);
    } else {
      xs[j].resize(static_cast<std::size_t>(n));
      for (int k = 0; k < n; ++k) xs[j][k] = -hw[j] + 2.0 * hw[j] * k / (n - 1);
    }
    ws[j].assign(xs[j].size(), 1.0);
  }
  std::vector<std::vector<double>> pts;
  std::vector<double> values;
  for_each_tensor_node(xs, ws, [&](std::span<const double> x, double) {
    pts.emplace_back(x.begin(), x.end());
    values.push_back(std::abs(f(x)));
  });
  std::vector<double> window(static_cast<std::size_t>(m));
  const double spacing = kind == SupGrid::chebyshev ? std::numbers::pi : 2.0;
  for (int j = 0; j < m; ++j) window[j] = 2.0 * spacing * hw[j] / (n - 1);
  return polish(f, pts, values, n, candidates, window,
                [&](const std::vector<double>&, std::size_t j) { return std::pair{-hw[j], hw[j]}; });
}

std::vector<SupPoint> local_maxima_body(const Integrand& f, const ConvexBody& body, int n, int candidates) {
  if (n < 2) throw DomainError("sup grid needs at least two points per axis");
  const int m = body.dim();
  const auto pts = body_grid(body, n);
  std::vector<double> values(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) values[i] = std::abs(f(pts[i]));
  std::vector<double> window(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) window[j] = 2.0 * std::numbers::pi * body.sigma()[j] / (n - 1);
  return polish(f, pts, values, n, candidates, window, [&](const std::vector<double>& x, std::size_t j) {
    const double r = chord_radius(body, x, j);
    return std::pair{-r, r};
  });
}

NormResult lp_norm_cube(const Polynomial& poly, double half_width, double p, const GridSpec& grid) {
  if (!(half_width > 0)) throw DomainError("cube half-width must be positive");
  check_exponent(p);
  if (p == kInfinity) throw DomainError("lp_norm_cube takes finite p; use sup_norm_cube");
  const std::vector<double> hw(static_cast<std::size_t>(poly.dim()), half_width);
  const Integrand f = [&](std::span<const double> x) { return poly(x); };
  if (is_even_integer(p)) {
    // |P|^p = (P conj P)^{p/2} is a polynomial of degree p * deg_j in x_j.
    int deg = 0;
    for (int d : poly.axis_degrees()) deg = std::max(deg, d);
    const int points = static_cast<int>(p) * deg / 2 + 1;
    return {std::pow(box_integral(f, hw, p, 1, points), 1.0 / p), true, 0, 0};
  }
  return lp_norm_box(f, hw, p, grid, 1e-8);
}

double sup_norm_cube(const Polynomial& poly, double half_width, const GridSpec& grid) {
  if (!(half_width > 0)) throw DomainError("cube half-width must be positive");
  const std::vector<double> hw(static_cast<std::size_t>(poly.dim()), half_width);
  return sup_norm_box([&](std::span<const double> x) { return poly(x); }, hw, grid);
}

std::vector<std::vector<double>> body_grid(const ConvexBody& body, int n) {
  const int m = body.dim();
  std::vector<std::vector<double>> xs(static_cast<std::size_t>(m)), ws(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    xs[j] = chebyshev_lobatto(body.sigma()[j], n);
    ws[j].assign(xs[j].size(), 1.0);
  }
  std::vector<std::vector<double>> out;
  for_each_tensor_node(xs, ws, [&](std::span<const double> x, double) {
    const double g = body.gauge(x);
    std::vector<double> pt(x.begin(), x.end());
    if (g > 1.0)
      for (auto& v : pt) v /= g;
    out.push_back(std::move(pt));
  });
  return out;
}

BodyRule body_rule(const ConvexBody& body, int panels, int points) {
  const int m = body.dim();
  const double lambda = body.lambda();
  BodyRule rule;
  std::vector<double> unit_x, unit_w;
  composite_rule(1.0, panels, points, unit_x, unit_w);
  std::vector<double> pt(static_cast<std::size_t>(m));
  // Depth-first over coordinates; rho is the remaining gauge budget.
  auto recurse = [&](auto&& self, int k, double rho, double weight) -> void {
    if (k == m) {
      rule.nodes.push_back(pt);
      rule.weights.push_back(weight);
      return;
    }
    const double radius = body.sigma()[k] * rho;
    if (radius <= 0) return;
    for (std::size_t i = 0; i < unit_x.size(); ++i) {
      double x, w;
      if (lambda == kInfinity) {
        x = radius * unit_x[i];
        w = radius * unit_w[i];
      } else {
        const double u = unit_x[i] * std::numbers::pi / 2;
        x = radius * std::sin(u);
        w = radius * unit_w[i] * (std::numbers::pi / 2) * std::cos(u);
      }
      pt[k] = x;
      double next = 1.0;
      if (lambda != kInfinity) {
        const double rest = std::pow(rho, lambda) - std::pow(std::abs(x) / body.sigma()[k], lambda);
        next = rest <= 0 ? 0.0 : std::pow(rest, 1 / lambda);
      }
      self(self, k + 1, next, weight * w);
    }
  };
  recurse(recurse, 0, 1.0, 1.0);
  return rule;
}

NormResult lp_norm_body(const Integrand& f, const ConvexBody& body, double p, const GridSpec& grid, double tol) {
  check_exponent(p);
  if (p == kInfinity) return {sup_body(f, body, grid), true, 0, 0};
  const int m = body.dim();
  NormResult r;
  double prev = -1;
  for (int level = 0; level <= grid.refinement_levels; ++level) {
    const int panels = 2 << level;
    if (std::pow(static_cast<double>(panels) * grid.points_per_axis, m) > kMaxQuadratureNodes) break;
    const BodyRule rule = body_rule(body, panels, grid.points_per_axis);
    double sum = 0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * pow_abs(f(rule.nodes[i]), p);
    const double value = std::pow(sum, 1.0 / p);
    r.value = value;
    r.levels_used = level;
    if (prev >= 0) {
      r.last_change = std::abs(value - prev) / std::max(std::abs(value), 1e-300);
      if (r.last_change < tol || value == prev) {
        r.converged = true;
        break;
      }
    }
    prev = value;
  }
  return r;
}

NormResult lp_norm_body(const Polynomial& poly, const ConvexBody& body, double p, const GridSpec& grid) {
  if (poly.dim() != body.dim()) throw DimensionMismatch("polynomial and body dimensions differ");
  return lp_norm_body([&](std::span<const double> x) { return poly(x); }, body, p, grid);
}

GramMatrix gram_matrix(const std::vector<MultiIndex>& basis, double half_width) {
  if (basis.empty()) throw DomainError("Gram basis must be nonempty");
  const std::size_t n = basis.size();
  GramMatrix g{basis, Eigen::MatrixXd(n, n)};
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      double v = 1.0;
      for (int j = 0; j < basis[r].dim(); ++j) {
        const int s = basis[r][j] + basis[c][j];
        v *= s % 2 ? 0.0 : 2.0 * std::pow(half_width, s + 1) / (s + 1);
      }
      g.matrix(r, c) = v;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.matrix, Eigen::EigenvaluesOnly);
  g.min_eigenvalue = es.eigenvalues().minCoeff();
  g.max_eigenvalue = es.eigenvalues().maxCoeff();
  return g;
}

GramMatrix gram_matrix(const std::vector<MultiIndex>& basis, const ConvexBody& body, const GridSpec& grid) {
  if (basis.empty()) throw DomainError("Gram basis must be nonempty");
  const std::size_t n = basis.size();
  const int m = body.dim();
  int deg = 0;
  for (const auto& b : basis) {
    if (b.dim() != m) throw DimensionMismatch("basis and body dimensions differ");
    for (int j = 0; j < m; ++j) deg = std::max(deg, b[j]);
  }
  const int points = std::max(grid.points_per_axis, deg + 2);
  Eigen::MatrixXd prev;
  Eigen::MatrixXd cur(n, n);
  for (int level = 0; level <= grid.refinement_levels; ++level) {
    const int panels = 2 << level;
    if (std::pow(static_cast<double>(panels) * points, m) > kMaxQuadratureNodes) break;
    const BodyRule rule = body_rule(body, panels, points);
    cur.setZero();
    Eigen::VectorXd phi(n);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      for (std::size_t r = 0; r < n; ++r) {
        double v = 1.0;
        for (int j = 0; j < m; ++j) v *= std::pow(rule.nodes[i][j], basis[r][j]);
        phi[r] = v;
      }
      cur.noalias() += rule.weights[i] * phi * phi.transpose();
    }
    if (prev.size() && (cur - prev).cwiseAbs().maxCoeff() <= 1e-13 * cur.cwiseAbs().maxCoeff()) break;
    prev = cur;
  }
  GramMatrix g{basis, cur};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.matrix, Eigen::EigenvaluesOnly);
  g.min_eigenvalue = es.eigenvalues().minCoeff();
  g.max_eigenvalue = es.eigenvalues().maxCoeff();
  return g;
}

Eigen::VectorXcd gram_solve(const Eigen::MatrixXd& gram, const Eigen::VectorXcd& rhs) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  const auto& ev = es.eigenvalues();
  const double top = ev.maxCoeff();
  const double bottom = ev.minCoeff();
  if (!(bottom > 1e-13 * top))
    throw IllConditioned("Gram matrix eigenvalue below floor 1e-13 * lambda_max", bottom > 0 ? top / bottom : kInfinity);
  const Eigen::MatrixXcd v = es.eigenvectors().cast<Complex>();
  Eigen::VectorXcd y = v.adjoint() * rhs;
  for (Eigen::Index i = 0; i < y.size(); ++i) y[i] /= ev[i];
  return v * y;
}

bool coefficient_bound_check(const Polynomial& poly, const ConvexBody& body, double a, double half_width,
                             double cube_bound, const GridSpec& grid) {
  if (poly.dim() != body.dim()) throw DimensionMismatch("polynomial and body dimensions differ");
  if (!(half_width > 0) || !(a > 0)) throw DomainError("a and M must be positive");
  for (double s : body.sigma())
    if (s > cube_bound * (1 + kBoundaryTolerance)) throw DomainError("body is not inside the cube Q^m(A)");
  std::vector<double> b(static_cast<std::size_t>(poly.dim()));
  for (const auto& [beta, c] : poly.terms()) {
    for (int j = 0; j < poly.dim(); ++j) b[j] = beta[j];
    if (!contains(body, b, a)) throw DomainError("polynomial support leaves aV");
  }
  const double sup = sup_norm_cube(poly, half_width, grid);
  for (const auto& [beta, c] : poly.terms()) {
    const double bound = std::pow(cube_bound * a / half_width, beta.degree()) * sup / factorial_product(beta);
    if (std::abs(c) > bound * (1 + 1e-8)) return false;
  }
  return true;
}

}  // namespace newton_lab
