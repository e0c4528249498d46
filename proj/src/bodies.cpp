#include "newton_lab/bodies.h"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <boost/random/sobol.hpp>
#include <boost/random/uniform_01.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

namespace newton_lab {

namespace {

void check_dim(const ConvexBody& body, std::size_t n) {
  if (static_cast<std::size_t>(body.dim()) != n)
    throw DimensionMismatch("vector of dimension " + std::to_string(n) + " used with a body of dimension " +
                            std::to_string(body.dim()));
}

double conjugate_exponent(double lambda) {
  if (lambda == 1.0) return kInfinity;
  if (lambda == kInfinity) return 1.0;
  return lambda / (lambda - 1.0);
}

// Weighted l_q norm of (w_j), overflow-safe.
double lq_norm(std::span<const double> w, double q) {
  double mx = 0;
  for (double v : w) mx = std::max(mx, std::abs(v));
  if (mx == 0 || q == kInfinity) return mx;
  double s = 0;
  for (double v : w) s += std::pow(std::abs(v) / mx, q);
  return mx * std::pow(s, 1.0 / q);
}

double real_dual_norm(const ConvexBody& body, std::span<const double> z) {
  std::vector<double> w(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) w[j] = body.sigma()[j] * z[j];
  return lq_norm(w, conjugate_exponent(body.lambda()));
}

// Largest s in [lo, hi] with pred(s) true, assuming pred monotone (true then false).
template <class Pred>
double bisect_last_true(double lo, double hi, Pred pred) {
  if (pred(hi)) return hi;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (pred(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

// ---- ConvexBody ------------------------------------------------------------

ConvexBody::ConvexBody(double lambda, std::vector<double> sigma) : lambda_(lambda), sigma_(std::move(sigma)) {
  if (!(lambda >= 1.0)) throw DomainError("body exponent lambda must lie in [1, inf]");
  if (sigma_.empty()) throw DomainError("body dimension must be positive");
  for (double s : sigma_)
    if (!(s > 0) || !std::isfinite(s)) throw DomainError("body semi-axes must be positive and finite");
}

ConvexBody ConvexBody::cube(int m, double half_width) {
  return ConvexBody(kInfinity, std::vector<double>(static_cast<std::size_t>(m), half_width));
}
ConvexBody ConvexBody::ball(int m, double radius) {
  return ConvexBody(2.0, std::vector<double>(static_cast<std::size_t>(m), radius));
}
ConvexBody ConvexBody::octahedron(int m, double radius) {
  return ConvexBody(1.0, std::vector<double>(static_cast<std::size_t>(m), radius));
}
ConvexBody ConvexBody::parallelepiped(std::vector<double> half_widths) {
  return ConvexBody(kInfinity, std::move(half_widths));
}

double ConvexBody::gauge(std::span<const double> t) const {
  check_dim(*this, t.size());
  std::vector<double> r(t.size());
  for (std::size_t j = 0; j < t.size(); ++j) r[j] = t[j] / sigma_[j];
  return lq_norm(r, lambda_);
}

std::string ConvexBody::describe() const {
  const bool equal_axes = std::all_of(sigma_.begin(), sigma_.end(), [&](double s) { return s == sigma_[0]; });
  std::ostringstream os;
  if (lambda_ == kInfinity)
    os << (equal_axes ? "cube" : "parallelepiped");
  else if (lambda_ == 2.0 && equal_axes)
    os << "ball";
  else if (lambda_ == 1.0 && equal_axes)
    os << "octahedron";
  else
    os << "lambda-body";
  return os.str();
}

bool contains(const ConvexBody& body, std::span<const double> t, double a) {
  if (!(a >= 0)) throw DomainError("scale a must be nonnegative");
  return body.gauge(t) <= a * (1.0 + kBoundaryTolerance);
}

ConvexBody polar(const ConvexBody& body) {
  std::vector<double> inv(body.sigma().size());
  for (std::size_t j = 0; j < inv.size(); ++j) inv[j] = 1.0 / body.sigma()[j];
  return ConvexBody(conjugate_exponent(body.lambda()), std::move(inv));
}

double dual_norm(const ConvexBody& body, std::span<const double> z) {
  check_dim(body, z.size());
  return real_dual_norm(body, z);
}

double dual_norm(const ConvexBody& body, std::span<const Complex> z) {
  check_dim(body, z.size());
  bool real = true;
  for (const auto& v : z) real = real && v.imag() == 0.0;
  std::vector<double> w(z.size());
  if (real) {
    for (std::size_t j = 0; j < z.size(); ++j) w[j] = z[j].real();
    return real_dual_norm(body, w);
  }
  auto h = [&](double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    for (std::size_t j = 0; j < z.size(); ++j) w[j] = c * z[j].real() + s * z[j].imag();
    return real_dual_norm(body, w);
  };
  // h has period pi.
  constexpr int kScan = 720;
  const double step = std::numbers::pi / kScan;
  std::vector<double> values(kScan);
  for (int k = 0; k < kScan; ++k) values[k] = h(k * step);
  double best = *std::max_element(values.begin(), values.end());
  for (int k = 0; k < kScan; ++k) {
    const double prev = values[(k + kScan - 1) % kScan], next = values[(k + 1) % kScan];
    if (values[k] < prev || values[k] < next) continue;
    auto [arg, neg] = boost::math::tools::brent_find_minima([&](double phi) { return -h(phi); }, (k - 1) * step,
                                                            (k + 1) * step, 52);
    best = std::max(best, -neg);
  }
  return best;
}

std::vector<MultiIndex> lattice_points(const ConvexBody& body, double a, std::size_t cap) {
  std::vector<MultiIndex> out;
  for (const auto& theta : lattice_points_signed(body, a, cap, true)) {
    out.emplace_back(std::vector<int>(theta.entries().begin(), theta.entries().end()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Frequency> lattice_points_signed(const ConvexBody& body, double a, std::size_t cap,
                                            bool nonnegative_only) {
  if (!(a >= 0)) throw DomainError("scale a must be nonnegative");
  const int m = body.dim();
  std::vector<int> hi(m);
  for (int j = 0; j < m; ++j) hi[j] = static_cast<int>(std::floor(a * body.sigma()[j] * (1.0 + kBoundaryTolerance)));
  std::vector<Frequency> out;
  std::vector<int> lo(m);
  for (int j = 0; j < m; ++j) lo[j] = nonnegative_only ? 0 : -hi[j];
  std::vector<int> cur(lo);
  std::vector<double> t(m);
  while (true) {
    for (int j = 0; j < m; ++j) t[j] = cur[j];
    if (contains(body, t, a)) {
      if (out.size() >= cap) throw CapacityError("lattice point count exceeds cap of " + std::to_string(cap));
      out.emplace_back(cur);
    }
    int j = 0;
    while (j < m && cur[j] == hi[j]) cur[j] = lo[j], ++j;
    if (j == m) break;
    ++cur[j];
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---- coverings -------------------------------------------------------------

bool Parallelepiped::contains(std::span<const double> t) const {
  if (t.size() != u.size()) throw DimensionMismatch("parallelepiped dimension mismatch");
  for (std::size_t j = 0; j < u.size(); ++j)
    if (std::abs(t[j]) > u[j] * (1.0 + kBoundaryTolerance)) return false;
  return true;
}

std::vector<std::vector<double>> sample_body(const ConvexBody& body, std::size_t count, std::size_t offset) {
  const int m = body.dim();
  boost::random::sobol engine(static_cast<unsigned>(m));
  boost::random::uniform_01<double> unit;
  std::vector<std::vector<double>> out;
  out.reserve(count);
  std::vector<double> t(m);
  std::size_t skipped = 0;
  // Acceptance rate of a V_{lambda,sigma} body in its box is at least 1/m! for m <= 4.
  const std::size_t max_draws = 64 * (count + offset) + 1024;
  for (std::size_t draw = 0; draw < max_draws && out.size() < count; ++draw) {
    for (int j = 0; j < m; ++j) t[j] = (2.0 * unit(engine) - 1.0) * body.sigma()[j];
    if (!contains(body, t)) continue;
    if (skipped < offset) {
      ++skipped;
      continue;
    }
    out.push_back(t);
  }
  return out;
}

Covering cover_with_parallelepipeds(const ConvexBody& body, double delta, const CoverOptions& options) {
  if (!(delta > 1.0)) throw DomainError("inflation delta must exceed 1");
  const int m = body.dim();
  const double root_delta = std::sqrt(delta);
  Covering cov;

  if (body.is_parallelepiped()) {
    cov.family.push_back({body.sigma()});
  } else {
    cov.slab_long.resize(m);
    cov.slab_short.resize(m);
    std::vector<double> corner(m);
    for (int l = 0; l < m; ++l) {
      const double c6 = std::sqrt((1.0 + delta) / 2.0) * body.sigma()[l];
      auto inside = [&](double c7) {
        for (int j = 0; j < m; ++j) corner[j] = j == l ? c6 : c7;
        return body.gauge(corner) <= root_delta;
      };
      const double c7 = bisect_last_true(0.0, c6, inside);
      cov.slab_long[l] = c6;
      cov.slab_short[l] = c7;
      std::vector<double> u(m);
      for (int j = 0; j < m; ++j) u[j] = root_delta * (j == l ? c6 : c7);
      cov.family.push_back({std::move(u)});
    }
  }

  const auto samples = sample_body(body, options.sample_count, options.sample_offset);
  std::vector<std::vector<double>> uncovered;
  for (const auto& x : samples) {
    const bool covered =
        std::any_of(cov.family.begin(), cov.family.end(), [&](const Parallelepiped& p) { return p.contains(x); });
    if (covered) continue;
    if (cov.family.size() >= options.greedy_budget) {
      uncovered.push_back(x);
      continue;
    }
    // Pi^m(u) with u >= sqrt(delta)|x|; coordinates below s*sigma_j are lifted
    // to s*sigma_j with s as large as u in delta V allows.
    std::vector<double> base(m), u(m);
    for (int j = 0; j < m; ++j) base[j] = root_delta * std::abs(x[j]);
    auto fits = [&](double s) {
      for (int j = 0; j < m; ++j) u[j] = std::max(base[j], s * body.sigma()[j]);
      return body.gauge(u) <= delta;
    };
    const double s = bisect_last_true(0.0, delta, fits);
    fits(s);
    cov.family.push_back({u});
  }
  if (!uncovered.empty())
    throw CoverageError("greedy covering budget exhausted with " + std::to_string(uncovered.size()) +
                            " uncovered samples",
                        std::move(uncovered));

  for (const auto& p : cov.family)
    if (!contains(body, p.u, delta)) throw BoundViolation("covering parallelepiped corner escapes delta V");

  cov.min_half_width = kInfinity;
  for (const auto& p : cov.family)
    for (double v : p.u) cov.min_half_width = std::min(cov.min_half_width, v);

  cov.samples_checked = samples.size();
  for (const auto& x : samples)
    if (std::any_of(cov.family.begin(), cov.family.end(), [&](const Parallelepiped& p) { return p.contains(x); }))
      ++cov.samples_covered;
  return cov;
}

bool check_pi_condition(const ConvexBody& body, std::size_t sample_count) {
  if (sample_count < 1) throw DomainError("sample_count must be positive");
  const int m = body.dim();
  std::vector<double> flipped(m);
  for (const auto& t : sample_body(body, sample_count)) {
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
      for (int j = 0; j < m; ++j) flipped[j] = (mask >> j & 1u) ? -std::abs(t[j]) : std::abs(t[j]);
      if (!contains(body, flipped)) return false;
    }
  }
  return true;
}

}  // namespace newton_lab
