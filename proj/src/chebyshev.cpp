#include "newton_lab/chebyshev.h"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "newton_lab/bodies.h"

namespace newton_lab {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

double factorial(int k) {
  double f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// P_n = 2^{-n} sum_j (-1)^j C(n,j) C(2n-2j, n) x^{n-2j}.
std::vector<cpp_rational> legendre_exact(int n) {
  static std::mutex mutex;
  static std::map<int, std::vector<cpp_rational>> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  auto binom = [](int a, int b) {
    cpp_int r = 1;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
  };
  std::vector<cpp_rational> c(static_cast<std::size_t>(n + 1), cpp_rational(0));
  const cpp_int denom = cpp_int(1) << n;
  for (int j = 0; 2 * j <= n; ++j) {
    cpp_int v = binom(n, j) * binom(2 * n - 2 * j, n);
    if (j % 2) v = -v;
    c[n - 2 * j] = cpp_rational(v, denom);
  }
  cache.emplace(n, c);
  return c;
}

}  // namespace

std::vector<std::int64_t> chebyshev_coefficients(int n) {
  if (n < 0) throw DomainError("Chebyshev degree must be nonnegative");
  if (n > kMaxExactChebyshevDegree)
    throw DomainError("exact Chebyshev coefficients are limited to n <= 40");
  std::vector<std::int64_t> prev{1}, cur{0, 1};
  if (n == 0) return prev;
  for (int k = 1; k < n; ++k) {
    std::vector<std::int64_t> next(cur.size() + 1, 0);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += 2 * cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

Polynomial chebyshev_T(int n) {
  const auto c = chebyshev_coefficients(n);
  Polynomial p(1);
  for (std::size_t k = 0; k < c.size(); ++k) p.add_term(MultiIndex{static_cast<int>(k)}, static_cast<double>(c[k]));
  return p;
}

double chebyshev_derivative_at_zero(int n, int k) {
  if (k < 0) throw DomainError("derivative order must be nonnegative");
  if (k > n) return 0.0;
  return factorial(k) * static_cast<double>(chebyshev_coefficients(n)[k]);
}

std::vector<double> legendre_coefficients(int n) {
  if (n < 0) throw DomainError("Legendre degree must be nonnegative");
  std::vector<double> out;
  for (const auto& c : legendre_exact(n)) out.push_back(static_cast<double>(c));
  return out;
}

double legendre_derivative_at_zero(int n, int k) {
  if (n < 0 || k < 0) throw DomainError("Legendre degree and derivative order must be nonnegative");
  if (k > n) return 0.0;
  cpp_rational v = legendre_exact(n)[k];
  for (int i = 2; i <= k; ++i) v *= i;
  return static_cast<double>(v);
}

double mu(int order, int n) {
  if (n < 1) throw DomainError("mu requires n >= 1");
  if (order < 0 || order > n) throw DomainError("mu requires 0 <= N <= n");
  const int k = (n - order) % 2 ? n - 1 : n;
  return std::abs(chebyshev_derivative_at_zero(k, order)) / std::pow(static_cast<double>(n), order);
}

double labelle_constant(int order, int n) {
  if (n < 1) throw DomainError("Labelle constant requires n >= 1");
  if (order < 0 || order > n) throw DomainError("Labelle constant requires 0 <= N <= n");
  const double big_n = order;
  const double top = std::floor((n - order) / 2.0) + big_n + 0.5;
  const double bottom = big_n + 0.5;
  // (2N)!/(2^N N!) sqrt(N+1/2) n^{-(N+1/2)} C(top, bottom); top - bottom is a nonnegative integer.
  const double log_value = std::lgamma(2 * big_n + 1) - big_n * std::log(2.0) - std::lgamma(big_n + 1) +
                           0.5 * std::log(bottom) - bottom * std::log(static_cast<double>(n)) +
                           std::lgamma(top + 1) - std::lgamma(bottom + 1) - std::lgamma(top - bottom + 1);
  return std::exp(log_value);
}

double bernstein_product_constant(const MultiIndex& alpha, double a, std::span<const double> sigma) {
  if (static_cast<std::size_t>(alpha.dim()) != sigma.size())
    throw DimensionMismatch("alpha and sigma dimensions differ");
  if (!(a >= 1)) throw DomainError("Bernstein product constant requires a >= 1");
  double value = std::pow(a, -alpha.degree());
  for (std::size_t j = 0; j < sigma.size(); ++j) {
    const int n = static_cast<int>(std::floor(a * sigma[j] * (1.0 + kBoundaryTolerance)));
    if (n < 1) throw DomainError("floor(a sigma_j) must be at least 1");
    if (alpha[j] > n) throw DomainError("alpha_j exceeds floor(a sigma_j)");
    value *= std::pow(static_cast<double>(n), alpha[j]) * mu(alpha[j], n);
  }
  return value;
}

}  // namespace newton_lab
