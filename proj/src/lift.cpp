#include "newton_lab/lift.h"

#include <cmath>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace newton_lab {

namespace {

using boost::multiprecision::cpp_int;

cpp_int factorial_exact(int k) {
  cpp_int f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Sum over multiplicities of odd parts >= part whose sizes add to `remaining` and counts to `parts_left`.
Rational partition_sum(int part, int remaining, int parts_left) {
  if (remaining == 0) return parts_left == 0 ? Rational(1) : Rational(0);
  if (parts_left == 0 || part > remaining) return Rational(0);
  Rational total = 0;
  const int j = (part - 1) / 2;
  const Rational part_factorial(factorial_exact(part));
  Rational weight = 1;  // sign^p / (p! (part!)^p)
  for (int p = 0; p * part <= remaining && p <= parts_left; ++p) {
    if (p > 0) {
      weight /= part_factorial * p;
      if (j % 2) weight = -weight;
    }
    total += weight * partition_sum(part + 2, remaining - p * part, parts_left - p);
  }
  return total;
}

double binomial(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

Rational faa_di_bruno_c(int l, int k) {
  if (l < 0 || k < 0) throw DomainError("c(l,k) requires nonnegative arguments");
  if (l > k) throw DomainError("c(l,k) requires l <= k");
  static std::mutex mutex;
  static std::map<std::pair<int, int>, Rational> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find({l, k}); it != cache.end()) return it->second;
  const Rational value = Rational(factorial_exact(k)) * partition_sum(1, k, l);
  cache.emplace(std::pair{l, k}, value);
  return value;
}

double faa_di_bruno_value(int l, int k) { return static_cast<double>(faa_di_bruno_c(l, k)); }

TrigPolynomial trig_lift(const Polynomial& p, double b) {
  if (!(b > 0)) throw DomainError("lift scale b must be positive");
  const int m = p.dim();
  TrigPolynomial out(m);
  const Complex two_i(0, 2);
  for (const auto& [beta, c] : p.terms()) {
    // Per-axis expansions of sin^{beta_j}, combined by tensor product.
    std::vector<std::vector<std::pair<int, Complex>>> axis(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
      const int k = beta[j];
      const Complex scale = std::pow(two_i, -k);
      for (int r = 0; r <= k; ++r) {
        const double sign = (k - r) % 2 ? -1.0 : 1.0;
        axis[j].emplace_back(2 * r - k, scale * binomial(k, r) * sign);
      }
    }
    const Complex lead = c * std::pow(b, beta.degree());
    std::vector<std::size_t> pos(static_cast<std::size_t>(m), 0);
    std::vector<int> theta(static_cast<std::size_t>(m));
    while (true) {
      Complex v = lead;
      for (int j = 0; j < m; ++j) {
        theta[j] = axis[j][pos[j]].first;
        v *= axis[j][pos[j]].second;
      }
      out.add_term(Frequency(theta), v);
      int j = 0;
      while (j < m && pos[j] + 1 == axis[j].size()) pos[j] = 0, ++j;
      if (j == m) break;
      ++pos[j];
    }
  }
  return out;
}

Complex lift_derivative_at_zero(const Polynomial& p, double b, const MultiIndex& alpha) {
  if (!(b > 0)) throw DomainError("lift scale b must be positive");
  if (alpha.dim() != p.dim()) throw DimensionMismatch("alpha and polynomial dimensions differ");
  const int m = p.dim();
  Complex total{};
  std::vector<int> s(static_cast<std::size_t>(m), 0);
  while (true) {
    double weight = 1.0;
    for (int j = 0; j < m && weight != 0.0; ++j) weight *= faa_di_bruno_value(s[j], alpha[j]);
    if (weight != 0.0) {
      const MultiIndex si(s);
      const Complex d = factorial_product(si) * p.coefficient(si);
      if (d != Complex{}) total += std::pow(b, si.degree() - alpha.degree()) * weight * d;
    }
    int j = 0;
    while (j < m && s[j] == alpha[j]) s[j] = 0, ++j;
    if (j == m) break;
    ++s[j];
  }
  return total;
}

}  // namespace newton_lab
