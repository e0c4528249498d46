#pragma once

// Reference computations that share no code with the library.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

// Monomial coefficients of T_n by T_{n+1} = 2x T_n - T_{n-1}, exact in int64 for n <= 40.
inline std::vector<std::int64_t> chebyshev(int n) {
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

inline double factorial(int n) { return std::tgamma(n + 1.0); }

// n^{-N} |T^{(N)}(0)| for the Chebyshev polynomial of matching parity.
inline double mu(int order, int n) {
  const int k = (n - order) % 2 == 1 ? n - 1 : n;
  const auto t = chebyshev(k);
  const double c = order < static_cast<int>(t.size()) ? static_cast<double>(t[static_cast<std::size_t>(order)]) : 0.0;
  return std::pow(n, -order) * std::abs(c) * factorial(order);
}

// Monomial coefficients of the Legendre polynomial P_n, (k+1)P_{k+1} = (2k+1)x P_k - k P_{k-1}.
inline std::vector<long double> legendre(int n) {
  std::vector<long double> prev{1}, cur{0, 1};
  if (n == 0) return prev;
  for (int k = 1; k < n; ++k) {
    std::vector<long double> next(cur.size() + 1, 0);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += (2 * k + 1) * cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= k * prev[i];
    for (auto& v : next) v /= (k + 1);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

// Rayleigh quotient in the orthonormal Legendre basis on [-1, 1]:
// n^{-N-1/2} sqrt(sum_k (2k+1)/2 * (P_k^{(N)}(0))^2).
inline double labelle_sum(int order, int n) {
  long double s = 0;
  for (int k = order; k <= n; ++k) {
    const auto c = legendre(k);
    const long double d = c[static_cast<std::size_t>(order)] * static_cast<long double>(factorial(order));
    s += (2 * k + 1) / 2.0L * d * d;
  }
  return static_cast<double>(std::pow(static_cast<long double>(n), -order - 0.5L) * std::sqrt(s));
}

// int over {sum |x_j|^lambda <= 1} of prod |x_j|^{q_j - 1}  (Dirichlet).
inline double dirichlet_moment(const std::vector<double>& q, double lambda) {
  const double m = static_cast<double>(q.size());
  double num = std::pow(2.0, m), sum = 0;
  for (double qj : q) {
    num *= std::tgamma(qj / lambda);
    sum += qj;
  }
  return num / (std::pow(lambda, m) * std::tgamma(sum / lambda + 1));
}

// Dense bivariate truncated power series (m <= 2; m = 1 uses only row 0).
struct Series {
  int deg;
  std::vector<cplx> c;  // c[i * (deg + 1) + j] for t1^i t2^j
  explicit Series(int d) : deg(d), c(static_cast<std::size_t>((d + 1) * (d + 1)), 0.0) {}
  cplx& at(int i, int j) { return c[static_cast<std::size_t>(i * (deg + 1) + j)]; }
  cplx at(int i, int j) const { return c[static_cast<std::size_t>(i * (deg + 1) + j)]; }
};

inline Series multiply(const Series& a, const Series& b) {
  Series r(a.deg);
  for (int i = 0; i <= a.deg; ++i)
    for (int j = 0; i + j <= a.deg; ++j) {
      if (a.at(i, j) == 0.0) continue;
      for (int k = 0; i + k <= a.deg; ++k)
        for (int l = 0; i + j + k + l <= a.deg; ++l) r.at(i + k, j + l) += a.at(i, j) * b.at(k, l);
    }
  return r;
}

// b sin(t_axis / b) truncated at total degree `deg`.
inline Series scaled_sine(int axis, double b, int deg) {
  Series s(deg);
  double fact = 1;
  for (int k = 1; k <= deg; ++k) {
    fact *= k;
    if (k % 2 == 0) continue;
    const double coef = ((k / 2) % 2 == 0 ? 1.0 : -1.0) / (fact * std::pow(b, k - 1));
    if (axis == 0)
      s.at(k, 0) = coef;
    else
      s.at(0, k) = coef;
  }
  return s;
}

struct Term {
  int e1, e2;
  cplx c;
};

// D^alpha of t -> P(b sin(t1/b), b sin(t2/b)) at 0 by composing truncated series.
inline cplx composed_derivative(const std::vector<Term>& p, double b, int a1, int a2) {
  const int deg = a1 + a2;
  const Series s1 = scaled_sine(0, b, deg), s2 = scaled_sine(1, b, deg);
  Series total(deg);
  for (const auto& t : p) {
    Series prod(deg);
    prod.at(0, 0) = t.c;
    for (int k = 0; k < t.e1; ++k) prod = multiply(prod, s1);
    for (int k = 0; k < t.e2; ++k) prod = multiply(prod, s2);
    for (std::size_t i = 0; i < total.c.size(); ++i) total.c[i] += prod.c[i];
  }
  return total.at(a1, a2) * factorial(a1) * factorial(a2);
}

// Partition enumeration of k into exactly l odd parts with weights
// k! prod ((-1)^j)^{p} / (p! ((2j+1)!)^p).
inline double faa_partitions(int l, int k, int smallest = 1) {
  // Recursive over the multiplicity of the part `smallest`, then larger parts.
  if (k == 0) return l == 0 ? 1.0 : 0.0;
  if (smallest > k || l <= 0) return 0.0;
  double total = 0;
  const int j = (smallest - 1) / 2;
  for (int p = 0; p * smallest <= k && p <= l; ++p) {
    const double w = std::pow(j % 2 == 0 ? 1.0 : -1.0, p) / (factorial(p) * std::pow(factorial(smallest), p));
    total += w * faa_partitions(l - p, k - p * smallest, smallest + 2);
  }
  return total;
}
inline double faa_c(int l, int k) { return factorial(k) * faa_partitions(l, k); }

}  // namespace oracle
