#pragma once

#include <complex>
#include <map>
#include <span>
#include <vector>

#include "newton_lab/multi_index.h"

namespace newton_lab {

using Complex = std::complex<double>;

/// Sparse multivariate polynomial sum_beta c_beta x^beta with complex
/// coefficients. Zero coefficients are never stored.
class Polynomial {
 public:
  using TermMap = std::map<MultiIndex, Complex>;

  explicit Polynomial(int m);

  static Polynomial constant(int m, Complex c);
  /// x_j (0-based axis).
  static Polynomial variable(int m, int j);
  static Polynomial monomial(const MultiIndex& beta, Complex c = 1.0);

  int dim() const noexcept { return m_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  Complex coefficient(const MultiIndex& beta) const;

  /// Adds c to the coefficient of x^beta, dropping the term if it cancels.
  void add_term(const MultiIndex& beta, Complex c);

  int total_degree() const;
  /// Largest exponent of each variable over the support.
  std::vector<int> axis_degrees() const;

  Complex operator()(std::span<const double> x) const;
  Complex operator()(std::span<const Complex> z) const;

  /// D^alpha P.
  Polynomial derivative(const MultiIndex& alpha) const;

  /// x -> P(s_1 x_1, ..., s_m x_m).
  Polynomial scale_arguments(std::span<const double> s) const;

  Polynomial conj() const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(Complex c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, Complex c) { return a *= c; }
  friend Polynomial operator*(Complex c, Polynomial a) { return a *= c; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  /// Drops coefficients with |c| <= tol * max|c|.
  Polynomial pruned(double tol) const;

 private:
  int m_;
  TermMap terms_;
};

/// Sum c_beta x^beta with compensated (Neumaier) accumulation.
Complex eval(const Polynomial& p, std::span<const double> x);
Complex eval(const Polynomial& p, std::span<const Complex> z);

/// Homogeneous operator D_N = sum_{|alpha|=N} b_alpha D^alpha. N = 0 is the identity.
class DiffOperator {
 public:
  using TermMap = std::map<MultiIndex, Complex>;

  DiffOperator(int m, int order);

  static DiffOperator identity(int m);
  /// D^alpha with coefficient one.
  static DiffOperator partial(const MultiIndex& alpha);
  /// d^N/dx^N in one variable.
  static DiffOperator univariate(int order);

  int dim() const noexcept { return m_; }
  int order() const noexcept { return order_; }
  const TermMap& terms() const noexcept { return terms_; }

  void add_term(const MultiIndex& alpha, Complex b);

  /// sum_alpha b_alpha (i t)^alpha, the Fourier symbol at t.
  Complex symbol(std::span<const double> t) const;
  /// The symbol as a polynomial in t.
  Polynomial symbol_polynomial() const;

  DiffOperator& operator*=(Complex c);

  bool has_real_coefficients() const;

 private:
  int m_;
  int order_;
  TermMap terms_;
};

/// D_N(P)(0) = sum_{|alpha|=N} b_alpha alpha! c_alpha.
Complex apply_operator_at_zero(const DiffOperator& d, const Polynomial& p);

/// Trigonometric polynomial sum_theta c_theta exp(i theta.t).
class TrigPolynomial {
 public:
  using TermMap = std::map<Frequency, Complex>;

  explicit TrigPolynomial(int m);

  int dim() const noexcept { return m_; }
  const TermMap& terms() const noexcept { return terms_; }
  Complex coefficient(const Frequency& theta) const;
  void add_term(const Frequency& theta, Complex c);

  Complex operator()(std::span<const double> t) const;

  /// D_N(T)(0) = sum_theta c_theta sym(theta).
  Complex apply_at_zero(const DiffOperator& d) const;

  /// Largest |theta_j| per axis over the spectrum.
  std::vector<int> axis_degrees() const;

  TrigPolynomial pruned(double tol) const;

 private:
  int m_;
  TermMap terms_;
};

}  // namespace newton_lab
