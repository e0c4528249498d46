#include "newton_lab/polynomial.h"

#include <algorithm>
#include <cmath>

namespace newton_lab {

namespace {

// Neumaier summation of a complex stream, real and imaginary parts kept apart.
class CompensatedSum {
 public:
  void add(Complex v) {
    add_part(re_, re_c_, v.real());
    add_part(im_, im_c_, v.imag());
  }
  Complex value() const { return {re_ + re_c_, im_ + im_c_}; }

 private:
  static void add_part(double& sum, double& comp, double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double re_ = 0, re_c_ = 0, im_ = 0, im_c_ = 0;
};

template <class T>
T ipow(T x, int k) {
  T r(1);
  while (k > 0) {
    if (k & 1) r *= x;
    x *= x;
    k >>= 1;
  }
  return r;
}

void check_dim(int expected, std::size_t got) {
  if (static_cast<std::size_t>(expected) != got)
    throw DimensionMismatch("expected dimension " + std::to_string(expected) + ", got " + std::to_string(got));
}

template <class Scalar>
Complex eval_impl(const Polynomial& p, std::span<const Scalar> x) {
  check_dim(p.dim(), x.size());
  CompensatedSum sum;
  for (const auto& [beta, c] : p.terms()) {
    Complex term = c;
    for (int j = 0; j < p.dim(); ++j)
      if (beta[j] != 0) term *= Complex(ipow(x[j], beta[j]));
    sum.add(term);
  }
  return sum.value();
}

}  // namespace

double factorial_product(const MultiIndex& beta) {
  double f = 1.0;
  for (int e : beta.entries())
    for (int k = 2; k <= e; ++k) f *= k;
  return f;
}

// ---- Polynomial ------------------------------------------------------------

Polynomial::Polynomial(int m) : m_(m) {
  if (m < 1) throw DomainError("polynomial dimension must be positive");
}

Polynomial Polynomial::constant(int m, Complex c) {
  Polynomial p(m);
  p.add_term(MultiIndex::zero(m), c);
  return p;
}

Polynomial Polynomial::variable(int m, int j) {
  std::vector<int> e(static_cast<std::size_t>(m), 0);
  e.at(static_cast<std::size_t>(j)) = 1;
  return monomial(MultiIndex(e));
}

Polynomial Polynomial::monomial(const MultiIndex& beta, Complex c) {
  Polynomial p(beta.dim());
  p.add_term(beta, c);
  return p;
}

Complex Polynomial::coefficient(const MultiIndex& beta) const {
  auto it = terms_.find(beta);
  return it == terms_.end() ? Complex{} : it->second;
}

void Polynomial::add_term(const MultiIndex& beta, Complex c) {
  check_dim(m_, static_cast<std::size_t>(beta.dim()));
  if (c == Complex{}) return;
  auto [it, inserted] = terms_.try_emplace(beta, c);
  if (!inserted) {
    it->second += c;
    if (it->second == Complex{}) terms_.erase(it);
  }
}

int Polynomial::total_degree() const {
  int d = 0;
  for (const auto& [beta, c] : terms_) d = std::max(d, beta.degree());
  return d;
}

std::vector<int> Polynomial::axis_degrees() const {
  std::vector<int> d(static_cast<std::size_t>(m_), 0);
  for (const auto& [beta, c] : terms_)
    for (int j = 0; j < m_; ++j) d[j] = std::max(d[j], beta[j]);
  return d;
}

Complex Polynomial::operator()(std::span<const double> x) const { return eval_impl(*this, x); }
Complex Polynomial::operator()(std::span<const Complex> z) const { return eval_impl(*this, z); }

Polynomial Polynomial::derivative(const MultiIndex& alpha) const {
  check_dim(m_, static_cast<std::size_t>(alpha.dim()));
  Polynomial out(m_);
  for (const auto& [beta, c] : terms_) {
    std::vector<int> e(beta.entries().begin(), beta.entries().end());
    double factor = 1.0;
    bool vanishes = false;
    for (int j = 0; j < m_ && !vanishes; ++j) {
      if (alpha[j] > e[j]) {
        vanishes = true;
        break;
      }
      for (int k = 0; k < alpha[j]; ++k) factor *= e[j] - k;
      e[j] -= alpha[j];
    }
    if (!vanishes) out.add_term(MultiIndex(e), c * factor);
  }
  return out;
}

Polynomial Polynomial::scale_arguments(std::span<const double> s) const {
  check_dim(m_, s.size());
  Polynomial out(m_);
  for (const auto& [beta, c] : terms_) {
    Complex v = c;
    for (int j = 0; j < m_; ++j) v *= ipow(s[j], beta[j]);
    out.add_term(beta, v);
  }
  return out;
}

Polynomial Polynomial::conj() const {
  Polynomial out(m_);
  for (const auto& [beta, c] : terms_) out.add_term(beta, std::conj(c));
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  check_dim(m_, static_cast<std::size_t>(other.m_));
  for (const auto& [beta, c] : other.terms_) add_term(beta, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  check_dim(m_, static_cast<std::size_t>(other.m_));
  for (const auto& [beta, c] : other.terms_) add_term(beta, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(Complex c) {
  if (c == Complex{}) {
    terms_.clear();
    return *this;
  }
  for (auto& [beta, v] : terms_) v *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  check_dim(a.dim(), static_cast<std::size_t>(b.dim()));
  Polynomial out(a.dim());
  for (const auto& [ba, ca] : a.terms())
    for (const auto& [bb, cb] : b.terms()) {
      std::vector<int> e(static_cast<std::size_t>(a.dim()));
      for (int j = 0; j < a.dim(); ++j) e[j] = ba[j] + bb[j];
      out.add_term(MultiIndex(e), ca * cb);
    }
  return out;
}

Polynomial Polynomial::pruned(double tol) const {
  double mx = 0;
  for (const auto& [beta, c] : terms_) mx = std::max(mx, std::abs(c));
  Polynomial out(m_);
  for (const auto& [beta, c] : terms_)
    if (std::abs(c) > tol * mx) out.add_term(beta, c);
  return out;
}

Complex eval(const Polynomial& p, std::span<const double> x) { return p(x); }
Complex eval(const Polynomial& p, std::span<const Complex> z) { return p(z); }

// ---- DiffOperator ----------------------------------------------------------

DiffOperator::DiffOperator(int m, int order) : m_(m), order_(order) {
  if (m < 1) throw DomainError("operator dimension must be positive");
  if (order < 0) throw DomainError("operator order must be nonnegative");
}

DiffOperator DiffOperator::identity(int m) {
  DiffOperator d(m, 0);
  d.add_term(MultiIndex::zero(m), 1.0);
  return d;
}

DiffOperator DiffOperator::partial(const MultiIndex& alpha) {
  DiffOperator d(alpha.dim(), alpha.degree());
  d.add_term(alpha, 1.0);
  return d;
}

DiffOperator DiffOperator::univariate(int order) { return partial(MultiIndex{order}); }

void DiffOperator::add_term(const MultiIndex& alpha, Complex b) {
  check_dim(m_, static_cast<std::size_t>(alpha.dim()));
  if (alpha.degree() != order_)
    throw DomainError("operator term order " + std::to_string(alpha.degree()) + " differs from N = " +
                      std::to_string(order_));
  if (b == Complex{}) return;
  auto [it, inserted] = terms_.try_emplace(alpha, b);
  if (!inserted) {
    it->second += b;
    if (it->second == Complex{}) terms_.erase(it);
  }
}

Complex DiffOperator::symbol(std::span<const double> t) const {
  check_dim(m_, t.size());
  const Complex i_pow = ipow(Complex(0, 1), order_);
  Complex s{};
  for (const auto& [alpha, b] : terms_) {
    double mono = 1.0;
    for (int j = 0; j < m_; ++j) mono *= ipow(t[j], alpha[j]);
    s += b * mono;
  }
  return i_pow * s;
}

Polynomial DiffOperator::symbol_polynomial() const {
  const Complex i_pow = ipow(Complex(0, 1), order_);
  Polynomial p(m_);
  for (const auto& [alpha, b] : terms_) p.add_term(alpha, i_pow * b);
  return p;
}

DiffOperator& DiffOperator::operator*=(Complex c) {
  TermMap scaled;
  for (const auto& [alpha, b] : terms_)
    if (b * c != Complex{}) scaled.emplace(alpha, b * c);
  terms_ = std::move(scaled);
  return *this;
}

bool DiffOperator::has_real_coefficients() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& kv) { return kv.second.imag() == 0.0; });
}

Complex apply_operator_at_zero(const DiffOperator& d, const Polynomial& p) {
  check_dim(d.dim(), static_cast<std::size_t>(p.dim()));
  Complex s{};
  for (const auto& [alpha, b] : d.terms()) s += b * factorial_product(alpha) * p.coefficient(alpha);
  return s;
}

// ---- TrigPolynomial --------------------------------------------------------

TrigPolynomial::TrigPolynomial(int m) : m_(m) {
  if (m < 1) throw DomainError("trigonometric polynomial dimension must be positive");
}

Complex TrigPolynomial::coefficient(const Frequency& theta) const {
  auto it = terms_.find(theta);
  return it == terms_.end() ? Complex{} : it->second;
}

void TrigPolynomial::add_term(const Frequency& theta, Complex c) {
  check_dim(m_, static_cast<std::size_t>(theta.dim()));
  if (c == Complex{}) return;
  auto [it, inserted] = terms_.try_emplace(theta, c);
  if (!inserted) {
    it->second += c;
    if (it->second == Complex{}) terms_.erase(it);
  }
}

Complex TrigPolynomial::operator()(std::span<const double> t) const {
  check_dim(m_, t.size());
  CompensatedSum sum;
  for (const auto& [theta, c] : terms_) {
    double phase = 0;
    for (int j = 0; j < m_; ++j) phase += theta[j] * t[j];
    sum.add(c * std::polar(1.0, phase));
  }
  return sum.value();
}

Complex TrigPolynomial::apply_at_zero(const DiffOperator& d) const {
  check_dim(m_, static_cast<std::size_t>(d.dim()));
  Complex s{};
  std::vector<double> th(static_cast<std::size_t>(m_));
  for (const auto& [theta, c] : terms_) {
    for (int j = 0; j < m_; ++j) th[j] = theta[j];
    s += c * d.symbol(th);
  }
  return s;
}

std::vector<int> TrigPolynomial::axis_degrees() const {
  std::vector<int> d(static_cast<std::size_t>(m_), 0);
  for (const auto& [theta, c] : terms_)
    for (int j = 0; j < m_; ++j) d[j] = std::max(d[j], std::abs(theta[j]));
  return d;
}

TrigPolynomial TrigPolynomial::pruned(double tol) const {
  double mx = 0;
  for (const auto& [theta, c] : terms_) mx = std::max(mx, std::abs(c));
  TrigPolynomial out(m_);
  for (const auto& [theta, c] : terms_)
    if (std::abs(c) > tol * mx) out.add_term(theta, c);
  return out;
}

}  // namespace newton_lab
