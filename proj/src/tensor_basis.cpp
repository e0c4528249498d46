#include "newton_lab/tensor_basis.h"

#include <algorithm>
#include <cmath>

#include "newton_lab/chebyshev.h"

namespace newton_lab {

TensorBasis::TensorBasis(BasisFamily family, std::vector<MultiIndex> indices, std::vector<double> scale)
    : family_(family), indices_(std::move(indices)), scale_(std::move(scale)) {
  if (indices_.empty()) throw DomainError("basis index set must be nonempty");
  const int m = dim();
  max_degree_.assign(static_cast<std::size_t>(m), 0);
  for (const auto& b : indices_) {
    if (b.dim() != m) throw DimensionMismatch("basis index dimension differs from scale dimension");
    for (int j = 0; j < m; ++j) max_degree_[j] = std::max(max_degree_[j], b[j]);
  }
  for (double s : scale_)
    if (!(s > 0)) throw DomainError("basis scale must be positive");
  const int top = *std::max_element(max_degree_.begin(), max_degree_.end());
  for (int n = 0; n <= top; ++n) {
    if (family_ == BasisFamily::legendre) {
      univariate_.push_back(legendre_coefficients(n));
    } else {
      std::vector<double> c;
      for (auto v : chebyshev_coefficients(n)) c.push_back(static_cast<double>(v));
      univariate_.push_back(std::move(c));
    }
  }
}

void TensorBasis::evaluate(std::span<const double> x, Eigen::Ref<Eigen::VectorXd> out) const {
  const int m = dim();
  if (x.size() != static_cast<std::size_t>(m)) throw DimensionMismatch("basis evaluation point dimension mismatch");
  // Three-term recurrences per axis.
  thread_local std::vector<std::vector<double>> values;
  values.resize(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    const double u = x[j] / scale_[j];
    auto& v = values[j];
    v.assign(static_cast<std::size_t>(max_degree_[j] + 1), 0.0);
    v[0] = 1.0;
    if (max_degree_[j] >= 1) v[1] = u;
    for (int n = 1; n < max_degree_[j]; ++n) {
      v[n + 1] = family_ == BasisFamily::legendre ? ((2 * n + 1) * u * v[n] - n * v[n - 1]) / (n + 1)
                                                  : 2 * u * v[n] - v[n - 1];
    }
  }
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    double prod = 1.0;
    for (int j = 0; j < m; ++j) prod *= values[j][indices_[i][j]];
    out[static_cast<Eigen::Index>(i)] = prod;
  }
}

Eigen::VectorXcd TensorBasis::operator_at_zero(const DiffOperator& d) const {
  if (d.dim() != dim()) throw DimensionMismatch("operator and basis dimensions differ");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(size()));
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    Complex total{};
    for (const auto& [alpha, b] : d.terms()) {
      double prod = 1.0;
      for (int j = 0; j < dim() && prod != 0.0; ++j) {
        const int n = indices_[i][j], k = alpha[j];
        const double deriv = family_ == BasisFamily::legendre ? legendre_derivative_at_zero(n, k)
                                                              : chebyshev_derivative_at_zero(n, k);
        prod *= deriv / std::pow(scale_[j], k);
      }
      total += b * prod;
    }
    out[static_cast<Eigen::Index>(i)] = total;
  }
  return out;
}

Polynomial TensorBasis::to_polynomial(const Eigen::VectorXcd& coefficients) const {
  if (static_cast<std::size_t>(coefficients.size()) != size()) throw DimensionMismatch("coefficient vector size");
  const int m = dim();
  Polynomial out(m);
  std::vector<int> e(static_cast<std::size_t>(m));
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    const Complex c = coefficients[static_cast<Eigen::Index>(i)];
    if (c == Complex{}) continue;
    const auto& beta = indices_[i];
    std::vector<int> pos(static_cast<std::size_t>(m), 0);
    while (true) {
      double v = 1.0;
      for (int j = 0; j < m && v != 0.0; ++j) {
        v *= univariate_[beta[j]][pos[j]] / std::pow(scale_[j], pos[j]);
        e[j] = pos[j];
      }
      if (v != 0.0) out.add_term(MultiIndex(e), c * v);
      int j = 0;
      while (j < m && pos[j] == beta[j]) pos[j] = 0, ++j;
      if (j == m) break;
      ++pos[j];
    }
  }
  return out;
}

double TensorBasis::legendre_norm_squared(std::size_t i) const {
  if (family_ != BasisFamily::legendre) throw DomainError("closed-form norms exist for the Legendre family only");
  double v = 1.0;
  for (int j = 0; j < dim(); ++j) v *= scale_[j] * 2.0 / (2 * indices_[i][j] + 1);
  return v;
}

}  // namespace newton_lab
