#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "newton_lab/polynomial.h"

namespace newton_lab {

enum class BasisFamily { legendre, chebyshev };

/// phi_beta(x) = prod_j F_{beta_j}(x_j / s_j) for F the Legendre or Chebyshev
/// family. When the index set is downward closed (every aV with the
/// Pi-condition gives one) the span equals that of the monomials x^beta, and
/// the orthogonal family keeps Gram and collocation matrices well conditioned.
class TensorBasis {
 public:
  TensorBasis(BasisFamily family, std::vector<MultiIndex> indices, std::vector<double> scale);

  std::size_t size() const noexcept { return indices_.size(); }
  int dim() const noexcept { return static_cast<int>(scale_.size()); }
  const std::vector<MultiIndex>& indices() const noexcept { return indices_; }
  const std::vector<double>& scale() const noexcept { return scale_; }
  BasisFamily family() const noexcept { return family_; }

  void evaluate(std::span<const double> x, Eigen::Ref<Eigen::VectorXd> out) const;

  /// D_N(phi_beta)(0) for every basis element.
  Eigen::VectorXcd operator_at_zero(const DiffOperator& d) const;

  /// sum_beta c_beta phi_beta expanded into monomials.
  Polynomial to_polynomial(const Eigen::VectorXcd& coefficients) const;

  /// ||phi_beta||^2 over the box prod_j [-s_j, s_j]; Legendre family only.
  double legendre_norm_squared(std::size_t i) const;

 private:
  BasisFamily family_;
  std::vector<MultiIndex> indices_;
  std::vector<double> scale_;
  std::vector<int> max_degree_;
  // Monomial coefficients of F_n on [-1, 1], per degree.
  std::vector<std::vector<double>> univariate_;
};

}  // namespace newton_lab
