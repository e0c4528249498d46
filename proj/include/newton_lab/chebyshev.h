#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "newton_lab/polynomial.h"

namespace newton_lab {

/// Largest n for which Chebyshev coefficients are produced exactly.
inline constexpr int kMaxExactChebyshevDegree = 40;

/// Exact monomial coefficients of T_n (entry k multiplies x^k). Throws DomainError for n > 40.
std::vector<std::int64_t> chebyshev_coefficients(int n);

/// T_n as a univariate Polynomial.
Polynomial chebyshev_T(int n);

/// T_n^{(k)}(0), exact up to the final conversion to double.
double chebyshev_derivative_at_zero(int n, int k);

/// Monomial coefficients of the Legendre polynomial P_n, rounded once from exact rationals.
std::vector<double> legendre_coefficients(int n);

/// P_n^{(k)}(0), rounded once from the exact rational value.
double legendre_derivative_at_zero(int n, int k);

/// V. A. Markov constant mu^N_n = n^{-N} |T_k^{(N)}(0)| with k = n-1 if n-N is odd, k = n otherwise.
double mu(int order, int n);

/// Labelle's closed form for the p = 2 univariate constant; generalized binomial through log-Gamma.
double labelle_constant(int order, int n);

/// Bernstein's product constant a^{-|alpha|} prod_j n_j^{alpha_j} mu^{alpha_j}_{n_j}, n_j = floor(a sigma_j).
double bernstein_product_constant(const MultiIndex& alpha, double a, std::span<const double> sigma);

}  // namespace newton_lab
