#pragma once

#include <functional>
#include <vector>

#include "newton_lab/polynomial.h"

namespace newton_lab {

/// Best uniform approximation of a real function on [-gamma, gamma].
struct ApproxResult {
  /// R_a in the monomial basis of x.
  Polynomial polynomial{1};
  /// The same polynomial as sum_k c_k T_k(x / gamma); used for evaluation.
  std::vector<double> chebyshev;
  double gamma = 1;
  /// sup |f - R| on [-gamma, gamma] (dense grid plus refinement).
  double measured_error = 0;
  /// Final reference; residuals there alternate with magnitude |levelled_error|.
  std::vector<double> equioscillation_points;
  double levelled_error = 0;
  bool converged = false;
  int iterations = 0;

  double operator()(double x) const;
};

/// Remez exchange initialised at Chebyshev extrema. Each step levels the error on
/// degree + 2 references, then replaces the reference by the alternating extrema
/// of the new error (a single-point exchange when fewer alternations exist).
/// Converged once sup |e| exceeds the levelled error by < 1e-10 relative, or after 100 steps.
ApproxResult remez_best_approx(const std::function<double(double)>& f, int degree, double gamma);

/// R_a(f_mu, gamma / |mu|, v) == R_a(f, gamma, mu v) at 50 points to 1e-8, and ||R_a|| <= 2 ||f||.
bool scaling_identity_check(const std::function<double(double)>& f, double mu, int degree, double gamma);

struct RateConstants {
  double tau = 0;
  double C1 = 0;
  double C2 = 0;
};

/// C1 = 2 (1 + 1 / sqrt(1 - tau^2)), C2 = log(1 + sqrt(1 - tau^2)) - log(tau) - sqrt(1 - tau^2).
RateConstants rate_constants(double tau);

struct ExpApprox {
  Polynomial polynomial{1};
  double gamma = 0;
  int degree = 0;
  double measured_error = 0;
  double cos_error = 0;
  double sin_error = 0;
  /// C1(tau) exp(-C2(tau) a).
  double bound = 0;
};

/// exp(i lambda x) on [-a tau / |lambda|, a tau / |lambda|] by R_c + i R_s, each a Remez
/// approximant of degree floor(a). Throws BoundViolation if the error exceeds the bound.
ExpApprox best_approx_exp(double lambda, double a, double tau);

struct TensorExpApprox {
  Polynomial polynomial{1};
  double measured_error = 0;
  /// m 2^{m-1} C1(tau) exp(-min_j u_j C2(tau) a).
  double bound = 0;
  /// Per-axis sup errors of the univariate factors (0 for t_j = 0).
  std::vector<double> axis_errors;
};

/// P_t(x) = prod_{t_j != 0} R_{a u_j}(t_j x_j), measured on Q^m(a tau).
TensorExpApprox tensor_exp_approx(const std::vector<double>& t, const std::vector<double>& u, double a, double tau);

}  // namespace newton_lab
