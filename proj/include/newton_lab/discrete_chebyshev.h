#pragma once

#include <Eigen/Dense>
#include <vector>

namespace newton_lab {

/// The discretized Chebyshev problem
///
///   maximize g . y   subject to   |r_i . y| <= 1  for every point i,
///
/// with y real and rows r_i = re_i + i im_i possibly complex. Complex moduli
/// are enforced through the half-planes Re(e^{i phi} r_i . y) <= 1; with
/// `facets` > 0 the angles phi are restricted to multiples of 2 pi / facets,
/// with facets = 0 every angle is admissible (exact modulus constraint).
///
/// Solved through its dual, min sum_j w_j s.t. sum_j w_j a_j = g, w >= 0,
/// by a two-phase revised simplex whose columns a = Re(e^{i phi} r_i) are
/// generated by pricing. The simplex multipliers are the optimal y.
struct DiscreteChebyshevProblem {
  Eigen::VectorXd objective;
  Eigen::MatrixXd rows_re;  // points x unknowns
  Eigen::MatrixXd rows_im;  // empty for real rows
  int facets = 32;
};

struct DiscreteChebyshevSolution {
  Eigen::VectorXd y;
  /// g . y for the returned (feasible) y.
  double value = 0;
  /// sum of the dual weights; an upper bound on the discrete optimum when
  /// the weights are nonnegative, otherwise the unscaled multiplier value.
  double upper_bound = 0;
  /// Points carrying positive dual weight (the reference set).
  std::vector<int> reference_points;
  std::vector<double> reference_weights;
  int iterations = 0;
};

DiscreteChebyshevSolution solve_discrete_chebyshev(const DiscreteChebyshevProblem& problem);

}  // namespace newton_lab
