#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <vector>

#include "newton_lab/bodies.h"
#include "newton_lab/polynomial.h"

namespace newton_lab {

/// Resolution controls shared by the norm evaluators and the discretized solvers.
struct GridSpec {
  int points_per_axis = 16;
  int refinement_levels = 6;
  /// Exponent in (0, inf]; kInfinity selects the sup-norm.
  double p = 2.0;
  /// Upper bound on points_per_axis * 2^refinement_levels.
  int cap = 1 << 16;

  void validate() const;
  int points_at_level(int level) const { return points_per_axis << level; }
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached per node count; computed once, then shared by all readers.
const GaussRule& gauss_legendre(int n);

struct NormResult {
  double value = 0;
  bool converged = false;
  int levels_used = 0;
  /// Relative change between the last two levels (0 for exact rules).
  double last_change = 0;
};

using Integrand = std::function<Complex(std::span<const double>)>;

/// ( int_{box} |f|^p )^{1/p} over the centred box with the given half-widths,
/// composite Gauss-Legendre with doubling panels until two levels agree to `tol`.
NormResult lp_norm_box(const Integrand& f, std::span<const double> half_widths, double p, const GridSpec& grid,
                       double tol = 1e-8);

/// sup over the centred box of |f|: tensor Chebyshev-Lobatto grid, then
/// cyclic golden-section refinement around the best grid points.
double sup_norm_box(const Integrand& f, std::span<const double> half_widths, const GridSpec& grid);

/// ||P||_{L_p(Q^m(M))}, p in (0, inf). Exact rule for even integer p, doubling otherwise.
NormResult lp_norm_cube(const Polynomial& poly, double half_width, double p, const GridSpec& grid);

/// ||P||_{L_inf(Q^m(M))}, relative accuracy target 1e-8 for polynomial inputs.
double sup_norm_cube(const Polynomial& poly, double half_width, const GridSpec& grid);

/// A refined local maximum of |f|.
struct SupPoint {
  double value = 0;
  std::vector<double> x;
};

enum class SupGrid { chebyshev, uniform };

/// Local maxima of |f| over the centred box: grid values on a tensor grid with
/// `points_per_axis` nodes per axis, discrete local maxima kept (largest
/// `candidates` of them), each polished by cyclic Brent ascent. Sorted by value.
std::vector<SupPoint> local_maxima_box(const Integrand& f, std::span<const double> half_widths, int points_per_axis,
                                       int candidates, SupGrid kind = SupGrid::chebyshev);

/// As local_maxima_box over V, on the projected grid of body_grid and with
/// ascent confined to chords of V.
std::vector<SupPoint> local_maxima_body(const Integrand& f, const ConvexBody& body, int points_per_axis,
                                        int candidates);

/// ( int_V |f|^p )^{1/p} by iterated integration over the body: each coordinate
/// is integrated over its chord given the outer coordinates. p = inf gives the
/// sup over V (grid of the bounding box projected onto V, then refinement).
NormResult lp_norm_body(const Integrand& f, const ConvexBody& body, double p, const GridSpec& grid,
                        double tol = 1e-10);
NormResult lp_norm_body(const Polynomial& poly, const ConvexBody& body, double p, const GridSpec& grid);

/// Points spread over V: a tensor Chebyshev-Lobatto grid of the bounding box,
/// with exterior points projected radially onto the boundary.
std::vector<std::vector<double>> body_grid(const ConvexBody& body, int points_per_axis);

/// Iterated quadrature rule for integrals over V accurate for integrands smooth along chords.
struct BodyRule {
  std::vector<std::vector<double>> nodes;
  std::vector<double> weights;
};
BodyRule body_rule(const ConvexBody& body, int panels, int points_per_panel);

struct GramMatrix {
  std::vector<MultiIndex> basis;
  Eigen::MatrixXd matrix;
  double min_eigenvalue = 0;
  double max_eigenvalue = 0;
  double condition() const { return min_eigenvalue > 0 ? max_eigenvalue / min_eigenvalue : kInfinity; }
};

/// G[b, b'] = int_{Q^m(M)} x^{b+b'} dx, closed form.
GramMatrix gram_matrix(const std::vector<MultiIndex>& basis, double half_width);

/// G[b, b'] = int_V x^{b+b'} dx through the body quadrature.
GramMatrix gram_matrix(const std::vector<MultiIndex>& basis, const ConvexBody& body, const GridSpec& grid);

/// Symmetric solve G x = rhs with eigenvalue floor 1e-13 * lambda_max; throws IllConditioned below it.
Eigen::VectorXcd gram_solve(const Eigen::MatrixXd& gram, const Eigen::VectorXcd& rhs);

/// |c_beta| <= (prod beta_j!)^{-1} (A a / M)^{|beta|} ||P||_{L_inf(Q^m(M))} for every term.
/// Throws DomainError when the support of P leaves aV or V is not inside Q^m(A).
bool coefficient_bound_check(const Polynomial& poly, const ConvexBody& body, double a, double half_width,
                             double cube_bound, const GridSpec& grid = {});

}  // namespace newton_lab
