#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "newton_lab/bodies.h"
#include "newton_lab/polynomial.h"
#include "newton_lab/quadrature.h"

namespace newton_lab {

enum class ConstantKind { tilde_m, markov_m, trig_p, entire_e };
enum class ConstantMethod { closed_form, gram_rayleigh, lp_discretized, multistart };

std::string to_string(ConstantKind kind);
std::string to_string(ConstantMethod method);

struct SharpConstantResult {
  ConstantKind kind = ConstantKind::tilde_m;
  double p = 2;
  /// a for tilde_m / trig_p, n for markov_m, 0 for entire_e.
  double a = 0;
  DiffOperator op{1, 0};
  ConvexBody body = ConvexBody::cube(1);
  double value = 0;
  ConstantMethod method = ConstantMethod::closed_form;
  /// Relative width of the certified bracket (lp_discretized), last relative
  /// change (multistart), or a rounding estimate for closed forms.
  double tolerance = 0;
  bool converged = true;
  /// For tilde_m: U on Q^m(1). For markov_m: U on the polar body.
  std::optional<Polynomial> extremal;
  std::optional<TrigPolynomial> trig_extremal;
  /// For lp_discretized, the upper bound from the last discretized problem.
  double upper_bound = 0;
  int levels_used = 0;
};

/// Options for exponents outside {2, inf}.
struct MultistartOptions {
  int starts = 16;
  std::uint64_t seed = 20240101;
  int max_iterations = 400;
};

/// a^{-N-m/p} sup_{P in P_{aV}} |D(P)(0)| / ||P||_{L_p(Q^m(1))}.
SharpConstantResult tilde_m(double p, const DiffOperator& d, double a, const ConvexBody& body,
                            const GridSpec& grid = {}, const MultistartOptions& multistart = {});

/// n^{-N-m/p} sup_{P in P_{O^m(n)}} |D(P)(0)| / ||P||_{L_p(V*)}.
SharpConstantResult markov_m(double p, const DiffOperator& d, int n, const ConvexBody& body,
                             const GridSpec& grid = {}, const MultistartOptions& multistart = {});

/// a^{-N-m/p} sup over trigonometric polynomials T with spectrum in aV of |D(T)(0)| / ||T||_{L_p(Q^m(pi))}, p in {2, inf}.
SharpConstantResult trig_p_constant(double p, const DiffOperator& d, double a, const ConvexBody& body,
                                    const GridSpec& grid = {});

/// E_2 = (2 pi)^{-m/2} || sum_alpha b_alpha (i t)^alpha ||_{L_2(V)}.
SharpConstantResult entire_e2(const DiffOperator& d, const ConvexBody& body, const GridSpec& grid = {});

/// P_a(x) = U_a(x / a) normalised so that D(P_a)(0) = 1; ||P_a||_{L_p(Q^m(a))} = 1 / tilde_m.
Polynomial extremal_polynomial(double p, const DiffOperator& d, double a, const ConvexBody& body,
                               const GridSpec& grid = {});

/// ||P||_{L_p(Q^m(a))} >= (1 - m M^2 / (a tau)^2)^{1/p} ||R||_{L_p(Q^m(M))}, R(s) = P(b sin(s / b)), b = a tau.
/// Requires support(P) in aV for the caller's V; only the parameter ranges are checked here.
bool lift_norm_inequality_check(const Polynomial& poly, double a, double tau, double half_width, double p,
                                const GridSpec& grid = {});

struct ConvergenceRow {
  double a = 0;
  double tilde_m = 0;
  /// E_2 for p = 2; the closed form at this a for p = inf when one is known; NaN otherwise.
  double reference = 0;
  double rel_gap = 0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  /// Fraction of consecutive rows whose gap decreases.
  double monotone_fraction = 0;
  double final_gap = 0;
};

/// tilde_m over increasing a, compared with E_2 (p = 2) or with the closed
/// forms mu (m = 1, pure d^N) and the Bernstein product (parallelepiped, pure
/// partial) for p = inf. Distinct a run on up to `jobs` threads.
ConvergenceTable convergence_study(double p, const DiffOperator& d, const ConvexBody& body,
                                   const std::vector<double>& a_values, const GridSpec& grid = {}, int jobs = 1);

/// Closed form for tilde_m at p = inf when the data admit one; NaN otherwise.
double closed_form_reference(const DiffOperator& d, double a, const ConvexBody& body);

}  // namespace newton_lab
