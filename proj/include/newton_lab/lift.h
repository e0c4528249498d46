#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "newton_lab/polynomial.h"

namespace newton_lab {

using Rational = boost::multiprecision::cpp_rational;

/// Faa di Bruno weight c(l, k) for the substitution x = b sin(t/b): the sum
/// over partitions of k into exactly l odd parts of
///   k! prod_j ((-1)^j)^{p_{2j+1}} / (p_{2j+1}! ((2j+1)!)^{p_{2j+1}}).
/// A part of size 2j+1 carries the sign of the (2j+1)-th Taylor coefficient of sin.
Rational faa_di_bruno_c(int l, int k);

double faa_di_bruno_value(int l, int k);

/// Spectrum of t -> P(b sin t_1, ..., b sin t_m), i.e. sum_beta b^{|beta|} c_beta prod_j sin^{beta_j} t_j
/// expanded through sin^k t = (2i)^{-k} sum_r C(k,r) (-1)^{k-r} e^{i(2r-k)t}.
/// The lift at the original scale is R(s) = P(b sin(s/b)) = trig_lift(P, b)(s / b).
TrigPolynomial trig_lift(const Polynomial& p, double b);

/// D^alpha of s -> P(b sin(s_1/b), ..., b sin(s_m/b)) at 0:
///   sum_{0 <= s <= alpha} b^{|s|-|alpha|} D^s(P)(0) prod_j c(s_j, alpha_j).
Complex lift_derivative_at_zero(const Polynomial& p, double b, const MultiIndex& alpha);

}  // namespace newton_lab
