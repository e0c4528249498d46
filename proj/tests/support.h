#pragma once

#include <random>

#include "newton_lab/bodies.h"
#include "newton_lab/polynomial.h"

namespace support {

// Random complex coefficients in [-1, 1]^2 on every lattice point of aV.
inline newton_lab::Polynomial random_polynomial(const newton_lab::ConvexBody& body, double a, std::mt19937_64& rng,
                                                bool complex = true) {
  std::uniform_real_distribution<double> u(-1, 1);
  newton_lab::Polynomial p(body.dim());
  for (const auto& beta : newton_lab::lattice_points(body, a)) {
    const double re = u(rng);
    const double im = complex ? u(rng) : 0.0;
    p.add_term(beta, {re, im});
  }
  return p;
}

}  // namespace support
