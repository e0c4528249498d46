#pragma once

#include <json.hpp>

#include "newton_lab/bodies.h"
#include "newton_lab/constants.h"
#include "newton_lab/polynomial.h"

namespace newton_lab {

using Json = nlohmann::ordered_json;

/// {"m": int, "terms": [{"beta": [ints], "re": num, "im": num}]}, terms in graded-lex order.
Json to_json(const Polynomial& p);
Polynomial polynomial_from_json(const Json& j);

/// {"m": int, "terms": [{"theta": [ints], "re": num, "im": num}]}.
Json to_json(const TrigPolynomial& t);
TrigPolynomial trig_polynomial_from_json(const Json& j);

/// Exponents and lambda: numbers, or the string "inf".
Json exponent_to_json(double v);
double exponent_from_json(const Json& j);

Json to_json(const ConvexBody& body);
ConvexBody body_from_json(const Json& j);

/// {kind, p, a, N, body: {lambda, sigma}, value, method, tolerance, extremal}.
Json to_json(const SharpConstantResult& r);

}  // namespace newton_lab
