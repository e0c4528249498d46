#include "newton_lab/json_io.h"

#include "newton_lab/errors.h"

namespace newton_lab {

namespace {

template <class Index>
Index index_from_json(const Json& j, int m, const char* what) {
  if (!j.is_array()) throw DomainError(std::string(what) + " must be an array of integers");
  std::vector<int> e;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw DomainError(std::string(what) + " entries must be integers");
    e.push_back(v.get<int>());
  }
  if (static_cast<int>(e.size()) != m) throw DimensionMismatch(std::string(what) + " length differs from m");
  return Index(e);
}

int dimension_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("m") || !j.contains("terms"))
    throw DomainError("polynomial JSON needs keys m and terms");
  if (!j["m"].is_number_integer() || j["m"].get<int>() < 1) throw DomainError("m must be a positive integer");
  if (!j["terms"].is_array()) throw DomainError("terms must be an array");
  return j["m"].get<int>();
}

Complex coefficient_from_json(const Json& t) {
  const double re = t.contains("re") ? t["re"].get<double>() : 0.0;
  const double im = t.contains("im") ? t["im"].get<double>() : 0.0;
  return {re, im};
}

}  // namespace

Json to_json(const Polynomial& p) {
  Json terms = Json::array();
  for (const auto& [beta, c] : p.terms())
    terms.push_back(Json{{"beta", beta.entries()}, {"re", c.real()}, {"im", c.imag()}});
  return Json{{"m", p.dim()}, {"terms", std::move(terms)}};
}

Polynomial polynomial_from_json(const Json& j) {
  const int m = dimension_from_json(j);
  Polynomial p(m);
  for (const auto& t : j["terms"]) p.add_term(index_from_json<MultiIndex>(t.at("beta"), m, "beta"), coefficient_from_json(t));
  return p;
}

Json to_json(const TrigPolynomial& t) {
  Json terms = Json::array();
  for (const auto& [theta, c] : t.terms())
    terms.push_back(Json{{"theta", theta.entries()}, {"re", c.real()}, {"im", c.imag()}});
  return Json{{"m", t.dim()}, {"terms", std::move(terms)}};
}

TrigPolynomial trig_polynomial_from_json(const Json& j) {
  const int m = dimension_from_json(j);
  TrigPolynomial t(m);
  for (const auto& term : j["terms"])
    t.add_term(index_from_json<Frequency>(term.at("theta"), m, "theta"), coefficient_from_json(term));
  return t;
}

Json exponent_to_json(double v) { return v == kInfinity ? Json("inf") : Json(v); }

double exponent_from_json(const Json& j) {
  if (j.is_string() && j.get<std::string>() == "inf") return kInfinity;
  if (j.is_number()) return j.get<double>();
  throw DomainError("expected a number or \"inf\"");
}

Json to_json(const ConvexBody& body) {
  return Json{{"lambda", exponent_to_json(body.lambda())}, {"sigma", body.sigma()}};
}

ConvexBody body_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("lambda") || !j.contains("sigma"))
    throw DomainError("body JSON needs keys lambda and sigma");
  return ConvexBody(exponent_from_json(j["lambda"]), j["sigma"].get<std::vector<double>>());
}

Json to_json(const SharpConstantResult& r) {
  Json out;
  out["kind"] = to_string(r.kind);
  out["p"] = exponent_to_json(r.p);
  out["a"] = r.a;
  out["N"] = r.op.order();
  out["body"] = to_json(r.body);
  out["value"] = r.value;
  out["method"] = to_string(r.method);
  out["tolerance"] = r.tolerance;
  if (r.extremal)
    out["extremal"] = to_json(*r.extremal);
  else if (r.trig_extremal)
    out["extremal"] = to_json(*r.trig_extremal);
  else
    out["extremal"] = nullptr;
  return out;
}

}  // namespace newton_lab
