#include "cli.h"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "newton_lab/approx.h"
#include "newton_lab/bodies.h"
#include "newton_lab/chebyshev.h"
#include "newton_lab/constants.h"
#include "newton_lab/errors.h"
#include "newton_lab/json_io.h"

namespace newton_lab::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct ConfigError : std::runtime_error {
  ConfigError(const std::string& field, const std::string& message) : std::runtime_error(field + ": " + message) {}
};

struct Config {
  std::string p = "2";
  int order = 0;
  int m = 1;
  std::string body = "cube";
  double lambda = kNaN;
  std::vector<double> sigma;
  std::string alpha;
  std::string op;
  std::string range;
  std::string kind = "tildeM";
  int grid_points = 16;
  int grid_levels = 6;
  std::string format = "csv";
  std::string output;
  std::string summary;
  int jobs = 1;
  std::uint64_t seed = 20240101;
  double tau = 0.5;
  double exp_lambda = 1.0;
  double delta = 2.0;
  std::size_t samples = 10'000;
  bool signed_lattice = false;
};

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double parse_exponent(const std::string& text, const std::string& field) {
  if (text == "inf" || text == "infinity") return kInfinity;
  double v;
  try {
    std::size_t used = 0;
    v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw ConfigError(field, "expected a positive number or inf, got '" + text + "'");
  }
  if (!(v > 0) || !std::isfinite(v)) throw ConfigError(field, "must be > 0 or inf");
  return v;
}

std::vector<int> parse_ints(const std::string& text, const std::string& field) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(field, "expected comma-separated integers, got '" + text + "'");
    }
  }
  return out;
}

void validate_common(const Config& c) {
  if (c.m < 1 || c.m > 4) throw ConfigError("--m", "must lie in [1, 4]");
  if (c.order < 0) throw ConfigError("--N", "must be nonnegative");
  if (c.grid_points < 2) throw ConfigError("--grid-points", "must be at least 2");
  if (c.grid_levels < 0) throw ConfigError("--grid-levels", "must be nonnegative");
  if (c.jobs < 1) throw ConfigError("--jobs", "must be at least 1");
  if (c.format != "csv" && c.format != "json") throw ConfigError("--format", "must be csv or json");
}

ConvexBody make_body(const Config& c) {
  std::vector<double> sigma = c.sigma;
  if (sigma.empty()) sigma.assign(static_cast<std::size_t>(c.m), 1.0);
  if (sigma.size() == 1 && c.m > 1) sigma.assign(static_cast<std::size_t>(c.m), sigma.front());
  if (static_cast<int>(sigma.size()) != c.m) throw ConfigError("--sigma", "needs one value or m values");
  for (double s : sigma)
    if (!(s > 0)) throw ConfigError("--sigma", "entries must be positive");
  double lambda;
  if (c.body == "cube") {
    lambda = kInfinity;
  } else if (c.body == "ball") {
    lambda = 2;
  } else if (c.body == "octahedron") {
    lambda = 1;
  } else if (c.body == "lambda") {
    if (!(c.lambda >= 1)) throw ConfigError("--lambda", "body 'lambda' needs --lambda >= 1");
    lambda = c.lambda;
  } else {
    throw ConfigError("--body", "must be cube, ball, octahedron or lambda");
  }
  return ConvexBody(lambda, sigma);
}

DiffOperator make_operator(const Config& c) {
  if (!c.op.empty()) {
    // "a1,a2:re[:im];..." with every |alpha| equal.
    std::optional<DiffOperator> d;
    std::stringstream ss(c.op);
    std::string term;
    while (std::getline(ss, term, ';')) {
      std::vector<std::string> parts;
      std::stringstream ts(term);
      std::string part;
      while (std::getline(ts, part, ':')) parts.push_back(part);
      if (parts.size() < 2 || parts.size() > 3) throw ConfigError("--op", "terms look like 'a1,a2:re[:im]'");
      const auto alpha = parse_ints(parts[0], "--op");
      if (static_cast<int>(alpha.size()) != c.m) throw ConfigError("--op", "multi-index length must equal m");
      for (int v : alpha)
        if (v < 0) throw ConfigError("--op", "multi-index entries must be nonnegative");
      double re, im = 0;
      try {
        re = std::stod(parts[1]);
        if (parts.size() == 3) im = std::stod(parts[2]);
      } catch (const std::exception&) {
        throw ConfigError("--op", "coefficients must be numbers");
      }
      const MultiIndex idx(alpha);
      if (!d) d.emplace(c.m, idx.degree());
      if (idx.degree() != d->order()) throw ConfigError("--op", "all terms must have the same order");
      d->add_term(idx, Complex(re, im));
    }
    if (!d || d->terms().empty()) throw ConfigError("--op", "operator has no nonzero terms");
    return *d;
  }
  if (!c.alpha.empty()) {
    const auto alpha = parse_ints(c.alpha, "--alpha");
    if (static_cast<int>(alpha.size()) != c.m) throw ConfigError("--alpha", "length must equal m");
    for (int v : alpha)
      if (v < 0) throw ConfigError("--alpha", "entries must be nonnegative");
    return DiffOperator::partial(MultiIndex(alpha));
  }
  if (c.m == 1) return DiffOperator::univariate(c.order);
  if (c.order == 0) return DiffOperator::identity(c.m);
  throw ConfigError("--N", "order > 0 with m > 1 needs --alpha or --op");
}

GridSpec make_grid(const Config& c, double p) {
  GridSpec g;
  g.points_per_axis = c.grid_points;
  g.refinement_levels = c.grid_levels;
  g.p = p;
  g.cap = std::max(g.cap, c.grid_points << std::min(c.grid_levels, 20));
  return g;
}

int effective_jobs(const Config& c) {
  if (const char* env = std::getenv("NEWTON_LAB_JOBS")) {
    try {
      const int v = std::stoi(env);
      if (v >= 1) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("NEWTON_LAB_JOBS", "must be a positive integer");
  }
  return c.jobs;
}

// Evaluates fn(i) for i < count on up to `jobs` threads; results stay in index order.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, int jobs, Fn fn) {
  std::vector<T> out(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(static_cast<std::size_t>(jobs), 1, std::max<std::size_t>(count, 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

class Sink {
 public:
  Sink(const Config& c, std::ostream& out) : out_(&out) {
    if (!c.output.empty()) {
      file_.open(c.output);
      if (!file_) throw ConfigError("--output", "cannot open '" + c.output + "'");
      out_ = &file_;
    }
  }
  std::ostream& stream() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

void write_summary(const Config& c, const Json& summary) {
  if (c.summary.empty()) return;
  std::ofstream f(c.summary);
  if (!f) throw ConfigError("--summary", "cannot open '" + c.summary + "'");
  f << summary.dump(2) << '\n';
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
  out << '\n';
}

Json config_json(const Config& c, double p, const ConvexBody& body, const DiffOperator& d) {
  Json j;
  j["p"] = exponent_to_json(p);
  j["N"] = d.order();
  j["m"] = c.m;
  j["body"] = to_json(body);
  return j;
}

// Closed form for the constants table: mu / Bernstein product at p = inf, Labelle at p = 2 on [-1, 1].
double reference_value(const std::string& kind, double p, const DiffOperator& d, double a, const ConvexBody& body) {
  if (kind != "tildeM" && !(kind == "markovM" && body.dim() == 1)) return kNaN;
  if (p == kInfinity) return closed_form_reference(d, a, body);
  if (p == 2.0 && body.dim() == 1 && body.sigma()[0] == 1.0 && d.terms().size() == 1 && a == std::floor(a)) {
    const int n = static_cast<int>(a);
    if (d.order() > n) return kNaN;
    return std::abs(d.terms().begin()->second) * labelle_constant(d.order(), n);
  }
  return kNaN;
}

std::vector<double> range_or_throw(const std::string& text, const std::string& field) {
  if (text.empty()) throw ConfigError(field, "is required");
  try {
    return parse_range(text);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(field, e.what());
  }
}

int cmd_constants(const Config& c, std::ostream& out) {
  validate_common(c);
  const double p = parse_exponent(c.p, "--p");
  const ConvexBody body = make_body(c);
  const DiffOperator d = make_operator(c);
  const GridSpec grid = make_grid(c, p);
  const bool entire = c.kind == "entireE";
  if (c.kind != "tildeM" && c.kind != "markovM" && c.kind != "trigP" && !entire)
    throw ConfigError("--kind", "must be tildeM, markovM, trigP or entireE");
  if (entire && p != 2.0) throw ConfigError("--p", "entireE is available for p = 2 only");
  if (c.kind == "trigP" && p != 2.0 && p != kInfinity) throw ConfigError("--p", "trigP supports p = 2 and inf");
  const std::vector<double> as = entire ? std::vector<double>{0.0} : range_or_throw(c.range, "--a");
  for (double a : as) {
    if (!entire && !(a >= 1)) throw ConfigError("--a", "values must be at least 1");
    if (c.kind == "markovM" && a != std::floor(a)) throw ConfigError("--n", "markovM needs integer n");
  }
  MultistartOptions ms;
  ms.seed = c.seed;

  const auto results = parallel_map<SharpConstantResult>(as.size(), effective_jobs(c), [&](std::size_t i) {
    const double a = as[i];
    if (c.kind == "tildeM") return tilde_m(p, d, a, body, grid, ms);
    if (c.kind == "markovM") return markov_m(p, d, static_cast<int>(a), body, grid, ms);
    if (c.kind == "trigP") return trig_p_constant(p, d, a, body, grid);
    return entire_e2(d, body, grid);
  });

  Sink sink(c, out);
  Json rows = Json::array();
  bool all_converged = true;
  double max_rel = 0;
  if (c.format == "csv")
    write_csv_row(sink.stream(), {"kind", "p", "N", "a", "value", "reference", "abs_dev", "rel_dev", "method", "tolerance"});
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    all_converged = all_converged && r.converged;
    const double ref = entire ? kNaN : reference_value(c.kind, p, d, as[i], body);
    const double abs_dev = std::abs(r.value - ref);
    const double rel_dev = abs_dev / std::abs(ref);
    if (!std::isnan(rel_dev)) max_rel = std::max(max_rel, rel_dev);
    if (c.format == "csv") {
      write_csv_row(sink.stream(), {to_string(r.kind), fmt(p), std::to_string(d.order()), entire ? "" : fmt(as[i]),
                                    fmt(r.value), fmt(ref), fmt(abs_dev), fmt(rel_dev), to_string(r.method),
                                    fmt(r.tolerance)});
    } else {
      Json row = to_json(r);
      row["reference"] = std::isnan(ref) ? Json(nullptr) : Json(ref);
      row["rel_dev"] = std::isnan(rel_dev) ? Json(nullptr) : Json(rel_dev);
      rows.push_back(std::move(row));
    }
  }
  Json summary;
  summary["command"] = "constants";
  summary["seed"] = c.seed;
  summary["config"] = config_json(c, p, body, d);
  summary["kind"] = c.kind;
  summary["rows"] = results.size();
  summary["max_rel_dev"] = max_rel;
  summary["all_converged"] = all_converged;
  if (c.format == "json") {
    summary["results"] = std::move(rows);
    sink.stream() << summary.dump(2) << '\n';
  } else {
    write_summary(c, summary);
  }
  return all_converged ? kExitOk : kExitNumerical;
}

int cmd_converge(const Config& c, std::ostream& out) {
  validate_common(c);
  const double p = parse_exponent(c.p, "--p");
  const ConvexBody body = make_body(c);
  const DiffOperator d = make_operator(c);
  const auto as = range_or_throw(c.range, "--a");
  for (double a : as)
    if (!(a >= 1)) throw ConfigError("--a", "values must be at least 1");
  const ConvergenceTable table = convergence_study(p, d, body, as, make_grid(c, p), effective_jobs(c));

  Sink sink(c, out);
  Json summary;
  summary["command"] = "converge";
  summary["seed"] = c.seed;
  summary["config"] = config_json(c, p, body, d);
  summary["final_gap"] = std::isnan(table.final_gap) ? Json(nullptr) : Json(table.final_gap);
  summary["monotone_fraction"] = table.monotone_fraction;
  if (c.format == "csv") {
    write_csv_row(sink.stream(), {"a", "tilde_m", "e_value", "rel_gap"});
    for (const auto& row : table.rows)
      write_csv_row(sink.stream(), {fmt(row.a), fmt(row.tilde_m), fmt(row.reference), fmt(row.rel_gap)});
    write_summary(c, summary);
  } else {
    Json rows = Json::array();
    for (const auto& row : table.rows)
      rows.push_back(Json{{"a", row.a},
                          {"tilde_m", row.tilde_m},
                          {"e_value", std::isnan(row.reference) ? Json(nullptr) : Json(row.reference)},
                          {"rel_gap", std::isnan(row.rel_gap) ? Json(nullptr) : Json(row.rel_gap)}});
    summary["rows"] = std::move(rows);
    sink.stream() << summary.dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_remez(const Config& c, std::ostream& out) {
  if (c.format != "csv" && c.format != "json") throw ConfigError("--format", "must be csv or json");
  if (!(c.tau > 0 && c.tau < 1)) throw ConfigError("--tau", "must lie in (0, 1)");
  if (c.exp_lambda == 0 || !std::isfinite(c.exp_lambda)) throw ConfigError("--lambda", "must be a nonzero real");
  const auto as = range_or_throw(c.range.empty() ? "4..24:4" : c.range, "--a");
  for (double a : as)
    if (!(a >= 1)) throw ConfigError("--a", "values must be at least 1");
  const RateConstants rc = rate_constants(c.tau);

  const auto results = parallel_map<ExpApprox>(as.size(), effective_jobs(c),
                                                [&](std::size_t i) { return best_approx_exp(c.exp_lambda, as[i], c.tau); });
  Sink sink(c, out);
  double max_ratio = 0;
  Json rows = Json::array();
  if (c.format == "csv") write_csv_row(sink.stream(), {"a", "measured_error", "bound", "ratio"});
  for (std::size_t i = 0; i < results.size(); ++i) {
    const double ratio = results[i].measured_error / results[i].bound;
    max_ratio = std::max(max_ratio, ratio);
    if (c.format == "csv")
      write_csv_row(sink.stream(), {fmt(as[i]), fmt(results[i].measured_error), fmt(results[i].bound), fmt(ratio)});
    else
      rows.push_back(Json{{"a", as[i]}, {"measured_error", results[i].measured_error}, {"bound", results[i].bound},
                          {"ratio", ratio}});
  }
  Json summary;
  summary["command"] = "remez";
  summary["seed"] = c.seed;
  summary["tau"] = c.tau;
  summary["lambda"] = c.exp_lambda;
  summary["C1"] = rc.C1;
  summary["C2"] = rc.C2;
  summary["max_ratio"] = max_ratio;
  if (c.format == "json") {
    summary["rows"] = std::move(rows);
    sink.stream() << summary.dump(2) << '\n';
  } else {
    write_summary(c, summary);
  }
  return max_ratio <= 1 ? kExitOk : kExitNumerical;
}

Json body_json(const ConvexBody& b) {
  Json j = to_json(b);
  j["name"] = b.describe();
  return j;
}

int cmd_inspect(const std::string& what, const Config& c, std::ostream& out) {
  validate_common(c);
  const ConvexBody body = make_body(c);
  Sink sink(c, out);
  Json j;
  j["command"] = "inspect " + what;
  j["seed"] = c.seed;
  j["body"] = body_json(body);
  if (what == "polar") {
    j["polar"] = body_json(polar(body));
  } else if (what == "lattice") {
    const auto as = range_or_throw(c.range, "--a");
    if (as.size() != 1) throw ConfigError("--a", "inspect lattice takes a single value");
    if (!(as.front() > 0)) throw ConfigError("--a", "must be positive");
    Json points = Json::array();
    if (c.signed_lattice) {
      for (const auto& t : lattice_points_signed(body, as.front())) { const auto e = t.entries(); points.push_back(std::vector<int>(e.begin(), e.end())); }
    } else {
      for (const auto& b : lattice_points(body, as.front())) { const auto e = b.entries(); points.push_back(std::vector<int>(e.begin(), e.end())); }
    }
    if (c.format == "csv") {
      std::vector<std::string> header;
      for (int k = 1; k <= c.m; ++k) header.push_back("j" + std::to_string(k));
      write_csv_row(sink.stream(), header);
      for (const auto& pt : points) {
        std::vector<std::string> cells;
        for (const auto& v : pt) cells.push_back(std::to_string(v.get<int>()));
        write_csv_row(sink.stream(), cells);
      }
      j["a"] = as.front();
      j["signed"] = c.signed_lattice;
      j["count"] = points.size();
      write_summary(c, j);
      return kExitOk;
    }
    j["a"] = as.front();
    j["signed"] = c.signed_lattice;
    j["count"] = points.size();
    j["points"] = std::move(points);
  } else {
    if (!(c.delta > 1)) throw ConfigError("--delta", "must exceed 1");
    CoverOptions opts;
    opts.sample_count = c.samples;
    const Covering cover = cover_with_parallelepipeds(body, c.delta, opts);
    j["delta"] = c.delta;
    j["count"] = cover.family.size();
    j["coverage"] = cover.coverage();
    j["samples_checked"] = cover.samples_checked;
    j["samples_covered"] = cover.samples_covered;
    j["min_half_width"] = cover.min_half_width;
    j["slab_long"] = cover.slab_long;
    j["slab_short"] = cover.slab_short;
    Json family = Json::array();
    for (const auto& box : cover.family) family.push_back(box.u);
    j["family"] = std::move(family);
  }
  sink.stream() << j.dump(2) << '\n';
  write_summary(c, j);
  return kExitOk;
}

void add_body_options(CLI::App* sub, Config& c) {
  sub->add_option("--m", c.m, "dimension, 1..4")->capture_default_str();
  sub->add_option("--body", c.body, "cube | ball | octahedron | lambda")->capture_default_str();
  sub->add_option("--lambda", c.lambda, "exponent of a 'lambda' body, >= 1");
  sub->add_option("--sigma", c.sigma, "semi-axes (one value or m values)")->delimiter(',');
  sub->add_option("--format", c.format, "csv | json")->capture_default_str();
  sub->add_option("--output", c.output, "write the table here instead of stdout");
  sub->add_option("--summary", c.summary, "write the JSON summary to this file");
  sub->add_option("--seed", c.seed, "seed for randomised steps")->capture_default_str();
}

void add_operator_options(CLI::App* sub, Config& c) {
  sub->add_option("--p", c.p, "exponent, > 0 or inf")->capture_default_str();
  sub->add_option("--N", c.order, "operator order (d^N/dx^N for m = 1)")->capture_default_str();
  sub->add_option("--alpha", c.alpha, "pure partial D^alpha, e.g. 1,1");
  sub->add_option("--op", c.op, "general operator 'a1,a2:re[:im];...'");
  sub->add_option("--grid-points", c.grid_points, "points per axis at level 0")->capture_default_str();
  sub->add_option("--grid-levels", c.grid_levels, "refinement levels")->capture_default_str();
  sub->add_option("--jobs", c.jobs, "parallel sweep points (NEWTON_LAB_JOBS overrides)")->capture_default_str();
}

}  // namespace

std::vector<double> parse_range(const std::string& text) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad number '" + s + "' in range '" + text + "'");
    }
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument("bad number '" + s + "' in range '" + text + "'");
    return v;
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) return {number(text)};
  const std::string lo_text = text.substr(0, dots);
  std::string hi_text = text.substr(dots + 2);
  double step = 1;
  if (const auto colon = hi_text.find(':'); colon != std::string::npos) {
    step = number(hi_text.substr(colon + 1));
    hi_text = hi_text.substr(0, colon);
  }
  const double lo = number(lo_text), hi = number(hi_text);
  if (!(step > 0)) throw std::invalid_argument("range step must be positive");
  if (lo > hi) throw std::invalid_argument("empty range '" + text + "'");
  std::vector<double> out;
  for (long k = 0;; ++k) {
    const double v = lo + static_cast<double>(k) * step;
    if (v > hi + 1e-9 * std::max(1.0, std::abs(hi))) break;
    out.push_back(v);
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sharp constants of Markov-Bernstein-Nikolskii type inequalities over Newton polyhedra"};
  app.require_subcommand(1);
  app.footer(
      "Ranges: lo..hi[:step] (step defaults to 1) or a single value.\n"
      "Exit codes: 0 ok, 2 configuration error, 3 numerical failure.\n"
      "NEWTON_LAB_JOBS overrides --jobs.");
  Config c;

  auto* constants = app.add_subcommand("constants", "tables of tilde M, M, P or E against closed forms");
  add_body_options(constants, c);
  add_operator_options(constants, c);
  constants->add_option("--kind", c.kind, "tildeM | markovM | trigP | entireE")->capture_default_str();
  auto* a_opt = constants->add_option("--a", c.range, "a (or n) range");
  constants->add_option("--n", c.range, "alias of --a")->excludes(a_opt);

  auto* converge = app.add_subcommand("converge", "tilde M against E_2 (p = 2) or closed forms (p = inf) over a");
  add_body_options(converge, c);
  add_operator_options(converge, c);
  converge->add_option("--a", c.range, "a range")->required();

  auto* remez = app.add_subcommand("remez", "best-approximation error of exp(i lambda x) against C1 exp(-C2 a)");
  remez->add_option("--tau", c.tau, "tau in (0, 1)")->capture_default_str();
  remez->add_option("--lambda", c.exp_lambda, "frequency lambda != 0")->capture_default_str();
  remez->add_option("--a", c.range, "a range (default 4..24:4)");
  remez->add_option("--format", c.format, "csv | json")->capture_default_str();
  remez->add_option("--output", c.output, "write the table here instead of stdout");
  remez->add_option("--summary", c.summary, "write the JSON summary to this file");
  remez->add_option("--jobs", c.jobs, "parallel sweep points")->capture_default_str();
  remez->add_option("--seed", c.seed, "seed for randomised steps")->capture_default_str();

  auto* inspect = app.add_subcommand("inspect", "lattice points, parallelepiped covers and polar bodies");
  inspect->require_subcommand(1);
  auto* lattice = inspect->add_subcommand("lattice", "aV intersected with Z^m_+ (or Z^m with --signed)");
  add_body_options(lattice, c);
  lattice->add_option("--a", c.range, "dilation a")->required();
  lattice->add_flag("--signed", c.signed_lattice, "all of Z^m instead of Z^m_+");
  c.format = "json";
  auto* cover = inspect->add_subcommand("cover", "finite parallelepiped cover of V with corners in delta V");
  add_body_options(cover, c);
  cover->add_option("--delta", c.delta, "inflation delta > 1")->capture_default_str();
  cover->add_option("--samples", c.samples, "quasi-random membership samples")->capture_default_str();
  auto* polar_cmd = inspect->add_subcommand("polar", "parameters of the polar body");
  add_body_options(polar_cmd, c);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  // inspect defaults to JSON; the table commands default to CSV unless --format was given.
  const bool format_given = [&] {
    for (const auto& a : args)
      if (a == "--format" || a.rfind("--format=", 0) == 0) return true;
    return false;
  }();
  if (!format_given) c.format = inspect->parsed() && lattice->parsed() ? "json" : inspect->parsed() ? "json" : "csv";

  try {
    if (constants->parsed()) return cmd_constants(c, out);
    if (converge->parsed()) return cmd_converge(c, out);
    if (remez->parsed()) return cmd_remez(c, out);
    if (lattice->parsed()) return cmd_inspect("lattice", c, out);
    if (cover->parsed()) return cmd_inspect("cover", c, out);
    if (polar_cmd->parsed()) return cmd_inspect("polar", c, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DimensionMismatch& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  err << "error: no command given\n";
  return kExitConfig;
}

}  // namespace newton_lab::cli
