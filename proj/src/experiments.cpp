#include "serilin/experiments.hpp"

#include "serilin/analysis.hpp"
#include "serilin/elliptic.hpp"
#include "serilin/errors.hpp"
#include "serilin/exact.hpp"
#include "serilin/fem.hpp"
#include "serilin/io.hpp"
#include "serilin/spectral.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#ifndef SERILIN_VERSION
#define SERILIN_VERSION "0.0.0"
#endif

namespace serilin {

using nlohmann::json;

namespace {

// ---- parameter table ----------------------------------------------------------

enum class PType { Number, Integer, String, Bool, NumberArray, IntegerArray, StringArray, Cases };

struct Param {
  std::string key;
  PType type;
  json fallback;
  std::optional<double> min;
  bool exclusiveMin = false;
  std::optional<double> max;
  std::vector<std::string> choices;
  std::string doc;
  std::vector<Param> fields;  // Cases only
};

Param num(std::string k, double d, std::optional<double> lo, bool excl, std::optional<double> hi, std::string doc) {
  return {std::move(k), PType::Number, d, lo, excl, hi, {}, std::move(doc), {}};
}
Param integer(std::string k, long long d, std::optional<double> lo, std::optional<double> hi, std::string doc) {
  return {std::move(k), PType::Integer, d, lo, false, hi, {}, std::move(doc), {}};
}
Param choice(std::string k, std::string d, std::vector<std::string> c, std::string doc) {
  return {std::move(k), PType::String, d, {}, false, {}, std::move(c), std::move(doc), {}};
}
Param flag(std::string k, bool d, std::string doc) {
  return {std::move(k), PType::Bool, d, {}, false, {}, {}, std::move(doc), {}};
}
Param numbers(std::string k, json d, std::optional<double> lo, bool excl, std::string doc) {
  return {std::move(k), PType::NumberArray, std::move(d), lo, excl, {}, {}, std::move(doc), {}};
}
Param integers(std::string k, json d, std::optional<double> lo, std::optional<double> hi, std::string doc) {
  return {std::move(k), PType::IntegerArray, std::move(d), lo, false, hi, {}, std::move(doc), {}};
}
Param strings(std::string k, json d, std::vector<std::string> c, std::string doc) {
  return {std::move(k), PType::StringArray, std::move(d), {}, false, {}, std::move(c), std::move(doc), {}};
}

const std::vector<std::string> kQuadratures{"integrating-factor", "frozen", "trapezoidal", "end-point"};
const std::vector<std::string> kVChoices{"inverse-re", "one"};
const std::vector<std::string> kSeries{"ordinary", "dual"};

std::vector<Param> periodic_params() {
  return {num("reynolds", 500.0, 0.0, true, {}, "Reynolds number"),
          choice("v_choice", "inverse-re", kVChoices, "advection speed of the linear operator: 1/Re or 1"),
          integer("grid_size", 512, 8, 1 << 16, "periodic grid points (power of two)"),
          num("dt", 1e-4, 0.0, true, {}, "time step"),
          integer("order", 8, 0, 24, "highest hierarchy order N"),
          integer("refeed_every", 1, 0, {}, "steps between refeeds (0 disables)"),
          choice("quadrature", "integrating-factor", kQuadratures, "in-step forcing quadrature"),
          flag("dealias", false, "apply the 2/3 rule to the forcing"),
          numbers("times", json::array({0.01, 0.1, 0.5, 1.0}), 0.0, true, "sample times")};
}

std::vector<Param> dirichlet_params() {
  return {integer("dimension", 1, 1, 2, "spatial dimension"),
          integer("cells", 2048, 8, 1 << 16, "cells per axis on [-1, 1]"),
          numbers("p_values", json::array({1.5, 2.5, 3.0, 3.5}), 1.0, true, "p-Laplacian exponents"),
          strings("series", json::array({"ordinary", "dual"}), kSeries, "homotopies to run"),
          integer("order", 8, 0, 24, "highest hierarchy order N"),
          choice("norm", "l1", {"l1", "l2", "max"}, "error norm"),
          integer("plateau", 0, 0, 24, "plateau order: the rate averages log ratios over M[0..plateau] (0 detects it)")};
}

struct ExperimentDef {
  std::string name;
  std::string doc;
  std::vector<Param> params;
};

const std::vector<ExperimentDef>& experiments() {
  static const std::vector<ExperimentDef> defs = [] {
    std::vector<ExperimentDef> d;
    d.push_back({"delta-ic",
                 "Burgers from a unit point mass on the line: Taylor partial sums against the closed form",
                 {num("reynolds", 2.0, 0.0, true, {}, "Reynolds number"),
                  integer("order", 8, 0, 24, "highest order N"),
                  strings("v_choices", json::array({"inverse-re", "one"}), kVChoices, "advection speeds to compare"),
                  numbers("times", json::array({1.0, 10.0}), 0.0, true, "sample times"),
                  num("x_min", -20.0, {}, false, {}, "left end of the sample window"),
                  num("x_max", 40.0, {}, false, {}, "right end of the sample window"),
                  integer("points", 3001, 2, 1 << 20, "sample points")}});
    d.push_back({"cosine-squared", "periodic series against the cosine-squared closed form", periodic_params()});
    auto refeed = periodic_params();
    refeed.push_back(flag("dns", true, "include the centered-difference forward-Euler baseline"));
    d.push_back({"refeeding", "max error over time with and without refeeding, plus the DNS baseline", refeed});
    auto order = periodic_params();
    order.push_back(integers("orders", json::array({0, 1, 2, 3, 4, 5, 6, 7, 8}), 0, 24, "orders to sweep"));
    d.push_back({"burgers-order", "max error against truncation order", order});
    d.push_back({"dirichlet", "p-Laplacian Dirichlet problem: error per order and convergence rates",
                 dirichlet_params()});
    d.push_back({"turbulence", "randomly forced periodic Burgers and its energy spectrum",
                 {num("reynolds", 500.0, 0.0, true, {}, "Reynolds number"),
                  choice("v_choice", "inverse-re", kVChoices, "advection speed of the linear operator"),
                  integer("grid_size", 512, 8, 1 << 16, "periodic grid points (power of two)"),
                  num("dt", 1e-4, 0.0, true, {}, "time step"), integer("order", 4, 0, 24, "highest order N"),
                  integer("refeed_every", 1, 0, {}, "steps between refeeds (0 disables)"),
                  choice("quadrature", "integrating-factor", kQuadratures, "in-step forcing quadrature"),
                  flag("dealias", false, "apply the 2/3 rule to the forcing"),
                  num("t_final", 5.0, 0.0, true, {}, "final time"), integer("k_min", 1, 1, {}, "lowest forced mode"),
                  integer("k_max", 128, 1, {}, "highest forced mode"),
                  integer("fit_lo", 8, 1, {}, "lower end of the slope fit"),
                  integer("fit_hi", 100, 2, {}, "upper end of the slope fit"),
                  integer("window", 1, 1, 1000, "snapshots averaged into the spectrum"),
                  num("window_spacing", 0.1, 0.0, true, {}, "time between averaged snapshots")}});
    Param cases{"cases", PType::Cases, json::array(), {}, false, {}, {}, "evolution runs", {}};
    cases.fields = {num("p", 3.0, 1.0, true, {}, "p-Laplacian exponent"),
                    choice("series", "dual", kSeries, "homotopy"), integer("order", 4, 0, 24, "highest order N"),
                    integer("refeed_every", 0, 0, {}, "steps between refeeds (0 disables)"),
                    num("half_width", 6.0, 0.0, true, {}, "domain half-width L")};
    cases.fallback = json::array({json{{"p", 3.0}, {"series", "dual"}, {"order", 4}}});
    d.push_back({"fem-evolution", "delta-IC p-Laplacian evolution by P1 finite elements against Barenblatt",
                 {cases, num("dx", 0.02, 0.0, true, {}, "mesh spacing"), num("dt", 0.01, 0.0, true, {}, "time step"),
                  num("t_final", 1.0, 0.0, true, {}, "final time"),
                  flag("mirror_symmetry", true, "keep coefficients exactly even about x = 0")}});
    return d;
  }();
  return defs;
}

std::vector<Param> common_params() {
  Param name{"name", PType::String, "run", {}, false, {}, {}, "run name (output subdirectory)", {}};
  Param desc{"description", PType::String, "", {}, false, {}, {}, "free text", {}};
  return {name, desc, integer("seed", 0, 0, {}, "random seed (forcing amplitudes and phases)")};
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

bool is_integer(const json& v) { return v.is_number_integer() || v.is_number_unsigned(); }

void check_number(const Param& p, const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  if (p.type == PType::Integer || p.type == PType::IntegerArray) {
    if (!is_integer(v)) fail(where, "expected an integer");
  }
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(where, "must be finite");
  if (p.min && (p.exclusiveMin ? !(x > *p.min) : x < *p.min)) {
    std::ostringstream os;
    os << "must be " << (p.exclusiveMin ? "> " : ">= ") << *p.min;
    fail(where, os.str());
  }
  if (p.max && x > *p.max) {
    std::ostringstream os;
    os << "must be <= " << *p.max;
    fail(where, os.str());
  }
}

void check_choice(const Param& p, const json& v, const std::string& where) {
  if (!v.is_string()) fail(where, "expected a string");
  if (!p.choices.empty() && std::find(p.choices.begin(), p.choices.end(), v.get<std::string>()) == p.choices.end())
    fail(where, "unknown value '" + v.get<std::string>() + "'");
}

json normalize_object(const json& in, const std::vector<Param>& params, const std::string& where);

json check_param(const Param& p, const json& v, const std::string& where) {
  switch (p.type) {
    case PType::Number:
    case PType::Integer: check_number(p, v, where); return v;
    case PType::String: check_choice(p, v, where); return v;
    case PType::Bool:
      if (!v.is_boolean()) fail(where, "expected a boolean");
      return v;
    case PType::NumberArray:
    case PType::IntegerArray:
    case PType::StringArray:
      if (!v.is_array() || v.empty()) fail(where, "expected a non-empty array");
      for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string w = where + "[" + std::to_string(i) + "]";
        if (p.type == PType::StringArray) check_choice(p, v[i], w);
        else check_number(p, v[i], w);
      }
      return v;
    case PType::Cases: {
      if (!v.is_array() || v.empty()) fail(where, "expected a non-empty array of objects");
      json out = json::array();
      for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(normalize_object(v[i], p.fields, where + "[" + std::to_string(i) + "]"));
      return out;
    }
  }
  throw InternalError("unhandled parameter type");
}

json normalize_object(const json& in, const std::vector<Param>& params, const std::string& where) {
  if (!in.is_object()) fail(where, "expected an object");
  json out = json::object();
  for (auto it = in.begin(); it != in.end(); ++it)
    if (std::none_of(params.begin(), params.end(), [&](const Param& p) { return p.key == it.key(); }))
      fail(where, "unknown key '" + it.key() + "'");
  for (const Param& p : params) {
    const std::string w = where.empty() ? p.key : where + "." + p.key;
    out[p.key] = in.contains(p.key) ? check_param(p, in.at(p.key), w) : check_param(p, p.fallback, w);
  }
  return out;
}

json param_schema(const Param& p) {
  json s;
  auto bounds = [&](json& t) {
    if (p.min) t[p.exclusiveMin ? "exclusiveMinimum" : "minimum"] = *p.min;
    if (p.max) t["maximum"] = *p.max;
  };
  switch (p.type) {
    case PType::Number: s["type"] = "number"; bounds(s); break;
    case PType::Integer: s["type"] = "integer"; bounds(s); break;
    case PType::String:
      s["type"] = "string";
      if (!p.choices.empty()) s["enum"] = p.choices;
      break;
    case PType::Bool: s["type"] = "boolean"; break;
    case PType::NumberArray:
    case PType::IntegerArray: {
      json item{{"type", p.type == PType::Integer || p.type == PType::IntegerArray ? "integer" : "number"}};
      bounds(item);
      s = {{"type", "array"}, {"minItems", 1}, {"items", item}};
      break;
    }
    case PType::StringArray:
      s = {{"type", "array"}, {"minItems", 1}, {"items", {{"type", "string"}, {"enum", p.choices}}}};
      break;
    case PType::Cases: {
      json props = json::object();
      for (const Param& f : p.fields) props[f.key] = param_schema(f);
      s = {{"type", "array"},
           {"minItems", 1},
           {"items", {{"type", "object"}, {"properties", props}, {"additionalProperties", false}}}};
      break;
    }
  }
  s["description"] = p.doc;
  s["default"] = p.fallback;
  return s;
}

// ---- helpers -----------------------------------------------------------------

double advection_speed(const std::string& choice, double re) { return choice == "one" ? 1.0 : 1.0 / re; }

std::vector<double> doubles(const json& a) { return a.get<std::vector<double>>(); }

GridField cosine_squared_ic(const UniformGrid& grid) {
  return sample(grid, [](double x) {
    const double c = std::cos(2.0 * std::numbers::pi * x);
    return c * c - 0.5;
  });
}

PeriodicSolverConfig periodic_config(const json& c) {
  PeriodicSolverConfig cfg;
  cfg.gridSize = c["grid_size"].get<int>();
  cfg.dt = c["dt"].get<double>();
  cfg.order = c["order"].get<int>();
  cfg.refeedEvery = c["refeed_every"].get<int>();
  cfg.quadrature = forcing_quadrature_from_string(c["quadrature"].get<std::string>());
  cfg.dealias = c["dealias"].get<bool>();
  cfg.sampleTimes = doubles(c["times"]);
  std::sort(cfg.sampleTimes.begin(), cfg.sampleTimes.end());
  cfg.tFinal = cfg.sampleTimes.back();
  return cfg;
}

double max_error_cosine(const GridField& s, double t, double v, double re) {
  double err = 0.0;
  for (int j = 0; j < s.grid.count[0]; ++j)
    err = std::max(err, std::abs(s[j] - cosine_squared_exact(t, s.grid.coordinate(j), 1.0, v, re)));
  return err;
}

std::vector<std::string> order_columns(int order) {
  std::vector<std::string> cols;
  for (int n = 0; n <= order; ++n) cols.push_back("u_" + std::to_string(n));
  return cols;
}

struct Context {
  std::filesystem::path dir;
  RunOutcome& outcome;

  CsvWriter csv(const std::string& file, const std::vector<std::string>& header) {
    outcome.artifacts.push_back(file);
    return CsvWriter(dir / file, header);
  }
};

// ---- runners -----------------------------------------------------------------

void run_delta_ic(const json& c, Context& ctx) {
  const double re = c["reynolds"].get<double>();
  const int order = c["order"].get<int>();
  const int points = c["points"].get<int>();
  const double x0 = c["x_min"].get<double>(), x1 = c["x_max"].get<double>();
  if (!(x1 > x0)) throw ConfigError("x_max must exceed x_min");
  std::vector<std::string> header{"v_choice", "v", "t", "x", "exact", "S_N"};
  for (auto& col : order_columns(order)) header.push_back(col);
  CsvWriter prof = ctx.csv("profiles.csv", header);
  CsvWriter errs = ctx.csv("errors.csv", {"v_choice", "v", "t", "max_error"});
  json summary = json::array();
  for (const auto& vc : c["v_choices"]) {
    const double v = advection_speed(vc.get<std::string>(), re);
    for (double t : doubles(c["times"])) {
      double err = 0.0;
      for (int i = 0; i < points; ++i) {
        const double x = x0 + (x1 - x0) * i / (points - 1);
        const std::vector<double> u = burgers_delta_taylor(t, x, v, re, order);
        double s = 0.0;
        for (double a : u) s += a;
        const double ex = burgers_delta_exact(t, x, 1.0, v, re);
        err = std::max(err, std::abs(s - ex));
        std::vector<CsvCell> row{vc.get<std::string>(), v, t, x, ex, s};
        for (double a : u) row.emplace_back(a);
        prof.row(row);
      }
      errs.row({vc.get<std::string>(), v, t, err});
      summary.push_back({{"v_choice", vc}, {"t", t}, {"max_error", err}});
    }
  }
  ctx.outcome.summary["max_errors"] = summary;
}

void run_cosine_squared(const json& c, Context& ctx) {
  const double re = c["reynolds"].get<double>();
  const double v = advection_speed(c["v_choice"], re);
  const PeriodicSolverConfig cfg = periodic_config(c);
  const UniformGrid grid = UniformGrid::periodic_unit(cfg.gridSize);
  const PeriodicTrajectory tr =
      solve_periodic_hierarchy(cosine_squared_ic(grid), HomotopySpec::burgers_linear(v, re), std::nullopt, cfg);
  std::vector<std::string> header{"t", "x", "exact", "S_N"};
  for (auto& col : order_columns(cfg.order)) header.push_back(col);
  CsvWriter prof = ctx.csv("profiles.csv", header);
  CsvWriter errs = ctx.csv("errors.csv", {"t", "max_error"});
  json summary = json::array();
  for (std::size_t i = 0; i < tr.states.size(); ++i) {
    const GridField s = partial_sum(tr.states[i], tr.evaluationDelta).values;
    double err = 0.0;
    for (int j = 0; j < grid.count[0]; ++j) {
      const double x = grid.coordinate(j);
      const double ex = cosine_squared_exact(tr.times[i], x, 1.0, v, re);
      err = std::max(err, std::abs(s[j] - ex));
      std::vector<CsvCell> row{tr.times[i], x, ex, s[j]};
      for (const auto& u : tr.states[i].coeffs) row.emplace_back(u[j]);
      prof.row(row);
    }
    errs.row({tr.times[i], err});
    summary.push_back({{"t", tr.times[i]}, {"max_error", err}});
  }
  ctx.outcome.summary["max_errors"] = summary;
}

void run_refeeding(const json& c, Context& ctx) {
  const double re = c["reynolds"].get<double>();
  const double v = advection_speed(c["v_choice"], re);
  PeriodicSolverConfig cfg = periodic_config(c);
  const UniformGrid grid = UniformGrid::periodic_unit(cfg.gridSize);
  const GridField g = cosine_squared_ic(grid);
  const HomotopySpec spec = HomotopySpec::burgers_linear(v, re);
  const std::vector<double> times = cfg.sampleTimes;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  auto series_errors = [&](int refeedEvery, const std::string& label) {
    PeriodicSolverConfig run = cfg;
    run.refeedEvery = refeedEvery;
    std::vector<double> errs(times.size(), nan);
    try {
      const PeriodicTrajectory tr = solve_periodic_hierarchy(g, spec, std::nullopt, run);
      for (std::size_t i = 0; i < tr.states.size(); ++i)
        errs[i] = max_error_cosine(partial_sum(tr.states[i], tr.evaluationDelta).values, tr.times[i], v, re);
    } catch (const SolverError& e) {
      ctx.outcome.warnings.push_back(label + " run stopped: " + e.what());
      // resample up to the failure
      for (std::size_t i = 0; i < times.size(); ++i) {
        if (std::lround(times[i] / cfg.dt) >= e.step()) break;
        PeriodicSolverConfig part = run;
        part.sampleTimes = {times[i]};
        part.tFinal = times[i];
        const PeriodicTrajectory tr = solve_periodic_hierarchy(g, spec, std::nullopt, part);
        errs[i] = max_error_cosine(partial_sum(tr.states[0], tr.evaluationDelta).values, tr.times[0], v, re);
      }
    }
    return errs;
  };

  const std::vector<double> refeed = series_errors(std::max(cfg.refeedEvery, 1), "refeeding");
  const std::vector<double> plain = series_errors(0, "no-refeed");
  std::vector<double> dns(times.size(), nan);
  if (c["dns"].get<bool>()) {
    try {
      const DnsTrajectory d = dns_burgers(g, std::nullopt, cfg.dt, cfg.tFinal, re, times);
      for (std::size_t i = 0; i < d.fields.size(); ++i) dns[i] = max_error_cosine(d.fields[i], d.times[i], v, re);
      for (const auto& w : d.warnings) ctx.outcome.warnings.push_back(w);
    } catch (const SolverError& e) {
      ctx.outcome.warnings.push_back(std::string("DNS run stopped: ") + e.what());
    }
  }
  CsvWriter errs = ctx.csv("errors.csv", {"t", "refeed", "no_refeed", "dns"});
  json summary = json::array();
  for (std::size_t i = 0; i < times.size(); ++i) {
    errs.row({times[i], refeed[i], plain[i], dns[i]});
    summary.push_back({{"t", times[i]},
                       {"refeed", refeed[i]},
                       {"no_refeed", std::isfinite(plain[i]) ? json(plain[i]) : json(nullptr)},
                       {"dns", std::isfinite(dns[i]) ? json(dns[i]) : json(nullptr)}});
  }
  ctx.outcome.summary["max_errors"] = summary;
}

void run_burgers_order(const json& c, Context& ctx) {
  const double re = c["reynolds"].get<double>();
  const double v = advection_speed(c["v_choice"], re);
  const PeriodicSolverConfig base = periodic_config(c);
  const UniformGrid grid = UniformGrid::periodic_unit(base.gridSize);
  const GridField g = cosine_squared_ic(grid);
  CsvWriter errs = ctx.csv("errors.csv", {"N", "t", "max_error"});
  json summary = json::array();
  for (const auto& n : c["orders"]) {
    PeriodicSolverConfig cfg = base;
    cfg.order = n.get<int>();
    const PeriodicTrajectory tr = solve_periodic_hierarchy(g, HomotopySpec::burgers_linear(v, re), std::nullopt, cfg);
    for (std::size_t i = 0; i < tr.states.size(); ++i) {
      const double err = max_error_cosine(partial_sum(tr.states[i], tr.evaluationDelta).values, tr.times[i], v, re);
      errs.row({static_cast<long long>(cfg.order), tr.times[i], err});
      summary.push_back({{"N", cfg.order}, {"t", tr.times[i]}, {"max_error", err}});
    }
  }
  ctx.outcome.summary["max_errors"] = summary;
}

void run_dirichlet(const json& c, Context& ctx) {
  const int dim = c["dimension"].get<int>();
  const int cells = c["cells"].get<int>();
  const int order = c["order"].get<int>();
  const NormKind norm = norm_kind_from_string(c["norm"].get<std::string>());
  const int plateau = c["plateau"].get<int>();
  if (plateau > order) throw ConfigError("plateau exceeds the highest order");
  CsvWriter errs = ctx.csv("errors.csv", {"series", "p", "N", "metric"});
  CsvWriter rates = ctx.csv("rates.csv", {"series", "p", "rate", "plateau", "rate_entries"});
  json summary = json::array();
  for (const auto& sname : c["series"]) {
    const HomotopyKind kind =
        sname.get<std::string>() == "dual" ? HomotopyKind::PLapDual : HomotopyKind::PLapOrdinary;
    for (double p : doubles(c["p_values"])) {
      const DirichletProblem prob = DirichletProblem::ball(dim, cells, p, kind);
      const DirichletResult res = solve_dirichlet_hierarchy(prob, order);
      for (const auto& w : res.warnings) ctx.outcome.warnings.push_back(w);
      const UniformGrid grid = prob.grid();
      const GridField exact = dim == 1 ? sample(grid, [&](double x) { return plap_radial_profile(p, 1, x); })
                                       : sample2d(grid, [&](double x, double y) {
                                           return plap_radial_profile(p, 2, std::hypot(x, y));
                                         });
      std::optional<int> fixed;
      if (plateau > 0) fixed = plateau;
      ConvergenceReport rep;
      try {
        rep = convergence_report(res.state, res.evaluationDelta, exact, norm, fixed);
      } catch (const ArgumentError& e) {
        throw SolverError(std::string("rate estimate failed: ") + e.what(), order, 0);
      }
      for (std::size_t n = 0; n < rep.metric.size(); ++n)
        errs.row({sname.get<std::string>(), p, static_cast<long long>(n), rep.metric[n]});
      rates.row({sname.get<std::string>(), p, rep.rate, static_cast<long long>(rep.plateau),
                 static_cast<long long>(rep.rateEntries)});
      summary.push_back({{"series", sname},
                         {"p", p},
                         {"rate", rep.rate},
                         {"plateau", rep.plateau},
                         {"metric", rep.metric},
                         {"max_poisson_residual", res.maxResidual}});
    }
  }
  ctx.outcome.summary["runs"] = summary;
}

void run_turbulence(const json& c, std::uint64_t seed, Context& ctx) {
  const double re = c["reynolds"].get<double>();
  const double v = advection_speed(c["v_choice"], re);
  PeriodicSolverConfig cfg;
  cfg.gridSize = c["grid_size"].get<int>();
  cfg.dt = c["dt"].get<double>();
  cfg.order = c["order"].get<int>();
  cfg.refeedEvery = c["refeed_every"].get<int>();
  cfg.quadrature = forcing_quadrature_from_string(c["quadrature"].get<std::string>());
  cfg.dealias = c["dealias"].get<bool>();
  cfg.tFinal = c["t_final"].get<double>();
  const int window = c["window"].get<int>();
  const double spacing = c["window_spacing"].get<double>();
  for (int w = window - 1; w >= 0; --w) {
    const double t = cfg.tFinal - w * spacing;
    if (!(t > 0.0)) throw ConfigError("averaging window reaches before t = 0");
    cfg.sampleTimes.push_back(t);
  }
  const int kMin = c["k_min"].get<int>(), kMax = c["k_max"].get<int>();
  if (kMax < kMin) throw ConfigError("k_max must be >= k_min");
  if (kMax >= cfg.gridSize / 2) throw ConfigError("k_max must stay below grid_size / 2");
  const int fitLo = c["fit_lo"].get<int>(), fitHi = c["fit_hi"].get<int>();
  if (fitHi <= fitLo || fitHi >= cfg.gridSize / 2) throw ConfigError("fit range must satisfy fit_lo < fit_hi < grid_size / 2");

  const UniformGrid grid = UniformGrid::periodic_unit(cfg.gridSize);
  const ForcingSpec forcing = ForcingSpec::random(kMin, kMax, seed);
  const PeriodicTrajectory tr =
      solve_periodic_hierarchy(GridField(grid), HomotopySpec::burgers_linear(v, re), forcing, cfg);
  std::vector<Spectrum> snaps;
  for (std::size_t i = 0; i < tr.states.size(); ++i)
    snaps.push_back(energy_spectrum(partial_sum(tr.states[i], tr.evaluationDelta).values, tr.times[i]));
  const Spectrum spec = average_spectra(snaps);
  const double slope = spectrum_slope(spec, fitLo, fitHi);

  CsvWriter sp = ctx.csv("spectrum.csv", {"k", "E", "k2E"});
  for (std::size_t k = 0; k < spec.energy.size(); ++k)
    sp.row({static_cast<long long>(k), spec.energy[k], static_cast<double>(k * k) * spec.energy[k]});
  const GridField last = partial_sum(tr.states.back(), tr.evaluationDelta).values;
  const GridField f = forcing_field(forcing, grid);
  CsvWriter sol = ctx.csv("solution.csv", {"x", "S_N", "forcing"});
  for (int j = 0; j < grid.count[0]; ++j) sol.row({grid.coordinate(j), last[j], f[j]});
  CsvWriter fc = ctx.csv("forcing.csv", {"k", "amplitude", "phase"});
  for (int k = kMin; k <= kMax; ++k)
    fc.row({static_cast<long long>(k), forcing.amplitudes[k - kMin], forcing.phases[k - kMin]});
  ctx.outcome.summary["slope"] = slope;
  ctx.outcome.summary["fit_range"] = {fitLo, fitHi};
  ctx.outcome.summary["energy"] = spec.total;
  ctx.outcome.summary["time"] = spec.time;
}

void run_fem(const json& c, Context& ctx) {
  CsvWriter res = ctx.csv("residuals.csv", {"case", "p", "series", "refeed_every", "N", "residual"});
  json summary = json::array();
  int index = 0;
  for (const auto& cs : c["cases"]) {
    EvolutionConfig cfg;
    cfg.p = cs["p"].get<double>();
    cfg.series = cs["series"].get<std::string>() == "dual" ? HomotopyKind::PLapDual : HomotopyKind::PLapOrdinary;
    cfg.order = cs["order"].get<int>();
    cfg.refeedEvery = cs["refeed_every"].get<int>();
    cfg.halfWidth = cs["half_width"].get<double>();
    cfg.dx = c["dx"].get<double>();
    cfg.dt = c["dt"].get<double>();
    cfg.tFinal = c["t_final"].get<double>();
    cfg.mirrorSymmetry = c["mirror_symmetry"].get<bool>();
    const EvolutionResult r = solve_evolution_hierarchy(cfg);
    const std::string series = cs["series"].get<std::string>();
    json entry{{"case", index},   {"p", cfg.p},          {"series", series},
               {"order", cfg.order}, {"refeed_every", cfg.refeedEvery}, {"half_width", cfg.halfWidth},
               {"diverged", r.diverged}};
    if (r.diverged) {
      entry["note"] = r.divergenceNote;
      ctx.outcome.warnings.push_back("case " + std::to_string(index) + ": " + r.divergenceNote);
    }
    if (!r.samples.empty() && !r.samples.back().residual.empty()) {
      const EvolutionSample& s = r.samples.back();
      for (std::size_t n = 0; n < s.residual.size(); ++n)
        res.row({static_cast<long long>(index), cfg.p, series, static_cast<long long>(cfg.refeedEvery),
                 static_cast<long long>(n), s.residual[n]});
      entry["residual"] = s.residual;
      std::vector<std::string> header{"x"};
      for (auto& col : order_columns(cfg.order)) header.push_back(col);
      header.push_back("S_N");
      header.push_back("barenblatt");
      CsvWriter prof = ctx.csv("profile_case" + std::to_string(index) + ".csv", header);
      for (int i = 0; i < r.mesh.nodes(); ++i) {
        std::vector<CsvCell> row{r.mesh.x(i)};
        double sum = 0.0, power = 1.0;
        for (const auto& a : s.state.coeffs) {
          row.emplace_back(a[i]);
          sum += power * a[i];
          power *= r.evaluationDelta;
        }
        row.emplace_back(sum);
        row.emplace_back(barenblatt(cfg.p, 1, s.time, std::abs(r.mesh.x(i))));
        prof.row(row);
      }
    }
    summary.push_back(entry);
    ++index;
  }
  ctx.outcome.summary["cases"] = summary;
}

json with(json base, std::initializer_list<std::pair<const std::string, json>> extra) {
  for (const auto& [k, v] : extra) base[k] = v;
  return base;
}

}  // namespace

nlohmann::json config_schema() {
  json variants = json::array();
  std::vector<std::string> names;
  for (const ExperimentDef& def : experiments()) {
    names.push_back(def.name);
    json props = json::object();
    props["schema_version"] = {{"const", kConfigSchemaVersion}};
    props["experiment"] = {{"const", def.name}, {"description", def.doc}};
    for (const Param& p : common_params()) props[p.key] = param_schema(p);
    for (const Param& p : def.params) props[p.key] = param_schema(p);
    variants.push_back({{"title", def.name},
                        {"type", "object"},
                        {"required", {"schema_version", "experiment"}},
                        {"properties", props},
                        {"additionalProperties", false}});
  }
  return {{"$schema", "https://json-schema.org/draft/2020-12/schema"},
          {"$id", "https://serilin.invalid/schema/run_config.schema.json"},
          {"title", "serilin run configuration"},
          {"description", "Version " + std::to_string(kConfigSchemaVersion) + " of the experiment config format"},
          {"type", "object"},
          {"required", {"schema_version", "experiment"}},
          {"properties", {{"experiment", {{"enum", names}}}}},
          {"oneOf", variants}};
}

nlohmann::json normalize_config(const nlohmann::json& config) {
  if (!config.is_object()) throw ConfigError("config must be a JSON object");
  if (!config.contains("schema_version")) throw ConfigError("missing schema_version");
  if (config["schema_version"] != kConfigSchemaVersion)
    throw ConfigError("unsupported schema_version (expected " + std::to_string(kConfigSchemaVersion) + ")");
  if (!config.contains("experiment") || !config["experiment"].is_string()) throw ConfigError("missing experiment");
  const std::string name = config["experiment"];
  const auto& defs = experiments();
  const auto def = std::find_if(defs.begin(), defs.end(), [&](const ExperimentDef& d) { return d.name == name; });
  if (def == defs.end()) throw ConfigError("unknown experiment '" + name + "'");
  std::vector<Param> params = common_params();
  params.insert(params.end(), def->params.begin(), def->params.end());
  json body = config;
  body.erase("schema_version");
  body.erase("experiment");
  json out = normalize_object(body, params, "");
  out["schema_version"] = kConfigSchemaVersion;
  out["experiment"] = name;
  if (out.contains("grid_size")) {
    const int m = out["grid_size"].get<int>();
    if (!is_power_of_two(m)) throw ConfigError("grid_size: must be a power of two");
  }
  return out;
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> list = [] {
    const json v1{{"schema_version", kConfigSchemaVersion}};
    std::vector<Preset> p;
    p.push_back({"fig1-delta-ic", "Point-mass Burgers, Re = 2: S_8 against the closed form for v = 1/Re and v = 1",
                 with(v1, {{"experiment", "delta-ic"}, {"name", "fig1-delta-ic"}})});
    p.push_back({"fig2-cosine-squared", "Cosine-squared data, Re = 500, N = 8 with refeeding: profiles and errors",
                 with(v1, {{"experiment", "cosine-squared"}, {"name", "fig2-cosine-squared"}})});
    p.push_back({"fig3-refeeding", "Max error over time: refeeding, no refeeding and DNS",
                 with(v1, {{"experiment", "refeeding"},
                           {"name", "fig3-refeeding"},
                           {"times", {0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0}}})});
    p.push_back({"fig4-burgers-order", "Max error against order N = 0..8 with refeeding",
                 with(v1, {{"experiment", "burgers-order"}, {"name", "fig4-burgers-order"}})});
    p.push_back({"fig4-plap-error", "1D Dirichlet p-Laplacian: L1 error against order for both series",
                 with(v1, {{"experiment", "dirichlet"}, {"name", "fig4-plap-error"}, {"order", 12}})});
    p.push_back({"fig5-rates", "1D Dirichlet convergence rates over p",
                 with(v1, {{"experiment", "dirichlet"},
                           {"name", "fig5-rates"},
                           {"p_values", {1.25, 1.5, 1.75, 2.25, 2.5, 2.75, 3.0, 3.25, 3.5, 3.75}},
                           {"plateau", 5}})});
    p.push_back({"fig6-turbulence", "Randomly forced Burgers, Re = 500, S_4 with refeeding to t = 5: energy spectrum",
                 with(v1, {{"experiment", "turbulence"}, {"name", "fig6-turbulence"}, {"seed", 20240601}})});
    p.push_back({"fig7-error-2d", "2D Dirichlet p-Laplacian on the square: L1 error against order",
                 with(v1, {{"experiment", "dirichlet"}, {"name", "fig7-error-2d"}, {"dimension", 2}, {"cells", 128}})});
    p.push_back({"fig8-rates-2d", "2D Dirichlet convergence rates over p",
                 with(v1, {{"experiment", "dirichlet"},
                           {"name", "fig8-rates-2d"},
                           {"dimension", 2},
                           {"cells", 128},
                           {"p_values", {1.25, 1.5, 1.75, 2.25, 2.5, 2.75, 3.0, 3.25, 3.5, 3.75}},
                           {"plateau", 5}})});
    p.push_back({"fig9-barenblatt", "Point-mass p-Laplacian evolution by finite elements against Barenblatt",
                 with(v1, {{"experiment", "fem-evolution"},
                           {"name", "fig9-barenblatt"},
                           {"cases",
                            json::array({json{{"p", 3.0}, {"series", "dual"}, {"order", 4}},
                                         json{{"p", 3.0}, {"series", "dual"}, {"order", 3}, {"refeed_every", 1}},
                                         json{{"p", 2.5}, {"series", "dual"}, {"order", 4}},
                                         json{{"p", 2.5}, {"series", "dual"}, {"order", 3}, {"refeed_every", 1}},
                                         json{{"p", 1.7}, {"series", "ordinary"}, {"order", 4}, {"half_width", 12.0}},
                                         json{{"p", 1.7}, {"series", "dual"}, {"order", 4}, {"half_width", 12.0}}})}})});
    return p;
  }();
  return list;
}

const Preset* find_preset(const std::string& name) {
  for (const Preset& p : presets())
    if (p.name == name) return &p;
  return nullptr;
}

RunOutcome run_experiment(const nlohmann::json& rawConfig, const std::filesystem::path& directory,
                          std::optional<std::uint64_t> seedOverride) {
  json config = normalize_config(rawConfig);
  if (seedOverride) config["seed"] = *seedOverride;
  const std::uint64_t seed = config["seed"].get<std::uint64_t>();

  RunOutcome outcome;
  outcome.directory = directory;
  std::filesystem::create_directories(directory);
  Context ctx{directory, outcome};
  const auto start = std::chrono::steady_clock::now();
  const std::string kind = config["experiment"];
  if (kind == "delta-ic") run_delta_ic(config, ctx);
  else if (kind == "cosine-squared") run_cosine_squared(config, ctx);
  else if (kind == "refeeding") run_refeeding(config, ctx);
  else if (kind == "burgers-order") run_burgers_order(config, ctx);
  else if (kind == "dirichlet") run_dirichlet(config, ctx);
  else if (kind == "turbulence") run_turbulence(config, seed, ctx);
  else if (kind == "fem-evolution") run_fem(config, ctx);
  else throw InternalError("no runner for experiment '" + kind + "'");
  outcome.wallSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json manifest{{"name", config["name"]},
                {"experiment", kind},
                {"library", "serilin"},
                {"version", SERILIN_VERSION},
                {"seed", seed},
                {"config", config},
                {"artifacts", outcome.artifacts},
                {"warnings", outcome.warnings},
                {"summary", outcome.summary},
                {"wall_time_seconds", outcome.wallSeconds}};
  write_json(directory / "manifest.json", manifest);
  return outcome;
}

}  // namespace serilin
