#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>

#include "ifes/banach.hpp"
#include "ifes/conjugacy.hpp"
#include "ifes/tarski.hpp"
#include "ifes_bundled_specs.hpp"
#include "report_json.hpp"

namespace ifes::app {

namespace fs = std::filesystem;
using nlohmann::json;

void apply(const Overrides& o, SolverConfig& s) {
  if (o.method) {
    if (!is_valid_method(*o.method)) {
      throw SpecError({"--method must be banach, tarski-min, tarski-max or tarski-both"});
    }
    s.method = *o.method;
  }
  if (o.grid) s.grid = *o.grid;
  if (o.levels) s.levels = *o.levels;
  if (o.mode) s.mode = *o.mode;
  if (o.tol) s.tol = *o.tol;
  if (o.max_iter) s.max_iter = *o.max_iter;
  if (o.relaxation) s.relaxation = *o.relaxation;
}

std::vector<double> ScanRange::samples() const {
  std::vector<double> out(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    if (i == 0) {
      out[i] = lo;
    } else if (i + 1 == steps) {
      out[i] = hi;
    } else {
      out[i] = lo + (hi - lo) * (static_cast<double>(i) / static_cast<double>(steps - 1));
    }
  }
  return out;
}

ScanRange parse_range(std::string_view text) {
  const auto a = text.find(':');
  const auto b = a == std::string_view::npos ? a : text.find(':', a + 1);
  if (a == std::string_view::npos || b == std::string_view::npos ||
      text.find(':', b + 1) != std::string_view::npos) {
    throw SpecError({"range must look like lo:hi:steps, got '" + std::string(text) + "'"});
  }
  auto number = [&](std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
      throw SpecError({"range has a malformed bound '" + std::string(s) + "'"});
    }
    return v;
  };
  ScanRange r;
  r.lo = number(text.substr(0, a));
  r.hi = number(text.substr(a + 1, b - a - 1));
  const std::string_view steps = text.substr(b + 1);
  const auto [ptr, ec] = std::from_chars(steps.data(), steps.data() + steps.size(), r.steps);
  if (steps.empty() || ec != std::errc() || ptr != steps.data() + steps.size()) {
    throw SpecError({"range has a malformed step count '" + std::string(steps) + "'"});
  }
  if (r.hi < r.lo) throw SpecError({"range needs lo <= hi"});
  return r;
}

namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw SpecError({"cannot create output directory " + dir.string() + ": " + ec.message()});
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw SpecError({"cannot write " + path.string()});
}

void write_function(const fs::path& path, const GridFunction& g) {
  std::ostringstream s;
  write_csv(s, g);
  write_text(path, s.str());
}

void write_report(const fs::path& dir, const std::string& name, const json& report) {
  write_text(dir / name, report.dump(2) + "\n");
}

const ProductEquationSpec& require_product(const LoadedSpec& spec, const char* what) {
  if (!spec.product) throw SpecError({spec.origin + ": " + what + " needs a product-form spec"});
  return *spec.product;
}

json resolution(const SolverConfig& s) {
  json j{{"grid", s.grid}, {"nodes", s.grid + 1}, {"mode", to_string(s.mode)},
         {"verification_factor", 4}};
  if (s.method == "banach") {
    j["tol"] = s.tol;
    j["max_iter"] = s.max_iter;
    j["relaxation"] = s.relaxation;
    j["mode"] = "pl";
  } else {
    j["levels"] = s.levels;
  }
  return j;
}

BanachConfig banach_config(const LoadedSpec& spec) {
  BanachConfig cfg;
  cfg.grid = spec.solver.grid;
  cfg.tol = spec.solver.tol;
  cfg.max_iter = spec.solver.max_iter;
  cfg.relaxation = spec.solver.relaxation;
  if (spec.classes) cfg.classes = *spec.classes;
  return cfg;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

Outcome solve_banach(const LoadedSpec& spec, const fs::path& out_dir, json report) {
  Outcome o;
  const BanachConfig cfg = banach_config(spec);
  if (spec.sum) {
    const SumSolution sol = solve_sum(*spec.sum, cfg);
    write_function(out_dir / "solution.csv", sol.f);
    report["solve"] = sol.report;
    report["files"] = {{"solution", "solution.csv"}};
    o.exit_code = sol.report.converged ? kOk : kNoConvergence;
    o.summary = "banach (sum form): " + std::string(sol.report.converged ? "converged" : "NOT converged") +
                " after " + std::to_string(sol.report.iterations) + " iterations, residual " +
                fmt(sol.report.residual.value);
  } else {
    const ProductEquationSpec& eq = *spec.product;
    const HypothesisReport hyp = check_banach_hypotheses(eq, *spec.classes);
    report["hypotheses"] = hyp;
    report["constants"] = derived_constants(eq.exponents, *spec.classes);
    if (!hyp.all_passed()) {
      o.exit_code = kHypothesisFailure;
      o.summary = hyp.to_text();
      o.report = std::move(report);
      return o;
    }
    const ProductSolution sol = solve_product_continuous(eq, cfg);
    write_function(out_dir / "solution.csv", sol.g);
    report["solve"] = sol.report;
    report["sum_form_residual"] = sol.sum.report.residual;
    report["files"] = {{"solution", "solution.csv"}};
    o.exit_code = sol.report.converged ? kOk : kNoConvergence;
    o.summary = "banach: " + std::string(sol.report.converged ? "converged" : "NOT converged") +
                " after " + std::to_string(sol.report.iterations) + " iterations; residual " +
                fmt(sol.report.residual.value) + "; class G(J; " + fmt(cfg.classes.delta) + ", " +
                fmt(cfg.classes.M) + "): " + (sol.report.class_verdict.member ? "member" : "NOT member") +
                "; clamps " + std::to_string(sol.report.clamp_count);
  }
  o.report = std::move(report);
  return o;
}

Outcome solve_tarski(const LoadedSpec& spec, const fs::path& out_dir, json report) {
  Outcome o;
  const ProductEquationSpec& eq = require_product(spec, "tarski");
  const HypothesisReport hyp = check_tarski_hypotheses(eq);
  report["hypotheses"] = hyp;
  if (!hyp.all_passed()) {
    o.exit_code = kHypothesisFailure;
    o.summary = hyp.to_text();
    o.report = std::move(report);
    return o;
  }
  TarskiConfig cfg;
  cfg.grid = spec.solver.grid;
  cfg.levels = spec.solver.levels;
  cfg.mode = spec.solver.mode;
  cfg.check_hypotheses = false;
  const std::string& m = spec.solver.method;
  const TarskiResult r = m == "tarski-min"   ? solve_min(eq, cfg)
                         : m == "tarski-max" ? solve_max(eq, cfg)
                                             : solve_both(eq, cfg);
  json t;
  json files;
  bool certified = true;
  std::string summary = m + ":";
  if (r.min) {
    write_function(out_dir / "solution_min.csv", r.min->g);
    t["min"] = *r.min;
    files["solution_min"] = "solution_min.csv";
    certified = certified && (r.min->certified || cfg.mode == EvalMode::PiecewiseLinear);
    summary += " min residual " + fmt(r.min->residual.value) + " (" + std::to_string(r.min->sweeps) +
               " sweeps, " + (r.min->certified ? "certified" : "uncertified") + ");";
  }
  if (r.max) {
    write_function(out_dir / "solution_max.csv", r.max->g);
    t["max"] = *r.max;
    files["solution_max"] = "solution_max.csv";
    certified = certified && (r.max->certified || cfg.mode == EvalMode::PiecewiseLinear);
    summary += " max residual " + fmt(r.max->residual.value) + " (" + std::to_string(r.max->sweeps) +
               " sweeps, " + (r.max->certified ? "certified" : "uncertified") + ");";
  }
  if (r.ordered) {
    t["ordered"] = *r.ordered;
    summary += std::string(" min <= max: ") + (*r.ordered ? "yes" : "NO");
    UniquenessOptions uo;
    uo.residual_tol = std::max(r.min->residual.value, r.max->residual.value);
    uo.equality_tol = 4.0 * (eq.domain.hi() - eq.floor) / static_cast<double>(cfg.levels);
    t["uniqueness_comparable"] = uniqueness_comparable(eq, r.min->g, r.max->g, uo);
    t["uniqueness_equality_tol"] = uo.equality_tol;
  }
  report["tarski"] = t;
  report["files"] = files;
  o.exit_code = certified && r.ordered.value_or(true) ? kOk : kNoConvergence;
  o.summary = summary;
  o.report = std::move(report);
  return o;
}

json base_report(const std::string& command, const LoadedSpec& spec) {
  return json{{"command", command}, {"spec", spec.origin}, {"method", spec.solver.method}};
}

}  // namespace

Outcome run_solve(const LoadedSpec& spec, const fs::path& out_dir, std::uint64_t seed) {
  ensure_dir(out_dir);
  const auto start = std::chrono::steady_clock::now();
  json report = base_report("solve", spec);
  report["seed"] = seed;
  report["resolution"] = resolution(spec.solver);
  Outcome o = spec.solver.method == "banach" ? solve_banach(spec, out_dir, std::move(report))
                                             : solve_tarski(spec, out_dir, std::move(report));
  o.report["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_report(out_dir, "report.json", o.report);
  return o;
}

Outcome run_check(const LoadedSpec& spec, const fs::path& out_dir) {
  ensure_dir(out_dir);
  const ProductEquationSpec& eq = require_product(spec, "check");
  Outcome o;
  json report = base_report("check", spec);
  HypothesisReport hyp;
  if (spec.solver.method == "banach") {
    hyp = check_banach_hypotheses(eq, *spec.classes);
    report["constants"] = derived_constants(eq.exponents, *spec.classes);
  } else {
    hyp = check_tarski_hypotheses(eq);
  }
  report["hypotheses"] = hyp;
  o.exit_code = hyp.all_passed() ? kOk : kHypothesisFailure;
  o.summary = hyp.to_text();
  o.report = std::move(report);
  write_report(out_dir, "report.json", o.report);
  return o;
}

Outcome run_verify(const LoadedSpec& spec, const fs::path& csv, std::optional<EvalMode> mode,
                   const fs::path& out_dir) {
  ensure_dir(out_dir);
  std::ifstream in(csv, std::ios::binary);
  if (!in) throw SpecError({csv.string() + ": cannot open file"});
  CsvTable table;
  try {
    table = read_csv(in);
  } catch (const Error& err) {
    throw SpecError({csv.string() + ": " + err.what()});
  }
  const Interval J = spec.product ? spec.product->domain : spec.sum->domain;
  if (table.x.size() < 2 || std::abs(table.x.front() - J.lo()) > J.slack() ||
      std::abs(table.x.back() - J.hi()) > J.slack()) {
    throw SpecError({csv.string() + ": grid mismatch, nodes must run from " +
                     format_double(J.lo()) + " to " + format_double(J.hi())});
  }
  const EvalMode m =
      mode.value_or(spec.solver.method == "banach" ? EvalMode::PiecewiseLinear : spec.solver.mode);

  json report = base_report("verify", spec);
  report["solution"] = csv.string();
  report["mode"] = to_string(m);
  bool self_map = true;
  std::vector<double> values = table.g;
  for (double& v : values) {
    if (!J.contains_with_slack(v)) self_map = false;
    v = J.clamp(v);
  }
  NodeVector nodes;
  std::optional<GridFunction> g;
  try {
    nodes = std::make_shared<const std::vector<double>>(table.x);
    g.emplace(J, nodes, values, m);
  } catch (const Error& err) {
    throw SpecError({csv.string() + ": " + err.what()});
  }
  report["nodes"] = g->size();
  report["self_map"] = self_map;
  report["monotone"] = g->is_monotone();
  const double lo_v = *std::min_element(table.g.begin(), table.g.end());
  const double hi_v = *std::max_element(table.g.begin(), table.g.end());
  report["value_range"] = {lo_v, hi_v};
  report["endpoints_fixed"] = std::abs(g->value(0) - J.lo()) <= kEndpointTolerance &&
                              std::abs(g->value(g->size() - 1) - J.hi()) <= kEndpointTolerance;

  std::string summary;
  if (spec.product) {
    const ProductEquationSpec& eq = *spec.product;
    const Residual r = product_residual(eq, *g);
    report["residual"] = r;
    const bool above_floor = lo_v >= eq.floor - J.slack();
    report["above_floor"] = above_floor;
    report["order_lattice_member"] = self_map && above_floor && g->is_monotone();
    summary = "residual " + fmt(r.value) + " at x = " + fmt(r.at);
    if (spec.classes && J.lo() > 0.0) {
      try {
        const auto v = in_G_class(*g, J, spec.classes->delta, spec.classes->M);
        report["class_verdict"] = v;
        summary += std::string("; class G: ") + (v.member ? "member" : "NOT member");
      } catch (const RangeError& err) {
        report["class_verdict"] = MembershipVerdict{false, err.what(), {}};
        summary += "; class G: NOT member";
      }
    }
  } else {
    const Residual r = sum_residual(*spec.sum, *g);
    report["residual"] = r;
    summary = "residual " + fmt(r.value) + " at x = " + fmt(r.at);
    if (spec.classes) {
      const auto v = in_F_class(*g, J, spec.classes->delta, spec.classes->M);
      report["class_verdict"] = v;
      summary += std::string("; class F: ") + (v.member ? "member" : "NOT member");
    }
  }
  summary += std::string("; monotone: ") + (g->is_monotone() ? "yes" : "NO") +
             "; self-map: " + (self_map ? "yes" : "NO");
  Outcome o;
  o.summary = summary;
  o.report = std::move(report);
  write_report(out_dir, "verify.json", o.report);
  return o;
}

Outcome run_conjugate(const LoadedSpec& spec, const std::string& to, const fs::path& output) {
  const ProductEquationSpec& eq = require_product(spec, "conjugate");
  LoadedSpec out;
  out.origin = output.string();
  out.classes = spec.classes;
  out.solver = spec.solver;
  json report = base_report("conjugate", spec);
  report["to"] = to;
  if (to == "log") {
    out.sum = log_conjugate_spec(eq);
    out.solver.method = "banach";
    out.solver.mode = EvalMode::PiecewiseLinear;
  } else if (to == "reflect") {
    const Reflection r = reflect_spec(eq);
    out.product = r.spec;
    report["exponent_parity_ok"] = r.exponent_parity_ok;
    report["diagnostics"] = r.diagnostics;
  } else {
    throw SpecError({"--to must be log or reflect, got '" + to + "'"});
  }
  if (output.has_parent_path()) ensure_dir(output.parent_path());
  const std::string text = write_spec(out);
  write_text(output, text);
  report["output"] = output.string();
  Outcome o;
  o.report = std::move(report);
  o.summary = "wrote " + output.string();
  return o;
}

namespace {

struct ScanRow {
  double value = 0.0;
  std::optional<DerivedConstants> constants;
  std::vector<std::pair<std::string, bool>> flags;
};

void set_param(LoadedSpec& s, const std::string& param, double v, bool hold_sum) {
  ProductEquationSpec& eq = *s.product;
  const std::size_t n = eq.order();
  auto index = [&](const std::string& prefix) -> std::optional<std::size_t> {
    if (param.rfind(prefix, 0) != 0) return std::nullopt;
    const std::string digits = param.substr(prefix.size());
    std::size_t k = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size() || k < 1 || k > n) {
      throw SpecError({"parameter '" + param + "' needs an index between 1 and " + std::to_string(n)});
    }
    return k - 1;
  };
  auto need_classes = [&] {
    if (!s.classes) throw SpecError({"parameter '" + param + "' needs a [classes] section"});
  };
  if (auto k = index("lambda.")) {
    const double old = eq.exponents[*k];
    eq.exponents[*k] = v;
    if (hold_sum && n >= 2) {
      const std::size_t c = *k == 0 ? 1 : 0;
      eq.exponents[c] += old - v;
    }
  } else if (param == "delta") {
    eq.floor = v;
    if (s.classes) s.classes->delta = v;
  } else if (param == "M") {
    need_classes();
    s.classes->M = v;
  } else if (auto k2 = index("l.")) {
    need_classes();
    s.classes->l[*k2] = v;
  } else if (auto k3 = index("L.")) {
    need_classes();
    s.classes->L[*k3] = v;
  } else {
    throw SpecError({"unknown scan parameter '" + param + "' (use lambda.k, delta, M, l.k or L.k)"});
  }
}

ScanRow scan_row(LoadedSpec s, const std::string& param, double v, bool hold_sum) {
  set_param(s, param, v, hold_sum);
  ScanRow row;
  row.value = v;
  const ProductEquationSpec& eq = *s.product;
  auto add = [&](const HypothesisReport& r) {
    for (const auto& item : r.items) row.flags.emplace_back(r.path + "." + item.name, item.passed);
    row.flags.emplace_back(r.path + ".all", r.all_passed());
  };
  if (s.classes) {
    row.constants = derived_constants(eq.exponents, *s.classes);
    add(check_banach_hypotheses(eq, *s.classes));
  }
  add(check_tarski_hypotheses(eq));
  return row;
}

}  // namespace

Outcome run_scan(const LoadedSpec& spec, const std::string& param, const ScanRange& range,
                 bool hold_sum, const fs::path& out_dir) {
  require_product(spec, "scan");
  ensure_dir(out_dir);
  {
    LoadedSpec probe = spec;
    set_param(probe, param, spec.product->floor, hold_sum);  // validates the parameter name
  }
  const std::vector<double> values = range.samples();
  std::vector<std::future<ScanRow>> jobs;
  jobs.reserve(values.size());
  for (double v : values) {
    jobs.push_back(std::async(std::launch::async, scan_row, spec, param, v, hold_sum));
  }
  std::vector<ScanRow> rows;
  rows.reserve(jobs.size());
  for (auto& j : jobs) rows.push_back(j.get());

  std::vector<std::string> columns;
  for (const auto& row : rows) {
    for (const auto& [name, passed] : row.flags) {
      if (std::find(columns.begin(), columns.end(), name) == columns.end()) columns.push_back(name);
    }
  }
  std::ostringstream csv;
  csv << param << ",K0,K1,K";
  for (const auto& c : columns) csv << "," << c;
  csv << "\n";
  char buf[64];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g", row.value);
    csv << buf;
    for (double c : {row.constants ? row.constants->K0 : NAN, row.constants ? row.constants->K1 : NAN,
                     row.constants ? row.constants->K : NAN}) {
      csv << ",";
      if (!std::isnan(c)) {
        std::snprintf(buf, sizeof(buf), "%.17g", c);
        csv << buf;
      }
    }
    for (const auto& c : columns) {
      csv << ",";
      for (const auto& [name, passed] : row.flags) {
        if (name == c) {
          csv << (passed ? 1 : 0);
          break;
        }
      }
    }
    csv << "\n";
  }
  write_text(out_dir / "scan.csv", csv.str());

  json report = base_report("scan", spec);
  report["parameter"] = param;
  report["range"] = {{"lo", range.lo}, {"hi", range.hi}, {"steps", range.steps}};
  report["hold_sum"] = hold_sum;
  json changes = json::array();
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].constants && rows[i - 1].constants &&
        (rows[i - 1].constants->K > 0.0) != (rows[i].constants->K > 0.0)) {
      changes.push_back({{"from", rows[i - 1].value}, {"to", rows[i].value}});
    }
  }
  report["K_sign_changes"] = changes;
  report["files"] = {{"scan", "scan.csv"}};
  Outcome o;
  o.report = std::move(report);
  o.summary = "wrote " + (out_dir / "scan.csv").string() + " (" + std::to_string(rows.size()) + " rows)";
  for (const auto& c : o.report["K_sign_changes"]) {
    o.summary += "\nK changes sign between " + fmt(c["from"].get<double>()) + " and " +
                 fmt(c["to"].get<double>());
  }
  return o;
}

std::vector<std::string> bundled_spec_names() {
  std::vector<std::string> out;
  for (const auto& e : bundled::kSpecs) out.emplace_back(e.name);
  return out;
}

std::optional<std::string_view> bundled_spec(std::string_view name) {
  for (const auto& e : bundled::kSpecs) {
    if (e.name == name) return e.text;
  }
  return std::nullopt;
}

Outcome run_example(const std::string& name, const Overrides& overrides, const fs::path& out_dir,
                    std::uint64_t seed) {
  const auto text = bundled_spec(name);
  if (!text) {
    std::string known;
    for (const auto& n : bundled_spec_names()) known += " " + n;
    throw SpecError({"unknown example '" + name + "'; bundled:" + known});
  }
  LoadedSpec spec = parse_spec(*text, "bundled:" + name);
  apply(overrides, spec.solver);
  ensure_dir(out_dir);
  write_text(out_dir / (name + ".ifes"), std::string(*text));
  Outcome o = run_solve(spec, out_dir, seed);
  json ex{{"name", name}};
  json& r = o.report;
  if (name == "exmp1") {
    ex["claim"] = "unique continuous solution g in G([1, e]; 1/5, 4)";
    if (r.contains("solve")) {
      ex["checks"] = {{"hypotheses_pass", r["hypotheses"]["all_passed"]},
                      {"converged", r["solve"]["converged"]},
                      {"in_class", r["solve"]["class_verdict"]["member"]},
                      {"clamp_free", r["solve"]["clamp_count"] == 0},
                      {"residual", r["solve"]["residual"]["value"]}};
    }
  } else if (r.contains("tarski")) {
    ex["claim"] = "order-preserving upper semicontinuous solutions with values in [delta, 1] exist; "
                  "the minimum and maximum solutions bracket all others";
    json checks{{"hypotheses_pass", r["hypotheses"]["all_passed"]}};
    const json& t = r["tarski"];
    if (t.contains("ordered")) checks["min_below_max"] = t["ordered"];
    for (const char* side : {"min", "max"}) {
      if (!t.contains(side)) continue;
      checks[std::string("certified_") + side] = t[side]["certified"];
      checks[std::string("monotone_") + side] = t[side]["monotone"];
      checks[std::string("residual_") + side] = t[side]["residual"]["value"];
    }
    if (name == "ex2") {
      ex["note"] = "computed solutions are order-preserving on a compact interval, hence "
                   "measurable and in L^p([0, 1]) for every p >= 1";
    }
    ex["checks"] = checks;
  }
  r["example"] = ex;
  write_report(out_dir, "report.json", r);
  return o;
}

}  // namespace ifes::app
