#include "spec_file.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace ifes::app {

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
  std::string out = "invalid spec file:";
  for (const auto& p : problems) out += "\n  " + p;
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::optional<double> to_number(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

struct Entry {
  std::string value;
  std::size_t line = 0;
  bool used = false;
};

class Reader {
public:
  explicit Reader(std::string origin) : origin_(std::move(origin)) {}

  void problem(std::size_t line, const std::string& msg) {
    problems_.push_back(origin_ + ":" + std::to_string(line) + ": " + msg);
  }
  void problem(const std::string& msg) { problems_.push_back(origin_ + ": " + msg); }

  void read(std::string_view text) {
    std::size_t line_no = 0;
    std::string section;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t end = std::min(text.find('\n', pos), text.size());
      std::string_view line = text.substr(pos, end - pos);
      pos = end + 1;
      ++line_no;
      bool in_quotes = false;
      for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_quotes = !in_quotes;
        if (line[i] == '#' && !in_quotes) {
          line = line.substr(0, i);
          break;
        }
      }
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') {
          problem(line_no, "malformed section header");
          continue;
        }
        section = std::string(trim(line.substr(1, line.size() - 2)));
        if (section != "equation" && section != "classes" && section != "solver") {
          problem(line_no, "unknown section [" + section + "]");
        } else if (sections_.count(section)) {
          problem(line_no, "duplicate section [" + section + "]");
        }
        sections_[section];
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        problem(line_no, "expected key = value");
        continue;
      }
      if (section.empty()) {
        problem(line_no, "key outside of any section");
        continue;
      }
      const std::string key(trim(line.substr(0, eq)));
      const std::string value(trim(line.substr(eq + 1)));
      auto& entries = sections_[section];
      if (entries.count(key)) {
        problem(line_no, "duplicate key '" + key + "' in [" + section + "]");
        continue;
      }
      entries[key] = Entry{value, line_no, false};
    }
  }

  bool has_section(const std::string& s) const { return sections_.count(s) != 0; }
  bool has(const std::string& s, const std::string& key) const {
    auto it = sections_.find(s);
    return it != sections_.end() && it->second.count(key);
  }

  Entry* entry(const std::string& s, const std::string& key, bool required) {
    auto it = sections_.find(s);
    if (it != sections_.end()) {
      auto e = it->second.find(key);
      if (e != it->second.end()) {
        e->second.used = true;
        return &e->second;
      }
    }
    if (required) problem("missing key '" + key + "' in [" + s + "]");
    return nullptr;
  }

  std::optional<double> number(const std::string& s, const std::string& key, bool required) {
    Entry* e = entry(s, key, required);
    if (!e) return std::nullopt;
    auto v = to_number(e->value);
    if (!v) problem(e->line, "'" + key + "' must be a number, got '" + e->value + "'");
    return v;
  }

  std::optional<std::size_t> count(const std::string& s, const std::string& key, bool required) {
    Entry* e = entry(s, key, required);
    if (!e) return std::nullopt;
    std::size_t v = 0;
    const auto& t = e->value;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
      problem(e->line, "'" + key + "' must be a non-negative integer, got '" + t + "'");
      return std::nullopt;
    }
    return v;
  }

  std::optional<std::vector<double>> list(const std::string& s, const std::string& key,
                                          bool required) {
    Entry* e = entry(s, key, required);
    if (!e) return std::nullopt;
    std::string_view t = e->value;
    if (t.size() < 2 || t.front() != '[' || t.back() != ']') {
      problem(e->line, "'" + key + "' must be a bracketed list like [1, 2]");
      return std::nullopt;
    }
    t = trim(t.substr(1, t.size() - 2));
    std::vector<double> out;
    if (t.empty()) return out;
    std::size_t pos = 0;
    while (pos <= t.size()) {
      const std::size_t comma = std::min(t.find(',', pos), t.size());
      auto v = to_number(t.substr(pos, comma - pos));
      if (!v) {
        problem(e->line, "'" + key + "' has a malformed entry '" +
                             std::string(trim(t.substr(pos, comma - pos))) + "'");
        return std::nullopt;
      }
      out.push_back(*v);
      pos = comma + 1;
    }
    return out;
  }

  std::optional<Expression> expression(const std::string& s, const std::string& key,
                                       bool required) {
    Entry* e = entry(s, key, required);
    if (!e) return std::nullopt;
    const std::string& t = e->value;
    if (t.size() < 2 || t.front() != '"' || t.back() != '"') {
      problem(e->line, "'" + key + "' must be a double-quoted expression");
      return std::nullopt;
    }
    try {
      return parse(std::string_view(t).substr(1, t.size() - 2));
    } catch (const ParseError& err) {
      problem(e->line, "'" + key + "': " + err.what());
      return std::nullopt;
    }
  }

  std::optional<std::string> word(const std::string& s, const std::string& key, bool required) {
    Entry* e = entry(s, key, required);
    if (!e) return std::nullopt;
    return e->value;
  }

  void report_unused() {
    for (const auto& [name, entries] : sections_) {
      for (const auto& [key, e] : entries) {
        if (!e.used) problem(e.line, "unknown key '" + key + "' in [" + name + "]");
      }
    }
  }

  std::vector<std::string>& problems() { return problems_; }
  std::size_t line_of(const std::string& s, const std::string& key) const {
    auto it = sections_.find(s);
    if (it == sections_.end()) return 0;
    auto e = it->second.find(key);
    return e == it->second.end() ? 0 : e->second.line;
  }

private:
  std::string origin_;
  std::map<std::string, std::map<std::string, Entry>> sections_;
  std::vector<std::string> problems_;
};

std::string list_text(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_double(v[i]);
  }
  return out + "]";
}

}  // namespace

SpecError::SpecError(std::vector<std::string> problems)
    : Error(join_problems(problems)), problems_(std::move(problems)) {}

bool is_valid_method(std::string_view method) {
  return method == "banach" || method == "tarski-min" || method == "tarski-max" ||
         method == "tarski-both";
}

LoadedSpec parse_spec(std::string_view text, const std::string& origin) {
  Reader r(origin);
  r.read(text);
  LoadedSpec out;
  out.origin = origin;

  if (!r.has_section("equation")) r.problem("missing section [equation]");

  const std::string form = r.word("equation", "form", false).value_or("product");
  if (form != "product" && form != "sum") {
    r.problem(r.line_of("equation", "form"), "form must be 'product' or 'sum'");
  }
  const bool sum_form = form == "sum";

  const auto n = r.count("equation", "n", true);
  const auto lambda = r.list("equation", "lambda", true);
  const auto interval = r.list("equation", "interval", true);
  if (n && *n == 0) r.problem(r.line_of("equation", "n"), "n must be at least 1");
  if (n && lambda && lambda->size() != *n) {
    r.problem(r.line_of("equation", "lambda"), "lambda has " + std::to_string(lambda->size()) +
                                                   " entries but n = " + std::to_string(*n));
  }
  std::optional<Interval> domain;
  if (interval) {
    if (interval->size() != 2) {
      r.problem(r.line_of("equation", "interval"), "interval must be [lo, hi]");
    } else {
      try {
        domain = Interval((*interval)[0], (*interval)[1]);
      } catch (const Error& err) {
        r.problem(r.line_of("equation", "interval"), err.what());
      }
    }
  }

  const char* target_key = sum_form ? "F" : "G";
  const char* outer_key = sum_form ? "Upsilon." : "Xi.";
  const char* inner_key = sum_form ? "phi." : "psi.";
  const auto target = r.expression("equation", target_key, true);
  std::vector<Expression> outer, inner;
  bool maps_ok = true;
  for (std::size_t k = 1; n && k <= *n; ++k) {
    auto o = r.expression("equation", outer_key + std::to_string(k), true);
    auto i = r.expression("equation", inner_key + std::to_string(k), true);
    if (o && i) {
      outer.push_back(*o);
      inner.push_back(*i);
    } else {
      maps_ok = false;
    }
  }
  const auto delta = sum_form ? r.number("equation", "delta", false)
                              : r.number("equation", "delta", true);

  if (n && lambda && lambda->size() == *n && domain && target && maps_ok) {
    if (sum_form) {
      out.sum = SumEquationSpec{*domain, *lambda, *target, outer, inner};
    } else if (delta) {
      out.product = ProductEquationSpec{*domain, *lambda, *target, outer, inner, *delta};
    }
  }

  if (r.has_section("classes")) {
    ClassParams cp;
    const auto M = r.number("classes", "M", true);
    const auto cdelta = r.number("classes", "delta", !delta);
    const auto l = r.list("classes", "l", true);
    const auto L = r.list("classes", "L", true);
    if (n && l && l->size() != *n) r.problem(r.line_of("classes", "l"), "l needs n entries");
    if (n && L && L->size() != *n) r.problem(r.line_of("classes", "L"), "L needs n entries");
    if (M && l && L && (cdelta || delta)) {
      cp.M = *M;
      cp.delta = cdelta ? *cdelta : *delta;
      cp.l = *l;
      cp.L = *L;
      out.classes = cp;
    }
  }

  SolverConfig& s = out.solver;
  bool method_ok = true;
  if (auto m = r.word("solver", "method", false)) {
    if (!is_valid_method(*m)) {
      method_ok = false;
      r.problem(r.line_of("solver", "method"),
                "method must be banach, tarski-min, tarski-max or tarski-both; got '" + *m + "'");
    } else {
      s.method = *m;
    }
  } else if (!sum_form && !r.has_section("classes")) {
    s.method = "tarski-both";
  }
  if (auto v = r.count("solver", "grid", false)) {
    if (*v < 1) r.problem(r.line_of("solver", "grid"), "grid must be at least 1");
    s.grid = *v;
  }
  if (auto v = r.count("solver", "levels", false)) {
    if (*v < 1) r.problem(r.line_of("solver", "levels"), "levels must be at least 1");
    s.levels = *v;
  }
  if (auto m = r.word("solver", "mode", false)) {
    try {
      s.mode = parse_eval_mode(*m);
    } catch (const Error& err) {
      r.problem(r.line_of("solver", "mode"), err.what());
    }
  } else if (s.method == "banach") {
    s.mode = EvalMode::PiecewiseLinear;
  }
  if (auto v = r.number("solver", "tol", false)) {
    if (!(*v > 0.0)) r.problem(r.line_of("solver", "tol"), "tol must be positive");
    s.tol = *v;
  }
  if (auto v = r.count("solver", "max_iter", false)) {
    if (*v < 1) r.problem(r.line_of("solver", "max_iter"), "max_iter must be at least 1");
    s.max_iter = *v;
  }
  if (auto v = r.number("solver", "relaxation", false)) {
    if (!(*v > 0.0 && *v <= 1.0)) {
      r.problem(r.line_of("solver", "relaxation"), "relaxation must lie in (0, 1]");
    }
    s.relaxation = *v;
  }

  if (method_ok && s.method == "banach" && !sum_form && !r.has_section("classes")) {
    r.problem("method banach needs a [classes] section with M, l and L");
  }
  if (method_ok && sum_form && s.method != "banach") {
    r.problem("sum-form specs can only be solved with method banach");
  }

  r.report_unused();
  if (!r.problems().empty()) throw SpecError(std::move(r.problems()));
  return out;
}

LoadedSpec load_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError({path + ": cannot open file"});
  std::ostringstream text;
  text << in.rdbuf();
  return parse_spec(text.str(), path);
}

std::string write_spec(const LoadedSpec& spec) {
  std::ostringstream out;
  out << "[equation]\n";
  auto quoted = [](const Expression& e) { return "\"" + print(e) + "\""; };
  auto write_common = [&](const auto& eq, const char* target, const char* outer_key,
                          const char* inner_key) {
    out << "n = " << eq.order() << "\n";
    out << "lambda = " << list_text(eq.exponents) << "\n";
    out << "interval = [" << format_double(eq.domain.lo()) << ", "
        << format_double(eq.domain.hi()) << "]\n";
    out << target << " = " << quoted(eq.target) << "\n";
    for (std::size_t k = 0; k < eq.order(); ++k) {
      out << outer_key << k + 1 << " = " << quoted(eq.outer_maps[k]) << "\n";
    }
    for (std::size_t k = 0; k < eq.order(); ++k) {
      out << inner_key << k + 1 << " = " << quoted(eq.inner_maps[k]) << "\n";
    }
  };
  if (spec.sum) {
    out << "form = sum\n";
    write_common(*spec.sum, "F", "Upsilon.", "phi.");
  } else if (spec.product) {
    write_common(*spec.product, "G", "Xi.", "psi.");
    out << "delta = " << format_double(spec.product->floor) << "\n";
  }
  if (spec.classes) {
    out << "\n[classes]\n";
    out << "delta = " << format_double(spec.classes->delta) << "\n";
    out << "M = " << format_double(spec.classes->M) << "\n";
    out << "l = " << list_text(spec.classes->l) << "\n";
    out << "L = " << list_text(spec.classes->L) << "\n";
  }
  const SolverConfig& s = spec.solver;
  out << "\n[solver]\n";
  out << "method = " << s.method << "\n";
  out << "grid = " << s.grid << "\n";
  out << "levels = " << s.levels << "\n";
  out << "mode = " << to_string(s.mode) << "\n";
  out << "tol = " << format_double(s.tol) << "\n";
  out << "max_iter = " << s.max_iter << "\n";
  out << "relaxation = " << format_double(s.relaxation) << "\n";
  return out.str();
}

}  // namespace ifes::app
