#include "ifes/grid_function.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace ifes {

const char* to_string(EvalMode mode) {
  switch (mode) {
    case EvalMode::PiecewiseLinear: return "pl";
    case EvalMode::StepUSC: return "usc";
    case EvalMode::StepLSC: return "lsc";
  }
  return "?";
}

const char* to_string(Order order) {
  switch (order) {
    case Order::LessEq: return "less_eq";
    case Order::GreaterEq: return "greater_eq";
    case Order::Equal: return "equal";
    case Order::Incomparable: return "incomparable";
  }
  return "?";
}

EvalMode parse_eval_mode(std::string_view text) {
  if (text == "pl" || text == "PiecewiseLinear") return EvalMode::PiecewiseLinear;
  if (text == "usc" || text == "StepUSC") return EvalMode::StepUSC;
  if (text == "lsc" || text == "StepLSC") return EvalMode::StepLSC;
  throw Error("unknown evaluation mode '" + std::string(text) + "' (expected pl, usc or lsc)");
}

NodeVector uniform_nodes(const Interval& domain, std::size_t count) {
  if (count < 2) throw RangeError("a grid needs at least 2 nodes");
  std::vector<double> x(count);
  for (std::size_t i = 0; i < count; ++i) x[i] = domain.uniform_point(i, count);
  return std::make_shared<const std::vector<double>>(std::move(x));
}

GridFunction::GridFunction(Interval domain, NodeVector nodes, std::vector<double> values,
                           EvalMode mode, std::optional<double> floor)
    : domain_(domain), nodes_(std::move(nodes)), values_(std::move(values)), mode_(mode),
      floor_(floor) {
  if (!nodes_ || nodes_->size() < 2) throw RangeError("a grid function needs at least 2 nodes");
  const auto& x = *nodes_;
  if (x.size() != values_.size()) {
    throw RangeError("node count " + std::to_string(x.size()) + " does not match value count " +
                     std::to_string(values_.size()));
  }
  if (std::abs(x.front() - domain_.lo()) > domain_.slack() ||
      std::abs(x.back() - domain_.hi()) > domain_.slack()) {
    throw RangeError("grid endpoints do not match the domain");
  }
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) throw RangeError("grid nodes must be strictly increasing");
  }
  const double slack = domain_.slack();
  for (std::size_t i = 0; i < values_.size(); ++i) {
    double& v = values_[i];
    if (!std::isfinite(v) || !domain_.contains_with_slack(v)) {
      throw RangeError("value " + std::to_string(v) + " at node " + std::to_string(x[i]) +
                       " leaves [" + std::to_string(domain_.lo()) + ", " +
                       std::to_string(domain_.hi()) + "]");
    }
    v = domain_.clamp(v);
    if (floor_) {
      if (v < *floor_ - slack) {
        throw RangeError("value " + std::to_string(v) + " at node " + std::to_string(x[i]) +
                         " is below the floor " + std::to_string(*floor_));
      }
      v = std::max(v, *floor_);
    }
  }
}

GridFunction GridFunction::identity(const Interval& domain, NodeVector nodes, EvalMode mode) {
  std::vector<double> v(nodes->begin(), nodes->end());
  return GridFunction(domain, std::move(nodes), std::move(v), mode);
}

GridFunction GridFunction::constant(const Interval& domain, NodeVector nodes, double value,
                                    EvalMode mode, std::optional<double> floor) {
  std::vector<double> v(nodes->size(), value);
  return GridFunction(domain, std::move(nodes), std::move(v), mode, floor);
}

GridFunction GridFunction::tabulate(const Expression& e, const Interval& domain, NodeVector nodes,
                                    EvalMode mode, std::optional<double> floor) {
  std::vector<double> v(nodes->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = e((*nodes)[i]);
  return GridFunction(domain, std::move(nodes), std::move(v), mode, floor);
}

double GridFunction::operator()(double x) const {
  if (!domain_.contains_with_slack(x)) {
    throw RangeError("evaluation point " + std::to_string(x) + " outside [" +
                     std::to_string(domain_.lo()) + ", " + std::to_string(domain_.hi()) + "]");
  }
  x = domain_.clamp(x);
  const auto& nodes = *nodes_;
  const std::size_t m = nodes.size() - 1;
  switch (mode_) {
    case EvalMode::StepUSC: {
      const auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
      const std::size_t i = static_cast<std::size_t>(it - nodes.begin());
      return values_[i == 0 ? 0 : i - 1];
    }
    case EvalMode::StepLSC: {
      const auto it = std::lower_bound(nodes.begin(), nodes.end(), x);
      const std::size_t i = static_cast<std::size_t>(it - nodes.begin());
      return values_[std::min(i, m)];
    }
    case EvalMode::PiecewiseLinear: {
      const auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
      std::size_t i = static_cast<std::size_t>(it - nodes.begin());
      i = i == 0 ? 0 : i - 1;
      if (i >= m) return values_[m];
      const double t = (x - nodes[i]) / (nodes[i + 1] - nodes[i]);
      if (t == 0.0) return values_[i];
      return values_[i] + t * (values_[i + 1] - values_[i]);
    }
  }
  return 0.0;
}

bool GridFunction::is_monotone() const noexcept {
  return std::is_sorted(values_.begin(), values_.end());
}

bool GridFunction::same_nodes(const GridFunction& other) const noexcept {
  return nodes_ == other.nodes_ || *nodes_ == *other.nodes_;
}

GridFunction GridFunction::with_values(std::vector<double> values) const {
  return GridFunction(domain_, nodes_, std::move(values), mode_, floor_);
}

GridFunction GridFunction::with_mode(EvalMode mode) const {
  return GridFunction(domain_, nodes_, values_, mode, floor_);
}

GridFunction GridFunction::with_floor(std::optional<double> floor) const {
  return GridFunction(domain_, nodes_, values_, mode_, floor);
}

bool operator==(const GridFunction& a, const GridFunction& b) {
  return a.same_nodes(b) && a.values_ == b.values_;
}

GridFunction compose(const GridFunction& g, const GridFunction& h) {
  std::vector<double> v(h.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double y = h.value(i);
    if (!g.domain().contains_with_slack(y)) {
      throw RangeError("compose: inner value " + std::to_string(y) +
                       " is outside the domain of the outer map");
    }
    v[i] = g(y);
  }
  return GridFunction(h.domain(), h.node_vector(), std::move(v), h.mode(), g.floor());
}

GridFunction iterate(const GridFunction& g, std::size_t k) {
  if (k == 0) return GridFunction::identity(g.domain(), g.node_vector(), g.mode());
  GridFunction result = g;
  for (std::size_t j = 1; j < k; ++j) result = compose(g, result);
  return result;
}

namespace {

void require_same_grid(const GridFunction& a, const GridFunction& b, const char* op) {
  if (!a.same_nodes(b)) throw RangeError(std::string(op) + ": node grids differ");
}

}  // namespace

double sup_distance(const GridFunction& g1, const GridFunction& g2) {
  require_same_grid(g1, g2, "sup_distance");
  double d = 0.0;
  for (std::size_t i = 0; i < g1.size(); ++i) d = std::max(d, std::abs(g1.value(i) - g2.value(i)));
  return d;
}

Order pointwise_order(const GridFunction& g1, const GridFunction& g2) {
  require_same_grid(g1, g2, "pointwise_order");
  bool some_less = false, some_greater = false;
  for (std::size_t i = 0; i < g1.size(); ++i) {
    if (g1.value(i) < g2.value(i)) some_less = true;
    if (g1.value(i) > g2.value(i)) some_greater = true;
  }
  if (some_less && some_greater) return Order::Incomparable;
  if (some_less) return Order::LessEq;
  if (some_greater) return Order::GreaterEq;
  return Order::Equal;
}

ValueGrid::ValueGrid(std::vector<double> levels) : levels_(std::move(levels)) {
  if (levels_.size() < 2) throw RangeError("a value grid needs at least 2 levels");
  for (std::size_t i = 1; i < levels_.size(); ++i) {
    if (!(levels_[i] > levels_[i - 1])) throw RangeError("value levels must be strictly increasing");
  }
}

ValueGrid ValueGrid::uniform(double lo, double hi, std::size_t p) {
  if (p < 1) throw RangeError("a value grid needs p >= 1");
  const Interval span(lo, hi);
  std::vector<double> levels(p + 1);
  for (std::size_t i = 0; i <= p; ++i) levels[i] = span.uniform_point(i, p + 1);
  return ValueGrid(std::move(levels));
}

double ValueGrid::snap(double v, Rounding rounding) const {
  const double slack = 1e-12 * std::max({1.0, std::abs(lowest()), std::abs(highest())});
  if (v < lowest()) {
    if (v < lowest() - slack && rounding == Rounding::Down) {
      throw RangeError("value " + std::to_string(v) + " is below the lowest level " +
                       std::to_string(lowest()));
    }
    return lowest();
  }
  if (v > highest()) {
    if (v > highest() + slack && rounding == Rounding::Up) {
      throw RangeError("value " + std::to_string(v) + " is above the highest level " +
                       std::to_string(highest()));
    }
    return highest();
  }
  const auto it = std::upper_bound(levels_.begin(), levels_.end(), v);
  const std::size_t i = static_cast<std::size_t>(it - levels_.begin()) - 1;
  const double below = levels_[i];
  if (below == v || i + 1 == levels_.size()) return below;
  const double above = levels_[i + 1];
  switch (rounding) {
    case Rounding::Down: return below;
    case Rounding::Up: return above;
    case Rounding::Nearest: return (v - below <= above - v) ? below : above;
  }
  return below;
}

std::optional<std::size_t> ValueGrid::index_of(double v) const {
  const auto it = std::lower_bound(levels_.begin(), levels_.end(), v);
  if (it == levels_.end() || *it != v) return std::nullopt;
  return static_cast<std::size_t>(it - levels_.begin());
}

GridFunction quantize(const GridFunction& g, const ValueGrid& grid, Rounding rounding) {
  std::vector<double> v(g.values().begin(), g.values().end());
  for (double& value : v) value = grid.snap(value, rounding);
  return g.with_values(std::move(v));
}

std::vector<double> verification_points(const Interval& domain, std::size_t node_count,
                                        std::size_t factor) {
  const std::size_t count = factor * (std::max<std::size_t>(node_count, 2) - 1) + 1;
  std::vector<double> pts(count);
  for (std::size_t i = 0; i < count; ++i) pts[i] = domain.uniform_point(i, count);
  return pts;
}

void write_csv(std::ostream& out, const GridFunction& g) {
  out << "x,g\n";
  char buf[80];
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", g.nodes()[i], g.value(i));
    out << buf;
  }
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  auto parse_field = [&](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
      s.remove_suffix(1);
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
      throw Error("csv line " + std::to_string(line_no) + ": malformed number '" +
                  std::string(s) + "'");
    }
    return v;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "x,g") throw Error("csv: expected header 'x,g', got '" + line + "'");
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw Error("csv line " + std::to_string(line_no) + ": expected two fields");
    }
    t.x.push_back(parse_field(std::string_view(line).substr(0, comma)));
    t.g.push_back(parse_field(std::string_view(line).substr(comma + 1)));
  }
  if (!header_seen) throw Error("csv: empty input");
  return t;
}

}  // namespace ifes
