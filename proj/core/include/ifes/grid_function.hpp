#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ifes/expr.hpp"
#include "ifes/interval.hpp"

namespace ifes {

/// How a grid function is read between nodes.
enum class EvalMode {
  PiecewiseLinear,
  /// v_i on [x_i, x_{i+1}), v_m at hi: right-continuous, hence USC when nondecreasing.
  StepUSC,
  /// v_i on (x_{i-1}, x_i], v_0 at lo: left-continuous, hence LSC when nondecreasing.
  StepLSC,
};

enum class Order { LessEq, GreaterEq, Equal, Incomparable };
enum class Rounding { Down, Up, Nearest };

const char* to_string(EvalMode mode);
const char* to_string(Order order);
/// Accepts "pl", "usc", "lsc" (and the enumerator names).
EvalMode parse_eval_mode(std::string_view text);

using NodeVector = std::shared_ptr<const std::vector<double>>;

/// Strictly increasing nodes lo = x_0 < ... < x_{count-1} = hi, uniformly spaced.
NodeVector uniform_nodes(const Interval& domain, std::size_t count);

/// A self-map of a compact interval sampled on a node grid.
///
/// Values are validated on construction: they must lie in the domain, and above the floor
/// when one is set. Round-off excursions of at most Interval::slack() are clamped; anything
/// larger throws RangeError. Nodes are shared between functions built on the same grid.
class GridFunction {
public:
  GridFunction(Interval domain, NodeVector nodes, std::vector<double> values, EvalMode mode,
               std::optional<double> floor = std::nullopt);

  static GridFunction identity(const Interval& domain, NodeVector nodes, EvalMode mode);
  static GridFunction constant(const Interval& domain, NodeVector nodes, double value,
                               EvalMode mode, std::optional<double> floor = std::nullopt);
  /// Samples `e` at the nodes.
  static GridFunction tabulate(const Expression& e, const Interval& domain, NodeVector nodes,
                               EvalMode mode, std::optional<double> floor = std::nullopt);

  double operator()(double x) const;

  const Interval& domain() const noexcept { return domain_; }
  std::span<const double> nodes() const noexcept { return *nodes_; }
  const NodeVector& node_vector() const noexcept { return nodes_; }
  std::span<const double> values() const noexcept { return values_; }
  double value(std::size_t i) const { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }
  EvalMode mode() const noexcept { return mode_; }
  std::optional<double> floor() const noexcept { return floor_; }

  /// Scans the node values: v_0 <= v_1 <= ... <= v_m.
  bool is_monotone() const noexcept;

  bool same_nodes(const GridFunction& other) const noexcept;

  GridFunction with_values(std::vector<double> values) const;
  GridFunction with_mode(EvalMode mode) const;
  GridFunction with_floor(std::optional<double> floor) const;

  /// Node-wise equality of values (exact).
  friend bool operator==(const GridFunction& a, const GridFunction& b);

private:
  Interval domain_;
  NodeVector nodes_;
  std::vector<double> values_;
  EvalMode mode_;
  std::optional<double> floor_;
};

/// x_i -> g(h(x_i)) on the nodes of h, read in the mode of h.
GridFunction compose(const GridFunction& g, const GridFunction& h);

/// g^0 is the identity on g's grid; g^k = compose(g, g^{k-1}).
GridFunction iterate(const GridFunction& g, std::size_t k);

/// Maximum node-wise |g1 - g2|. Throws RangeError unless the grids match.
double sup_distance(const GridFunction& g1, const GridFunction& g2);

/// Node-wise comparison in the pointwise order.
Order pointwise_order(const GridFunction& g1, const GridFunction& g2);

/// Finite set of admissible values w_0 < w_1 < ... < w_p.
class ValueGrid {
public:
  explicit ValueGrid(std::vector<double> levels);

  /// p + 1 equally spaced levels from lo to hi, both endpoints exact.
  static ValueGrid uniform(double lo, double hi, std::size_t p);

  std::span<const double> levels() const noexcept { return levels_; }
  std::size_t size() const noexcept { return levels_.size(); }
  double lowest() const noexcept { return levels_.front(); }
  double highest() const noexcept { return levels_.back(); }

  double snap(double v, Rounding rounding) const;
  /// Index of the level equal to v, if any.
  std::optional<std::size_t> index_of(double v) const;

private:
  std::vector<double> levels_;
};

/// Snaps every node value to the value grid. Down never increases a value and Up never
/// decreases one; both preserve monotonicity. Nearest breaks ties toward the lower level.
GridFunction quantize(const GridFunction& g, const ValueGrid& grid, Rounding rounding);

/// Uniform points used for residual checks: factor * (node count - 1) + 1 of them.
std::vector<double> verification_points(const Interval& domain, std::size_t node_count,
                                        std::size_t factor = 4);

struct CsvTable {
  std::vector<double> x;
  std::vector<double> g;
};

/// Header `x,g`, one row per node, 17 significant digits.
void write_csv(std::ostream& out, const GridFunction& g);
CsvTable read_csv(std::istream& in);

}  // namespace ifes
