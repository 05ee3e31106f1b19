#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ifes/interval.hpp"

namespace ifes {

enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class Function { Sqrt, Exp, Log, Sin, Cos, Abs };
enum class Comparison { Less, LessEq, Greater, GreaterEq, Equal, NotEqual };

namespace detail {
struct ExprNode;
}

class Expression;
Expression parse(std::string_view source);

/// Immutable expression tree in one real variable `x`.
///
/// Grammar (see docs/expression_grammar.md):
///
///     expr    := sum
///     sum     := product (("+" | "-") product)*
///     product := unary (("*" | "/") unary)*
///     unary   := "-" unary | power
///     power   := primary ("^" unary)?
///     primary := number | "x" | func "(" expr ")" | "if" "(" cond "," expr "," expr ")"
///              | "(" expr ")"
///     cond    := expr ("<" | "<=" | ">" | ">=" | "==" | "!=") expr
///
/// `^` is right-associative and binds tighter than unary minus, so `-x^2` is `-(x^2)`.
/// Copies share the tree; evaluation is pure and thread-safe.
class Expression {
public:
  /// The identity expression `x`.
  Expression();

  static Expression variable();
  /// A literal. Negative values become a negation of a non-negative literal so that
  /// printing and re-parsing reproduces the same tree.
  static Expression constant(double value);
  static Expression negate(const Expression& operand);
  static Expression binary(BinaryOp op, const Expression& lhs, const Expression& rhs);
  static Expression call(Function fn, const Expression& arg);
  static Expression conditional(Comparison cmp, const Expression& lhs, const Expression& rhs,
                                const Expression& if_true, const Expression& if_false);

  /// Evaluates at `x`. Throws DomainError instead of producing NaN or infinity.
  double operator()(double x) const;

  /// Replaces every occurrence of `x` by `replacement`. `log(exp(u))` collapses to `u` and
  /// `-(-u)` to `u` while rebuilding; no other simplification is attempted.
  Expression substitute(const Expression& replacement) const;

  bool is_variable() const noexcept;
  /// True when this is a literal; `value` receives it.
  bool is_constant(double* value = nullptr) const noexcept;
  std::size_t node_count() const noexcept;

  /// Structural equality; literals compare bitwise.
  friend bool operator==(const Expression& a, const Expression& b) noexcept;

  const detail::ExprNode& node() const noexcept { return *node_; }

private:
  friend Expression parse(std::string_view source);

  explicit Expression(std::shared_ptr<const detail::ExprNode> node) : node_(std::move(node)) {}

  std::shared_ptr<const detail::ExprNode> node_;
};

Expression operator+(const Expression& a, const Expression& b);
Expression operator-(const Expression& a, const Expression& b);
Expression operator*(const Expression& a, const Expression& b);
Expression operator/(const Expression& a, const Expression& b);
Expression operator-(const Expression& a);
Expression pow(const Expression& base, const Expression& exponent);
Expression pow(const Expression& base, double exponent);
Expression log(const Expression& a);
Expression exp(const Expression& a);

Expression parse(std::string_view source);
double evaluate(const Expression& e, double x);

/// Canonical source text; `parse(print(e)) == e` for every tree.
std::string print(const Expression& e);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

struct ProbeReport {
  struct Failure {
    double x;
    std::string message;
  };

  double lo = 0.0;
  double hi = 0.0;
  std::size_t samples = 0;
  double min = 0.0;
  double max = 0.0;
  double argmin = 0.0;
  double argmax = 0.0;
  bool monotone_nondecreasing = true;
  bool strictly_increasing = true;
  std::vector<Failure> domain_errors;

  bool ok() const noexcept { return domain_errors.empty(); }
};

/// Samples `e` at `samples` uniform points of `interval` and summarizes what it saw.
/// Domain errors are collected, not thrown; monotonicity is judged over the valid samples.
ProbeReport probe(const Expression& e, const Interval& interval, std::size_t samples);

}  // namespace ifes
