#include "ifes/expr.hpp"

#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <system_error>

namespace ifes {

namespace detail {

struct ExprNode {
  enum class Kind { Variable, Number, Negate, Binary, Call, If };

  Kind kind = Kind::Variable;
  double value = 0.0;
  BinaryOp op = BinaryOp::Add;
  Function fn = Function::Sqrt;
  Comparison cmp = Comparison::Less;
  // Binary: a, b. Negate/Call: a. If: a cmp b ? c : d.
  std::shared_ptr<const ExprNode> a, b, c, d;
};

}  // namespace detail

using detail::ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;
using Kind = ExprNode::Kind;

namespace {

const char* function_name(Function fn) {
  switch (fn) {
    case Function::Sqrt: return "sqrt";
    case Function::Exp: return "exp";
    case Function::Log: return "log";
    case Function::Sin: return "sin";
    case Function::Cos: return "cos";
    case Function::Abs: return "abs";
  }
  return "?";
}

const char* comparison_text(Comparison cmp) {
  switch (cmp) {
    case Comparison::Less: return "<";
    case Comparison::LessEq: return "<=";
    case Comparison::Greater: return ">";
    case Comparison::GreaterEq: return ">=";
    case Comparison::Equal: return "==";
    case Comparison::NotEqual: return "!=";
  }
  return "?";
}

NodePtr make_variable() {
  static const NodePtr var = std::make_shared<const ExprNode>(ExprNode{});
  return var;
}

NodePtr make_number(double v) {
  ExprNode n;
  n.kind = Kind::Number;
  n.value = v;
  return std::make_shared<const ExprNode>(std::move(n));
}

NodePtr make_negate(NodePtr operand) {
  if (operand->kind == Kind::Negate) return operand->a;
  ExprNode n;
  n.kind = Kind::Negate;
  n.a = std::move(operand);
  return std::make_shared<const ExprNode>(std::move(n));
}

NodePtr make_binary(BinaryOp op, NodePtr lhs, NodePtr rhs) {
  ExprNode n;
  n.kind = Kind::Binary;
  n.op = op;
  n.a = std::move(lhs);
  n.b = std::move(rhs);
  return std::make_shared<const ExprNode>(std::move(n));
}

NodePtr make_call(Function fn, NodePtr arg) {
  if (fn == Function::Log && arg->kind == Kind::Call && arg->fn == Function::Exp) return arg->a;
  ExprNode n;
  n.kind = Kind::Call;
  n.fn = fn;
  n.a = std::move(arg);
  return std::make_shared<const ExprNode>(std::move(n));
}

NodePtr make_if(Comparison cmp, NodePtr l, NodePtr r, NodePtr t, NodePtr f) {
  ExprNode n;
  n.kind = Kind::If;
  n.cmp = cmp;
  n.a = std::move(l);
  n.b = std::move(r);
  n.c = std::move(t);
  n.d = std::move(f);
  return std::make_shared<const ExprNode>(std::move(n));
}

// ---------------------------------------------------------------------------
// Evaluation

[[noreturn]] void domain_fail(double x, const std::string& what) { throw DomainError(x, what); }

double checked(double v, double x, const char* what) {
  if (!std::isfinite(v)) domain_fail(x, std::string("non-finite result in ") + what);
  return v;
}

double eval_node(const ExprNode& n, double x) {
  switch (n.kind) {
    case Kind::Variable: return x;
    case Kind::Number: return n.value;
    case Kind::Negate: return -eval_node(*n.a, x);
    case Kind::Binary: {
      const double l = eval_node(*n.a, x);
      const double r = eval_node(*n.b, x);
      switch (n.op) {
        case BinaryOp::Add: return checked(l + r, x, "addition");
        case BinaryOp::Sub: return checked(l - r, x, "subtraction");
        case BinaryOp::Mul: return checked(l * r, x, "multiplication");
        case BinaryOp::Div:
          if (r == 0.0) domain_fail(x, "division by zero");
          return checked(l / r, x, "division");
        case BinaryOp::Pow:
          if (l < 0.0 && std::trunc(r) != r) domain_fail(x, "non-integer power of negative base");
          if (l == 0.0 && r < 0.0) domain_fail(x, "negative power of zero");
          return checked(std::pow(l, r), x, "power");
      }
      break;
    }
    case Kind::Call: {
      const double v = eval_node(*n.a, x);
      switch (n.fn) {
        case Function::Sqrt:
          if (v < 0.0) domain_fail(x, "sqrt of negative number");
          return std::sqrt(v);
        case Function::Exp: return checked(std::exp(v), x, "exp");
        case Function::Log:
          if (v <= 0.0) domain_fail(x, "log of non-positive number");
          return std::log(v);
        case Function::Sin: return std::sin(v);
        case Function::Cos: return std::cos(v);
        case Function::Abs: return std::abs(v);
      }
      break;
    }
    case Kind::If: {
      const double l = eval_node(*n.a, x);
      const double r = eval_node(*n.b, x);
      bool take = false;
      switch (n.cmp) {
        case Comparison::Less: take = l < r; break;
        case Comparison::LessEq: take = l <= r; break;
        case Comparison::Greater: take = l > r; break;
        case Comparison::GreaterEq: take = l >= r; break;
        case Comparison::Equal: take = l == r; break;
        case Comparison::NotEqual: take = l != r; break;
      }
      return eval_node(take ? *n.c : *n.d, x);
    }
  }
  return 0.0;  // unreachable
}

NodePtr substitute_node(const NodePtr& n, const NodePtr& replacement) {
  switch (n->kind) {
    case Kind::Variable: return replacement;
    case Kind::Number: return n;
    case Kind::Negate: return make_negate(substitute_node(n->a, replacement));
    case Kind::Binary:
      return make_binary(n->op, substitute_node(n->a, replacement),
                         substitute_node(n->b, replacement));
    case Kind::Call: return make_call(n->fn, substitute_node(n->a, replacement));
    case Kind::If:
      return make_if(n->cmp, substitute_node(n->a, replacement),
                     substitute_node(n->b, replacement), substitute_node(n->c, replacement),
                     substitute_node(n->d, replacement));
  }
  return n;
}

bool equal_nodes(const ExprNode& a, const ExprNode& b) {
  if (&a == &b) return true;
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Kind::Variable: return true;
    case Kind::Number:
      return std::bit_cast<std::uint64_t>(a.value) == std::bit_cast<std::uint64_t>(b.value);
    case Kind::Negate: return equal_nodes(*a.a, *b.a);
    case Kind::Binary: return a.op == b.op && equal_nodes(*a.a, *b.a) && equal_nodes(*a.b, *b.b);
    case Kind::Call: return a.fn == b.fn && equal_nodes(*a.a, *b.a);
    case Kind::If:
      return a.cmp == b.cmp && equal_nodes(*a.a, *b.a) && equal_nodes(*a.b, *b.b) &&
             equal_nodes(*a.c, *b.c) && equal_nodes(*a.d, *b.d);
  }
  return false;
}

std::size_t count_nodes(const ExprNode& n) {
  std::size_t total = 1;
  for (const auto* child : {n.a.get(), n.b.get(), n.c.get(), n.d.get()}) {
    if (child) total += count_nodes(*child);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Printing. Precedence levels: 1 sum, 2 product, 3 unary, 4 power, 5 primary.

int precedence(const ExprNode& n) {
  switch (n.kind) {
    case Kind::Negate: return 3;
    case Kind::Binary:
      switch (n.op) {
        case BinaryOp::Add:
        case BinaryOp::Sub: return 1;
        case BinaryOp::Mul:
        case BinaryOp::Div: return 2;
        case BinaryOp::Pow: return 4;
      }
      return 1;
    default: return 5;
  }
}

void print_node(const ExprNode& n, int min_prec, std::string& out);

void print_child(const ExprNode& n, int min_prec, std::string& out) {
  if (precedence(n) < min_prec) {
    out += '(';
    print_node(n, 0, out);
    out += ')';
  } else {
    print_node(n, min_prec, out);
  }
}

void print_node(const ExprNode& n, int /*min_prec*/, std::string& out) {
  switch (n.kind) {
    case Kind::Variable: out += 'x'; return;
    case Kind::Number:
      if (std::signbit(n.value)) {
        // Only reachable for trees not built through Expression::constant.
        out += "(-" + format_double(-n.value) + ")";
      } else {
        out += format_double(n.value);
      }
      return;
    case Kind::Negate:
      out += '-';
      print_child(*n.a, 3, out);
      return;
    case Kind::Binary: {
      const char* sym = "+";
      int left = 1, right = 2;
      switch (n.op) {
        case BinaryOp::Add: sym = " + "; break;
        case BinaryOp::Sub: sym = " - "; break;
        case BinaryOp::Mul: sym = "*"; left = 2; right = 3; break;
        case BinaryOp::Div: sym = "/"; left = 2; right = 3; break;
        case BinaryOp::Pow: sym = "^"; left = 5; right = 3; break;
      }
      print_child(*n.a, left, out);
      out += sym;
      print_child(*n.b, right, out);
      return;
    }
    case Kind::Call:
      out += function_name(n.fn);
      out += '(';
      print_node(*n.a, 0, out);
      out += ')';
      return;
    case Kind::If:
      out += "if(";
      print_node(*n.a, 0, out);
      out += ' ';
      out += comparison_text(n.cmp);
      out += ' ';
      print_node(*n.b, 0, out);
      out += ", ";
      print_node(*n.c, 0, out);
      out += ", ";
      print_node(*n.d, 0, out);
      out += ')';
      return;
  }
}

// ---------------------------------------------------------------------------
// Recursive-descent parser.

class Parser {
public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse_all() {
    NodePtr e = parse_sum();
    skip_ws();
    if (pos_ != src_.size()) {
      fail("unexpected input", {"operator", "end of input"});
    }
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& message, std::vector<std::string> expected = {}) {
    throw ParseError(pos_, message, std::move(expected));
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < src_.size() && src_[pos_] == c;
  }

  bool accept(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      fail(pos_ < src_.size() ? "unexpected character" : "unexpected end of input",
           {std::string("'") + c + "'"});
    }
  }

  NodePtr parse_sum() {
    NodePtr lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(BinaryOp::Add, lhs, parse_product());
      } else if (accept('-')) {
        lhs = make_binary(BinaryOp::Sub, lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_product() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(BinaryOp::Mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = make_binary(BinaryOp::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) {
      // Plain node, not make_negate: the parser must not rewrite what it reads.
      ExprNode n;
      n.kind = Kind::Negate;
      n.a = parse_unary();
      return std::make_shared<const ExprNode>(std::move(n));
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (accept('^')) return make_binary(BinaryOp::Pow, base, parse_unary());
    return base;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input", {"number", "'x'", "function", "'('"});
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_sum();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail("unexpected character", {"number", "'x'", "function", "'('"});
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) {
      pos_ = start;
      fail("malformed number", {"digit"});
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      const std::size_t save = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) {
        pos_ = save + 1;
        fail("malformed exponent", {"digit"});
      }
    }
    double value = 0.0;
    const auto* first = src_.data() + start;
    const auto* last = src_.data() + pos_;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
      pos_ = start;
      fail("numeric literal out of range");
    }
    return make_number(value);
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name == "x") return make_variable();

    static constexpr std::pair<std::string_view, Function> kFunctions[] = {
        {"sqrt", Function::Sqrt}, {"exp", Function::Exp}, {"log", Function::Log},
        {"sin", Function::Sin},   {"cos", Function::Cos}, {"abs", Function::Abs}};

    if (name == "if") return parse_if(start);
    for (const auto& [fname, fn] : kFunctions) {
      if (name == fname) {
        std::vector<NodePtr> args = parse_arguments(start, name);
        if (args.size() != 1) {
          pos_ = start;
          fail("function '" + std::string(name) + "' takes 1 argument, got " +
               std::to_string(args.size()));
        }
        return make_call_plain(fn, args.front());
      }
    }
    pos_ = start;
    fail("unknown identifier '" + std::string(name) + "'",
         {"'x'", "sqrt", "exp", "log", "sin", "cos", "abs", "if"});
  }

  // The parser builds calls verbatim; log(exp(u)) stays as written.
  static NodePtr make_call_plain(Function fn, NodePtr arg) {
    ExprNode n;
    n.kind = Kind::Call;
    n.fn = fn;
    n.a = std::move(arg);
    return std::make_shared<const ExprNode>(std::move(n));
  }

  std::vector<NodePtr> parse_arguments(std::size_t name_start, std::string_view name) {
    if (!peek('(')) {
      fail("expected '(' after '" + std::string(name) + "'", {"'('"});
    }
    ++pos_;
    std::vector<NodePtr> args;
    if (accept(')')) return args;
    args.push_back(parse_sum());
    while (accept(',')) args.push_back(parse_sum());
    skip_ws();
    if (!accept(')')) fail("unterminated argument list", {"','", "')'"});
    (void)name_start;
    return args;
  }

  NodePtr parse_if(std::size_t start) {
    expect('(');
    NodePtr lhs = parse_sum();
    skip_ws();
    Comparison cmp;
    if (src_.substr(pos_, 2) == "<=") {
      cmp = Comparison::LessEq;
      pos_ += 2;
    } else if (src_.substr(pos_, 2) == ">=") {
      cmp = Comparison::GreaterEq;
      pos_ += 2;
    } else if (src_.substr(pos_, 2) == "==") {
      cmp = Comparison::Equal;
      pos_ += 2;
    } else if (src_.substr(pos_, 2) == "!=") {
      cmp = Comparison::NotEqual;
      pos_ += 2;
    } else if (src_.substr(pos_, 1) == "<") {
      cmp = Comparison::Less;
      pos_ += 1;
    } else if (src_.substr(pos_, 1) == ">") {
      cmp = Comparison::Greater;
      pos_ += 1;
    } else {
      fail("'if' needs a comparison as its first argument", {"<", "<=", ">", ">=", "==", "!="});
    }
    NodePtr rhs = parse_sum();
    expect(',');
    NodePtr t = parse_sum();
    expect(',');
    NodePtr f = parse_sum();
    if (peek(',')) {
      pos_ = start;
      fail("function 'if' takes 3 arguments");
    }
    expect(')');
    return make_if(cmp, lhs, rhs, t, f);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

// ---------------------------------------------------------------------------

Expression::Expression() : node_(make_variable()) {}

Expression Expression::variable() { return Expression(make_variable()); }

Expression Expression::constant(double value) {
  if (!std::isfinite(value)) throw Error("expression literal must be finite");
  if (std::signbit(value)) return Expression(make_negate(make_number(-value)));
  return Expression(make_number(value));
}

Expression Expression::negate(const Expression& operand) {
  return Expression(make_negate(operand.node_));
}

Expression Expression::binary(BinaryOp op, const Expression& lhs, const Expression& rhs) {
  return Expression(make_binary(op, lhs.node_, rhs.node_));
}

Expression Expression::call(Function fn, const Expression& arg) {
  return Expression(make_call(fn, arg.node_));
}

Expression Expression::conditional(Comparison cmp, const Expression& lhs, const Expression& rhs,
                                   const Expression& if_true, const Expression& if_false) {
  return Expression(make_if(cmp, lhs.node_, rhs.node_, if_true.node_, if_false.node_));
}

double Expression::operator()(double x) const { return eval_node(*node_, x); }

Expression Expression::substitute(const Expression& replacement) const {
  return Expression(substitute_node(node_, replacement.node_));
}

bool Expression::is_variable() const noexcept { return node_->kind == Kind::Variable; }

bool Expression::is_constant(double* value) const noexcept {
  if (node_->kind != Kind::Number) return false;
  if (value) *value = node_->value;
  return true;
}

std::size_t Expression::node_count() const noexcept { return count_nodes(*node_); }

bool operator==(const Expression& a, const Expression& b) noexcept {
  return equal_nodes(*a.node_, *b.node_);
}

Expression operator+(const Expression& a, const Expression& b) {
  return Expression::binary(BinaryOp::Add, a, b);
}
Expression operator-(const Expression& a, const Expression& b) {
  return Expression::binary(BinaryOp::Sub, a, b);
}
Expression operator*(const Expression& a, const Expression& b) {
  return Expression::binary(BinaryOp::Mul, a, b);
}
Expression operator/(const Expression& a, const Expression& b) {
  return Expression::binary(BinaryOp::Div, a, b);
}
Expression operator-(const Expression& a) { return Expression::negate(a); }
Expression pow(const Expression& base, const Expression& exponent) {
  return Expression::binary(BinaryOp::Pow, base, exponent);
}
Expression pow(const Expression& base, double exponent) {
  return pow(base, Expression::constant(exponent));
}
Expression log(const Expression& a) { return Expression::call(Function::Log, a); }
Expression exp(const Expression& a) { return Expression::call(Function::Exp, a); }

Expression parse(std::string_view source) {
  Parser parser(source);
  return Expression(parser.parse_all());
}

double evaluate(const Expression& e, double x) { return e(x); }

std::string print(const Expression& e) {
  std::string out;
  print_node(e.node(), 0, out);
  return out;
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return std::to_string(value);
  return std::string(buf, ptr);
}

ProbeReport probe(const Expression& e, const Interval& interval, std::size_t samples) {
  if (samples < 2) throw Error("probe needs at least 2 samples");
  ProbeReport r;
  r.lo = interval.lo();
  r.hi = interval.hi();
  r.samples = samples;
  bool have_prev = false;
  double prev = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = interval.uniform_point(i, samples);
    double v;
    try {
      v = e(x);
    } catch (const DomainError& err) {
      r.domain_errors.push_back({x, err.what()});
      continue;
    }
    if (!have_prev) {
      r.min = r.max = v;
      r.argmin = r.argmax = x;
    } else {
      if (v < prev) r.monotone_nondecreasing = false;
      if (!(v > prev)) r.strictly_increasing = false;
      if (v < r.min) {
        r.min = v;
        r.argmin = x;
      }
      if (v > r.max) {
        r.max = v;
        r.argmax = x;
      }
    }
    prev = v;
    have_prev = true;
  }
  if (!have_prev) {
    r.monotone_nondecreasing = false;
    r.strictly_increasing = false;
  }
  return r;
}

}  // namespace ifes
