#include <doctest.h>

#include <cmath>
#include <cstring>
#include <optional>
#include <string>

#include "ifes/errors.hpp"
#include "ifes/expr.hpp"
#include "support.hpp"

using namespace ifes;

namespace {

// Reference evaluator written against the precedence table alone:
//   ^ (right-assoc, exponent may carry unary minus)  >  unary minus  >  * /  >  + -
// It evaluates straight from the source text, so it shares no code with the library parser.
class Oracle {
public:
  Oracle(const std::string& s, double x) : s_(s), x_(x) {}

  std::optional<double> run() {
    ok_ = true;
    const double v = sum();
    if (pos_ != s_.size()) ok_ = false;
    if (!ok_ || !std::isfinite(v)) return std::nullopt;
    return v;
  }

private:
  double sum() {
    double v = product();
    while (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
      const char op = s_[pos_++];
      const double r = product();
      v = op == '+' ? v + r : v - r;
      guard(v);
    }
    return v;
  }
  double product() {
    double v = unary();
    while (pos_ < s_.size() && (s_[pos_] == '*' || s_[pos_] == '/')) {
      const char op = s_[pos_++];
      const double r = unary();
      if (op == '/' && r == 0.0) ok_ = false;
      v = op == '*' ? v * r : v / r;
      guard(v);
    }
    return v;
  }
  double unary() {
    if (pos_ < s_.size() && s_[pos_] == '-') {
      ++pos_;
      return -unary();
    }
    return power();
  }
  double power() {
    const double b = primary();
    if (pos_ < s_.size() && s_[pos_] == '^') {
      ++pos_;
      const double e = unary();
      if (b < 0.0 && std::trunc(e) != e) ok_ = false;
      if (b == 0.0 && e < 0.0) ok_ = false;
      const double v = std::pow(b, e);
      guard(v);
      return v;
    }
    return b;
  }
  double primary() {
    if (pos_ >= s_.size()) {
      ok_ = false;
      return 0.0;
    }
    if (s_[pos_] == '(') {
      ++pos_;
      const double v = sum();
      if (pos_ < s_.size() && s_[pos_] == ')') ++pos_; else ok_ = false;
      return v;
    }
    if (s_[pos_] == 'x') {
      ++pos_;
      return x_;
    }
    for (const char* fn : {"sin", "cos", "abs", "exp"}) {
      if (s_.compare(pos_, 3, fn) == 0) {
        pos_ += 4;  // name and '('
        const double a = sum();
        ++pos_;     // ')'
        double v = 0.0;
        if (!std::strcmp(fn, "sin")) v = std::sin(a);
        if (!std::strcmp(fn, "cos")) v = std::cos(a);
        if (!std::strcmp(fn, "abs")) v = std::abs(a);
        if (!std::strcmp(fn, "exp")) v = std::exp(a);
        guard(v);
        return v;
      }
    }
    std::size_t used = 0;
    const double v = std::stod(s_.substr(pos_), &used);
    pos_ += used;
    return v;
  }
  void guard(double v) {
    if (!std::isfinite(v)) ok_ = false;
  }

  const std::string& s_;
  double x_;
  std::size_t pos_ = 0;
  bool ok_ = true;
};

std::string random_source(std::mt19937_64& rng, int depth) {
  using testing::pick;
  if (depth == 0 || pick(rng, 4) == 0) {
    switch (pick(rng, 4)) {
      case 0: return "x";
      case 1: return std::to_string(pick(rng, 5));
      case 2: return std::to_string(pick(rng, 9) + 1) + ".5";
      default: return "x";
    }
  }
  switch (pick(rng, 9)) {
    case 0: return random_source(rng, depth - 1) + "+" + random_source(rng, depth - 1);
    case 1: return random_source(rng, depth - 1) + "-" + random_source(rng, depth - 1);
    case 2: return random_source(rng, depth - 1) + "*" + random_source(rng, depth - 1);
    case 3: return random_source(rng, depth - 1) + "/" + random_source(rng, depth - 1);
    case 4: return random_source(rng, depth - 1) + "^" + std::to_string(pick(rng, 3) + 1);
    case 5: return "-" + random_source(rng, depth - 1);
    case 6: return "(" + random_source(rng, depth - 1) + ")";
    case 7: return "x^-" + std::to_string(pick(rng, 2) + 1);
    default: {
      const char* fns[] = {"sin", "cos", "abs", "exp"};
      return std::string(fns[pick(rng, 4)]) + "(" + random_source(rng, depth - 1) + ")";
    }
  }
}

std::optional<double> library_value(const Expression& e, double x) {
  try {
    return e(x);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

}  // namespace

TEST_SUITE("expr") {
  TEST_CASE("parse: identity and worked sources") {
    CHECK(parse("x").is_variable());
    CHECK(parse("  x ").is_variable());
    const Expression g = parse("sqrt(x)*exp(0.5*(log(x))^2)");
    CHECK(g(1.0) == doctest::Approx(1.0));
    CHECK(g(std::exp(1.0)) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
    const Expression step = parse("if(x < 0.5, (x^4+1)/3, (x^3+1)/2)");
    CHECK(step(0.5) == 0.5625);
    CHECK(step(0.0) == doctest::Approx(1.0 / 3.0));
  }

  TEST_CASE("evaluate: worked values") {
    CHECK(parse("(x^2+1)/2")(0.0) == 0.5);
    CHECK(parse("x")(0.7) == 0.7);
    CHECK(evaluate(parse("2^3^2"), 0.0) == 512.0);  // right-associative
    CHECK(parse("-x^2")(3.0) == -9.0);               // ^ binds tighter than unary minus
    CHECK(parse("2^-1")(0.0) == 0.5);
    CHECK(parse("1-2-3")(0.0) == -4.0);
    CHECK(parse("8/4/2")(0.0) == 1.0);
    CHECK(parse("if(x >= 1, 2, 3)")(1.0) == 2.0);
    CHECK(parse("if(x != 1, 2, 3)")(1.0) == 3.0);
    CHECK(parse("if(x == 1, 2, 3)")(1.0) == 2.0);
    CHECK(parse("if(x > 1, 2, 3)")(1.0) == 3.0);
    CHECK(parse("if(x <= 1, 2, 3)")(1.0) == 2.0);
    CHECK(parse("abs(-x)+cos(0)")(2.0) == 3.0);
    CHECK(parse("1.5e2")(0.0) == 150.0);
    CHECK(parse(".25")(0.0) == 0.25);
  }

  TEST_CASE("evaluate: domain errors are raised, never NaN") {
    CHECK_THROWS_AS(parse("log(x)")(0.0), DomainError);
    CHECK_THROWS_AS(parse("sqrt(x)")(-1.0), DomainError);
    CHECK_THROWS_AS(parse("x^0.5")(-1.0), DomainError);
    CHECK_THROWS_AS(parse("1/x")(0.0), DomainError);
    CHECK_THROWS_AS(parse("exp(x)")(1e6), DomainError);
    CHECK_THROWS_AS(parse("x^-1")(0.0), DomainError);
    CHECK(parse("x^2")(-2.0) == 4.0);  // integer power of a negative base is fine
    try {
      parse("log(x-1)")(0.5);
      FAIL("expected DomainError");
    } catch (const DomainError& e) {
      CHECK(e.x() == 0.5);
    }
  }

  TEST_CASE("parse: diagnostics carry the byte offset and expected tokens") {
    try {
      parse("x + * 2");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.offset() == 4);
      CHECK_FALSE(e.expected().empty());
    }
    CHECK_THROWS_AS(parse(""), ParseError);
    CHECK_THROWS_AS(parse("foo(x)"), ParseError);
    CHECK_THROWS_AS(parse("sqrt(x, x)"), ParseError);
    CHECK_THROWS_AS(parse("if(x, 1, 2)"), ParseError);
    CHECK_THROWS_AS(parse("(x"), ParseError);
    CHECK_THROWS_AS(parse("x)"), ParseError);
    CHECK_THROWS_AS(parse("y"), ParseError);
    CHECK_THROWS_AS(parse("x < 1"), ParseError);
    CHECK_THROWS_AS(parse("1..2"), ParseError);
  }

  TEST_CASE("probe: worked reports") {
    const ProbeReport a = probe(parse("x^2"), Interval(0.0, 1.0), 101);
    CHECK(a.min == 0.0);
    CHECK(a.max == 1.0);
    CHECK(a.monotone_nondecreasing);
    const ProbeReport b = probe(parse("(x^2+1)/2"), Interval(0.0, 1.0), 101);
    CHECK(b.min == 0.5);
    CHECK(b.max == 1.0);
    CHECK(b.monotone_nondecreasing);
    CHECK(b.strictly_increasing);
    const ProbeReport c = probe(parse("sin(3.14159*x)"), Interval(0.0, 1.0), 101);
    CHECK_FALSE(c.monotone_nondecreasing);
    const ProbeReport d = probe(parse("log(x)"), Interval(0.0, 1.0), 11);
    CHECK_FALSE(d.ok());
    REQUIRE(d.domain_errors.size() == 1);
    CHECK(d.domain_errors[0].x == 0.0);
    const ProbeReport flat = probe(parse("if(x < 0.5, 0, x)"), Interval(0.0, 1.0), 11);
    CHECK(flat.monotone_nondecreasing);
    CHECK_FALSE(flat.strictly_increasing);
  }

  TEST_CASE("substitute and structural equality") {
    const Expression e = parse("x^2+1");
    CHECK(e.substitute(parse("x+1")) == parse("(x+1)^2+1"));
    CHECK(log(exp(parse("x^2"))) == parse("x^2"));
    CHECK(parse("log(exp(x))").substitute(Expression::variable()) == Expression::variable());
    CHECK(-(-parse("x")) == parse("x"));
    CHECK_FALSE(parse("x+1") == parse("1+x"));
    double v = 0.0;
    CHECK(Expression::constant(2.5).is_constant(&v));
    CHECK(v == 2.5);
  }

  TEST_CASE("property: print/parse round trip on random sources") {
    auto rng = testing::make_rng(11);
    for (int i = 0; i < 500; ++i) {
      const std::string src = random_source(rng, 4);
      CAPTURE(src);
      const Expression e = parse(src);
      const Expression back = parse(print(e));
      CHECK(back == e);
      CHECK(parse(print(back)) == back);
    }
  }

  TEST_CASE("property: precedence agrees with an independent oracle") {
    auto rng = testing::make_rng(12);
    const double xs[] = {-1.5, -0.25, 0.0, 0.5, 2.0};
    int compared = 0;
    for (int i = 0; i < 500; ++i) {
      const std::string src = random_source(rng, 4);
      const Expression e = parse(src);
      for (double x : xs) {
        CAPTURE(src);
        CAPTURE(x);
        const auto want = Oracle(src, x).run();
        const auto got = library_value(e, x);
        CHECK(want.has_value() == got.has_value());
        if (want && got) {
          CHECK(*want == *got);  // same operations in the same order: bitwise
          ++compared;
        }
      }
    }
    CHECK(compared > 1000);
  }

  TEST_CASE("property: evaluation is pure") {
    auto rng = testing::make_rng(13);
    for (int i = 0; i < 100; ++i) {
      const Expression e = parse(random_source(rng, 4));
      const double x = testing::uniform(rng, -2.0, 2.0);
      const auto a = library_value(e, x);
      const auto b = library_value(e, x);
      REQUIRE(a.has_value() == b.has_value());
      if (a) CHECK(std::memcmp(&*a, &*b, sizeof(double)) == 0);
    }
  }

  TEST_CASE("format_double reads back exactly") {
    auto rng = testing::make_rng(14);
    for (int i = 0; i < 1000; ++i) {
      const double v = testing::uniform(rng, -1e6, 1e6) * std::pow(10.0, testing::uniform(rng, -20, 20));
      CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(2.718281828459045) == "2.718281828459045");
  }
}
