#include "ifes/conjugacy.hpp"

#include <cmath>
#include <memory>

namespace ifes {

Expression log_conjugate(const Expression& e) {
  return log(e.substitute(exp(Expression::variable())));
}

Expression reflect(const Expression& e) { return -e.substitute(-Expression::variable()); }

SumEquationSpec log_conjugate_spec(const ProductEquationSpec& spec) {
  spec.validate();
  if (spec.domain.lo() <= 0.0) {
    throw ZeroProblemError("logarithmic conjugacy needs J inside (0, inf); J starts at " +
                           format_double(spec.domain.lo()) + " and log 0 is undefined");
  }
  SumEquationSpec out;
  out.domain = Interval(std::log(spec.domain.lo()), std::log(spec.domain.hi()));
  out.exponents = spec.exponents;
  out.target = log_conjugate(spec.target);
  for (const auto& e : spec.outer_maps) out.outer_maps.push_back(log_conjugate(e));
  for (const auto& e : spec.inner_maps) out.inner_maps.push_back(log_conjugate(e));
  return out;
}

namespace {

template <class Map>
GridFunction transport(const GridFunction& f, const Interval& target, Map map) {
  const Interval& from = f.domain();
  auto image = [&](double x) {
    if (x == from.lo()) return target.lo();
    if (x == from.hi()) return target.hi();
    return map(x);
  };
  std::vector<double> nodes(f.size()), values(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    nodes[i] = image(f.nodes()[i]);
    values[i] = image(f.value(i));
  }
  std::optional<double> floor;
  if (f.floor()) floor = image(*f.floor());
  return GridFunction(target, std::make_shared<const std::vector<double>>(std::move(nodes)),
                      std::move(values), f.mode(), floor);
}

}  // namespace

GridFunction exp_conjugate_function(const GridFunction& f, std::optional<Interval> target) {
  const Interval to =
      target.value_or(Interval(std::exp(f.domain().lo()), std::exp(f.domain().hi())));
  return transport(f, to, [](double x) { return std::exp(x); });
}

GridFunction log_conjugate_function(const GridFunction& g, std::optional<Interval> target) {
  if (g.domain().lo() <= 0.0) {
    throw ZeroProblemError("cannot take logarithms on an interval starting at " +
                           format_double(g.domain().lo()));
  }
  const Interval to =
      target.value_or(Interval(std::log(g.domain().lo()), std::log(g.domain().hi())));
  return transport(g, to, [](double x) { return std::log(x); });
}

Reflection reflect_spec(const ProductEquationSpec& spec) {
  spec.validate();
  if (spec.domain.contains(0.0)) {
    throw RangeError("reflection needs 0 outside J = [" + format_double(spec.domain.lo()) + ", " +
                     format_double(spec.domain.hi()) + "]");
  }
  Reflection r;
  r.spec.domain = Interval(-spec.domain.hi(), -spec.domain.lo());
  r.spec.exponents = spec.exponents;
  r.spec.floor = spec.floor;
  r.spec.target = reflect(spec.target);
  for (const auto& e : spec.outer_maps) r.spec.outer_maps.push_back(reflect(e));
  for (const auto& e : spec.inner_maps) r.spec.inner_maps.push_back(reflect(e));

  bool integral = true;
  double sum = 0.0;
  for (double l : spec.exponents) {
    if (l != std::floor(l)) integral = false;
    sum += l;
  }
  const bool odd_sum = integral && std::fmod(std::abs(sum), 2.0) == 1.0;
  r.exponent_parity_ok = integral && odd_sum;
  if (!integral) {
    r.diagnostics.push_back(
        "some exponent is not an integer: powers of negative values are undefined on the "
        "reflected side, so solutions transport only through -g(-x) and not through the "
        "reflected product form");
  } else if (!odd_sum) {
    r.diagnostics.push_back("exponent sum is even: the product of reflected terms changes sign");
  }
  return r;
}

GridFunction reflect_function(const GridFunction& g) {
  const std::size_t n = g.size();
  std::vector<double> nodes(n), values(n);
  for (std::size_t i = 0; i < n; ++i) {
    nodes[i] = -g.nodes()[n - 1 - i];
    values[i] = -g.value(n - 1 - i);
  }
  EvalMode mode = g.mode();
  if (mode == EvalMode::StepUSC) {
    mode = EvalMode::StepLSC;
  } else if (mode == EvalMode::StepLSC) {
    mode = EvalMode::StepUSC;
  }
  const Interval domain(-g.domain().hi(), -g.domain().lo());
  return GridFunction(domain, std::make_shared<const std::vector<double>>(std::move(nodes)),
                      std::move(values), mode, std::nullopt);
}

}  // namespace ifes
