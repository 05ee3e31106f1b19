#include "ifes/equation.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace ifes {

namespace {

template <class Spec>
void validate_lengths(const Spec& spec) {
  const std::size_t n = spec.exponents.size();
  if (n == 0) throw Error("equation needs at least one term (n >= 1)");
  if (spec.outer_maps.size() != n || spec.inner_maps.size() != n) {
    throw Error("equation has " + std::to_string(n) + " exponents but " +
                std::to_string(spec.outer_maps.size()) + " outer and " +
                std::to_string(spec.inner_maps.size()) + " inner maps");
  }
  for (double l : spec.exponents) {
    if (!std::isfinite(l)) throw Error("exponents must be finite");
  }
}

}  // namespace

double ProductEquationSpec::exponent_sum() const noexcept {
  return std::accumulate(exponents.begin(), exponents.end(), 0.0);
}

void ProductEquationSpec::validate() const {
  validate_lengths(*this);
  if (!std::isfinite(floor)) throw Error("floor must be finite");
}

void SumEquationSpec::validate() const { validate_lengths(*this); }

std::vector<Expression> identity_maps(std::size_t n) {
  return std::vector<Expression>(n, Expression::variable());
}

double checked_pow(double base, double exponent) {
  if (base < 0.0 && exponent != std::floor(exponent)) {
    throw DomainError(base, "negative base " + std::to_string(base) +
                                " raised to non-integer power");
  }
  if (base == 0.0 && exponent < 0.0) throw DomainError(base, "zero raised to negative power");
  const double r = std::pow(base, exponent);
  if (!std::isfinite(r)) throw DomainError(base, "power overflow");
  return r;
}

double iterate_at(const GridFunction& g, const Expression& psi, std::size_t k, double x) {
  double y = psi.is_variable() ? x : psi(x);
  if (!g.domain().contains_with_slack(y)) {
    throw RangeError("inner map sends " + std::to_string(x) + " to " + std::to_string(y) +
                     ", outside the domain");
  }
  y = g.domain().clamp(y);
  for (std::size_t j = 0; j < k; ++j) y = g(y);
  return y;
}

double product_side(const ProductEquationSpec& spec, const GridFunction& g, double x) {
  double lhs = 1.0;
  for (std::size_t k = 0; k < spec.order(); ++k) {
    const double y = iterate_at(g, spec.inner_maps[k], k + 1, x);
    const double xi = spec.outer_maps[k].is_variable() ? y : spec.outer_maps[k](y);
    lhs *= checked_pow(xi, spec.exponents[k]);
  }
  return lhs;
}

double sum_side(const SumEquationSpec& spec, const GridFunction& f, double x) {
  double lhs = 0.0;
  for (std::size_t k = 0; k < spec.order(); ++k) {
    const double y = iterate_at(f, spec.inner_maps[k], k + 1, x);
    const double u = spec.outer_maps[k].is_variable() ? y : spec.outer_maps[k](y);
    lhs += spec.exponents[k] * u;
  }
  return lhs;
}

namespace {

template <class Side, class Spec>
Residual sup_defect(const Spec& spec, const GridFunction& g, std::span<const double> points,
                    Side side) {
  Residual r;
  if (!points.empty()) r.at = points.front();
  for (double x : points) {
    const double d = std::abs(side(spec, g, x) - spec.target(x));
    if (d > r.value) {
      r.value = d;
      r.at = x;
    }
  }
  return r;
}

}  // namespace

Residual product_residual(const ProductEquationSpec& spec, const GridFunction& g,
                          std::span<const double> points) {
  return sup_defect(spec, g, points, product_side);
}

Residual sum_residual(const SumEquationSpec& spec, const GridFunction& f,
                      std::span<const double> points) {
  return sup_defect(spec, f, points, sum_side);
}

Residual product_residual(const ProductEquationSpec& spec, const GridFunction& g,
                          std::size_t factor) {
  const auto pts = verification_points(spec.domain, g.size(), factor);
  return product_residual(spec, g, pts);
}

Residual sum_residual(const SumEquationSpec& spec, const GridFunction& f, std::size_t factor) {
  const auto pts = verification_points(spec.domain, f.size(), factor);
  return sum_residual(spec, f, pts);
}

}  // namespace ifes
