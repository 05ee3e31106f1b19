#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ifes/expr.hpp"
#include "ifes/grid_function.hpp"
#include "ifes/interval.hpp"

namespace ifes {

/// Product form on J:  prod_k Xi_k(g^k(psi_k(x)))^{lambda_k} = G(x).
struct ProductEquationSpec {
  Interval domain{0.0, 1.0};
  std::vector<double> exponents;          // lambda_1..lambda_n
  Expression target;                      // G
  std::vector<Expression> outer_maps;     // Xi_1..Xi_n
  std::vector<Expression> inner_maps;     // psi_1..psi_n
  double floor = 0.0;                     // delta

  std::size_t order() const noexcept { return exponents.size(); }
  double exponent_sum() const noexcept;
  /// Throws Error when the sequences disagree in length or n = 0.
  void validate() const;
};

/// Sum form on I:  sum_k lambda_k Upsilon_k(f^k(phi_k(x))) = F(x).
struct SumEquationSpec {
  Interval domain{0.0, 1.0};
  std::vector<double> exponents;
  Expression target;                      // F
  std::vector<Expression> outer_maps;     // Upsilon_1..Upsilon_n
  std::vector<Expression> inner_maps;     // phi_1..phi_n

  std::size_t order() const noexcept { return exponents.size(); }
  void validate() const;
};

/// Identity maps for every k, convenient for building specs in code.
std::vector<Expression> identity_maps(std::size_t n);

/// g^k(psi(x)) with g read in its own mode. psi(x) is clamped into g's domain when it
/// leaves it by round-off only.
double iterate_at(const GridFunction& g, const Expression& psi, std::size_t k, double x);

/// Left-hand side of the product equation at x.
double product_side(const ProductEquationSpec& spec, const GridFunction& g, double x);
/// Left-hand side of the sum equation at x.
double sum_side(const SumEquationSpec& spec, const GridFunction& f, double x);

struct Residual {
  double value = 0.0;  // sup |lhs - rhs|
  double at = 0.0;     // where the sup is attained
};

/// Sup-norm defect over the given points.
Residual product_residual(const ProductEquationSpec& spec, const GridFunction& g,
                          std::span<const double> points);
Residual sum_residual(const SumEquationSpec& spec, const GridFunction& f,
                      std::span<const double> points);

/// Same, on verification_points(domain, g.size(), factor).
Residual product_residual(const ProductEquationSpec& spec, const GridFunction& g,
                          std::size_t factor = 4);
Residual sum_residual(const SumEquationSpec& spec, const GridFunction& f, std::size_t factor = 4);

/// base^exponent with the same domain rules as the expression evaluator.
double checked_pow(double base, double exponent);

}  // namespace ifes
