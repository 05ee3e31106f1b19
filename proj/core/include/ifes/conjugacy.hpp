#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ifes/equation.hpp"
#include "ifes/grid_function.hpp"

namespace ifes {

/// log(e(exp(x))), built symbolically.
Expression log_conjugate(const Expression& e);
/// -e(-x), built symbolically.
Expression reflect(const Expression& e);

/// Product form on J = [c, d] to sum form on I = [log c, log d]:
/// F = log G(exp x), Upsilon_k = log Xi_k(exp x), phi_k = log psi_k(exp x).
/// Throws ZeroProblemError when c <= 0.
SumEquationSpec log_conjugate_spec(const ProductEquationSpec& spec);

/// f on I to g = exp o f o log on exp(I). Nodes and values go through exp, except that the
/// endpoints of I map exactly onto the endpoints of `target` (default [exp a, exp b]).
GridFunction exp_conjugate_function(const GridFunction& f,
                                    std::optional<Interval> target = std::nullopt);
/// Inverse of exp_conjugate_function. Throws ZeroProblemError when the domain reaches 0.
GridFunction log_conjugate_function(const GridFunction& g,
                                    std::optional<Interval> target = std::nullopt);

struct Reflection {
  ProductEquationSpec spec;
  /// Every exponent is an integer and their sum is odd, so that x -> -x commutes with the
  /// power maps on the reflected side.
  bool exponent_parity_ok = false;
  std::vector<std::string> diagnostics;
};

/// Conjugation through x -> -x: J becomes [-d, -c], G(x) becomes -G(-x), and likewise for
/// every Xi_k and psi_k. The floor is carried over unchanged. Requires 0 outside J.
Reflection reflect_spec(const ProductEquationSpec& spec);

/// x -> -g(-x) on the reflected grid; USC and LSC step modes swap.
GridFunction reflect_function(const GridFunction& g);

}  // namespace ifes
