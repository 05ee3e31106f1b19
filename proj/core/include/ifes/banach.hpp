#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ifes/classes.hpp"
#include "ifes/equation.hpp"
#include "ifes/grid_function.hpp"

namespace ifes {

struct BanachConfig {
  std::size_t grid = 1024;  // intervals; the grid has grid + 1 nodes
  double tol = 1e-10;
  std::size_t max_iter = 10000;
  ClassParams classes;
  double bisection_tol = 1e-13;
  std::size_t verification_factor = 4;
  /// Weight w in f <- (1 - w) f + w L f. w = 1 is plain Picard iteration; smaller values damp
  /// the oscillating modes that make plain iteration crawl. Fixed points do not depend on w.
  double relaxation = 0.5;
};

struct SolveReport {
  std::size_t iterations = 0;
  /// Sup distance between the last iterate and its Picard image, ||L f - f||.
  double final_step = 0.0;
  bool converged = false;
  /// Sup-norm residual of the equation the caller asked to solve, on the verification grid.
  Residual residual;
  MembershipVerdict class_verdict;
  /// Largest ratio of consecutive Picard steps, over steps above round-off level.
  double contraction_estimate = 0.0;
  /// Steps after the first never grow by more than 5%.
  bool steps_nonincreasing = true;
  std::size_t clamp_count = 0;
  std::vector<double> step_history;
};

struct PicardStats {
  std::size_t clamps = 0;
};

/// The operator (Lf)(x) = Upsilon_1^{-1}((F(x) - sum_{k>=2} lambda_k Upsilon_k(f^k(x))) / lambda_1)
/// on a fixed node grid. F(x_i) is evaluated once at construction.
class PicardOperator {
public:
  PicardOperator(const SumEquationSpec& spec, NodeVector nodes, double bisection_tol = 1e-13);

  /// One step. Both endpoints must come out within 1e-9 of a and b, and are then pinned
  /// exactly; otherwise Error is thrown.
  GridFunction operator()(const GridFunction& f, PicardStats* stats = nullptr) const;

  const NodeVector& nodes() const noexcept { return nodes_; }

private:
  double invert_first(double t, PicardStats* stats) const;

  SumEquationSpec spec_;
  NodeVector nodes_;
  std::vector<double> target_;
  double bisection_tol_;
};

GridFunction picard_step(const GridFunction& f, const SumEquationSpec& spec,
                         PicardStats* stats = nullptr);

struct SumSolution {
  GridFunction f;
  SolveReport report;
};

/// Relaxed Picard iteration from `start` (default: the identity) until ||L f - f|| falls below
/// cfg.tol or cfg.max_iter steps are taken. Class verdict against F(I; cfg.classes.delta, cfg.classes.M).
SumSolution solve_sum(const SumEquationSpec& spec, const BanachConfig& cfg,
                      std::optional<GridFunction> start = std::nullopt);

struct ProductSolution {
  GridFunction g;
  /// Residual of the product equation on J; class verdict for G(J; delta, M).
  SolveReport report;
  /// The solve in logarithmic coordinates that produced g.
  SumSolution sum;
};

/// Logarithmic conjugation, solve_sum, and exponential conjugation back to J.
ProductSolution solve_product_continuous(const ProductEquationSpec& spec, const BanachConfig& cfg);

struct StabilityReport {
  double solution_gap = 0.0;  // ||g - g1||_J
  double target_gap = 0.0;    // ||G - G1||_J
  double factor = 0.0;        // d / (c K)
  bool holds = false;         // solution_gap <= factor * target_gap + slack
  double log_solution_gap = 0.0;  // ||f - f1||_I
  double log_target_gap = 0.0;    // ||F - F1||_I
  bool log_holds = false;         // log_solution_gap <= log_target_gap / K + slack
  double slack = 0.0;
};

/// Evaluates both continuous-dependence bounds on the verification grid of J (and its image
/// under log). g and g1 solve `spec` and `perturbed`; K comes from `constants`.
StabilityReport stability_check(const ProductEquationSpec& spec,
                                const ProductEquationSpec& perturbed, const GridFunction& g,
                                const GridFunction& g1, const DerivedConstants& constants,
                                double slack = 1e-6, std::size_t verification_factor = 4);

}  // namespace ifes
