#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ifes/classes.hpp"
#include "ifes/equation.hpp"
#include "ifes/grid_function.hpp"

namespace ifes {

/// Tg(x) = g(x)^{alpha_1} * prod_{k>=2} Xi_k(g^k(psi_k(x)))^{alpha_k} * H(x)^{alpha}
/// with alpha = lambda, alpha_1 = 1 - lambda_1, alpha_k = -lambda_k and H = G^{1/lambda}.
struct TOperator {
  ProductEquationSpec spec;
  double alpha = 0.0;
  std::vector<double> alphas;
  Expression H;
};

/// Throws Error unless lambda > 0, lambda_1 <= 1, lambda_k <= 0 for k >= 2 and
/// |alpha + sum alpha_k - 1| is within a few ulps.
TOperator build_T(const ProductEquationSpec& spec);

struct ApplyStats {
  std::size_t floor_clamps = 0;    // outputs raised to delta
  std::size_t ceiling_clamps = 0;  // outputs lowered to d
  /// Largest distance by which a raw output left [delta, d] before clamping.
  double max_excursion = 0.0;
};

/// T on a fixed node grid, with psi_k(x_i) and H(x_i)^alpha cached.
class TarskiOperator {
public:
  TarskiOperator(TOperator T, NodeVector nodes);

  /// Node-wise Tg, clamped into [delta, d]. g is read in its own mode.
  GridFunction operator()(const GridFunction& g, ApplyStats* stats = nullptr) const;

  const TOperator& op() const noexcept { return T_; }
  const NodeVector& nodes() const noexcept { return nodes_; }

private:
  TOperator T_;
  NodeVector nodes_;
  std::vector<std::vector<double>> inner_;  // inner_[k][i] = psi_k(x_i)
  std::vector<double> h_alpha_;
};

GridFunction apply_T(const TOperator& T, const GridFunction& g, ApplyStats* stats = nullptr);

struct TarskiConfig {
  std::size_t grid = 1024;    // intervals; grid + 1 nodes
  std::size_t levels = 1024;  // value levels w_0 = delta < ... < w_p = d
  EvalMode mode = EvalMode::StepUSC;
  std::size_t max_sweeps = 0;  // 0 means (grid + 1) * levels
  std::size_t verification_factor = 4;
  bool check_hypotheses = true;
};

struct PathResult {
  GridFunction g;
  std::size_t sweeps = 0;
  /// Min path: T(g) >= g at every node. Max path: T(g) <= g. Always false in PL mode.
  bool certified = false;
  std::string certificate;
  Residual residual;
  /// max_i |T(g)(x_i) - g(x_i)|.
  double fixed_point_defect = 0.0;
  std::size_t clamps = 0;
};

struct TarskiResult {
  std::optional<PathResult> min;
  std::optional<PathResult> max;
  /// g_min <= g_max at every node, when both were computed.
  std::optional<bool> ordered;
  HypothesisReport hypotheses;
};

/// Thrown when check_hypotheses is set and the report fails.
class HypothesisFailure : public Error {
public:
  explicit HypothesisFailure(HypothesisReport report)
      : Error("hypotheses fail:\n" + report.to_text()), report_(std::move(report)) {}

  const HypothesisReport& report() const noexcept { return report_; }

private:
  HypothesisReport report_;
};

/// Kleene iteration from the constant delta, rounding each T image down to the value grid.
TarskiResult solve_min(const ProductEquationSpec& spec, const TarskiConfig& cfg);
/// Kleene iteration from the constant d, rounding each T image up.
TarskiResult solve_max(const ProductEquationSpec& spec, const TarskiConfig& cfg);
TarskiResult solve_both(const ProductEquationSpec& spec, const TarskiConfig& cfg);

/// Sup-norm defect of the product equation on the verification grid.
double residual(const ProductEquationSpec& spec, const GridFunction& g, std::size_t factor = 4);

enum class UniquenessStatus {
  Equal,
  Distinct,
  ResidualTooLarge,
  Incomparable,
  NotCommuting,
  NotStrict,
};

const char* to_string(UniquenessStatus status);

struct UniquenessOptions {
  double residual_tol = 5e-3;
  double equality_tol = 1e-2;
  std::size_t probe_samples = 4097;
};

struct UniquenessVerdict {
  UniquenessStatus status = UniquenessStatus::Equal;
  double distance = 0.0;
  std::optional<double> witness;  // node where the deciding property fails or peaks
  double residual1 = 0.0;
  double residual2 = 0.0;
  std::size_t probe_samples = 0;
  std::string detail;
};

/// Two comparable solutions with strictly increasing y -> Xi_1(y)^{lambda_1} on [delta, d]
/// must coincide; returns Equal or Distinct when those preconditions hold.
UniquenessVerdict uniqueness_comparable(const ProductEquationSpec& spec, const GridFunction& g1,
                                        const GridFunction& g2, const UniquenessOptions& options = {});
/// Same with commutation g1 o g2 = g2 o g1 (checked at the nodes) in place of comparability.
UniquenessVerdict uniqueness_commuting(const ProductEquationSpec& spec, const GridFunction& g1,
                                       const GridFunction& g2, const UniquenessOptions& options = {});

}  // namespace ifes
