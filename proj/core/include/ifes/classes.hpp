#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ifes/equation.hpp"
#include "ifes/grid_function.hpp"

namespace ifes {

/// Tolerance on the endpoint equalities f(a) = a, f(b) = b.
inline constexpr double kEndpointTolerance = 1e-9;

struct MembershipVerdict {
  bool member = false;
  std::string reason;
  /// Node pair (x, y), x > y, at which a growth bound fails; or (endpoint, value).
  std::optional<std::pair<double, double>> witness;

  explicit operator bool() const noexcept { return member; }
};

/// f fixes a and b, and lower*(x - y) <= f(x) - f(y) <= upper*(x - y) for all node pairs x > y.
MembershipVerdict in_F_class(const GridFunction& f, const Interval& I, double lower, double upper);

/// g fixes c and d, and (x/y)^lower <= g(x)/g(y) <= (x/y)^upper for all node pairs x > y.
/// Throws RangeError when J reaches 0 or g takes a non-positive value.
MembershipVerdict in_G_class(const GridFunction& g, const Interval& J, double lower, double upper);

struct ClassParams {
  double delta = 0.0;
  double M = 0.0;
  std::vector<double> l;
  std::vector<double> L;
};

template <class Scalar>
struct BasicDerivedConstants {
  Scalar lambda_sum{};
  Scalar K0{};
  Scalar K1{};
  Scalar K{};
};

using DerivedConstants = BasicDerivedConstants<double>;

/// K0 = sum lambda_k l_k delta^{k-1};  K1 = sum lambda_k L_k M^{k-1};
/// K  = lambda_1 l_1 - sum_{k>=2} lambda_k (L_k (M^{k-1} - 1)/(M - 1) - l_k delta^{k-1}).
/// The quotient is evaluated as 1 + M + ... + M^{k-2}, so M = 1 is allowed and exact
/// scalar types (rationals) stay exact.
template <class Scalar>
BasicDerivedConstants<Scalar> derived_constants(std::span<const Scalar> lambda,
                                                std::span<const Scalar> l,
                                                std::span<const Scalar> L, const Scalar& delta,
                                                const Scalar& M) {
  if (lambda.size() != l.size() || lambda.size() != L.size() || lambda.empty()) {
    throw Error("derived_constants: lambda, l and L must have the same non-zero length");
  }
  BasicDerivedConstants<Scalar> out;
  Scalar delta_pow(1);  // delta^{k-1}
  Scalar M_pow(1);      // M^{k-1}
  Scalar geometric(0);  // 1 + M + ... + M^{k-2}
  for (std::size_t k = 0; k < lambda.size(); ++k) {
    out.lambda_sum += lambda[k];
    out.K0 += lambda[k] * l[k] * delta_pow;
    out.K1 += lambda[k] * L[k] * M_pow;
    if (k == 0) {
      out.K += lambda[0] * l[0];
    } else {
      out.K -= lambda[k] * (L[k] * geometric - l[k] * delta_pow);
    }
    geometric += M_pow;
    delta_pow *= delta;
    M_pow *= M;
  }
  return out;
}

DerivedConstants derived_constants(std::span<const double> lambda, const ClassParams& cp);

/// Divides by the sum. Throws Error when the sum is 0.
std::vector<double> normalize_lambdas(std::span<const double> lambda);

struct HypothesisItem {
  std::string name;    // stable identifier, e.g. "K_positive"
  bool passed = false;
  std::string detail;  // human-readable numbers behind the verdict
  bool sampled = false;  // true when decided by dense sampling rather than exactly
};

struct HypothesisReport {
  std::string path;  // "banach" or "tarski"
  std::vector<HypothesisItem> items;

  bool all_passed() const noexcept;
  const HypothesisItem* find(const std::string& name) const noexcept;
  std::string to_text() const;
};

struct ProbeOptions {
  std::size_t monotone_samples = 4097;  // for order-preservation and range probes
  std::size_t class_samples = 1025;     // nodes for sampled class membership (pairwise)
};

HypothesisReport check_banach_hypotheses(const ProductEquationSpec& spec, const ClassParams& cp,
                                         const ProbeOptions& options = {});
HypothesisReport check_tarski_hypotheses(const ProductEquationSpec& spec,
                                         const ProbeOptions& options = {});

/// Lowest and highest members of F(I; lower, upper) on the given nodes, as piecewise linear
/// functions: max(a + lower (x - a), b - upper (b - x)) and min(a + upper (x - a), b - lower (b - x)).
GridFunction lower_class_envelope(const Interval& I, NodeVector nodes, double lower, double upper);
GridFunction upper_class_envelope(const Interval& I, NodeVector nodes, double lower, double upper);

}  // namespace ifes
