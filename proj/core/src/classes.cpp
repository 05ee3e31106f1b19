#include "ifes/classes.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace ifes {

namespace {

std::string num(double v) { return format_double(v); }

std::string pair_text(double x, double y) { return "(" + num(x) + ", " + num(y) + ")"; }

std::optional<MembershipVerdict> check_endpoints(const GridFunction& f, const Interval& I) {
  if (std::abs(f.domain().lo() - I.lo()) > I.slack() ||
      std::abs(f.domain().hi() - I.hi()) > I.slack()) {
    return MembershipVerdict{false, "function domain does not match the class interval", {}};
  }
  const double first = f.value(0);
  const double last = f.value(f.size() - 1);
  if (std::abs(first - I.lo()) > kEndpointTolerance) {
    return MembershipVerdict{false, "left endpoint not fixed: value " + num(first),
                             std::make_pair(I.lo(), first)};
  }
  if (std::abs(last - I.hi()) > kEndpointTolerance) {
    return MembershipVerdict{false, "right endpoint not fixed: value " + num(last),
                             std::make_pair(I.hi(), last)};
  }
  return std::nullopt;
}

/// Pairwise bound check on (u_i, w_i): lower*(u_j - u_i) <= w_j - w_i <= upper*(u_j - u_i).
MembershipVerdict pairwise_growth(std::span<const double> x, std::span<const double> u,
                                  std::span<const double> w, double lower, double upper,
                                  const char* what) {
  const std::size_t n = u.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double du = u[j] - u[i];
      const double dw = w[j] - w[i];
      const double tol = 1e-12 * (1.0 + std::abs(dw) + std::abs(upper * du));
      if (dw < lower * du - tol) {
        return {false,
                std::string(what) + " grows slower than the lower bound " + num(lower) +
                    " between nodes " + pair_text(x[j], x[i]),
                std::make_pair(x[j], x[i])};
      }
      if (dw > upper * du + tol) {
        return {false,
                std::string(what) + " grows faster than the upper bound " + num(upper) +
                    " between nodes " + pair_text(x[j], x[i]),
                std::make_pair(x[j], x[i])};
      }
    }
  }
  return {true, "all " + std::to_string(n * (n - 1) / 2) + " node pairs satisfy the bounds", {}};
}

}  // namespace

MembershipVerdict in_F_class(const GridFunction& f, const Interval& I, double lower, double upper) {
  if (auto fail = check_endpoints(f, I)) return *fail;
  return pairwise_growth(f.nodes(), f.nodes(), f.values(), lower, upper, "difference");
}

MembershipVerdict in_G_class(const GridFunction& g, const Interval& J, double lower, double upper) {
  if (J.lo() <= 0.0) throw RangeError("class G(J; .) needs J inside (0, inf)");
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(g.value(i) > 0.0)) {
      throw RangeError("class G(J; .) needs positive values; got " + num(g.value(i)) +
                       " at " + num(g.nodes()[i]));
    }
  }
  if (auto fail = check_endpoints(g, J)) return *fail;
  std::vector<double> lx(g.size()), lg(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    lx[i] = std::log(g.nodes()[i]);
    lg[i] = std::log(g.value(i));
  }
  return pairwise_growth(g.nodes(), lx, lg, lower, upper, "ratio");
}

DerivedConstants derived_constants(std::span<const double> lambda, const ClassParams& cp) {
  return derived_constants<double>(lambda, cp.l, cp.L, cp.delta, cp.M);
}

std::vector<double> normalize_lambdas(std::span<const double> lambda) {
  const double sum = std::accumulate(lambda.begin(), lambda.end(), 0.0);
  if (sum == 0.0) throw Error("cannot normalize exponents that sum to 0");
  std::vector<double> out(lambda.begin(), lambda.end());
  if (sum == 1.0) return out;
  for (double& v : out) v /= sum;
  return out;
}

bool HypothesisReport::all_passed() const noexcept {
  for (const auto& item : items) {
    if (!item.passed) return false;
  }
  return !items.empty();
}

const HypothesisItem* HypothesisReport::find(const std::string& name) const noexcept {
  for (const auto& item : items) {
    if (item.name == name) return &item;
  }
  return nullptr;
}

std::string HypothesisReport::to_text() const {
  std::ostringstream out;
  out << path << " hypotheses: " << (all_passed() ? "all pass" : "FAILED") << "\n";
  for (const auto& item : items) {
    out << "  [" << (item.passed ? "pass" : "FAIL") << "] " << item.name;
    if (item.sampled) out << " (sampled)";
    if (!item.detail.empty()) out << ": " << item.detail;
    out << "\n";
  }
  return out.str();
}

namespace {

void add(HypothesisReport& r, std::string name, bool passed, std::string detail,
         bool sampled = false) {
  r.items.push_back({std::move(name), passed, std::move(detail), sampled});
}

std::string k_name(const char* prefix, std::size_t k, const char* suffix) {
  return std::string(prefix) + std::to_string(k + 1) + suffix;
}

/// Largest |e(x) - x| over the samples, or the failure message.
HypothesisItem identity_item(const std::string& name, const Expression& e, const Interval& on,
                             std::size_t samples) {
  if (e.is_variable()) return {name, true, "structurally the identity", false};
  double worst = 0.0, where = on.lo();
  try {
    for (std::size_t i = 0; i < samples; ++i) {
      const double x = on.uniform_point(i, samples);
      const double d = std::abs(e(x) - x);
      if (d > worst) {
        worst = d;
        where = x;
      }
    }
  } catch (const Error& err) {
    return {name, false, err.what(), true};
  }
  const bool ok = worst <= 1e-12 * std::max(1.0, std::max(std::abs(on.lo()), std::abs(on.hi())));
  return {name, ok, "max |e(x) - x| = " + num(worst) + " at x = " + num(where), true};
}

/// Order preservation and range of an expression on `on`, probed densely.
HypothesisItem monotone_into_item(const std::string& name, const Expression& e,
                                  const Interval& on, const Interval& into, std::size_t samples) {
  const ProbeReport p = probe(e, on, samples);
  if (!p.ok()) {
    return {name, false,
            "domain error at x = " + num(p.domain_errors.front().x) + ": " +
                p.domain_errors.front().message,
            true};
  }
  std::string detail = "range [" + num(p.min) + ", " + num(p.max) + "] on [" + num(on.lo()) +
                       ", " + num(on.hi()) + "]";
  bool ok = true;
  if (!p.monotone_nondecreasing) {
    ok = false;
    detail += "; decreases somewhere";
  }
  if (!into.contains_with_slack(p.min) || !into.contains_with_slack(p.max)) {
    ok = false;
    detail += "; leaves [" + num(into.lo()) + ", " + num(into.hi()) + "]";
  }
  return {name, ok, detail, true};
}

HypothesisItem sampled_class_item(const std::string& name, const Expression& e,
                                  const Interval& J, double lower, double upper,
                                  std::size_t samples) {
  const std::string cls = "G(J; " + num(lower) + ", " + num(upper) + ")";
  try {
    const auto g = GridFunction::tabulate(e, J, uniform_nodes(J, samples), EvalMode::PiecewiseLinear);
    const auto verdict = in_G_class(g, J, lower, upper);
    return {name, verdict.member, (verdict.member ? "in " : "not in ") + cls + ": " + verdict.reason,
            true};
  } catch (const Error& err) {
    return {name, false, "not in " + cls + ": " + err.what(), true};
  }
}

}  // namespace

HypothesisReport check_banach_hypotheses(const ProductEquationSpec& spec, const ClassParams& cp,
                                         const ProbeOptions& options) {
  spec.validate();
  HypothesisReport r;
  r.path = "banach";
  const auto& lam = spec.exponents;
  const std::size_t n = spec.order();
  const Interval& J = spec.domain;

  const bool positive = J.lo() > 0.0;
  add(r, "interval_positive", positive,
      "J = [" + num(J.lo()) + ", " + num(J.hi()) + "]" +
          (positive ? "" : ": logarithmic conjugacy impossible (log 0 undefined)"));

  add(r, "lambda1_in_open_unit", lam[0] > 0.0 && lam[0] < 1.0, "lambda_1 = " + num(lam[0]));

  {
    bool ok = true;
    std::string detail = "all lambda_k >= 0 for k >= 2";
    for (std::size_t k = 1; k < n; ++k) {
      if (lam[k] < 0.0) {
        ok = false;
        detail = k_name("lambda_", k, " = ") + num(lam[k]) + " < 0";
        break;
      }
    }
    add(r, "lambdas_nonnegative", ok, detail);
  }

  const double sum = spec.exponent_sum();
  add(r, "lambdas_sum_to_one", std::abs(sum - 1.0) <= 1e-12, "sum lambda_k = " + num(sum));

  add(r, "class_bounds", cp.delta > 0.0 && cp.delta < 1.0 && cp.M > 1.0,
      "delta = " + num(cp.delta) + ", M = " + num(cp.M) + " (need 0 < delta < 1 < M)");

  bool sizes_ok = cp.l.size() == n && cp.L.size() == n;
  {
    std::string detail = "L_k >= l_k >= 0 for all k";
    bool ok = sizes_ok;
    if (!sizes_ok) {
      detail = "need " + std::to_string(n) + " values of l and L, got " +
               std::to_string(cp.l.size()) + " and " + std::to_string(cp.L.size());
    } else {
      for (std::size_t k = 0; k < n; ++k) {
        if (!(cp.L[k] >= cp.l[k] && cp.l[k] >= 0.0)) {
          ok = false;
          detail = k_name("l_", k, " = ") + num(cp.l[k]) + ", " + k_name("L_", k, " = ") +
                   num(cp.L[k]);
          break;
        }
      }
    }
    add(r, "slope_bounds_ordered", ok, detail);
  }

  for (std::size_t k = 0; k < n; ++k) {
    r.items.push_back(identity_item(k_name("psi_", k, "_identity"), spec.inner_maps[k], J,
                                    options.monotone_samples));
  }

  if (sizes_ok) {
    for (std::size_t k = 0; k < n; ++k) {
      const std::string name = k_name("xi_", k, "_in_class");
      if (!positive) {
        add(r, name, false, "not checked: J must lie in (0, inf)");
        continue;
      }
      r.items.push_back(sampled_class_item(name, spec.outer_maps[k], J, cp.l[k], cp.L[k],
                                           options.class_samples));
    }
    const DerivedConstants dc = derived_constants(lam, cp);
    add(r, "K_positive", dc.K > 0.0,
        "K0 = " + num(dc.K0) + ", K1 = " + num(dc.K1) + ", K = " + num(dc.K));
    if (positive) {
      r.items.push_back(sampled_class_item("target_in_class", spec.target, J, dc.K1 * cp.delta,
                                           dc.K0 * cp.M, options.class_samples));
    } else {
      add(r, "target_in_class", false, "not checked: J must lie in (0, inf)");
    }
  }
  return r;
}

HypothesisReport check_tarski_hypotheses(const ProductEquationSpec& spec,
                                         const ProbeOptions& options) {
  spec.validate();
  HypothesisReport r;
  r.path = "tarski";
  const auto& lam = spec.exponents;
  const std::size_t n = spec.order();
  const Interval& J = spec.domain;
  const double c = J.lo(), d = J.hi();
  const double delta = spec.floor;
  const double lambda = spec.exponent_sum();

  add(r, "floor_positive", delta > 0.0, "delta = " + num(delta));
  const bool floor_inside = c <= delta && delta <= d;
  add(r, "floor_in_interval", floor_inside,
      "c = " + num(c) + " <= delta = " + num(delta) + " <= d = " + num(d));
  add(r, "lambda_sum_positive", lambda > 0.0, "lambda = " + num(lambda));
  add(r, "lambda1_at_most_one", lam[0] <= 1.0, "lambda_1 = " + num(lam[0]));
  {
    bool ok = true;
    std::string detail = "all lambda_k <= 0 for k >= 2";
    for (std::size_t k = 1; k < n; ++k) {
      if (lam[k] > 0.0) {
        ok = false;
        detail = k_name("lambda_", k, " = ") + num(lam[k]) + " > 0";
        break;
      }
    }
    add(r, "lambdas_nonpositive", ok, detail);
  }

  r.items.push_back(identity_item("psi_1_identity", spec.inner_maps[0], J, options.monotone_samples));
  for (std::size_t k = 1; k < n; ++k) {
    r.items.push_back(monotone_into_item(k_name("psi_", k, "_order_preserving"),
                                         spec.inner_maps[k], J, J, options.monotone_samples));
  }

  const bool floor_usable = delta > 0.0 && delta < d;
  if (floor_usable) {
    const Interval upper_part(delta, d);
    r.items.push_back(identity_item("xi_1_identity", spec.outer_maps[0], upper_part,
                                    options.monotone_samples));
    for (std::size_t k = 1; k < n; ++k) {
      r.items.push_back(monotone_into_item(k_name("xi_", k, "_order_preserving"),
                                           spec.outer_maps[k], upper_part, upper_part,
                                           options.monotone_samples));
    }
    r.items.push_back(monotone_into_item("target_order_preserving", spec.target, J, upper_part,
                                         options.monotone_samples));
  } else {
    add(r, "xi_order_preserving", false, "not checked: need 0 < delta < d");
    add(r, "target_order_preserving", false, "not checked: need 0 < delta < d");
  }

  if (lambda > 0.0 && delta > 0.0) {
    try {
      const double gc = spec.target(c);
      const double gd = spec.target(d);
      const double low = std::pow(delta, lambda);
      const double high = std::pow(d, lambda);
      const double tol = 1e-12 * std::max(1.0, high);
      const double root_c = gc > 0.0 ? std::pow(gc, 1.0 / lambda) : 0.0;
      add(r, "target_lower_endpoint", gc >= low - tol,
          "G(c) = " + num(gc) + " vs delta^lambda = " + num(low) + "; G(c)^(1/lambda) = " +
              num(root_c) + " vs delta = " + num(delta));
      add(r, "target_upper_endpoint", gd <= high + tol,
          "G(d) = " + num(gd) + " vs d^lambda = " + num(high));
    } catch (const Error& err) {
      add(r, "target_lower_endpoint", false, err.what());
      add(r, "target_upper_endpoint", false, err.what());
    }
  } else {
    add(r, "target_lower_endpoint", false, "not checked: need lambda > 0 and delta > 0");
    add(r, "target_upper_endpoint", false, "not checked: need lambda > 0 and delta > 0");
  }
  return r;
}

GridFunction lower_class_envelope(const Interval& I, NodeVector nodes, double lower, double upper) {
  std::vector<double> v(nodes->size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = (*nodes)[i];
    v[i] = std::max(I.lo() + lower * (x - I.lo()), I.hi() - upper * (I.hi() - x));
  }
  v.front() = I.lo();
  v.back() = I.hi();
  return GridFunction(I, std::move(nodes), std::move(v), EvalMode::PiecewiseLinear);
}

GridFunction upper_class_envelope(const Interval& I, NodeVector nodes, double lower, double upper) {
  std::vector<double> v(nodes->size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = (*nodes)[i];
    v[i] = std::min(I.lo() + upper * (x - I.lo()), I.hi() - lower * (I.hi() - x));
  }
  v.front() = I.lo();
  v.back() = I.hi();
  return GridFunction(I, std::move(nodes), std::move(v), EvalMode::PiecewiseLinear);
}

}  // namespace ifes
