#include "ifes/tarski.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ifes {

TOperator build_T(const ProductEquationSpec& spec) {
  spec.validate();
  const auto& lam = spec.exponents;
  const double lambda = spec.exponent_sum();
  if (!(lambda > 0.0)) throw Error("operator T needs lambda = sum lambda_k > 0, got " + format_double(lambda));
  if (lam[0] > 1.0) throw Error("operator T needs lambda_1 <= 1, got " + format_double(lam[0]));
  for (std::size_t k = 1; k < lam.size(); ++k) {
    if (lam[k] > 0.0) {
      throw Error("operator T needs lambda_k <= 0 for k >= 2, got lambda_" + std::to_string(k + 1) +
                  " = " + format_double(lam[k]));
    }
  }
  TOperator T;
  T.spec = spec;
  T.alpha = lambda;
  T.alphas.resize(lam.size());
  T.alphas[0] = 1.0 - lam[0];
  for (std::size_t k = 1; k < lam.size(); ++k) T.alphas[k] = -lam[k];
  double total = T.alpha;
  for (double a : T.alphas) total += a;
  const double eps = std::numeric_limits<double>::epsilon();
  if (std::abs(total - 1.0) > 4.0 * eps * static_cast<double>(lam.size() + 1)) {
    throw Error("exponent identity alpha + sum alpha_k = 1 fails: got " + format_double(total));
  }
  T.H = pow(spec.target, 1.0 / lambda);
  return T;
}

TarskiOperator::TarskiOperator(TOperator T, NodeVector nodes)
    : T_(std::move(T)), nodes_(std::move(nodes)) {
  const auto& x = *nodes_;
  const Interval& J = T_.spec.domain;
  inner_.resize(T_.spec.order());
  for (std::size_t k = 1; k < T_.spec.order(); ++k) {
    inner_[k].resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double y = T_.spec.inner_maps[k](x[i]);
      if (!J.contains_with_slack(y)) {
        throw RangeError("inner map psi_" + std::to_string(k + 1) + " sends " + format_double(x[i]) +
                         " outside J");
      }
      inner_[k][i] = J.clamp(y);
    }
  }
  h_alpha_.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) h_alpha_[i] = checked_pow(T_.H(x[i]), T_.alpha);
}

GridFunction TarskiOperator::operator()(const GridFunction& g, ApplyStats* stats) const {
  if (!(g.node_vector() == nodes_ ||
        std::equal(g.nodes().begin(), g.nodes().end(), nodes_->begin(), nodes_->end()))) {
    throw RangeError("apply_T: function lives on a different grid");
  }
  const double delta = T_.spec.floor;
  const double d = T_.spec.domain.hi();
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    double v = checked_pow(g.value(i), T_.alphas[0]);
    for (std::size_t k = 1; k < T_.spec.order(); ++k) {
      double y = inner_[k][i];
      for (std::size_t j = 0; j <= k; ++j) y = g(y);
      const Expression& xi = T_.spec.outer_maps[k];
      v *= checked_pow(xi.is_variable() ? y : xi(y), T_.alphas[k]);
    }
    v *= h_alpha_[i];
    if (v < delta) {
      if (stats) {
        ++stats->floor_clamps;
        stats->max_excursion = std::max(stats->max_excursion, delta - v);
      }
      v = delta;
    } else if (v > d) {
      if (stats) {
        ++stats->ceiling_clamps;
        stats->max_excursion = std::max(stats->max_excursion, v - d);
      }
      v = d;
    }
    out[i] = v;
  }
  return GridFunction(g.domain(), g.node_vector(), std::move(out), g.mode(), delta);
}

GridFunction apply_T(const TOperator& T, const GridFunction& g, ApplyStats* stats) {
  return TarskiOperator(T, g.node_vector())(g, stats);
}

double residual(const ProductEquationSpec& spec, const GridFunction& g, std::size_t factor) {
  return product_residual(spec, g, factor).value;
}

namespace {

PathResult run_path(const TarskiOperator& op, const ValueGrid& levels, bool ascending,
                    const TarskiConfig& cfg) {
  const ProductEquationSpec& spec = op.op().spec;
  const Interval& J = spec.domain;
  const std::size_t max_sweeps = cfg.max_sweeps ? cfg.max_sweeps : (cfg.grid + 1) * cfg.levels;
  const Rounding rounding = ascending ? Rounding::Down : Rounding::Up;
  const Order expected = ascending ? Order::GreaterEq : Order::LessEq;

  GridFunction g = GridFunction::constant(J, op.nodes(), ascending ? levels.lowest() : levels.highest(),
                                          cfg.mode, spec.floor);
  ApplyStats stats;
  std::size_t sweeps = 0;
  while (true) {
    GridFunction next = quantize(op(g, &stats), levels, rounding);
    const Order order = pointwise_order(next, g);
    if (order == Order::Equal) break;
    if (order != expected) {
      throw MonotonicityViolation(sweeps, sweeps + 1,
                                  std::string("Kleene sweep ") + std::to_string(sweeps + 1) +
                                      " did not " + (ascending ? "ascend" : "descend"));
    }
    g = std::move(next);
    if (++sweeps > max_sweeps) {
      throw Error("Kleene iteration exceeded " + std::to_string(max_sweeps) + " sweeps");
    }
  }

  PathResult r{g, sweeps, false, {}, {}, 0.0, 0};
  const GridFunction image = op(g);
  r.fixed_point_defect = sup_distance(image, g);
  if (cfg.mode == EvalMode::PiecewiseLinear) {
    r.certified = false;
    r.certificate = "piecewise-linear mode carries no certificate; residual only";
  } else {
    const Order o = pointwise_order(image, g);
    r.certified = o == Order::Equal || o == expected;
    r.certificate = std::string(ascending ? "sub-solution T(g) >= g: " : "super-solution T(g) <= g: ") +
                    (r.certified ? "holds at every node" : "fails");
  }
  r.residual = product_residual(spec, g, cfg.verification_factor);
  r.clamps = stats.floor_clamps + stats.ceiling_clamps;
  return r;
}

TarskiResult solve(const ProductEquationSpec& spec, const TarskiConfig& cfg, bool want_min,
                   bool want_max) {
  TarskiResult result;
  result.hypotheses.path = "tarski";
  if (cfg.check_hypotheses) {
    result.hypotheses = check_tarski_hypotheses(spec);
    if (!result.hypotheses.all_passed()) throw HypothesisFailure(result.hypotheses);
  }
  if (cfg.grid < 1 || cfg.levels < 1) throw Error("Tarski solve needs grid >= 1 and levels >= 1");
  const TarskiOperator op(build_T(spec), uniform_nodes(spec.domain, cfg.grid + 1));
  const ValueGrid levels = ValueGrid::uniform(spec.floor, spec.domain.hi(), cfg.levels);
  if (want_min) result.min = run_path(op, levels, true, cfg);
  if (want_max) result.max = run_path(op, levels, false, cfg);
  if (result.min && result.max) {
    const Order o = pointwise_order(result.min->g, result.max->g);
    result.ordered = o == Order::LessEq || o == Order::Equal;
  }
  return result;
}

}  // namespace

TarskiResult solve_min(const ProductEquationSpec& spec, const TarskiConfig& cfg) {
  return solve(spec, cfg, true, false);
}

TarskiResult solve_max(const ProductEquationSpec& spec, const TarskiConfig& cfg) {
  return solve(spec, cfg, false, true);
}

TarskiResult solve_both(const ProductEquationSpec& spec, const TarskiConfig& cfg) {
  return solve(spec, cfg, true, true);
}

const char* to_string(UniquenessStatus status) {
  switch (status) {
    case UniquenessStatus::Equal: return "equal";
    case UniquenessStatus::Distinct: return "distinct";
    case UniquenessStatus::ResidualTooLarge: return "not applicable: residual too large";
    case UniquenessStatus::Incomparable: return "not applicable: incomparable";
    case UniquenessStatus::NotCommuting: return "not applicable: commutation fails";
    case UniquenessStatus::NotStrict: return "not applicable: first factor not strictly increasing";
  }
  return "?";
}

namespace {

/// Shared preconditions; returns a verdict when one of them fails.
std::optional<UniquenessVerdict> preconditions(const ProductEquationSpec& spec,
                                               const GridFunction& g1, const GridFunction& g2,
                                               const UniquenessOptions& options,
                                               UniquenessVerdict& v) {
  if (!g1.same_nodes(g2)) throw RangeError("uniqueness check: functions on different grids");
  v.probe_samples = options.probe_samples;
  v.residual1 = residual(spec, g1);
  v.residual2 = residual(spec, g2);
  if (v.residual1 > options.residual_tol || v.residual2 > options.residual_tol) {
    v.status = UniquenessStatus::ResidualTooLarge;
    v.detail = "residuals " + format_double(v.residual1) + " and " + format_double(v.residual2) +
               " vs tolerance " + format_double(options.residual_tol);
    return v;
  }
  const Interval range(spec.floor, spec.domain.hi());
  const ProbeReport p = probe(pow(spec.outer_maps[0], spec.exponents[0]), range, options.probe_samples);
  if (!p.ok() || !p.strictly_increasing) {
    v.status = UniquenessStatus::NotStrict;
    v.detail = "y -> Xi_1(y)^lambda_1 is not strictly increasing on [delta, d] (" +
               std::to_string(options.probe_samples) + " samples)";
    return v;
  }
  return std::nullopt;
}

void decide_distance(const GridFunction& g1, const GridFunction& g2,
                     const UniquenessOptions& options, UniquenessVerdict& v) {
  std::size_t at = 0;
  for (std::size_t i = 0; i < g1.size(); ++i) {
    const double d = std::abs(g1.value(i) - g2.value(i));
    if (d > v.distance) {
      v.distance = d;
      at = i;
    }
  }
  v.witness = g1.nodes()[at];
  v.status = v.distance <= options.equality_tol ? UniquenessStatus::Equal : UniquenessStatus::Distinct;
  v.detail = "sup distance " + format_double(v.distance) + " at x = " + format_double(*v.witness) +
             " vs tolerance " + format_double(options.equality_tol);
}

}  // namespace

UniquenessVerdict uniqueness_comparable(const ProductEquationSpec& spec, const GridFunction& g1,
                                        const GridFunction& g2, const UniquenessOptions& options) {
  UniquenessVerdict v;
  if (auto early = preconditions(spec, g1, g2, options, v)) return *early;
  if (pointwise_order(g1, g2) == Order::Incomparable) {
    v.status = UniquenessStatus::Incomparable;
    for (std::size_t i = 0; i < g1.size(); ++i) {
      if (g1.value(i) > g2.value(i)) {
        v.witness = g1.nodes()[i];
        break;
      }
    }
    v.detail = "functions cross; g1 > g2 at x = " + format_double(*v.witness);
    return v;
  }
  decide_distance(g1, g2, options, v);
  return v;
}

UniquenessVerdict uniqueness_commuting(const ProductEquationSpec& spec, const GridFunction& g1,
                                       const GridFunction& g2, const UniquenessOptions& options) {
  UniquenessVerdict v;
  if (auto early = preconditions(spec, g1, g2, options, v)) return *early;
  const double tol = g1.mode() == EvalMode::PiecewiseLinear ? 1e-12 : 0.0;
  for (std::size_t i = 0; i < g1.size(); ++i) {
    const double a = g1(g2.value(i));
    const double b = g2(g1.value(i));
    if (std::abs(a - b) > tol) {
      v.status = UniquenessStatus::NotCommuting;
      v.witness = g1.nodes()[i];
      v.detail = "g1(g2(x)) = " + format_double(a) + " but g2(g1(x)) = " + format_double(b) +
                 " at x = " + format_double(g1.nodes()[i]);
      return v;
    }
  }
  decide_distance(g1, g2, options, v);
  return v;
}

}  // namespace ifes
