#include "ifes/banach.hpp"

#include <algorithm>
#include <cmath>

#include "ifes/conjugacy.hpp"

namespace ifes {

PicardOperator::PicardOperator(const SumEquationSpec& spec, NodeVector nodes, double bisection_tol)
    : spec_(spec), nodes_(std::move(nodes)), bisection_tol_(bisection_tol) {
  spec_.validate();
  if (!(spec_.exponents[0] > 0.0)) throw Error("Picard operator needs lambda_1 > 0");
  if (!spec_.inner_maps[0].is_variable()) {
    throw Error("Picard operator needs the first inner map to be the identity");
  }
  target_.resize(nodes_->size());
  for (std::size_t i = 0; i < target_.size(); ++i) target_[i] = spec_.target((*nodes_)[i]);
}

double PicardOperator::invert_first(double t, PicardStats* stats) const {
  const Interval& I = spec_.domain;
  const Expression& u = spec_.outer_maps[0];
  auto clamp_to = [&](double endpoint, bool counted) {
    if (counted && stats) ++stats->clamps;
    return endpoint;
  };
  if (u.is_variable()) {
    if (t < I.lo()) return clamp_to(I.lo(), t < I.lo() - I.slack());
    if (t > I.hi()) return clamp_to(I.hi(), t > I.hi() + I.slack());
    return t;
  }
  const double u_lo = u(I.lo());
  const double u_hi = u(I.hi());
  const double slack = 1e-12 * std::max({1.0, std::abs(u_lo), std::abs(u_hi)});
  if (t <= u_lo) return clamp_to(I.lo(), t < u_lo - slack);
  if (t >= u_hi) return clamp_to(I.hi(), t > u_hi + slack);
  double lo = I.lo(), hi = I.hi();
  for (int it = 0; it < 200 && hi - lo > bisection_tol_; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (u(mid) < t) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

GridFunction PicardOperator::operator()(const GridFunction& f, PicardStats* stats) const {
  if (!(f.node_vector() == nodes_ || std::equal(f.nodes().begin(), f.nodes().end(),
                                                nodes_->begin(), nodes_->end()))) {
    throw RangeError("Picard step: iterate lives on a different grid");
  }
  const auto& x = *nodes_;
  const double lambda1 = spec_.exponents[0];
  std::vector<double> next(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double s = target_[i];
    for (std::size_t k = 1; k < spec_.order(); ++k) {
      const double y = iterate_at(f, spec_.inner_maps[k], k + 1, x[i]);
      const double u = spec_.outer_maps[k].is_variable() ? y : spec_.outer_maps[k](y);
      s -= spec_.exponents[k] * u;
    }
    next[i] = invert_first(s / lambda1, stats);
  }
  const Interval& I = spec_.domain;
  if (std::abs(next.front() - I.lo()) > kEndpointTolerance ||
      std::abs(next.back() - I.hi()) > kEndpointTolerance) {
    throw Error("Picard step moved an endpoint: L f(a) = " + format_double(next.front()) +
                ", L f(b) = " + format_double(next.back()) + " on [" + format_double(I.lo()) +
                ", " + format_double(I.hi()) + "]");
  }
  next.front() = I.lo();
  next.back() = I.hi();
  return GridFunction(I, nodes_, std::move(next), f.mode());
}

GridFunction picard_step(const GridFunction& f, const SumEquationSpec& spec, PicardStats* stats) {
  return PicardOperator(spec, f.node_vector())(f, stats);
}

SumSolution solve_sum(const SumEquationSpec& spec, const BanachConfig& cfg,
                      std::optional<GridFunction> start) {
  if (!(cfg.tol > 0.0)) throw Error("Banach tolerance must be positive");
  if (!(cfg.relaxation > 0.0 && cfg.relaxation <= 1.0)) {
    throw Error("relaxation weight must lie in (0, 1]");
  }
  if (cfg.grid < 1) throw Error("Banach grid needs at least one interval");
  const Interval& I = spec.domain;
  const NodeVector nodes = start ? start->node_vector() : uniform_nodes(I, cfg.grid + 1);
  const PicardOperator op(spec, nodes, cfg.bisection_tol);

  GridFunction f = start ? start->with_mode(EvalMode::PiecewiseLinear)
                         : GridFunction::identity(I, nodes, EvalMode::PiecewiseLinear);
  SolveReport report;
  PicardStats stats;
  const double noise = 1e-12 * std::max({1.0, std::abs(I.lo()), std::abs(I.hi())});
  const double w = cfg.relaxation;
  while (report.iterations < cfg.max_iter) {
    GridFunction next = op(f, &stats);
    const double step = sup_distance(next, f);
    if (w != 1.0) {
      std::vector<double> mixed(next.size());
      for (std::size_t i = 0; i < mixed.size(); ++i) {
        mixed[i] = (1.0 - w) * f.value(i) + w * next.value(i);
      }
      mixed.front() = I.lo();
      mixed.back() = I.hi();
      next = next.with_values(std::move(mixed));
    }
    f = std::move(next);
    ++report.iterations;
    report.step_history.push_back(step);
    const std::size_t j = report.step_history.size() - 1;
    if (j >= 1 && report.step_history[j - 1] > noise) {
      report.contraction_estimate =
          std::max(report.contraction_estimate, step / report.step_history[j - 1]);
    }
    if (j >= 2 && step > noise && step > 1.05 * report.step_history[j - 1]) {
      report.steps_nonincreasing = false;
    }
    if (step < cfg.tol) {
      report.converged = true;
      break;
    }
  }
  report.final_step = report.step_history.empty() ? 0.0 : report.step_history.back();
  report.clamp_count = stats.clamps;
  report.residual = sum_residual(spec, f, cfg.verification_factor);
  if (cfg.classes.M > 0.0) {
    report.class_verdict = in_F_class(f, I, cfg.classes.delta, cfg.classes.M);
  } else {
    report.class_verdict = {false, "no class parameters given", {}};
  }
  return {std::move(f), std::move(report)};
}

ProductSolution solve_product_continuous(const ProductEquationSpec& spec, const BanachConfig& cfg) {
  const SumEquationSpec sum_spec = log_conjugate_spec(spec);
  SumSolution sum = solve_sum(sum_spec, cfg);
  GridFunction g = exp_conjugate_function(sum.f, spec.domain);
  SolveReport report = sum.report;
  report.residual = product_residual(spec, g, cfg.verification_factor);
  if (cfg.classes.M > 0.0) {
    report.class_verdict = in_G_class(g, spec.domain, cfg.classes.delta, cfg.classes.M);
  } else {
    report.class_verdict = {false, "no class parameters given", {}};
  }
  return {std::move(g), std::move(report), std::move(sum)};
}

StabilityReport stability_check(const ProductEquationSpec& spec,
                                const ProductEquationSpec& perturbed, const GridFunction& g,
                                const GridFunction& g1, const DerivedConstants& constants,
                                double slack, std::size_t verification_factor) {
  const Interval& J = spec.domain;
  if (!(J == perturbed.domain)) throw RangeError("stability check: specs live on different intervals");
  if (J.lo() <= 0.0) throw ZeroProblemError("stability check needs J inside (0, inf)");
  if (!(constants.K > 0.0)) throw Error("stability check needs K > 0");

  StabilityReport r;
  r.slack = slack;
  r.factor = J.hi() / (J.lo() * constants.K);
  for (double x : verification_points(J, std::max(g.size(), g1.size()), verification_factor)) {
    r.solution_gap = std::max(r.solution_gap, std::abs(g(x) - g1(x)));
    r.target_gap = std::max(r.target_gap, std::abs(spec.target(x) - perturbed.target(x)));
  }
  r.holds = r.solution_gap <= r.factor * r.target_gap + slack;

  const Interval I(std::log(J.lo()), std::log(J.hi()));
  const GridFunction f = log_conjugate_function(g, I);
  const GridFunction f1 = log_conjugate_function(g1, I);
  const Expression F = log_conjugate(spec.target);
  const Expression F1 = log_conjugate(perturbed.target);
  for (double x : verification_points(I, std::max(f.size(), f1.size()), verification_factor)) {
    r.log_solution_gap = std::max(r.log_solution_gap, std::abs(f(x) - f1(x)));
    r.log_target_gap = std::max(r.log_target_gap, std::abs(F(x) - F1(x)));
  }
  r.log_holds = r.log_solution_gap <= r.log_target_gap / constants.K + slack;
  return r;
}

}  // namespace ifes
