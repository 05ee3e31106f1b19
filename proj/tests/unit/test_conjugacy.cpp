#include <doctest.h>

#include <cmath>

#include "ifes/banach.hpp"
#include "ifes/classes.hpp"
#include "ifes/conjugacy.hpp"
#include "ifes/errors.hpp"
#include "support.hpp"

using namespace ifes;

namespace {

const double kE = std::exp(1.0);

/// Piecewise linear self-map of [0, 1] whose slopes are drawn from [lo, hi] and then
/// rescaled to fix both endpoints.
GridFunction random_f(std::mt19937_64& rng, const NodeVector& nodes, double lo, double hi) {
  const std::size_t m = nodes->size() - 1;
  std::vector<double> slope(m);
  double total = 0.0;
  for (auto& s : slope) total += (s = testing::uniform(rng, lo, hi));
  std::vector<double> v(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) v[i + 1] = v[i] + slope[i] / total;
  v[m] = 1.0;
  return GridFunction(Interval(0.0, 1.0), nodes, v, EvalMode::PiecewiseLinear);
}

}  // namespace

TEST_SUITE("conjugacy") {
  TEST_CASE("log_conjugate_spec on the continuous example") {
    const SumEquationSpec s = log_conjugate_spec(testing::exmp1_spec());
    CHECK(s.domain.lo() == 0.0);
    CHECK(s.domain.hi() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.exponents == std::vector<double>{0.8, 0.2});
    for (double x : {0.0, 0.1, 0.37, 0.5, 0.9, 1.0}) {
      CHECK(s.target(x) == doctest::Approx((x * x + x) / 2).epsilon(1e-13));
      CHECK(s.outer_maps[0](x) == doctest::Approx(x).epsilon(1e-15));
      CHECK(s.outer_maps[1](x) == doctest::Approx(x * x).epsilon(1e-13));
      CHECK(s.inner_maps[1](x) == doctest::Approx(x).epsilon(1e-15));
    }
    CHECK(s.outer_maps[0].is_variable());  // log(exp(x)) collapses
  }

  TEST_CASE("log_conjugate_spec: trivial instance and the zero problem") {
    const ProductEquationSpec p = testing::make_spec(Interval(1.0, 2.0), {1.0}, "x", {"x"}, {"x"}, 1.0);
    const SumEquationSpec s = log_conjugate_spec(p);
    CHECK(s.domain.hi() == doctest::Approx(std::log(2.0)));
    CHECK(s.target(0.3) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK_THROWS_AS(log_conjugate_spec(testing::e1_spec()), ZeroProblemError);
  }

  TEST_CASE("exp/log conjugation of functions") {
    const Interval I(0.0, 1.0);
    const auto nodes = uniform_nodes(I, 65);
    const GridFunction g = exp_conjugate_function(GridFunction::identity(I, nodes, EvalMode::PiecewiseLinear));
    CHECK(g.domain().lo() == 1.0);
    CHECK(g.domain().hi() == doctest::Approx(kE).epsilon(1e-15));
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(g.value(i) == g.nodes()[i]);

    // f(x) = x/2 leaves 1 unfixed; the conjugate is sqrt on the nodes all the same.
    std::vector<double> v(65);
    for (std::size_t i = 0; i < 65; ++i) v[i] = (*nodes)[i] / 2;
    const GridFunction f(I, nodes, v, EvalMode::PiecewiseLinear);
    const GridFunction sq = exp_conjugate_function(f);
    for (std::size_t i = 0; i < sq.size(); ++i) CHECK(sq.value(i) == doctest::Approx(std::sqrt(sq.nodes()[i])).epsilon(1e-12));

    CHECK_THROWS_AS(log_conjugate_function(GridFunction::identity(I, nodes, EvalMode::PiecewiseLinear)), ZeroProblemError);
  }

  TEST_CASE("property: exp/log round trip") {
    auto rng = testing::make_rng(31);
    const Interval I(0.0, 1.0);
    const auto nodes = uniform_nodes(I, 129);
    for (int t = 0; t < 100; ++t) {
      const GridFunction f = random_f(rng, nodes, 0.1, 5.0);
      const GridFunction back = log_conjugate_function(exp_conjugate_function(f), I);
      REQUIRE(back.size() == f.size());
      for (std::size_t i = 0; i < f.size(); ++i) {
        CHECK(back.nodes()[i] == doctest::Approx(f.nodes()[i]).epsilon(1e-15).scale(1.0));
        CHECK(std::abs(back.value(i) - f.value(i)) <= 4e-16);
      }
      CHECK(back.value(0) == 0.0);
      CHECK(back.value(128) == 1.0);
    }
  }

  TEST_CASE("reflect_spec: worked cases and involution") {
    const ProductEquationSpec p = testing::make_spec(Interval(1.0, 2.0), {1.0}, "x^2", {"x"}, {"x"}, 1.0);
    const Reflection r = reflect_spec(p);
    CHECK(r.spec.domain == Interval(-2.0, -1.0));
    for (double x : {-2.0, -1.5, -1.0}) CHECK(r.spec.target(x) == -x * x);
    CHECK(r.spec.outer_maps[0](-1.25) == -1.25);
    const Reflection back = reflect_spec(r.spec);
    CHECK(back.spec.domain == p.domain);
    CHECK(back.spec.target == p.target);
    CHECK(back.spec.outer_maps == p.outer_maps);
    CHECK(back.spec.inner_maps == p.inner_maps);
    CHECK(r.exponent_parity_ok);

    const Reflection ex = reflect_spec(testing::exmp1_spec());
    CHECK_FALSE(ex.exponent_parity_ok);
    CHECK_FALSE(ex.diagnostics.empty());
    CHECK_THROWS_AS(reflect_spec(testing::e1_spec()), Error);  // 0 in J
  }

  TEST_CASE("reflect_function: identity and involution") {
    const Interval J(1.0, 2.0);
    const auto nodes = uniform_nodes(J, 33);
    const GridFunction id = GridFunction::identity(J, nodes, EvalMode::StepUSC);
    const GridFunction r = reflect_function(id);
    CHECK(r.domain() == Interval(-2.0, -1.0));
    CHECK(r.mode() == EvalMode::StepLSC);
    for (std::size_t i = 0; i < r.size(); ++i) CHECK(r.value(i) == r.nodes()[i]);
    auto rng = testing::make_rng(32);
    const GridFunction g(J, nodes, testing::random_monotone_reals(rng, 33, 1.0, 2.0), EvalMode::StepUSC);
    const GridFunction gg = reflect_function(reflect_function(g));
    CHECK(gg.mode() == EvalMode::StepUSC);
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(gg.nodes()[i] == g.nodes()[i]);
      CHECK(gg.value(i) == g.value(i));
    }
    // -g(-x) evaluated off-grid agrees with the reflected step function.
    for (double x : {-1.99, -1.5, -1.031, -1.0}) CHECK(r(x) == -id(-x));
  }

  TEST_CASE("property: class transport between G and F") {
    auto rng = testing::make_rng(33);
    const Interval I(0.0, 1.0);
    const auto nodes = uniform_nodes(I, 33);
    int members = 0;
    int outsiders = 0;
    for (int t = 0; t < 300; ++t) {
      const bool tight = t % 2 == 0;
      const GridFunction f = tight ? random_f(rng, nodes, 0.5, 2.0) : random_f(rng, nodes, 0.01, 10.0);
      const MembershipVerdict vf = in_F_class(f, I, 0.2, 4.0);
      const GridFunction g = exp_conjugate_function(f);
      const MembershipVerdict vg = in_G_class(g, g.domain(), 0.2, 4.0);
      CHECK(vf.member == vg.member);
      (vf.member ? members : outsiders)++;
    }
    CHECK(members > 50);
    CHECK(outsiders > 50);
  }

  TEST_CASE("solution transport on the continuous example") {
    const ProductEquationSpec spec = testing::exmp1_spec();
    BanachConfig cfg;
    cfg.grid = 256;
    cfg.classes = testing::exmp1_classes();
    const ProductSolution sol = solve_product_continuous(spec, cfg);
    REQUIRE(sol.report.converged);
    const SumEquationSpec sum = log_conjugate_spec(spec);
    const GridFunction f = log_conjugate_function(sol.g, sum.domain);
    const double c = spec.domain.lo();
    CHECK(sum_residual(sum, f).value <= sol.report.residual.value / c + 1e-12);
    // Solving through conjugacy is the same computation as conjugating the sum solution.
    const GridFunction g2 = exp_conjugate_function(solve_sum(sum, cfg).f, spec.domain);
    CHECK(g2 == sol.g);
  }
}
