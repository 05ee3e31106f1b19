#include <doctest.h>

#include <cmath>
#include <set>

#include "ifes/errors.hpp"
#include "ifes/lattice.hpp"
#include "ifes/tarski.hpp"
#include "support.hpp"

using namespace ifes;

namespace {

TarskiConfig config(std::size_t grid, std::size_t levels, EvalMode mode = EvalMode::StepUSC) {
  TarskiConfig cfg;
  cfg.grid = grid;
  cfg.levels = levels;
  cfg.mode = mode;
  return cfg;
}

bool below(const GridFunction& a, const GridFunction& b) {
  const Order o = pointwise_order(a, b);
  return o == Order::LessEq || o == Order::Equal;
}

}  // namespace

TEST_SUITE("tarski") {
  TEST_CASE("build_T: exponents of the order examples") {
    const TOperator e1 = build_T(testing::e1_spec());
    CHECK(e1.alpha == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(e1.alphas[0] == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(e1.alphas[1] == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(e1.alpha + e1.alphas[0] + e1.alphas[1] == doctest::Approx(1.0).epsilon(1e-15));
    const TOperator ex2 = build_T(testing::ex2_spec());
    CHECK(ex2.alpha == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(ex2.alphas[0] == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(ex2.alphas[1] == doctest::Approx(0.1).epsilon(1e-15));
    const TOperator one = build_T(testing::make_spec(Interval(0.0, 1.0), {1.0}, "x^2", {"x"}, {"x"}, 0.1));
    CHECK(one.alpha == 1.0);
    CHECK(one.alphas[0] == 0.0);
    CHECK(one.H(0.5) == doctest::Approx(0.25));

    ProductEquationSpec bad = testing::e1_spec();
    bad.exponents = {0.8, 0.1};
    CHECK_THROWS_AS(build_T(bad), Error);
    bad.exponents = {1.2, -0.3};
    CHECK_THROWS_AS(build_T(bad), Error);
    bad.exponents = {0.3, -0.3};
    CHECK_THROWS_AS(build_T(bad), Error);
  }

  TEST_CASE("apply_T: scalar hand computation on E1") {
    const ProductEquationSpec spec = testing::e1_spec();
    const auto nodes = uniform_nodes(spec.domain, 9);
    const GridFunction g = GridFunction::constant(spec.domain, nodes, 0.2, EvalMode::StepUSC, 0.2);
    const GridFunction Tg = apply_T(build_T(spec), g);
    const double want = std::pow(0.2, 0.2) * std::pow((std::pow(0.2, 4) + 1) / 3, 0.3) * std::pow(0.25, 0.5);
    CHECK(Tg.value(0) == doctest::Approx(want).epsilon(1e-14));
    CHECK(Tg.value(0) == doctest::Approx(0.26079).epsilon(1e-4));
    CHECK(Tg.floor() == std::optional<double>(0.2));
  }

  TEST_CASE("apply_T: identity instance fixes the identity") {
    const ProductEquationSpec spec = testing::identity_instance();
    const auto nodes = uniform_nodes(spec.domain, 65);
    const GridFunction id = GridFunction::identity(spec.domain, nodes, EvalMode::StepUSC);
    CHECK(sup_distance(apply_T(build_T(spec), id), id) <= 1e-15);
    // Off the nodes a step function is not x; the interpolated identity is.
    const GridFunction pl = GridFunction::identity(spec.domain, nodes, EvalMode::PiecewiseLinear);
    CHECK(residual(spec, pl) <= 1e-15);
    CHECK(residual(spec, id) > 0.0);
    CHECK(residual(spec, id) <= 0.8 / 64);
  }

  TEST_CASE("property: range containment and monotonicity of T on E1") {
    const ProductEquationSpec spec = testing::e1_spec();
    const auto nodes = uniform_nodes(spec.domain, 33);
    const TarskiOperator T(build_T(spec), nodes);
    const ValueGrid vg = ValueGrid::uniform(0.2, 1.0, 32);
    auto rng = testing::make_rng(71);
    for (EvalMode mode : {EvalMode::StepUSC, EvalMode::StepLSC}) {
      for (int t = 0; t < 150; ++t) {
        const GridFunction g1(spec.domain, nodes, testing::random_monotone_values(rng, 33, vg.levels()), mode, 0.2);
        std::vector<double> v2(g1.values().begin(), g1.values().end());
        for (auto& v : v2) {
          if (testing::pick(rng, 2) == 0) v = std::max(v, vg.levels()[testing::pick(rng, vg.size())]);
        }
        for (std::size_t i = 1; i < v2.size(); ++i) v2[i] = std::max(v2[i], v2[i - 1]);
        const GridFunction g2 = g1.with_values(v2);
        REQUIRE(below(g1, g2));
        ApplyStats stats;
        const GridFunction t1 = T(g1, &stats);
        const GridFunction t2 = T(g2, &stats);
        CHECK(stats.floor_clamps == 0);
        CHECK(stats.ceiling_clamps == 0);
        for (double v : t1.values()) {
          CHECK(v >= 0.2);
          CHECK(v <= 1.0);
        }
        CHECK(t1.is_monotone());
        CHECK(below(t1, t2));
      }
    }
  }

  TEST_CASE("solve_both on E1 at a coarse resolution") {
    const ProductEquationSpec spec = testing::e1_spec();
    const TarskiResult r = solve_both(spec, config(64, 64));
    REQUIRE(r.min);
    REQUIRE(r.max);
    CHECK(r.min->certified);
    CHECK(r.max->certified);
    CHECK(r.ordered == std::optional<bool>(true));
    CHECK(r.min->g.is_monotone());
    CHECK(r.max->g.is_monotone());
    CHECK(r.min->sweeps <= 65 * 64);
    CHECK(r.hypotheses.all_passed());
    const GridFunction floor = GridFunction::constant(spec.domain, r.min->g.node_vector(), 0.2, EvalMode::StepUSC);
    CHECK(residual(spec, floor) > 0.1);
    CHECK(r.min->residual.value <= residual(spec, floor));
    CHECK(r.min->residual.value < 0.05);
  }

  TEST_CASE("solve: hypothesis failure is raised") {
    ProductEquationSpec bad = testing::e1_spec();
    bad.floor = 0.3;
    CHECK_THROWS_AS(solve_min(bad, config(16, 16)), HypothesisFailure);
  }

  TEST_CASE("solve: piecewise-linear mode is never certified") {
    const TarskiResult r = solve_min(testing::e1_spec(), config(32, 32, EvalMode::PiecewiseLinear));
    REQUIRE(r.min);
    CHECK_FALSE(r.min->certified);
    CHECK_FALSE(r.max.has_value());
  }

  TEST_CASE("identity instance: min and max approach the identity at the level spacing") {
    const ProductEquationSpec spec = testing::identity_instance();
    double previous = 0.0;
    for (std::size_t p : {256, 512}) {
      const TarskiResult r = solve_both(spec, config(p, p));
      REQUIRE(r.min);
      REQUIRE(r.max);
      CHECK(r.min->certified);
      CHECK(r.max->certified);
      const GridFunction id = GridFunction::identity(spec.domain, r.min->g.node_vector(), EvalMode::StepUSC);
      const double level = 0.8 / static_cast<double>(p);
      const double d = std::max(sup_distance(r.min->g, id), sup_distance(r.max->g, id));
      CHECK(d <= 4 * level);
      if (previous > 0.0) {
        CHECK(previous / d >= 1.5);
        CHECK(previous / d <= 2.5);
      }
      previous = d;
      UniquenessOptions uo;
      uo.equality_tol = 8 * level;
      uo.residual_tol = 0.05;
      CHECK(uniqueness_comparable(spec, r.min->g, r.max->g, uo).status == UniquenessStatus::Equal);
    }
  }

  TEST_CASE("bracketing: every quantized fixed point lies between min and max") {
    // 4 nodes, 5 value levels: the lattice of monotone level vectors has 70 elements.
    const ProductEquationSpec spec = testing::e1_spec();
    const auto cfg = config(3, 4);
    const TarskiResult r = solve_both(spec, cfg);
    REQUIRE(r.min);
    REQUIRE(r.max);
    const auto nodes = r.min->g.node_vector();
    const ValueGrid vg = ValueGrid::uniform(0.2, 1.0, 4);
    const auto mv = monotone_vector_lattice(4, 5);
    const TarskiOperator T(build_T(spec), nodes);
    auto as_function = [&](const std::vector<int>& idx) {
      std::vector<double> v;
      for (int i : idx) v.push_back(vg.levels()[static_cast<std::size_t>(i)]);
      return GridFunction(spec.domain, nodes, v, EvalMode::StepUSC, 0.2);
    };
    auto as_element = [&](const GridFunction& g) {
      std::vector<int> idx;
      for (double v : g.values()) idx.push_back(static_cast<int>(*vg.index_of(v)));
      return *mv.index_of(idx);
    };
    MonotoneMap down, up;
    for (const auto& e : mv.elements) {
      const GridFunction tg = T(as_function(e));
      down.image.push_back(as_element(quantize(tg, vg, Rounding::Down)));
      up.image.push_back(as_element(quantize(tg, vg, Rounding::Up)));
    }
    REQUIRE(verify_monotone(mv.lattice, down).preserving);
    REQUIRE(verify_monotone(mv.lattice, up).preserving);
    const Element gmin = as_element(r.min->g);
    const Element gmax = as_element(r.max->g);
    CHECK(knaster_tarski_min(mv.lattice, down) == gmin);
    CHECK(knaster_tarski_max(mv.lattice, up) == gmax);
    std::size_t seen = 0;
    for (const MonotoneMap* m : {&down, &up}) {
      for (Element h : fixed_point_set(mv.lattice, *m)) {
        ++seen;
        CHECK(mv.lattice.leq(gmin, h));
        CHECK(mv.lattice.leq(h, gmax));
      }
    }
    CHECK(seen >= 2);
  }

  TEST_CASE("uniqueness verdicts: guard paths") {
    const ProductEquationSpec spec = testing::identity_instance();
    const auto nodes = uniform_nodes(spec.domain, 33);
    const GridFunction id = GridFunction::identity(spec.domain, nodes, EvalMode::PiecewiseLinear);
    CHECK(uniqueness_commuting(spec, id, id).status == UniquenessStatus::Equal);
    CHECK(uniqueness_comparable(spec, id, id).status == UniquenessStatus::Equal);

    const GridFunction off = GridFunction::constant(spec.domain, nodes, 0.6, EvalMode::PiecewiseLinear);
    CHECK(uniqueness_comparable(spec, id, off).status == UniquenessStatus::ResidualTooLarge);

    // Residual guard relaxed so the commutation check itself is exercised.
    UniquenessOptions loose;
    loose.residual_tol = 10.0;
    auto rng = testing::make_rng(72);
    const ValueGrid vg = ValueGrid::uniform(0.2, 1.0, 8);
    int found = 0;
    for (int t = 0; t < 100 && found < 5; ++t) {
      const GridFunction a(spec.domain, nodes, testing::random_monotone_values(rng, 33, vg.levels()), EvalMode::StepUSC);
      const GridFunction b(spec.domain, nodes, testing::random_monotone_values(rng, 33, vg.levels()), EvalMode::StepUSC);
      const UniquenessVerdict v = uniqueness_commuting(spec, a, b, loose);
      if (v.status != UniquenessStatus::NotCommuting) continue;
      ++found;
      REQUIRE(v.witness.has_value());
      const std::size_t i = static_cast<std::size_t>(std::lround((*v.witness - 0.2) / 0.8 * 32));
      CHECK(a(b.value(i)) != b(a.value(i)));
    }
    CHECK(found == 5);

    const GridFunction cross = GridFunction(spec.domain, nodes, [] {
      std::vector<double> v(33, 0.5);
      for (std::size_t i = 16; i < 33; ++i) v[i] = 0.7;
      return v;
    }(), EvalMode::StepUSC);
    const GridFunction flat = GridFunction::constant(spec.domain, nodes, 0.6, EvalMode::StepUSC);
    CHECK(uniqueness_comparable(spec, cross, flat, loose).status == UniquenessStatus::Incomparable);

    ProductEquationSpec flat_xi = spec;
    flat_xi.outer_maps[0] = parse("if(x < 0.5, 0.5, x)");
    CHECK(uniqueness_comparable(flat_xi, id, id, loose).status == UniquenessStatus::NotStrict);
  }
}
