#include <benchmark/benchmark.h>

#include <random>

#include "ifes/banach.hpp"
#include "ifes/classes.hpp"
#include "ifes/conjugacy.hpp"
#include "ifes/expr.hpp"
#include "ifes/tarski.hpp"

using namespace ifes;

namespace {

ProductEquationSpec e1() {
  return ProductEquationSpec{Interval(0.0, 1.0),
                             {0.8, -0.3},
                             parse("(x^2+1)/2"),
                             {parse("x"), parse("(x^4+1)/3")},
                             {parse("x"), parse("x^3")},
                             0.2};
}

ProductEquationSpec exmp1() {
  return ProductEquationSpec{Interval(1.0, std::exp(1.0)),
                             {0.8, 0.2},
                             parse("sqrt(x)*exp(0.5*(log(x))^2)"),
                             {parse("x"), parse("exp((log(x))^2)")},
                             {parse("x"), parse("x")},
                             0.2};
}

void BM_ExpressionEval(benchmark::State& state) {
  const Expression e = parse("sqrt(x)*exp(0.5*(log(x))^2)");
  double x = 1.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(e(x));
    x = x < 2.5 ? x + 1e-6 : 1.5;
  }
}
BENCHMARK(BM_ExpressionEval);

void BM_GridEval(benchmark::State& state) {
  const Interval J(0.0, 1.0);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto nodes = uniform_nodes(J, n + 1);
  const GridFunction g = GridFunction::identity(J, nodes, EvalMode::StepUSC);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> xs(4096);
  for (auto& x : xs) x = u(rng);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(g(xs[i++ & 4095]));
  }
}
BENCHMARK(BM_GridEval)->Arg(512)->Arg(4096);

void BM_ApplyT(benchmark::State& state) {
  const ProductEquationSpec spec = e1();
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto nodes = uniform_nodes(spec.domain, m + 1);
  const TarskiOperator T(build_T(spec), nodes);
  const GridFunction g = GridFunction::constant(spec.domain, nodes, 0.5, EvalMode::StepUSC, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(T(g));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * (m + 1)));
}
BENCHMARK(BM_ApplyT)->Arg(512)->Arg(1024)->Arg(4096);

void BM_PicardStep(benchmark::State& state) {
  const SumEquationSpec spec = log_conjugate_spec(exmp1());
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto nodes = uniform_nodes(spec.domain, m + 1);
  const PicardOperator L(spec, nodes);
  const GridFunction f = GridFunction::identity(spec.domain, nodes, EvalMode::PiecewiseLinear);
  for (auto _ : state) benchmark::DoNotOptimize(L(f));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * (m + 1)));
}
BENCHMARK(BM_PicardStep)->Arg(512)->Arg(1024);

void BM_InGClass(benchmark::State& state) {
  const Interval J(1.0, std::exp(1.0));
  const auto nodes = uniform_nodes(J, static_cast<std::size_t>(state.range(0)) + 1);
  const GridFunction g = GridFunction::identity(J, nodes, EvalMode::PiecewiseLinear);
  for (auto _ : state) benchmark::DoNotOptimize(in_G_class(g, J, 0.2, 4.0));
}
BENCHMARK(BM_InGClass)->Arg(256)->Arg(1024);

void BM_SolveE1(benchmark::State& state) {
  const ProductEquationSpec spec = e1();
  TarskiConfig cfg;
  cfg.grid = cfg.levels = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_both(spec, cfg));
}
BENCHMARK(BM_SolveE1)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
