#include <benchmark/benchmark.h>

#include "akgrav/curvature.hpp"
#include "akgrav/pipeline.hpp"
#include "akgrav/scenario.hpp"

using namespace akgrav;

namespace {

const Chart& chart() {
  static Chart c = Chart::standard();
  return c;
}

Expr lagrangian() {
  static Expr L = parse_expr("exp(x1)*(y3^2+y4^2) + x2*y3*y4", chart());
  return L;
}

std::vector<Point> grid(int count) {
  SampleDomain d = SampleDomain::cube(4, -0.7, 0.7);
  d.intervals[2] = {0.3, 1.5};
  d.intervals[3] = {0.3, 1.5};
  return halton_points(d, count, 1, 2);
}

void bm_parse(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(parse_expr("exp(x1)*(y3^2+y4^2) + sin(x2)*y3*y4", chart()));
}
BENCHMARK(bm_parse);

void bm_deriv_fourth_order(benchmark::State& state) {
  Expr L = lagrangian();
  for (auto _ : state) {
    Expr d = deriv(deriv(deriv(deriv(L, 0), 2), 3), 1);
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(bm_deriv_fourth_order);

void bm_eval_plain(benchmark::State& state) {
  DMetric dm = lagrange_dmetric(lagrangian(), chart());
  LcCurvature lc = lc_riemann(assemble_coordinate_metric(dm), chart());
  Point p{0.2, -0.3, 0.9, 1.1};
  for (auto _ : state) benchmark::DoNotOptimize(eval(lc.scalar, p));
}
BENCHMARK(bm_eval_plain);

void bm_eval_memoized(benchmark::State& state) {
  DMetric dm = lagrange_dmetric(lagrangian(), chart());
  LcCurvature lc = lc_riemann(assemble_coordinate_metric(dm), chart());
  Point p{0.2, -0.3, 0.9, 1.1};
  for (auto _ : state) {
    EvalCache cache(p);
    benchmark::DoNotOptimize(eval(lc.scalar, cache));
  }
}
BENCHMARK(bm_eval_memoized);

void bm_normal_dconnection(benchmark::State& state) {
  DMetric dm = lagrange_dmetric(lagrangian(), chart());
  std::vector<Point> probe = grid(5);
  for (auto _ : state) benchmark::DoNotOptimize(normal_dconnection(dm, probe));
}
BENCHMARK(bm_normal_dconnection);

void bm_curvature_assembly(benchmark::State& state) {
  DMetric dm = lagrange_dmetric(lagrangian(), chart());
  NormalDc ndc = normal_dconnection(dm, grid(5));
  for (auto _ : state) benchmark::DoNotOptimize(dcurvature(ndc.dc, dm.ncon));
}
BENCHMARK(bm_curvature_assembly);

// serial vs pooled sweep over a residual field
void bm_grid_sweep(benchmark::State& state) {
  DMetric dm = lagrange_dmetric(lagrangian(), chart());
  NormalDc ndc = normal_dconnection(dm, grid(5));
  CurvatureBundle cb = dcurvature(ndc.dc, dm.ncon);
  std::vector<Point> pts = grid(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    SweepResult r = sweep_max(pts, [&](const Point& p) { return max_abs_at(cb.full, p); });
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(bm_grid_sweep)->Arg(8)->Arg(64)->Arg(256);

void bm_check_euclidean(benchmark::State& state) {
  Scenario scn = catalog_scenario("euclidean");
  RunOptions opts;
  opts.points = 25;
  for (auto _ : state) benchmark::DoNotOptimize(run_check(scn, opts));
}
BENCHMARK(bm_check_euclidean);

}  // namespace

BENCHMARK_MAIN();
