#include <benchmark/benchmark.h>

#include "carleman/calculus.hpp"
#include "carleman/harness.hpp"
#include "carleman/weight.hpp"

using namespace carleman;

namespace {

CoefficientField bench_field() {
  std::vector<Mat> G(2, Mat::Zero(2, 2));
  G[0] << 0.06, 0.02, 0.02, -0.03;
  G[1] << 0.01, 0.04, 0.04, 0.02;
  return make_affine_field(Mat::Identity(2, 2), G, 1.0);
}

} // namespace

static void BM_phi(benchmark::State& state) {
  double r = 0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(phi(r, 1.0));
    r += 1e-4;
    if (r > 2.0) r = 0.05;
  }
}
BENCHMARK(BM_phi);

static void BM_weight_jets(benchmark::State& state) {
  const WeightFunction w(Mat::Identity(2, 2), 1.0, 1.0, 1.0);
  Vec x(2);
  x << 0.4, 0.2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(w.log_w(x));
    benchmark::DoNotOptimize(w.grad_w(x));
    benchmark::DoNotOptimize(w.hess_w(x));
  }
}
BENCHMARK(BM_weight_jets);

static void BM_bump_jet(benchmark::State& state) {
  const TestFunction u = TestFunction::radial_bump(2, 0.3, 0.7);
  Vec x(2);
  x << 0.4, 0.2;
  for (auto _ : state) benchmark::DoNotOptimize(u.jet_scaled(x));
}
BENCHMARK(BM_bump_jet);

static void BM_diff_objects(benchmark::State& state) {
  const CoefficientField f = bench_field();
  const WeightFunction w(f.A0(), 1.0, 1.0, f.certified_theta1());
  Vec x(2);
  x << 0.4, 0.2;
  for (auto _ : state)
    benchmark::DoNotOptimize(diff_objects(f, w, x, GKind::W));
}
BENCHMARK(BM_diff_objects);

static void BM_sides_table(benchmark::State& state) {
  const CoefficientField f = bench_field();
  ProblemParams p;
  p.d = 2;
  p.theta1 = f.certified_theta1();
  p.theta2 = f.certified_theta2();
  p.mu = 8.0;  // admissible for the small Lipschitz constant
  const TestFunction u = TestFunction::radial_bump(2, 0.3, 0.7);
  GridSpec grid;
  grid.n_angular = static_cast<int>(state.range(0));
  const AnnulusGrid g = make_carleman_grid(f, p, u, {1e4}, grid);
  for (auto _ : state) benchmark::DoNotOptimize(build_sides_table(f, p, u, g, 1));
  state.SetItemsProcessed(state.iterations() * g.n_nodes());
}
BENCHMARK(BM_sides_table)->Arg(32)->Arg(128);

static void BM_eval_sides(benchmark::State& state) {
  const CoefficientField f = bench_field();
  ProblemParams p;
  p.d = 2;
  p.theta1 = f.certified_theta1();
  p.theta2 = f.certified_theta2();
  p.mu = 8.0;
  const TestFunction u = TestFunction::radial_bump(2, 0.3, 0.7);
  GridSpec grid;
  const AnnulusGrid g = make_carleman_grid(f, p, u, {1e4}, grid);
  const SidesTable base = build_sides_table(f, p, u, g, 1);
  const SidesTable fine = build_sides_table(f, p, u, g.refined(), 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(eval_sides(base, fine, p, 1e4, 100.0, 1e-6));
}
BENCHMARK(BM_eval_sides);

BENCHMARK_MAIN();
