// Microbenchmarks for the paths the experiments lean on: representation
// tables (both backends), complete exponential sums, phase-weighted level
// sums, the localized multiplier evaluation, and the grid operators.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "diomax/counting.hpp"
#include "diomax/expsums.hpp"
#include "diomax/forms.hpp"
#include "diomax/multipliers.hpp"
#include "diomax/operators.hpp"
#include "diomax/rng.hpp"

using namespace diomax;

namespace {

IntegralForm sphere(int n) {
  return IntegralForm::diagonal(2, std::vector<int64_t>(size_t(n), 1));
}

void bm_rep_table_convolution(benchmark::State& state) {
  IntegralForm form = sphere(int(state.range(0)));
  int64_t cap = state.range(1);
  for (auto _ : state) {
    auto table = build_rep_table(form, cap, Congruence::none(),
                                 CountBackend::convolution);
    benchmark::DoNotOptimize(table.counts.data());
  }
}
BENCHMARK(bm_rep_table_convolution)
    ->Args({5, 1 << 10})
    ->Args({5, 1 << 14})
    ->Args({8, 1 << 10});

void bm_rep_table_brute(benchmark::State& state) {
  IntegralForm form = sphere(int(state.range(0)));
  int64_t cap = state.range(1);
  for (auto _ : state) {
    auto table = build_rep_table(form, cap, Congruence::none(),
                                 CountBackend::brute_force);
    benchmark::DoNotOptimize(table.counts.data());
  }
}
BENCHMARK(bm_rep_table_brute)->Args({3, 1 << 10})->Args({4, 1 << 8});

void bm_weyl_sum_diagonal(benchmark::State& state) {
  IntegralForm form = sphere(5);
  int64_t q = state.range(0);
  std::vector<int64_t> avec(5, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(weyl_sum(form, q, 1, avec));
  }
}
BENCHMARK(bm_weyl_sum_diagonal)->Arg(36)->Arg(360)->Arg(3600);

void bm_weyl_sum_generic(benchmark::State& state) {
  IntegralForm form = IntegralForm::quadratic({2, 1, 0, 1, 3, 1, 0, 1, 4}, 3);
  int64_t q = state.range(0);
  std::vector<int64_t> avec(3, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(weyl_sum(form, q, 1, avec));
  }
}
BENCHMARK(bm_weyl_sum_generic)->Arg(9)->Arg(27);

void bm_weyl_sup(benchmark::State& state) {
  IntegralForm form = sphere(5);
  int64_t q = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(weyl_sup(form, q));
  }
}
BENCHMARK(bm_weyl_sup)->Arg(35)->Arg(143);

void bm_level_phase_sum(benchmark::State& state) {
  IntegralForm form = sphere(5);
  CutoffPsi psi = CutoffPsi::unit();
  int64_t lambda = state.range(0);
  std::vector<double> xi = {0.13, -0.27, 0.41, 0.07, -0.19};
  for (auto _ : state) {
    benchmark::DoNotOptimize(level_phase_sum(form, psi, lambda, xi));
  }
}
BENCHMARK(bm_level_phase_sum)->Arg(80)->Arg(1280);

void bm_completed_term(benchmark::State& state) {
  IntegralForm form = sphere(5);
  SurfaceFT radial = SurfaceFT::closed_form(form);
  // A live rational center: the bump admits the avec = (1,0,2,0,1)/3 point.
  std::vector<double> xi = {1.0 / 3, 0.0, 2.0 / 3, 0.0, 1.0 / 3};
  int64_t d = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(completed_term(form, 5, 2, d, xi, radial));
  }
}
BENCHMARK(bm_completed_term)->Arg(3)->Arg(6);

void bm_surface_ft_closed(benchmark::State& state) {
  SurfaceFT sft = SurfaceFT::closed_form(sphere(5));
  std::vector<double> xi = {1.7, -2.3, 0.4, 3.1, -0.8};
  for (auto _ : state) {
    benchmark::DoNotOptimize(sft(xi));
  }
}
BENCHMARK(bm_surface_ft_closed);

void bm_surface_ft_monte_carlo(benchmark::State& state) {
  SurfaceFT sft = SurfaceFT::monte_carlo(sphere(5), CutoffPsi::unit(), 1,
                                         state.range(0));
  std::vector<double> xi = {1.7, -2.3, 0.4, 3.1, -0.8};
  for (auto _ : state) {
    benchmark::DoNotOptimize(sft(xi));
  }
}
BENCHMARK(bm_surface_ft_monte_carlo)->Arg(4000)->Arg(40000);

void bm_apply_average_torus(benchmark::State& state) {
  IntegralForm form = sphere(3);
  CutoffPsi psi = CutoffPsi::unit();
  GridFunction f = GridFunction::torus(3, state.range(0));
  RandomStream rng(1, 99);
  for (auto& v : f.values())
    v = cplx(rng.next_double() - 0.5, rng.next_double() - 0.5);
  for (auto _ : state) {
    auto g = apply_average(form, psi, 5, f);
    benchmark::DoNotOptimize(g.values().data());
  }
}
BENCHMARK(bm_apply_average_torus)->Arg(8)->Arg(16);

void bm_window_count_maximizer(benchmark::State& state) {
  IntegralForm form = sphere(5);
  std::vector<int64_t> b = {1, 0, 2, 0, 1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        window_count_maximizer(form, 3, 1, b, state.range(0), 0.05));
  }
}
BENCHMARK(bm_window_count_maximizer)->Arg(1 << 10)->Arg(1 << 12);

}  // namespace

BENCHMARK_MAIN();
