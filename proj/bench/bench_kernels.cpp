#include <benchmark/benchmark.h>

#include <map>
#include <memory>
#include <random>

#include "polygrowth/harmonic.hpp"
#include "polygrowth/kernels.hpp"
#include "polygrowth/measure.hpp"

namespace {

using namespace polygrowth;

struct Fixture {
  BallPtr ball;
  EdgeDomain domain;
  std::vector<double> f;
  std::vector<double> columns;
  std::size_t k;

  explicit Fixture(int radius)
      : ball(enumerate_ball(make_model("Z3"), radius)), domain(*ball, radius), k(6) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    f.resize(ball->size());
    for (auto& x : f) x = u(rng);
    columns.resize(k * ball->size());
    for (auto& x : columns) x = u(rng);
  }
};

const Fixture& fixture(int radius) {
  static std::map<int, std::unique_ptr<Fixture>> cache;
  auto& slot = cache[radius];
  if (!slot) slot = std::make_unique<Fixture>(radius);
  return *slot;
}

template <class Fn>
void run_scalar(benchmark::State& state, Fn fn) {
  const auto& fx = fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fn(fx.domain.edges(), fx.f));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * fx.domain.total_length()));
}

void BM_DirichletSerial(benchmark::State& s) { run_scalar(s, kernels::serial::dirichlet); }
void BM_DirichletParallel(benchmark::State& s) { run_scalar(s, kernels::parallel::dirichlet); }
void BM_MidpointSerial(benchmark::State& s) { run_scalar(s, kernels::serial::midpoint_sum); }
void BM_MidpointParallel(benchmark::State& s) { run_scalar(s, kernels::parallel::midpoint_sum); }

template <class Fn>
void run_gram(benchmark::State& state, Fn fn) {
  const auto& fx = fixture(static_cast<int>(state.range(0)));
  std::vector<double> out(fx.k * fx.k);
  for (auto _ : state) {
    fn(fx.domain.edges(), fx.columns, fx.ball->size(), fx.k, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * fx.domain.total_length()));
}

void BM_GramSerial(benchmark::State& s) { run_gram(s, kernels::serial::gram); }
void BM_GramParallel(benchmark::State& s) { run_gram(s, kernels::parallel::gram); }

}  // namespace

BENCHMARK(BM_DirichletSerial)->Arg(20)->Arg(40);
BENCHMARK(BM_DirichletParallel)->Arg(20)->Arg(40);
BENCHMARK(BM_MidpointSerial)->Arg(20)->Arg(40);
BENCHMARK(BM_MidpointParallel)->Arg(20)->Arg(40);
BENCHMARK(BM_GramSerial)->Arg(20)->Arg(40);
BENCHMARK(BM_GramParallel)->Arg(20)->Arg(40);

BENCHMARK_MAIN();
