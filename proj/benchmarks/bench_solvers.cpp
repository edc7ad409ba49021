#include <benchmark/benchmark.h>

#include <clearnet/fixpoint.hpp>
#include <clearnet/gaussian.hpp>
#include <clearnet/milp.hpp>
#include <clearnet/scenario.hpp>

using namespace clearnet;

namespace {

FinancialNetwork bench_net(int n, bool holdings, std::optional<double> abg = {}) {
  GenOptions opts;
  opts.seed = 20240 + n;
  opts.n = n;
  opts.density = 0.4;
  opts.shock = 0.4;
  opts.with_holdings = holdings;
  opts.abg = abg;
  return FinancialNetwork::build(gen_random_network(opts).data);
}

void BM_MaxFixpoint(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto net = bench_net(n, true);
  const auto b = RegimeVector::ones(n);
  for (auto _ : state) benchmark::DoNotOptimize(max_fixpoint(net, b));
}
BENCHMARK(BM_MaxFixpoint)->Arg(8)->Arg(32)->Arg(128);

void BM_GaussianElimination(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto net = bench_net(n, true, 0.6);
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_max_clearing(net));
}
BENCHMARK(BM_GaussianElimination)->Arg(8)->Arg(32)->Arg(128);

void BM_EnumerateRegimes(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto net = bench_net(n, true);
  for (auto _ : state)
    benchmark::DoNotOptimize(enumerate_clearing_set(net, 16, kDefaultTol, 1));
}
BENCHMARK(BM_EnumerateRegimes)->Arg(6)->Arg(8)->Arg(10);

void BM_MilpMaximal(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto net = bench_net(n, true);
  const auto weights = ObjectiveWeights::unit(n);
  for (auto _ : state) benchmark::DoNotOptimize(maximal_pair_via_milp(net, weights));
}
BENCHMARK(BM_MilpMaximal)->Arg(8)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
