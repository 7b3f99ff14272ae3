#include <benchmark/benchmark.h>

#include <vector>

#include "auctionlab/clearing.hpp"
#include "auctionlab/exact.hpp"
#include "auctionlab/montecarlo.hpp"
#include "auctionlab/params.hpp"
#include "auctionlab/price_dist.hpp"
#include "auctionlab/rng.hpp"

namespace {

using namespace auctionlab;

AuctionParams flow(double lambda_t, double alpha) {
  AuctionParams p;
  p.lambda_total = lambda_t;
  p.alpha = alpha;
  p.horizon = 1.0;
  return p;
}

void bm_clear_auction(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  PhiloxRng rng(1, 0);
  std::vector<double> bids(n);
  std::vector<double> asks(n);
  for (auto& p : bids) p = rng.uniform01();
  for (auto& p : asks) p = rng.uniform01();
  for (auto _ : state) {
    benchmark::DoNotOptimize(clear_auction(bids, asks));
  }
  state.SetItemsProcessed(static_cast<long long>(state.iterations()) *
                          static_cast<long long>(2 * n));
}
BENCHMARK(bm_clear_auction)->Arg(16)->Arg(256)->Arg(4096)->Arg(65536);

void bm_volume_pmf(benchmark::State& state) {
  AuctionParams p = flow(static_cast<double>(state.range(0)), 0.3);
  int k = static_cast<int>(p.mu() * 0.21);  // near the mode
  for (auto _ : state) {
    benchmark::DoNotOptimize(volume_pmf(p, k));
  }
}
BENCHMARK(bm_volume_pmf)->Arg(10)->Arg(100)->Arg(1000);

void bm_volume_pmf_hyp(benchmark::State& state) {
  AuctionParams p = flow(static_cast<double>(state.range(0)), 0.3);
  int k = static_cast<int>(p.mu() * 0.21);
  for (auto _ : state) {
    benchmark::DoNotOptimize(volume_pmf_hyp(p, k));
  }
}
BENCHMARK(bm_volume_pmf_hyp)->Arg(10)->Arg(100)->Arg(1000);

void bm_lower_price_density(benchmark::State& state) {
  AuctionParams p = flow(static_cast<double>(state.range(0)), 0.3);
  auto uni = make_uniform(0.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lower_price_density(p, *uni, 0.7));
  }
}
BENCHMARK(bm_lower_price_density)->Arg(10)->Arg(100)->Arg(1000);

void bm_range_density_uniform(benchmark::State& state) {
  AuctionParams p = flow(static_cast<double>(state.range(0)), 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(range_density_uniform(p, 0.0, 1.0, 1.0 / p.mu()));
  }
}
BENCHMARK(bm_range_density_uniform)->Arg(10)->Arg(1000);

void bm_run_batch(benchmark::State& state) {
  AuctionParams p = flow(50, 0.3);
  auto uni = make_uniform(0.0, 1.0);
  auto workers = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_batch(p, *uni, 2000, 7, workers));
  }
  state.SetItemsProcessed(static_cast<long long>(state.iterations()) * 2000);
}
BENCHMARK(bm_run_batch)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
