#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "auctionlab/clearing.hpp"
#include "auctionlab/params.hpp"
#include "auctionlab/pmf.hpp"
#include "auctionlab/price_dist.hpp"
#include "auctionlab/rng.hpp"

namespace auctionlab {

// One simulated accumulation window cleared at the horizon. With zero decay
// rates only the order counts and prices are drawn; with positive decay the
// submit times and lifetimes are drawn too and dead orders drop out of the
// book before clearing.
ClearingOutcome simulate_auction(const AuctionParams& params, const PriceDistribution& dist,
                                 PhiloxRng& rng);

// Batch statistics. Price-bound and range samples are kept only for
// replications where both sides were populated (n_conditioned of them).
struct SampleSummary {
  long long n_reps = 0;
  long long n_conditioned = 0;
  std::map<int, long long> volume_counts;
  std::vector<double> lower_samples;
  std::vector<double> upper_samples;
  std::vector<double> range_samples;

  // JSON serialisation; sample arrays longer than max_samples are strided
  // down to at most that many entries (counts are always complete).
  std::string to_json(std::size_t max_samples = static_cast<std::size_t>(-1)) const;
};

// Runs n_reps independent replications. Replication r consumes the random
// stream (seed, r), so results are bit-identical for any worker count;
// n_workers <= 0 picks a sensible default.
SampleSummary run_batch(const AuctionParams& params, const PriceDistribution& dist,
                        long long n_reps, std::uint64_t seed, int n_workers = 0);

// One-sample Kolmogorov-Smirnov statistic against a continuous CDF.
double ks_statistic(std::span<const double> sample, const std::function<double(double)>& cdf);

// Pearson chi-square statistic of observed counts against a pmf, pooling
// cells with expected count below 5 (and any unlisted values) into one tail
// cell. Returns the statistic and the resulting degrees of freedom.
struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
};
ChiSquareResult chi_square(const std::map<int, long long>& observed, const DiscretePmf& expected,
                           long long n);

// Maximum-likelihood exponential fit with its goodness-of-fit statistic.
struct FitResult {
  double rate = 0.0;
  long long sample_size = 0;
  double ks_stat = 0.0;
};
FitResult fit_exponential_mle(std::span<const double> sample);

}  // namespace auctionlab
