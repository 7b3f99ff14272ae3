#pragma once

#include "auctionlab/params.hpp"
#include "auctionlab/price_dist.hpp"

namespace auctionlab {

// Large-intensity limit laws of the auction outcome. Cancellation IS folded
// in here: every op first maps its parameters through effective_params, so
// a decaying book and its cancellation-free equivalent give identical laws.

struct NormalLaw {
  double mean = 0.0;
  double sd = 1.0;

  double pdf(double x) const;
  double cdf(double x) const;
};

struct ExponentialLaw {
  double rate = 1.0;

  double pdf(double x) const;
  double cdf(double x) const;
  double mean() const { return 1.0 / rate; }
};

// Executed volume: mean mu a(1-a), variance mu a(1-a)(1 - 2a(1-a)).
NormalLaw asymptotic_volume(const AuctionParams& params);

// Either clearing price bound: both concentrate at the quantile where the
// cumulative ask flow balances the cumulative bid flow, with sd
// (1/f(q)) sqrt(2 a (1-a) / mu).
NormalLaw asymptotic_price(const AuctionParams& params, const PriceDistribution& dist);

// Clearing range: exponential with rate mu f(q) at the same quantile q.
ExponentialLaw asymptotic_range(const AuctionParams& params, const PriceDistribution& dist);

}  // namespace auctionlab
