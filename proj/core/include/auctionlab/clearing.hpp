#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "auctionlab/pmf.hpp"

namespace auctionlab {

enum class Side : std::uint8_t { bid, ask };

// One submitted order. `lifetime` absent means good-till-close.
struct Order {
  Side side = Side::bid;
  double price = 0.0;
  double submit_time = 0.0;
  std::optional<double> lifetime;

  bool live_at(double t) const { return !lifetime || submit_time + *lifetime > t; }
};

struct PriceBounds {
  double lower = 0.0;
  double upper = 0.0;
};

// Result of crossing one book: executed volume plus, when both sides are
// populated, the interval of prices at which supply equals demand.
struct ClearingOutcome {
  long long n_bids = 0;
  long long n_asks = 0;
  long long volume = 0;
  std::optional<PriceBounds> bounds;

  std::optional<double> range() const {
    if (!bounds) return std::nullopt;
    return bounds->upper - bounds->lower;
  }
};

// Uniform-price clearing of a one-shot book. Volume is the number of
// crossable pairs; bounds delimit the prices balancing cumulative supply
// and demand. O(N log N). Ties across sides are broken by treating the ask
// as infinitesimally cheaper, matching the convention of the quadratic
// reference below so degenerate inputs agree between the two.
ClearingOutcome clear_auction(std::span<const double> bid_prices,
                              std::span<const double> ask_prices);

// Definition-chasing O(N^2) reference: scans every cut of the pooled sorted
// book, recounts both sides from scratch at each cut, and locates the
// unique balance point. Kept deliberately independent of clear_auction.
ClearingOutcome clear_auction_oracle(std::span<const double> bid_prices,
                                     std::span<const double> ask_prices);

// Distribution of executed volume when m_asks + n_bids i.i.d. continuous
// prices are split into the two sides: mass at k proportional to
// C(m,k) C(n,k), normalised to sum to one. Requires m_asks + n_bids <= cap.
DiscretePmf conditional_volume_pmf(int m_asks, int n_bids, int cap = 10000);

}  // namespace auctionlab
