#include "auctionlab/clearing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "auctionlab/special.hpp"

namespace auctionlab {

namespace {

// Pooled book entry: price plus a side tag ordered asks-first at equal
// prices (0 = ask, 1 = bid), i.e. the ask is treated as slightly cheaper.
using Entry = std::pair<double, int>;

std::vector<Entry> pooled_book(std::span<const double> bids, std::span<const double> asks) {
  std::vector<Entry> pool;
  pool.reserve(bids.size() + asks.size());
  for (double p : asks) {
    if (!std::isfinite(p)) throw std::invalid_argument("clear_auction: prices must be finite");
    pool.emplace_back(p, 0);
  }
  for (double p : bids) {
    if (!std::isfinite(p)) throw std::invalid_argument("clear_auction: prices must be finite");
    pool.emplace_back(p, 1);
  }
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

ClearingOutcome clear_auction(std::span<const double> bid_prices,
                              std::span<const double> ask_prices) {
  ClearingOutcome out;
  out.n_bids = static_cast<long long>(bid_prices.size());
  out.n_asks = static_cast<long long>(ask_prices.size());
  if (bid_prices.empty() || ask_prices.empty()) return out;

  std::vector<Entry> pool = pooled_book(bid_prices, ask_prices);
  std::size_t n = bid_prices.size();

  // Supply and demand balance exactly where the pool splits into its n
  // cheapest and m dearest entries; executed volume is the number of bids
  // that made it into the dear part (equivalently asks into the cheap part).
  long long v = 0;
  for (std::size_t i = n; i < pool.size(); ++i) v += pool[i].second;
  out.volume = v;
  out.bounds = PriceBounds{pool[n - 1].first, pool[n].first};
  return out;
}

ClearingOutcome clear_auction_oracle(std::span<const double> bid_prices,
                                     std::span<const double> ask_prices) {
  ClearingOutcome out;
  out.n_bids = static_cast<long long>(bid_prices.size());
  out.n_asks = static_cast<long long>(ask_prices.size());
  if (bid_prices.empty() || ask_prices.empty()) return out;

  std::vector<Entry> pool = pooled_book(bid_prices, ask_prices);
  std::size_t total = pool.size();

  // Try every cut position; at cut c the sellable supply is the number of
  // asks priced within the c cheapest entries and the fillable demand is
  // the number of bids within the total-c dearest. Count both from scratch
  // each time -- this is the definition, not an algorithm.
  std::size_t balance_cut = total + 1;
  int balance_count = 0;
  for (std::size_t cut = 0; cut <= total; ++cut) {
    long long supply = 0;
    long long demand = 0;
    for (std::size_t i = 0; i < cut; ++i) supply += pool[i].second == 0 ? 1 : 0;
    for (std::size_t i = cut; i < total; ++i) demand += pool[i].second == 1 ? 1 : 0;
    if (supply == demand) {
      if (balance_count == 0) balance_cut = cut;
      ++balance_count;
    }
  }
  if (balance_count != 1 || balance_cut == 0 || balance_cut == total) {
    // Supply minus demand moves by exactly one per cut and both sides are
    // nonempty, so an interior unique balance always exists.
    throw std::logic_error("clear_auction_oracle: balance cut not unique/interior");
  }

  long long v = 0;
  for (std::size_t i = 0; i < balance_cut; ++i) v += pool[i].second == 0 ? 1 : 0;
  out.volume = v;
  out.bounds = PriceBounds{pool[balance_cut - 1].first, pool[balance_cut].first};
  return out;
}

DiscretePmf conditional_volume_pmf(int m_asks, int n_bids, int cap) {
  if (m_asks < 0 || n_bids < 0) {
    throw std::invalid_argument("conditional_volume_pmf: counts must be >= 0");
  }
  if (m_asks + n_bids > cap) {
    throw std::invalid_argument("conditional_volume_pmf: m + n exceeds cap");
  }
  DiscretePmf pmf;
  int k_top = std::min(m_asks, n_bids);
  double norm = ln_binomial(m_asks + n_bids, n_bids);
  // Kahan-compensated total so the final normalisation is exact to a few ulp.
  double total = 0.0, comp = 0.0;
  for (int k = 0; k <= k_top; ++k) {
    double lp = ln_binomial(m_asks, k) + ln_binomial(n_bids, k) - norm;
    double p = std::exp(lp);
    pmf.masses[k] = p;
    double y = p - comp;
    double t = total + y;
    comp = (t - total) - y;
    total = t;
  }
  for (auto& [k, p] : pmf.masses) p /= total;
  return pmf;
}

}  // namespace auctionlab
