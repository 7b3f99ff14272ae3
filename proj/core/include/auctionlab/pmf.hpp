#pragma once

#include <map>

namespace auctionlab {

// Probability mass function on nonnegative integers, possibly truncated:
// tail_bound is an upper bound on the probability outside the stored keys.
struct DiscretePmf {
  std::map<int, double> masses;
  double tail_bound = 0.0;

  double mass(int k) const;
  double total() const;   // sum of stored masses
  double mean() const;    // over stored masses only
};

// Total variation distance between a pmf and the empirical distribution of
// `n` draws summarised by `counts`. Unmatched exact mass (including the
// truncation tail bound) and unmatched empirical mass both contribute.
double total_variation(const DiscretePmf& pmf, const std::map<int, long long>& counts,
                       long long n);

}  // namespace auctionlab
