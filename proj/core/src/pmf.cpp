#include "auctionlab/pmf.hpp"

#include <cmath>
#include <stdexcept>

namespace auctionlab {

double DiscretePmf::mass(int k) const {
  auto it = masses.find(k);
  return it == masses.end() ? 0.0 : it->second;
}

double DiscretePmf::total() const {
  double s = 0.0;
  for (const auto& [k, p] : masses) s += p;
  return s;
}

double DiscretePmf::mean() const {
  double s = 0.0;
  for (const auto& [k, p] : masses) s += static_cast<double>(k) * p;
  return s;
}

double total_variation(const DiscretePmf& pmf, const std::map<int, long long>& counts,
                       long long n) {
  if (n <= 0) throw std::invalid_argument("total_variation: need n > 0");
  double acc = 0.0;
  double matched_emp = 0.0;
  for (const auto& [k, p] : pmf.masses) {
    auto it = counts.find(k);
    double emp = it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(n);
    acc += std::abs(p - emp);
    if (it != counts.end()) matched_emp += emp;
  }
  // Empirical mass at values the pmf does not carry.
  acc += 1.0 - matched_emp;
  // Exact mass beyond the stored keys.
  acc += pmf.tail_bound;
  return 0.5 * acc;
}

}  // namespace auctionlab
