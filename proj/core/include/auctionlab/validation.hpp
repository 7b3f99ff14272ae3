#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "auctionlab/pmf.hpp"

namespace auctionlab {

// One entry of the self-check suite. `criterion` groups checks that belong
// to the same acceptance gate; `statistic` is the worst value observed and
// passes when it stays within `threshold`.
struct CheckResult {
  int criterion = 0;
  std::string id;
  bool pass = false;
  double statistic = 0.0;
  double threshold = 0.0;
  std::string detail;
  // Wall time of the whole check group this entry came from. Informational
  // only; excluded from the serialized report to keep it byte-stable.
  double group_seconds = 0.0;
};

struct ValidationConfig {
  std::uint64_t seed = 20240901;
  int workers = 0;     // forwarded to run_batch; results do not depend on it
  bool extended = false;  // include the lambda*T = 1000 normality leg
};

// Runs the full deterministic self-check suite (exact laws vs oracles,
// Monte Carlo vs exact laws, asymptotics, cancellation folding).
std::vector<CheckResult> run_validation_suite(const ValidationConfig& config);

// Machine-readable report. Deliberately excludes anything that varies
// between equivalent runs (timings, worker counts), so a fixed seed gives
// a byte-identical document.
std::string validation_report_json(const std::vector<CheckResult>& checks,
                                   const ValidationConfig& config);

// --- Independent reference implementations -------------------------------
// Kept deliberately naive and separate from the production evaluation paths
// so they can serve as oracles in the suite and in tests.

// Volume law by brute-force mixture: Poisson weights on both side counts
// times the hypergeometric conditional mass, summed over counts <= count_cap.
double volume_pmf_mixture_oracle(double mu, double alpha, int k, int count_cap = 400);

// Volume law given side counts by exhaustive labeling: every split of
// m + n distinct prices into m asks and n bids, each cleared with the
// definitional quadratic reference. Requires m_asks + n_bids <= 20.
DiscretePmf conditional_volume_enumeration(int m_asks, int n_bids);

}  // namespace auctionlab
