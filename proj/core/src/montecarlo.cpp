#include "auctionlab/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace auctionlab {

ClearingOutcome simulate_auction(const AuctionParams& params, const PriceDistribution& dist,
                                 PhiloxRng& rng) {
  params.validate();
  double t_end = params.horizon;
  double am = params.alpha * params.mu();
  double bm = (1.0 - params.alpha) * params.mu();

  std::vector<double> asks;
  std::vector<double> bids;
  // Draw order is fixed (ask side fully, then bid side) so a given stream
  // always maps to the same book.
  auto fill_side = [&](std::vector<double>& side, double arrivals_mean, double theta) {
    long long n_arrivals = rng.poisson(arrivals_mean);
    side.reserve(static_cast<std::size_t>(n_arrivals));
    for (long long i = 0; i < n_arrivals; ++i) {
      if (theta > 0.0) {
        double submit = rng.uniform01() * t_end;
        double lifetime = rng.exponential(theta);
        if (submit + lifetime <= t_end) continue;  // cancelled before the close
      }
      side.push_back(dist.sample(rng));
    }
  };
  fill_side(asks, am, params.theta_ask);
  fill_side(bids, bm, params.theta_bid);
  return clear_auction(bids, asks);
}

namespace {

struct RepOutcome {
  double lower = 0.0;
  double upper = 0.0;
  int volume = 0;
  bool both_sides = false;
};

}  // namespace

SampleSummary run_batch(const AuctionParams& params, const PriceDistribution& dist,
                        long long n_reps, std::uint64_t seed, int n_workers) {
  params.validate();
  if (n_reps <= 0) throw std::invalid_argument("run_batch: need n_reps > 0");
  if (n_workers <= 0) {
    unsigned hw = std::thread::hardware_concurrency();
    n_workers = static_cast<int>(std::clamp(hw, 1u, 8u));
  }
  n_workers = static_cast<int>(std::min<long long>(n_workers, n_reps));

  // Replication r always consumes stream (seed, r): the partition of reps
  // across workers cannot change any draw.
  std::vector<RepOutcome> reps(static_cast<std::size_t>(n_reps));
  auto run_slice = [&](long long begin, long long end) {
    for (long long r = begin; r < end; ++r) {
      PhiloxRng rng(seed, static_cast<std::uint64_t>(r));
      ClearingOutcome o = simulate_auction(params, dist, rng);
      RepOutcome& rep = reps[static_cast<std::size_t>(r)];
      rep.volume = static_cast<int>(o.volume);
      rep.both_sides = o.bounds.has_value();
      if (o.bounds) {
        rep.lower = o.bounds->lower;
        rep.upper = o.bounds->upper;
      }
    }
  };
  if (n_workers == 1) {
    run_slice(0, n_reps);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    long long chunk = (n_reps + n_workers - 1) / n_workers;
    for (int w = 0; w < n_workers; ++w) {
      long long begin = w * chunk;
      long long end = std::min(n_reps, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(run_slice, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  SampleSummary out;
  out.n_reps = n_reps;
  for (const RepOutcome& rep : reps) {
    ++out.volume_counts[rep.volume];
    if (rep.both_sides) {
      ++out.n_conditioned;
      out.lower_samples.push_back(rep.lower);
      out.upper_samples.push_back(rep.upper);
      out.range_samples.push_back(rep.upper - rep.lower);
    }
  }
  return out;
}

std::string SampleSummary::to_json(std::size_t max_samples) const {
  nlohmann::ordered_json j;
  j["n_reps"] = n_reps;
  j["n_conditioned"] = n_conditioned;
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();
  for (const auto& [k, c] : volume_counts) counts[std::to_string(k)] = c;
  j["volume_counts"] = counts;
  auto strided = [max_samples](const std::vector<double>& v) {
    std::size_t stride = v.empty() || max_samples == 0
                             ? 1
                             : std::max<std::size_t>(1, (v.size() + max_samples - 1) / max_samples);
    std::vector<double> out;
    out.reserve(v.size() / stride + 1);
    for (std::size_t i = 0; i < v.size(); i += stride) out.push_back(v[i]);
    return out;
  };
  std::size_t stride = lower_samples.empty() || max_samples == 0
                           ? 1
                           : std::max<std::size_t>(
                                 1, (lower_samples.size() + max_samples - 1) / max_samples);
  j["sample_stride"] = stride;
  j["lower_samples"] = strided(lower_samples);
  j["upper_samples"] = strided(upper_samples);
  j["range_samples"] = strided(range_samples);
  // Histogram summaries are always complete (no striding); bin widths
  // follow the Freedman-Diaconis rule, recorded alongside the counts.
  auto histogram = [](const std::vector<double>& v) {
    nlohmann::ordered_json h;
    h["rule"] = "freedman-diaconis";
    if (v.empty()) {
      h["bins"] = 0;
      h["counts"] = nlohmann::ordered_json::array();
      return h;
    }
    std::vector<double> s(v);
    std::sort(s.begin(), s.end());
    double lo = s.front();
    double hi = s.back();
    double iqr = s[(3 * s.size()) / 4] - s[s.size() / 4];
    double width = 2.0 * iqr / std::cbrt(static_cast<double>(s.size()));
    int bins = 1;
    if (width > 0.0 && hi > lo) {
      bins = static_cast<int>(std::min(4096.0, std::max(1.0, std::ceil((hi - lo) / width))));
    }
    std::vector<long long> counts(static_cast<std::size_t>(bins), 0);
    for (double x : s) {
      auto idx = hi > lo ? static_cast<std::size_t>((x - lo) / (hi - lo) * bins) : 0u;
      ++counts[std::min(counts.size() - 1, idx)];
    }
    h["lo"] = lo;
    h["hi"] = hi;
    h["bins"] = bins;
    h["counts"] = counts;
    return h;
  };
  j["lower_histogram"] = histogram(lower_samples);
  j["upper_histogram"] = histogram(upper_samples);
  j["range_histogram"] = histogram(range_samples);
  return j.dump();
}

double ks_statistic(std::span<const double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    double f = cdf(sorted[i]);
    d = std::max(d, f - static_cast<double>(i) / n);
    d = std::max(d, static_cast<double>(i + 1) / n - f);
  }
  return d;
}

ChiSquareResult chi_square(const std::map<int, long long>& observed, const DiscretePmf& expected,
                           long long n) {
  if (n <= 0) throw std::invalid_argument("chi_square: need n > 0");
  ChiSquareResult out;
  double pooled_exp = expected.tail_bound * static_cast<double>(n);
  long long pooled_obs = 0;
  double covered = 0.0;
  long long matched = 0;

  for (const auto& [k, p] : expected.masses) {
    double e = p * static_cast<double>(n);
    auto it = observed.find(k);
    long long o = it == observed.end() ? 0 : it->second;
    if (it != observed.end()) matched += o;
    covered += p;
    if (e < 5.0) {
      pooled_exp += e;
      pooled_obs += o;
      continue;
    }
    double diff = static_cast<double>(o) - e;
    out.statistic += diff * diff / e;
    ++out.dof;
  }
  // Observations at values the pmf does not list join the pooled cell; the
  // pmf side of that cell is covered by the truncation tail bound.
  long long total_obs = 0;
  for (const auto& [k, c] : observed) total_obs += c;
  pooled_obs += total_obs - matched;
  pooled_exp += std::max(0.0, (1.0 - covered - expected.tail_bound)) * static_cast<double>(n);
  if (pooled_exp > 0.0) {
    double diff = static_cast<double>(pooled_obs) - pooled_exp;
    out.statistic += diff * diff / pooled_exp;
    ++out.dof;
  } else if (pooled_obs > 0) {
    throw std::invalid_argument("chi_square: observations outside the support of the pmf");
  }
  out.dof -= 1;  // totals agree by construction
  if (out.dof < 1) throw std::invalid_argument("chi_square: not enough cells");
  return out;
}

FitResult fit_exponential_mle(std::span<const double> sample) {
  if (sample.empty()) throw std::invalid_argument("fit_exponential_mle: empty sample");
  double total = 0.0;
  for (double x : sample) {
    if (!(x >= 0.0)) throw std::invalid_argument("fit_exponential_mle: negative value");
    total += x;
  }
  if (!(total > 0.0)) throw std::invalid_argument("fit_exponential_mle: all-zero sample");
  FitResult out;
  out.sample_size = static_cast<long long>(sample.size());
  out.rate = static_cast<double>(sample.size()) / total;
  double rate = out.rate;
  out.ks_stat = ks_statistic(
      sample, [rate](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-rate * x); });
  return out;
}

}  // namespace auctionlab
