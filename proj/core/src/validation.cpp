#include "auctionlab/validation.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "auctionlab/asymptotic.hpp"
#include "auctionlab/clearing.hpp"
#include "auctionlab/exact.hpp"
#include "auctionlab/montecarlo.hpp"
#include "auctionlab/params.hpp"
#include "auctionlab/price_dist.hpp"
#include "auctionlab/quadrature.hpp"
#include "auctionlab/rng.hpp"
#include "auctionlab/special.hpp"
#include "auctionlab/version.hpp"

namespace auctionlab {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

AuctionParams flow(double lambda_t, double alpha) {
  AuctionParams p;
  p.lambda_total = lambda_t;
  p.alpha = alpha;
  p.horizon = 1.0;
  return p;
}

CheckResult worst_of(int criterion, std::string id, double threshold) {
  CheckResult c;
  c.criterion = criterion;
  c.id = std::move(id);
  c.threshold = threshold;
  c.statistic = 0.0;
  return c;
}

void observe(CheckResult& c, double value, const std::string& note) {
  if (value > c.statistic) {
    c.statistic = value;
    c.detail = note;
  }
}

void finalize(CheckResult& c, std::vector<CheckResult>& out) {
  c.pass = c.statistic <= c.threshold;
  out.push_back(std::move(c));
}

// ---- criterion 1: no-trade probability ----------------------------------

void check_no_trade(std::vector<CheckResult>& out) {
  CheckResult small = worst_of(1, "no_trade_small_lambda", 1.0);
  // Normalised deviations: |P0 - target| / tolerance must stay below 1.
  double p_balanced = prob_no_trade(flow(10.0, 0.5));
  double p_skewed = prob_no_trade(flow(10.0, 0.125));
  observe(small, std::abs(p_balanced - 0.0404) / 0.0005,
          "lambda=10 alpha=0.5: P0=" + fmt(p_balanced) + " target 0.0404+-0.0005");
  observe(small, std::abs(p_skewed - 0.334) / 0.002,
          "lambda=10 alpha=0.125: P0=" + fmt(p_skewed) + " target 0.334+-0.002");
  if (small.detail.empty()) small.detail = "both lambda=10 targets hit";
  finalize(small, out);

  CheckResult large = worst_of(1, "no_trade_large_lambda", 1e-5);
  for (double a : {0.125, 0.25, 0.375, 0.5}) {
    double p0 = prob_no_trade(flow(100.0, a));
    observe(large, p0, "lambda=100 alpha=" + fmt(a) + ": P0=" + fmt(p0));
  }
  finalize(large, out);
}

// ---- criterion 2: evaluation-form equivalence ----------------------------

void check_volume_forms(std::vector<CheckResult>& out) {
  CheckResult hyp = worst_of(2, "volume_form_hyp", 1e-10);
  CheckResult sym = worst_of(2, "volume_form_symmetric", 1e-10);
  for (double lt : {1.0, 10.0, 100.0}) {
    for (int k = 0; k <= 20; ++k) {
      for (double a : {0.125, 0.3, 0.5}) {
        double v1 = volume_pmf(flow(lt, a), k).value;
        double v2 = volume_pmf_hyp(flow(lt, a), k).value;
        observe(hyp, std::abs(v1 - v2),
                "lambdaT=" + fmt(lt) + " alpha=" + fmt(a) + " k=" + std::to_string(k));
      }
      double v1 = volume_pmf(flow(lt, 0.5), k).value;
      double v3 = volume_pmf_symmetric(lt, k);
      observe(sym, std::abs(v1 - v3), "lambdaT=" + fmt(lt) + " k=" + std::to_string(k));
    }
  }
  finalize(hyp, out);
  finalize(sym, out);
}

// ---- criterion 3: brute-force mixture oracle -----------------------------

void check_mixture_oracle(std::vector<CheckResult>& out) {
  CheckResult c = worst_of(3, "volume_mixture_oracle", 1e-9);
  for (double lt : {1.0, 5.0, 15.0, 30.0}) {
    for (double a : {0.125, 0.3, 0.5}) {
      for (int k = 0; k <= 15; ++k) {
        double v = volume_pmf(flow(lt, a), k).value;
        double ref = volume_pmf_mixture_oracle(lt, a, k);
        observe(c, std::abs(v - ref),
                "lambdaT=" + fmt(lt) + " alpha=" + fmt(a) + " k=" + std::to_string(k));
      }
    }
  }
  finalize(c, out);
}

// ---- criterion 4: clearing mechanics -------------------------------------

void check_clearing(std::vector<CheckResult>& out, const ValidationConfig& cfg) {
  CheckResult eq = worst_of(4, "clearing_oracle_equivalence", 0.0);
  PhiloxRng rng(cfg.seed ^ 0xC1EA41ULL, 0);
  long long mismatches = 0;
  for (int i = 0; i < 10000; ++i) {
    int n = static_cast<int>(rng.poisson(4.0));
    int m = static_cast<int>(rng.poisson(4.0));
    bool gridded = rng.uniform01() < 0.5;  // integer prices force cross-side ties
    auto draw = [&]() {
      double u = rng.uniform01();
      return gridded ? std::floor(u * 5.0) + 1.0 : u;
    };
    std::vector<double> bids, asks;
    for (int j = 0; j < n; ++j) bids.push_back(draw());
    for (int j = 0; j < m; ++j) asks.push_back(draw());
    ClearingOutcome fast = clear_auction(bids, asks);
    ClearingOutcome ref = clear_auction_oracle(bids, asks);
    bool same = fast.volume == ref.volume && fast.n_bids == ref.n_bids &&
                fast.n_asks == ref.n_asks && fast.bounds.has_value() == ref.bounds.has_value();
    if (same && fast.bounds) {
      same = fast.bounds->lower == ref.bounds->lower && fast.bounds->upper == ref.bounds->upper;
    }
    if (!same) {
      ++mismatches;
      if (eq.detail.empty()) eq.detail = "first mismatch at instance " + std::to_string(i);
    }
  }
  eq.statistic = static_cast<double>(mismatches);
  if (eq.detail.empty()) eq.detail = "10^4 random books (half with tied integer prices)";
  finalize(eq, out);

  CheckResult en = worst_of(4, "conditional_volume_enumeration", 1e-12);
  for (int m = 0; m <= 8; ++m) {
    for (int n = 0; n <= 8; ++n) {
      DiscretePmf formula = conditional_volume_pmf(m, n);
      DiscretePmf listed = conditional_volume_enumeration(m, n);
      int k_top = std::min(m, n);
      for (int k = 0; k <= k_top; ++k) {
        observe(en, std::abs(formula.mass(k) - listed.mass(k)),
                "m=" + std::to_string(m) + " n=" + std::to_string(n) + " k=" + std::to_string(k));
      }
    }
  }
  finalize(en, out);
}

// ---- criterion 5: Monte Carlo vs exact volume law -------------------------

void check_volume_tv(std::vector<CheckResult>& out, const ValidationConfig& cfg) {
  CheckResult c = worst_of(5, "volume_tv_distance", 0.01);
  PriceDistPtr dist = make_uniform(0.0, 1.0);
  std::uint64_t salt = 0x70ULL;
  for (double lt : {5.0, 10.0, 50.0}) {
    for (double a : {0.125, 0.25, 0.375, 0.5}) {
      AuctionParams p = flow(lt, a);
      DiscretePmf table = volume_pmf_table(p, default_volume_k_max(lt));
      SampleSummary batch = run_batch(p, *dist, 100000, cfg.seed ^ (salt++), cfg.workers);
      double tv = total_variation(table, batch.volume_counts, batch.n_reps);
      observe(c, tv, "lambdaT=" + fmt(lt) + " alpha=" + fmt(a));
    }
  }
  finalize(c, out);
}

// ---- criterion 6: price-bound normality -----------------------------------

void check_price_bounds(std::vector<CheckResult>& out, const ValidationConfig& cfg) {
  PriceDistPtr dist = make_uniform(0.0, 1.0);
  const long long reps = 10000;
  std::vector<double> lts = cfg.extended ? std::vector<double>{5.0, 100.0, 1000.0}
                                         : std::vector<double>{5.0, 100.0};
  std::vector<double> ks_lower, ks_upper;
  for (std::size_t i = 0; i < lts.size(); ++i) {
    AuctionParams p = flow(lts[i], 0.3);
    NormalLaw law = asymptotic_price(p, *dist);
    SampleSummary batch = run_batch(p, *dist, reps, cfg.seed ^ (0x60ULL + i), cfg.workers);
    auto standardized_ks = [&](const std::vector<double>& sample) {
      std::vector<double> z(sample.size());
      for (std::size_t j = 0; j < sample.size(); ++j) z[j] = (sample[j] - law.mean) / law.sd;
      return ks_statistic(z, [](double x) { return std_normal_cdf(x); });
    };
    ks_lower.push_back(standardized_ks(batch.lower_samples));
    ks_upper.push_back(standardized_ks(batch.upper_samples));
  }

  if (cfg.extended) {
    CheckResult limit = worst_of(6, "price_bound_normality", 0.05);
    observe(limit, ks_lower.back(), "lower bound, lambdaT=1000: KS=" + fmt(ks_lower.back()));
    observe(limit, ks_upper.back(), "upper bound, lambdaT=1000: KS=" + fmt(ks_upper.back()));
    finalize(limit, out);
  }

  // Monotone improvement with one inversion tolerated inside 2-SE noise.
  double se2 = 2.0 * 0.2603 / std::sqrt(static_cast<double>(reps));
  CheckResult trend = worst_of(6, "price_bound_ks_trend", se2);
  auto scan = [&](const std::vector<double>& ks, const char* tag) {
    int inversions = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < ks.size(); ++i) {
      if (ks[i + 1] > ks[i]) {
        ++inversions;
        worst = std::max(worst, ks[i + 1] - ks[i]);
      }
    }
    std::string seq;
    for (double v : ks) seq += (seq.empty() ? "" : " -> ") + fmt(v);
    observe(trend, inversions > 1 ? std::numeric_limits<double>::infinity() : worst,
            std::string(tag) + " KS " + seq);
    if (trend.detail.empty()) trend.detail = std::string(tag) + " KS " + seq;
  };
  scan(ks_lower, "lower");
  scan(ks_upper, "upper");
  finalize(trend, out);
}

// ---- criterion 7: range law ------------------------------------------------

void check_range(std::vector<CheckResult>& out, const ValidationConfig& cfg) {
  CheckResult norm = worst_of(7, "range_uniform_normalization", 1e-8);
  for (double lt : {2.0, 10.0, 100.0}) {
    for (double a : {0.3, 0.5}) {
      AuctionParams p = flow(lt, a);
      std::vector<double> breaks;
      for (int j = 1; j <= 20; ++j) breaks.push_back(static_cast<double>(j) / lt);
      QuadratureResult q = adaptive_simpson_panels(
          [&](double d) { return range_density_uniform(p, 0.0, 1.0, d); }, 0.0, 1.0, breaks,
          1e-11);
      observe(norm, std::abs(q.value - 1.0), "lambdaT=" + fmt(lt) + " alpha=" + fmt(a));
    }
  }
  finalize(norm, out);

  CheckResult agree = worst_of(7, "range_general_matches_closed", 1e-6);
  PriceDistPtr uni = make_uniform(0.0, 1.0);
  for (double lt : {5.0, 20.0}) {
    for (double a : {0.3, 0.5}) {
      AuctionParams p = flow(lt, a);
      for (double d : {0.02, 0.1, 0.3}) {
        double general = range_density_general(p, *uni, d, 2e-7).value;
        double closed = range_density_uniform(p, 0.0, 1.0, d);
        observe(agree, std::abs(general - closed),
                "lambdaT=" + fmt(lt) + " alpha=" + fmt(a) + " delta=" + fmt(d));
      }
    }
  }
  finalize(agree, out);

  CheckResult mc = worst_of(7, "range_mc_mean", 0.05);
  AuctionParams p = flow(200.0, 0.3);
  SampleSummary batch = run_batch(p, *uni, 100000, cfg.seed ^ 0x77ULL, cfg.workers);
  double mean = 0.0;
  for (double r : batch.range_samples) mean += r;
  mean = mean * 200.0 / static_cast<double>(batch.range_samples.size());
  observe(mc, std::abs(mean - 1.0),
          "lambdaT=200: mean of lambdaT*R = " + fmt(mean) + " (target 1)");
  finalize(mc, out);
}

// ---- criterion 8: cancellation ---------------------------------------------

void check_cancellation(std::vector<CheckResult>& out, const ValidationConfig& cfg) {
  // Live-ask count at the close vs the thinned-Poisson mean.
  CheckResult live = worst_of(8, "cancellation_live_ask_mean", 3.0);
  {
    AuctionParams p = flow(20.0, 0.5);
    p.theta_ask = 2.0;
    p.theta_bid = 0.7;
    PriceDistPtr dist = make_uniform(0.0, 1.0);
    const long long reps = 100000;
    double sum = 0.0, sumsq = 0.0;
    for (long long r = 0; r < reps; ++r) {
      PhiloxRng rng(cfg.seed ^ 0x8AULL, static_cast<std::uint64_t>(r));
      ClearingOutcome o = simulate_auction(p, *dist, rng);
      double n = static_cast<double>(o.n_asks);
      sum += n;
      sumsq += n * n;
    }
    double n_reps = static_cast<double>(reps);
    double mean = sum / n_reps;
    double var = (sumsq - sum * sum / n_reps) / (n_reps - 1.0);
    double se = std::sqrt(var / n_reps);
    double lambda_ask = p.lambda_total * p.alpha;
    double expected = lambda_ask / p.theta_ask * -std::expm1(-p.theta_ask * p.horizon);
    live.statistic = std::abs(mean - expected) / se;
    live.detail = "mean=" + fmt(mean) + " expected=" + fmt(expected) + " se=" + fmt(se);
  }
  finalize(live, out);

  // Folding the decay into effective parameters must commute with every
  // asymptotic law, bit for bit.
  CheckResult comp = worst_of(8, "cancellation_composition", 0.0);
  PriceDistPtr dist = make_normal(0.0, 1.0);
  for (double ta : {0.5, 2.0}) {
    for (double tb : {0.0, 1.1}) {
      AuctionParams p = flow(300.0, 0.35);
      p.theta_ask = ta;
      p.theta_bid = tb;
      AuctionParams folded = fold_cancellation(p);
      NormalLaw v1 = asymptotic_volume(p), v2 = asymptotic_volume(folded);
      NormalLaw l1 = asymptotic_price(p, *dist), l2 = asymptotic_price(folded, *dist);
      ExponentialLaw r1 = asymptotic_range(p, *dist), r2 = asymptotic_range(folded, *dist);
      double diff = std::abs(v1.mean - v2.mean) + std::abs(v1.sd - v2.sd) +
                    std::abs(l1.mean - l2.mean) + std::abs(l1.sd - l2.sd) +
                    std::abs(r1.rate - r2.rate);
      observe(comp, diff, "theta_ask=" + fmt(ta) + " theta_bid=" + fmt(tb));
    }
  }
  if (comp.detail.empty()) comp.detail = "all laws identical through fold_cancellation";
  finalize(comp, out);

  CheckResult keep = worst_of(8, "cancellation_alpha_preserved", 0.0);
  for (double theta : {0.4, 1.3, 5.0}) {
    AuctionParams p = flow(50.0, 0.3);
    p.theta_ask = theta;
    p.theta_bid = theta;
    EffectiveParams eff = effective_params(p);
    observe(keep, std::abs(eff.alpha_eff - p.alpha), "theta=" + fmt(theta));
  }
  if (keep.detail.empty()) keep.detail = "alpha preserved exactly under equal decay";
  finalize(keep, out);
}

// ---- criterion 9: price-bound density normalization ------------------------

void check_price_density_norm(std::vector<CheckResult>& out) {
  CheckResult c = worst_of(9, "price_density_normalization", 1e-6);
  PriceDistPtr uni = make_uniform(0.0, 1.0);
  std::vector<double> breaks;
  for (int j = 1; j < 16; ++j) breaks.push_back(static_cast<double>(j) / 16.0);
  for (double lt : {10.0, 100.0}) {
    for (double a : {0.25, 0.5}) {
      AuctionParams p = flow(lt, a);
      QuadratureResult lower = adaptive_simpson_panels(
          [&](double x) { return lower_price_density(p, *uni, x).value; }, 0.0, 1.0, breaks,
          1e-8);
      QuadratureResult upper = adaptive_simpson_panels(
          [&](double x) { return upper_price_density(p, *uni, x).value; }, 0.0, 1.0, breaks,
          1e-8);
      observe(c, std::abs(lower.value - 1.0),
              "f_L lambdaT=" + fmt(lt) + " alpha=" + fmt(a) + " integral=" + fmt(lower.value));
      observe(c, std::abs(upper.value - 1.0),
              "f_U lambdaT=" + fmt(lt) + " alpha=" + fmt(a) + " integral=" + fmt(upper.value));
    }
  }
  finalize(c, out);
}

}  // namespace

std::vector<CheckResult> run_validation_suite(const ValidationConfig& config) {
  std::vector<CheckResult> out;
  auto timed = [&out](auto&& fn) {
    std::size_t first = out.size();
    auto t0 = std::chrono::steady_clock::now();
    fn();
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (std::size_t i = first; i < out.size(); ++i) out[i].group_seconds = secs;
  };
  timed([&] { check_no_trade(out); });
  timed([&] { check_volume_forms(out); });
  timed([&] { check_mixture_oracle(out); });
  timed([&] { check_clearing(out, config); });
  timed([&] { check_volume_tv(out, config); });
  timed([&] { check_price_bounds(out, config); });
  timed([&] { check_range(out, config); });
  timed([&] { check_cancellation(out, config); });
  timed([&] { check_price_density_norm(out); });
  return out;
}

std::string validation_report_json(const std::vector<CheckResult>& checks,
                                   const ValidationConfig& config) {
  nlohmann::ordered_json j;
  j["tool"] = "auctionlab validate";
  j["version"] = kVersion;
  j["seed"] = config.seed;
  j["extended"] = config.extended;
  bool all = true;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const CheckResult& c : checks) {
    nlohmann::ordered_json e;
    e["criterion"] = c.criterion;
    e["id"] = c.id;
    e["pass"] = c.pass;
    e["statistic"] = c.statistic;
    e["threshold"] = c.threshold;
    e["detail"] = c.detail;
    arr.push_back(e);
    all = all && c.pass;
  }
  j["checks"] = arr;
  j["all_pass"] = all;
  return j.dump(2) + "\n";
}

double volume_pmf_mixture_oracle(double mu, double alpha, int k, int count_cap) {
  if (!(mu > 0.0) || !(alpha >= 0.0 && alpha <= 1.0) || k < 0 || count_cap < 1) {
    throw std::invalid_argument("volume_pmf_mixture_oracle: bad arguments");
  }
  double am = alpha * mu;
  double bm = (1.0 - alpha) * mu;
  // Counts past mean + 12 sd + 40 carry Poisson mass < 1e-12 each side.
  auto side_cap = [count_cap](double mean) {
    return std::min(count_cap,
                    static_cast<int>(std::ceil(mean + 12.0 * std::sqrt(mean) + 40.0)));
  };
  int n_cap = side_cap(bm);
  int m_cap = side_cap(am);
  double acc = 0.0;
  for (int n = k; n <= n_cap; ++n) {
    for (int m = k; m <= m_cap; ++m) {
      double lw = poisson_log_pmf(n, bm) + poisson_log_pmf(m, am);
      double lh = ln_binomial(m, k) + ln_binomial(n, k) - ln_binomial(n + m, n);
      acc += std::exp(lw + lh);
    }
  }
  return acc;
}

DiscretePmf conditional_volume_enumeration(int m_asks, int n_bids) {
  int s = m_asks + n_bids;
  if (m_asks < 0 || n_bids < 0 || s > 20) {
    throw std::invalid_argument("conditional_volume_enumeration: need m + n <= 20");
  }
  std::map<int, long long> counts;
  long long total = 0;
  for (std::uint32_t mask = 0; mask < (1u << s); ++mask) {
    if (std::popcount(mask) != n_bids) continue;
    std::vector<double> bids, asks;
    for (int i = 0; i < s; ++i) {
      double price = static_cast<double>(i + 1);
      if (mask & (1u << i)) {
        bids.push_back(price);
      } else {
        asks.push_back(price);
      }
    }
    ClearingOutcome o = clear_auction_oracle(bids, asks);
    ++counts[static_cast<int>(o.volume)];
    ++total;
  }
  DiscretePmf pmf;
  for (const auto& [k, c] : counts) {
    pmf.masses[k] = static_cast<double>(c) / static_cast<double>(total);
  }
  return pmf;
}

}  // namespace auctionlab
