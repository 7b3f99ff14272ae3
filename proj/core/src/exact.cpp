#include "auctionlab/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "auctionlab/quadrature.hpp"

namespace auctionlab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Shells s = n + m beyond this cap carry less Poisson(mu) mass than ~1e-26
// even after the polynomial factors of the summands are absorbed.
int shell_cap(double mu) {
  return static_cast<int>(std::ceil(mu + 12.0 * std::sqrt(mu) + 60.0));
}

// log(1 - e^{-t}) for t > 0, accurate in both regimes.
double ln1mexp(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("ln1mexp: need t > 0");
  if (t > 0.693) return std::log1p(-std::exp(-t));
  return std::log(-std::expm1(-t));
}

void require_mixed_book(double alpha, const char* what) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument(std::string(what) +
                                ": need alpha in (0, 1); a one-sided book never trades and the "
                                "nonempty-book conditioning is degenerate");
  }
}

// Double series over (bid count, ask count) for the density of the lower
// clearing bound at a point with CDF value big_f and density little_f,
// conditioned on both sides nonempty. The upper bound goes through the
// same kernel with (alpha, F) reflected.
SeriesResult price_bound_kernel(double mu, double alpha, double big_f, double little_f,
                                double tol, const char* what) {
  SeriesResult out;
  if (little_f <= 0.0) return out;
  if (big_f >= 1.0) return out;  // every term carries (1 - F)^m with m >= 1
  double am = alpha * mu;
  double bm = (1.0 - alpha) * mu;
  double ln_norm = ln1mexp(am) + ln1mexp(bm);
  double lam = std::log(am);
  double lbm = std::log(bm);
  double lf = std::log(little_f);
  double ln_f_cdf = big_f > 0.0 ? std::log(big_f) : 0.0;  // unused when big_f == 0
  double ln_s_cdf = std::log1p(-big_f);

  int cap = shell_cap(mu);
  double skip_at = tol * 1e-6 / static_cast<double>(cap + 1);
  double sum = 0.0;
  double skipped = 0.0;
  int terms = 0;
  for (int s = 2; s <= cap; ++s) {
    double lps = poisson_log_pmf(s, mu);
    // The conditional density of an order statistic is at most s * f(x),
    // so the whole shell contributes at most this much.
    double shell_bound = std::exp(lps + std::log(static_cast<double>(s)) + lf - ln_norm);
    if (shell_bound < skip_at) {
      skipped += shell_bound;
      continue;
    }
    for (int n = 1; n < s; ++n) {
      if (big_f <= 0.0 && n > 1) break;  // F^{n-1} kills every later n
      int m = s - n;
      double lt = -mu + n * lbm - ln_factorial(n) + m * lam - ln_factorial(m) +
                  ln_factorial(n + m) - ln_factorial(n - 1) - ln_factorial(m) +
                  (n > 1 ? (n - 1) * ln_f_cdf : 0.0) + m * ln_s_cdf + lf - ln_norm;
      sum += std::exp(lt);
      ++terms;
    }
  }
  // sum_{s > cap} s p_s(mu) = mu P(N >= cap).
  double tail = little_f * mu * std::exp(poisson_log_tail_bound(cap, mu) - ln_norm);
  out.value = sum;
  out.abs_error_bound = skipped + tail + kEps * sum * static_cast<double>(std::max(terms, 1));
  out.terms_used = terms;
  if (out.abs_error_bound > tol) {
    throw ToleranceError(std::string(what) + ": series bound exceeds tolerance",
                         out.abs_error_bound);
  }
  return out;
}

struct ConditionalQuad {
  double value = 0.0;
  double achieved = 0.0;
};

ConditionalQuad conditional_range_quad(int m_asks, int n_bids, const PriceDistribution& dist,
                                       double delta, double quad_tol) {
  if (m_asks < 1 || n_bids < 1) {
    throw std::invalid_argument("conditional_range_density: need m, n >= 1");
  }
  if (!(delta >= 0.0)) throw std::invalid_argument("conditional_range_density: need delta >= 0");
  auto [lo, hi] = dist.support();
  ConditionalQuad out;
  if (delta >= hi - lo) return out;

  double ln_pref =
      ln_factorial(n_bids + m_asks) - ln_factorial(n_bids - 1) - ln_factorial(m_asks - 1);
  auto integrand = [&](double x) -> double {
    double fx = dist.pdf(x);
    if (fx <= 0.0) return 0.0;
    double fxd = dist.pdf(x + delta);
    if (fxd <= 0.0) return 0.0;
    double cdf_lo = dist.cdf(x);
    double sf_hi = 1.0 - dist.cdf(x + delta);
    if (n_bids > 1 && cdf_lo <= 0.0) return 0.0;
    if (m_asks > 1 && sf_hi <= 0.0) return 0.0;
    double ln = ln_pref + std::log(fx) + std::log(fxd);
    if (n_bids > 1) ln += (n_bids - 1) * std::log(cdf_lo);
    if (m_asks > 1) ln += (m_asks - 1) * std::log(sf_hi);
    return std::exp(ln);
  };

  // Pre-split at distribution quantiles: the integrand peaks where about
  // n of the n + m prices sit below x, and adaptive refinement then only
  // has to zoom locally.
  std::vector<double> breaks;
  for (int j = 1; j < 16; ++j) {
    double q = dist.quantile(static_cast<double>(j) / 16.0);
    if (q > lo && q < hi - delta) breaks.push_back(q);
  }
  QuadratureResult r = adaptive_simpson_panels(integrand, lo, hi - delta, breaks, quad_tol);
  if (r.abs_error_estimate > quad_tol) {
    throw QuadratureError("conditional_range_density: tolerance not reached",
                          r.abs_error_estimate);
  }
  out.value = r.value;
  out.achieved = r.abs_error_estimate;
  return out;
}

}  // namespace

SeriesResult volume_pmf(const AuctionParams& params, int k, double tol) {
  params.validate();
  if (k < 0) throw std::invalid_argument("volume_pmf: need k >= 0");
  SeriesResult out;
  double mu = params.mu();
  double a = params.alpha;
  double b = 1.0 - a;
  if (a == 0.0 || b == 0.0) {  // one-sided flow: volume is zero almost surely
    out.value = k == 0 ? 1.0 : 0.0;
    return out;
  }
  int cap = shell_cap(mu);
  int s_min = k == 0 ? 0 : 2 * k;
  if (s_min > cap) {
    // The event {V = k} needs at least 2k orders; all such books lie beyond
    // the shell cap and their probability is already below any sane tol.
    out.abs_error_bound = std::exp(poisson_log_tail_bound(s_min, mu));
    if (out.abs_error_bound > tol) {
      throw ToleranceError("volume_pmf: k beyond shell cap with loose bound",
                           out.abs_error_bound);
    }
    return out;
  }
  double lam = std::log(a * mu);
  double lbm = std::log(b * mu);
  double skip_at = tol * 1e-6 / static_cast<double>(cap + 1);
  double sum = 0.0;
  double skipped = 0.0;
  int terms = 0;
  for (int s = s_min; s <= cap; ++s) {
    double lps = poisson_log_pmf(s, mu);
    // The hypergeometric factor is a probability, so p_s(mu) bounds the shell.
    if (std::exp(lps) < skip_at) {
      skipped += std::exp(lps);
      continue;
    }
    int n_lo = k == 0 ? 0 : k;
    int n_hi = k == 0 ? s : s - k;
    for (int n = n_lo; n <= n_hi; ++n) {
      int m = s - n;
      double lt = -mu + n * lbm - ln_factorial(n) + m * lam - ln_factorial(m) +
                  ln_binomial(m, k) + ln_binomial(n, k) - ln_binomial(s, n);
      sum += std::exp(lt);
      ++terms;
    }
  }
  double tail = std::exp(poisson_log_tail_bound(cap + 1, mu));
  out.value = sum;
  out.abs_error_bound = skipped + tail + kEps * sum * static_cast<double>(std::max(terms, 1));
  out.terms_used = terms;
  if (out.abs_error_bound > tol) {
    throw ToleranceError("volume_pmf: series bound exceeds tolerance", out.abs_error_bound);
  }
  return out;
}

SeriesResult volume_pmf_hyp(const AuctionParams& params, int k, double tol) {
  params.validate();
  if (k < 0) throw std::invalid_argument("volume_pmf_hyp: need k >= 0");
  SeriesResult out;
  double mu = params.mu();
  double a = params.alpha;
  double b = 1.0 - a;
  if (a == 0.0 || b == 0.0) {
    out.value = k == 0 ? 1.0 : 0.0;
    return out;
  }
  double am = a * mu;
  double bm = b * mu;
  // Summing the ask count first collapses it into 1F1(k+1; n+k+1; am); what
  // remains is a single sum over the bid count n, whose term is bounded by
  // the Poisson(bm) mass at n.
  int cap = static_cast<int>(std::ceil(bm + 12.0 * std::sqrt(bm) + 60.0));
  double base = -mu + k * std::log(am) - ln_factorial(k);
  double lbm = std::log(bm);
  double skip_at = tol * 1e-6 / static_cast<double>(cap + 1);
  double sum = 0.0;
  double skipped = 0.0;
  double series_rel = 0.0;
  int terms = 0;
  for (int n = k; n <= cap; ++n) {
    double lw = poisson_log_pmf(n, bm);
    if (std::exp(lw) < skip_at) {
      skipped += std::exp(lw);
      continue;
    }
    SeriesResult h = ln_hyp1f1(k + 1, n + k + 1, am);
    double lt = base + n * lbm + ln_factorial(n) - ln_factorial(n - k) - ln_factorial(n + k) +
                h.value;
    sum += std::exp(lt);
    series_rel = std::max(series_rel, h.abs_error_bound);
    ++terms;
  }
  double tail = std::exp(poisson_log_tail_bound(cap + 1, bm));
  out.value = sum;
  out.abs_error_bound =
      skipped + tail + sum * (series_rel + kEps * static_cast<double>(std::max(terms, 1)));
  out.terms_used = terms;
  if (out.abs_error_bound > tol) {
    throw ToleranceError("volume_pmf_hyp: series bound exceeds tolerance", out.abs_error_bound);
  }
  return out;
}

double volume_pmf_symmetric(double lambda_t, int k) {
  if (!(lambda_t > 0.0)) throw std::invalid_argument("volume_pmf_symmetric: need lambda_t > 0");
  if (k < 0) throw std::invalid_argument("volume_pmf_symmetric: need k >= 0");
  double half = 0.5 * lambda_t;
  double ln = -half + 2.0 * k * std::log(half) - ln_factorial(2 * k) +
              std::log1p(half / (2.0 * k + 1.0));
  return std::exp(ln);
}

double prob_no_trade(const AuctionParams& params) {
  params.validate();
  double mu = params.mu();
  double a = params.alpha;
  double d = 1.0 - 2.0 * a;  // imbalance; the formula has a removable pole at d = 0
  double z = 0.5 * d * mu;
  double first = std::exp(-a * mu);
  double second;
  if (std::abs(z) < 1e-3) {
    double z2 = z * z;
    second = a * mu * std::exp(-0.5 * mu) * (1.0 + z2 / 6.0 + z2 * z2 / 120.0);  // sinh(z)/z
  } else {
    second = a / d * (std::exp(-a * mu) - std::exp(-(1.0 - a) * mu));
  }
  return first + second;
}

SeriesResult lower_price_density(const AuctionParams& params, const PriceDistribution& dist,
                                 double x, double tol) {
  params.validate();
  require_mixed_book(params.alpha, "lower_price_density");
  return price_bound_kernel(params.mu(), params.alpha, dist.cdf(x), dist.pdf(x), tol,
                            "lower_price_density");
}

SeriesResult upper_price_density(const AuctionParams& params, const PriceDistribution& dist,
                                 double x, double tol) {
  params.validate();
  require_mixed_book(params.alpha, "upper_price_density");
  // Reflection: the upper bound of the book is the lower bound of the
  // price-mirrored book with the side roles swapped.
  return price_bound_kernel(params.mu(), 1.0 - params.alpha, 1.0 - dist.cdf(x), dist.pdf(x), tol,
                            "upper_price_density");
}

SeriesResult lower_price_density_hyp(const AuctionParams& params, const PriceDistribution& dist,
                                     double x, double tol) {
  params.validate();
  require_mixed_book(params.alpha, "lower_price_density_hyp");
  SeriesResult out;
  double fx = dist.pdf(x);
  if (fx <= 0.0) return out;
  double big_f = dist.cdf(x);
  if (big_f >= 1.0) return out;
  double mu = params.mu();
  double am = params.alpha * mu;
  double bm = (1.0 - params.alpha) * mu;
  double y = bm * big_f;             // bid-side mass below x
  double z = am * (1.0 - big_f);     // ask-side mass above x
  double ln_norm = ln1mexp(am) + ln1mexp(bm);

  // Keeping the bid count n = p + 1 and collapsing the ask sum leaves
  // sum_p y^p / p! (1F1(p+2; 1; z) - 1); each n-term of the original double
  // series is bounded by the Poisson(bm) mass at n, giving the tail bound.
  int cap = static_cast<int>(std::ceil(bm + 12.0 * std::sqrt(bm) + 60.0));
  double ln_y = y > 0.0 ? std::log(y) : -std::numeric_limits<double>::infinity();
  double skip_ln = std::log(tol * 1e-6 / static_cast<double>(cap + 1)) -
                   (-mu + std::log(bm) + std::log(fx) - ln_norm);
  double peak = -std::numeric_limits<double>::infinity();
  double scaled = 0.0;
  double skipped_terms = 0.0;  // in term units (pre-prefactor)
  double series_rel = 0.0;
  int terms = 0;
  for (int p = 0; p + 1 <= cap; ++p) {
    double ln_poly = (p == 0 ? 0.0 : p * ln_y) - ln_factorial(p);
    if (y == 0.0 && p > 0) break;
    // 1F1(p+2; 1; z) <= exp(z + 2 sqrt((p+1) z)): cheap pre-skip of the far
    // tail in p without evaluating the series.
    double ln_upper = ln_poly + z + 2.0 * std::sqrt((p + 1.0) * z);
    if (ln_upper < skip_ln) {
      skipped_terms += std::exp(ln_upper);
      continue;
    }
    SeriesResult h = ln_hyp1f1(p + 2, 1, z);
    if (h.value <= 0.0) continue;  // 1F1 == 1, bracket vanishes (z == 0)
    double lt = ln_poly + ln_expm1(h.value);
    if (lt > peak) {
      scaled = scaled * std::exp(peak - lt) + 1.0;
      peak = lt;
    } else {
      scaled += std::exp(lt - peak);
    }
    series_rel = std::max(series_rel, h.abs_error_bound);
    ++terms;
  }
  double pref_ln = -mu + std::log(bm) + std::log(fx) - ln_norm;
  double value = (terms > 0) ? std::exp(pref_ln + peak + std::log(scaled)) : 0.0;
  double tail = fx * mu * std::exp(poisson_log_tail_bound(cap, bm) - ln_norm);
  out.value = value;
  // The 1F1 relative bounds act on H, which the expm1 bracket can amplify;
  // sum_p y^p/p! H_p = (bracket sum) + e^y covers the worst case.
  double series_err = series_rel * (value + std::exp(pref_ln + y));
  out.abs_error_bound = std::exp(pref_ln) * skipped_terms + tail + series_err +
                        value * kEps * static_cast<double>(std::max(terms, 1));
  out.terms_used = terms;
  if (out.abs_error_bound > tol) {
    throw ToleranceError("lower_price_density_hyp: series bound exceeds tolerance",
                         out.abs_error_bound);
  }
  return out;
}

double range_density_uniform(const AuctionParams& params, double lo, double hi, double delta) {
  params.validate();
  require_mixed_book(params.alpha, "range_density_uniform");
  if (!(hi > lo)) throw std::invalid_argument("range_density_uniform: need lo < hi");
  double width = hi - lo;
  if (delta < 0.0 || delta >= width) return 0.0;
  double mu = params.mu();
  double am = params.alpha * mu;
  double bm = (1.0 - params.alpha) * mu;
  double u = delta / width;
  double numer = mu * std::exp(-mu * u) - am * std::exp(-bm - am * u) -
                 bm * std::exp(-am - bm * u);
  double norm = (-std::expm1(-am)) * (-std::expm1(-bm));
  return numer / norm / width;
}

double conditional_range_density(int m_asks, int n_bids, const PriceDistribution& dist,
                                 double delta, double quad_tol) {
  return conditional_range_quad(m_asks, n_bids, dist, delta, quad_tol).value;
}

SeriesResult range_density_general(const AuctionParams& params, const PriceDistribution& dist,
                                   double delta, double tol) {
  params.validate();
  require_mixed_book(params.alpha, "range_density_general");
  if (!(delta >= 0.0)) throw std::invalid_argument("range_density_general: need delta >= 0");
  SeriesResult out;
  auto [lo, hi] = dist.support();
  if (delta >= hi - lo) return out;
  double mu = params.mu();
  double am = params.alpha * mu;
  double bm = (1.0 - params.alpha) * mu;
  double ln_norm = ln1mexp(am) + ln1mexp(bm);
  double sup_f = dist.pdf_sup();

  int cap = shell_cap(mu);
  double skip_at = 0.2 * tol / (static_cast<double>(cap) * static_cast<double>(cap));
  double quad_tol = 0.4 * tol;  // sum of mixture weights is at most one
  double sum = 0.0;
  double skipped = 0.0;
  double quad_err = 0.0;
  int terms = 0;
  for (int n = 1; n < cap; ++n) {
    double lwn = poisson_log_pmf(n, bm);
    for (int m = 1; m + n <= cap; ++m) {
      double lw = lwn + poisson_log_pmf(m, am) - ln_norm;
      double w = std::exp(lw);
      // Conditional gap density is at most (n + m) sup f.
      double pair_bound = w * static_cast<double>(n + m) * sup_f;
      if (pair_bound < skip_at) {
        skipped += pair_bound;
        continue;
      }
      ConditionalQuad q = conditional_range_quad(m, n, dist, delta, quad_tol);
      sum += w * q.value;
      quad_err += w * q.achieved;
      ++terms;
    }
  }
  double tail = sup_f * mu * std::exp(poisson_log_tail_bound(cap, mu) - ln_norm);
  out.value = sum;
  out.abs_error_bound =
      skipped + tail + quad_err + kEps * sum * static_cast<double>(std::max(terms, 1));
  out.terms_used = terms;
  if (out.abs_error_bound > tol) {
    throw ToleranceError("range_density_general: error bound exceeds tolerance",
                         out.abs_error_bound);
  }
  return out;
}

DiscretePmf volume_pmf_table(const AuctionParams& params, int k_max, double tol) {
  params.validate();
  if (k_max < 0) throw std::invalid_argument("volume_pmf_table: need k_max >= 0");
  DiscretePmf pmf;
  for (int k = 0; k <= k_max; ++k) {
    pmf.masses[k] = volume_pmf(params, k, tol).value;
  }
  // {V > k_max} needs at least 2 (k_max + 1) submitted orders.
  pmf.tail_bound = std::exp(poisson_log_tail_bound(2 * (k_max + 1), params.mu()));
  return pmf;
}

int default_volume_k_max(double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("default_volume_k_max: need mu > 0");
  return static_cast<int>(std::ceil(mu) + std::ceil(10.0 * std::sqrt(mu))) + 20;
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 2 || !(hi > lo)) throw std::invalid_argument("linspace: need n >= 2 and lo < hi");
  std::vector<double> out(static_cast<std::size_t>(n));
  double step = (hi - lo) / static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo + step * i;
  out.back() = hi;
  return out;
}

namespace {

template <typename PointFn>
DensityCurve tabulate_curve(const std::vector<double>& grid, PointFn&& fn) {
  DensityCurve curve;
  curve.x = grid;
  curve.density.reserve(grid.size());
  curve.error_bound.reserve(grid.size());
  for (double x : grid) {
    SeriesResult r = fn(x);
    curve.density.push_back(r.value);
    curve.error_bound.push_back(r.abs_error_bound);
  }
  return curve;
}

}  // namespace

DensityCurve tabulate_lower_price_density(const AuctionParams& params,
                                          const PriceDistribution& dist,
                                          const std::vector<double>& grid, double tol) {
  return tabulate_curve(grid,
                        [&](double x) { return lower_price_density(params, dist, x, tol); });
}

DensityCurve tabulate_upper_price_density(const AuctionParams& params,
                                          const PriceDistribution& dist,
                                          const std::vector<double>& grid, double tol) {
  return tabulate_curve(grid,
                        [&](double x) { return upper_price_density(params, dist, x, tol); });
}

}  // namespace auctionlab
