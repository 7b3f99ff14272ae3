#include "auctionlab/special.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace auctionlab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Direct Kummer series sum_j (a)_j / (b)_j x^j / j! for x >= 0 (or the
// terminating polynomial when a <= 0). Terms are generated by the exact
// ratio recurrence, so each is a product of correctly rounded factors.
SeriesResult kummer_series(double a, double b, double x, double rel_tol) {
  SeriesResult out;
  double term = 1.0;
  double sum = 1.0;
  double sum_abs = 1.0;
  int j = 0;
  int small_streak = 0;
  double ratio = 0.0;
  constexpr int kMaxTerms = 2'000'000;
  while (j < kMaxTerms) {
    ratio = x * (a + j) / ((b + j) * (j + 1.0));
    term *= ratio;
    sum += term;
    sum_abs += std::abs(term);
    ++j;
    if (std::abs(term) <= rel_tol * std::abs(sum)) {
      // Require the streak and a decaying ratio so we do not stop in the
      // flat region before the term peak (terms grow until j ~ x).
      if (++small_streak >= 3 && std::abs(ratio) < 0.5) break;
    } else {
      small_streak = 0;
    }
    if (term == 0.0) break;  // terminating polynomial (a was a nonpositive integer)
  }
  double r = std::abs(ratio);
  double tail = (r < 1.0) ? std::abs(term) * r / (1.0 - r) : std::abs(term);
  if (j >= kMaxTerms) {
    throw ToleranceError("hyp1f1: series did not converge", tail);
  }
  out.value = sum;
  out.abs_error_bound = tail + kEps * sum_abs * static_cast<double>(j);
  out.terms_used = j;
  return out;
}

}  // namespace

double ln_factorial(int n) {
  if (n < 0) throw std::invalid_argument("ln_factorial: n must be >= 0");
  static const std::array<double, 21> table = [] {
    std::array<double, 21> t{};
    std::uint64_t f = 1;
    t[0] = 0.0;
    for (int i = 1; i <= 20; ++i) {
      f *= static_cast<std::uint64_t>(i);
      t[static_cast<std::size_t>(i)] = std::log(static_cast<double>(f));
    }
    return t;
  }();
  if (n <= 20) return table[static_cast<std::size_t>(n)];
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double ln_binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) {
    throw std::invalid_argument("ln_binomial: need 0 <= k <= n");
  }
  return ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k);
}

SeriesResult hyp1f1(int a, int b, double x, double rel_tol) {
  if (a < 1 || b < 1) throw std::invalid_argument("hyp1f1: need integer a, b >= 1");
  if (!std::isfinite(x)) throw std::invalid_argument("hyp1f1: x must be finite");
  if (x >= 0.0) return kummer_series(a, b, x, rel_tol);
  // Kummer transformation: all terms of 1F1(b-a; b; -x) are nonnegative
  // when b >= a, and the series terminates when b < a.
  SeriesResult s = kummer_series(static_cast<double>(b - a), static_cast<double>(b), -x, rel_tol);
  double scale = std::exp(x);
  s.value *= scale;
  s.abs_error_bound = s.abs_error_bound * scale + 2.0 * kEps * std::abs(s.value);
  return s;
}

SeriesResult ln_hyp1f1(int a, int b, double x, double rel_tol) {
  if (a < 1 || b < 1) throw std::invalid_argument("ln_hyp1f1: need integer a, b >= 1");
  if (!(x >= 0.0)) throw std::invalid_argument("ln_hyp1f1: need x >= 0");
  SeriesResult out;
  if (x == 0.0) {
    out.value = 0.0;
    out.terms_used = 1;
    return out;
  }
  // Streaming log-sum-exp over the (all positive) series terms.
  double ln_term = 0.0;  // log of the current term
  double peak = 0.0;     // running max of ln_term
  double scaled = 1.0;   // sum of exp(ln_term - peak)
  int j = 0;
  int small_streak = 0;
  double ratio = 0.0;
  constexpr int kMaxTerms = 2'000'000;
  while (j < kMaxTerms) {
    ratio = x * (a + j) / ((static_cast<double>(b) + j) * (j + 1.0));
    ln_term += std::log(ratio);
    if (ln_term > peak) {
      scaled = scaled * std::exp(peak - ln_term) + 1.0;
      peak = ln_term;
    } else {
      scaled += std::exp(ln_term - peak);
    }
    ++j;
    double rel_term = std::exp(ln_term - peak) / scaled;
    if (rel_term <= rel_tol) {
      if (++small_streak >= 3 && ratio < 0.5) break;
    } else {
      small_streak = 0;
    }
  }
  double tail_rel = (ratio < 1.0) ? std::exp(ln_term - peak) / scaled * ratio / (1.0 - ratio)
                                  : std::numeric_limits<double>::infinity();
  if (j >= kMaxTerms || !std::isfinite(tail_rel)) {
    throw ToleranceError("ln_hyp1f1: series did not converge", tail_rel);
  }
  out.value = peak + std::log(scaled);
  out.abs_error_bound = tail_rel + kEps * static_cast<double>(j);
  out.terms_used = j;
  return out;
}

double std_normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double std_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("std_normal_quantile: need p in (0, 1)");
  }
  // Rational approximation (relative error ~1e-9 everywhere), then one
  // Halley step against the erfc-based CDF to push it to ~1e-15.
  static constexpr double A[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double B[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double C[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double D[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x;
  if (p < p_low) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
        ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    double q = p - 0.5;
    double r = q * q;
    x = (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q /
        (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
        ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
  }
  if (std::abs(x) < 37.0) {  // further out the CDF underflows and the step is moot
    double e = std_normal_cdf(x) - p;
    double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

double poisson_log_pmf(int k, double mu) {
  if (k < 0) return kNegInf;
  if (!(mu >= 0.0)) throw std::invalid_argument("poisson_log_pmf: need mu >= 0");
  if (mu == 0.0) return k == 0 ? 0.0 : kNegInf;
  return static_cast<double>(k) * std::log(mu) - mu - ln_factorial(k);
}

double poisson_log_tail_bound(int k_min, double mu) {
  if (k_min <= mu || k_min <= 0) return 0.0;
  // Successive mass ratios beyond k_min are at most mu / (k_min + 1) < 1,
  // so the tail is dominated by a geometric series.
  double rho = mu / (static_cast<double>(k_min) + 1.0);
  return poisson_log_pmf(k_min, mu) - std::log1p(-rho);
}

double ln_expm1(double z) {
  if (!(z > 0.0)) throw std::invalid_argument("ln_expm1: need z > 0");
  if (z > 36.0) return z + std::log1p(-std::exp(-z));
  return std::log(std::expm1(z));
}

}  // namespace auctionlab
