#pragma once

#include <stdexcept>
#include <string>

namespace auctionlab {

// Result of a truncated series evaluation. abs_error_bound is a certified
// upper bound on the truncation error (rounding is folded in conservatively),
// so the true value lies in [value - abs_error_bound, value + abs_error_bound].
struct SeriesResult {
  double value = 0.0;
  double abs_error_bound = 0.0;
  int terms_used = 0;
};

// Thrown when a series cannot certify the requested tolerance.
class ToleranceError : public std::runtime_error {
 public:
  ToleranceError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}

  // Error bound that was actually reached before giving up.
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

// log(n!). Exact 64-bit table for n <= 20, lgamma above; relative error
// stays below 1e-13 for n <= 1e6.
double ln_factorial(int n);

// log of the binomial coefficient C(n, k). Requires 0 <= k <= n.
double ln_binomial(int n, int k);

// Kummer confluent hypergeometric 1F1(a; b; x) for integer a, b >= 1.
// Negative x is routed through the Kummer transformation
// 1F1(a;b;x) = e^x 1F1(b-a;b;-x) so every summed term is nonnegative.
SeriesResult hyp1f1(int a, int b, double x, double rel_tol = 1e-16);

// log(1F1(a; b; x)) for integer a, b >= 1 and x >= 0, accumulated in log
// space so large arguments cannot overflow. abs_error_bound is a bound on
// the error of the returned logarithm (equivalently the relative error of
// the underlying value).
SeriesResult ln_hyp1f1(int a, int b, double x, double rel_tol = 1e-16);

// Standard normal density, CDF and quantile. The quantile is a rational
// approximation polished with one Halley step against the erfc-based CDF;
// round-trip |quantile(cdf(x)) - x| < 1e-9 holds for |x| <= 6.
double std_normal_pdf(double x);
double std_normal_cdf(double x);
double std_normal_quantile(double p);

// log of the Poisson(mu) probability mass at k (-inf for impossible k).
double poisson_log_pmf(int k, double mu);

// log of an upper bound on P(N >= k_min) for N ~ Poisson(mu). Returns 0
// (the trivial bound 1) when k_min <= mu; a geometric-ratio tail bound
// otherwise.
double poisson_log_tail_bound(int k_min, double mu);

// log(e^z - 1) for z > 0 without overflow or cancellation.
double ln_expm1(double z);

}  // namespace auctionlab
