#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace auctionlab {

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  int evaluations = 0;
};

// Thrown when adaptive refinement exhausts its depth budget before reaching
// the requested tolerance.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}

  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

// Adaptive Simpson integration of f over [a, b] to absolute tolerance
// abs_tol. Never throws: the achieved error is reported in the result so
// callers with soft tolerances can budget it themselves.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol, int max_depth = 48);

// Same, but the interval is pre-split at the given breakpoints (useful when
// the integrand is peaked and good split locations are known, e.g. quantiles
// of a density). Breakpoints must be sorted; entries outside (a, b) are
// ignored.
QuadratureResult adaptive_simpson_panels(const std::function<double(double)>& f, double a,
                                         double b, const std::vector<double>& breakpoints,
                                         double abs_tol, int max_depth = 48);

// Convenience wrapper that throws QuadratureError if the achieved error
// estimate exceeds abs_tol.
double integrate_or_throw(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_depth = 48);

}  // namespace auctionlab
