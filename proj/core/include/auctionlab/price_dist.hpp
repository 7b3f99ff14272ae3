#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "auctionlab/rng.hpp"

namespace auctionlab {

// Continuous price marginal shared by bids and asks. Implementations must
// keep cdf / pdf / quantile mutually consistent; samples are always drawn
// by inversion so a stream of uniforms maps to prices deterministically.
class PriceDistribution {
 public:
  virtual ~PriceDistribution() = default;

  virtual double cdf(double x) const = 0;
  virtual double pdf(double x) const = 0;

  // Inverse CDF; requires p in (0, 1).
  virtual double quantile(double p) const = 0;

  // Interval outside which pdf is treated as zero. For unbounded families
  // this is a numerical support covering all but ~1e-16 of the mass.
  virtual std::pair<double, double> support() const = 0;

  // Finite upper bound on the density over the support.
  virtual double pdf_sup() const = 0;

  // Round-trippable textual form, e.g. "uniform:0,1".
  virtual std::string spec() const = 0;

  double sample(PhiloxRng& rng) const { return quantile(rng.uniform01()); }
};

using PriceDistPtr = std::shared_ptr<const PriceDistribution>;

PriceDistPtr make_uniform(double lo, double hi);
PriceDistPtr make_normal(double mean, double sd);
PriceDistPtr make_exponential(double rate);

// Parses "uniform:lo,hi", "normal:mean,sd" or "exponential:rate".
// Throws std::invalid_argument on unknown family, wrong arity or
// out-of-range parameters.
PriceDistPtr parse_distribution(std::string_view spec);

}  // namespace auctionlab
