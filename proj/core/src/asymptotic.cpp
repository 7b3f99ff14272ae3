#include "auctionlab/asymptotic.hpp"

#include <cmath>
#include <stdexcept>

#include "auctionlab/special.hpp"

namespace auctionlab {

namespace {

void require_two_sided(double alpha, const char* what) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument(std::string(what) +
                                ": effective alpha must lie in (0, 1); a one-sided book has no "
                                "nondegenerate limit law");
  }
}

}  // namespace

double NormalLaw::pdf(double x) const { return std_normal_pdf((x - mean) / sd) / sd; }
double NormalLaw::cdf(double x) const { return std_normal_cdf((x - mean) / sd); }

double ExponentialLaw::pdf(double x) const { return x < 0.0 ? 0.0 : rate * std::exp(-rate * x); }
double ExponentialLaw::cdf(double x) const { return x <= 0.0 ? 0.0 : -std::expm1(-rate * x); }

NormalLaw asymptotic_volume(const AuctionParams& params) {
  EffectiveParams eff = effective_params(params);
  require_two_sided(eff.alpha_eff, "asymptotic_volume");
  double mu = eff.lambda_eff * params.horizon;
  double ab = eff.alpha_eff * (1.0 - eff.alpha_eff);
  NormalLaw law;
  law.mean = mu * ab;
  law.sd = std::sqrt(mu * ab * (1.0 - 2.0 * ab));
  return law;
}

NormalLaw asymptotic_price(const AuctionParams& params, const PriceDistribution& dist) {
  EffectiveParams eff = effective_params(params);
  require_two_sided(eff.alpha_eff, "asymptotic_price");
  double mu = eff.lambda_eff * params.horizon;
  double a = eff.alpha_eff;
  // Both price bounds concentrate at the quantile splitting the pooled
  // book into its bid-count cheapest orders.
  double q = dist.quantile(1.0 - a);
  double fq = dist.pdf(q);
  if (!(fq > 0.0)) {
    throw std::invalid_argument("asymptotic_price: zero density at the balance quantile");
  }
  NormalLaw law;
  law.mean = q;
  law.sd = std::sqrt(2.0 * a * (1.0 - a) / mu) / fq;
  return law;
}

ExponentialLaw asymptotic_range(const AuctionParams& params, const PriceDistribution& dist) {
  EffectiveParams eff = effective_params(params);
  require_two_sided(eff.alpha_eff, "asymptotic_range");
  double mu = eff.lambda_eff * params.horizon;
  double q = dist.quantile(1.0 - eff.alpha_eff);
  double fq = dist.pdf(q);
  if (!(fq > 0.0)) {
    throw std::invalid_argument("asymptotic_range: zero density at the balance quantile");
  }
  ExponentialLaw law;
  law.rate = mu * fq;
  return law;
}

}  // namespace auctionlab
