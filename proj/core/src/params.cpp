#include "auctionlab/params.hpp"

#include <cmath>
#include <stdexcept>

namespace auctionlab {

void AuctionParams::validate() const {
  auto bad = [](const char* msg) { throw std::invalid_argument(msg); };
  if (!std::isfinite(lambda_total) || lambda_total <= 0.0) bad("params: lambda_total must be positive and finite");
  if (!std::isfinite(alpha) || alpha < 0.0 || alpha > 1.0) bad("params: alpha must lie in [0, 1]");
  if (!std::isfinite(horizon) || horizon <= 0.0) bad("params: horizon must be positive and finite");
  if (!std::isfinite(theta_ask) || theta_ask < 0.0) bad("params: theta_ask must be >= 0");
  if (!std::isfinite(theta_bid) || theta_bid < 0.0) bad("params: theta_bid must be >= 0");
}

double effective_window(double theta, double horizon) {
  if (!(horizon > 0.0) || theta < 0.0) {
    throw std::invalid_argument("effective_window: need horizon > 0 and theta >= 0");
  }
  double z = theta * horizon;
  if (z == 0.0) return horizon;
  if (z < 1e-8) {
    // Series branch: T (1 - z/2 + z^2/6); the direct quotient loses digits.
    return horizon * (1.0 - z / 2.0 + z * z / 6.0);
  }
  return -std::expm1(-z) / theta;
}

EffectiveParams effective_params(const AuctionParams& params) {
  params.validate();
  EffectiveParams out;
  double t = params.horizon;
  if (params.theta_ask == params.theta_bid) {
    // Equal decay thins both sides identically: the mixing fraction is
    // preserved exactly and the total rate is scaled by one factor. Going
    // through the general quotient would round these identities away.
    out.alpha_eff = params.alpha;
    out.lambda_eff = params.theta_ask == 0.0
                         ? params.lambda_total
                         : params.lambda_total * effective_window(params.theta_ask, t) / t;
    return out;
  }
  double ga = effective_window(params.theta_ask, t);
  double gb = effective_window(params.theta_bid, t);
  double denom = params.alpha * ga + (1.0 - params.alpha) * gb;
  out.lambda_eff = params.lambda_total / t * denom;
  out.alpha_eff = params.alpha * ga / denom;
  return out;
}

AuctionParams fold_cancellation(const AuctionParams& params) {
  EffectiveParams eff = effective_params(params);
  AuctionParams out = params;
  out.lambda_total = eff.lambda_eff;
  out.alpha = eff.alpha_eff;
  out.theta_ask = 0.0;
  out.theta_bid = 0.0;
  return out;
}

}  // namespace auctionlab
