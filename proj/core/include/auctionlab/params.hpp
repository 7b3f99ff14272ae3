#pragma once

namespace auctionlab {

// Flow parameters of one auction accumulation window: orders arrive as a
// Poisson process of total rate `lambda_total` over [0, horizon]; each order
// is an ask with probability `alpha` (a bid otherwise) and, if the matching
// decay rate below is positive, is withdrawn after an Exp(theta) lifetime.
struct AuctionParams {
  double lambda_total = 0.0;
  double alpha = 0.5;
  double horizon = 1.0;
  double theta_ask = 0.0;
  double theta_bid = 0.0;

  // Expected number of submitted orders over the window.
  double mu() const { return lambda_total * horizon; }

  // Throws std::invalid_argument when any field is out of range
  // (lambda_total > 0, alpha in [0, 1], horizon > 0, thetas >= 0, all finite).
  void validate() const;
};

// Parameters of the cancellation-free auction whose order book at the close
// is distributed like the book of a cancelling auction at the close.
struct EffectiveParams {
  double lambda_eff = 0.0;
  double alpha_eff = 0.5;
};

// Average fraction of the window during which an order with decay rate
// theta submitted at a uniform time is still live, times the horizon:
// (1 - e^{-theta T}) / theta, continuously extended to T at theta = 0.
double effective_window(double theta, double horizon);

// Maps cancelling-auction parameters to the equivalent cancellation-free
// ones. Identity when both decay rates are zero; preserves alpha exactly
// when theta_ask == theta_bid.
EffectiveParams effective_params(const AuctionParams& params);

// The same auction with cancellation folded away: lambda/alpha replaced by
// their effective values, thetas cleared, horizon kept.
AuctionParams fold_cancellation(const AuctionParams& params);

}  // namespace auctionlab
