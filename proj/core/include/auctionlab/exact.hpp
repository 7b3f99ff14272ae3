#pragma once

#include <vector>

#include "auctionlab/params.hpp"
#include "auctionlab/pmf.hpp"
#include "auctionlab/price_dist.hpp"
#include "auctionlab/special.hpp"

namespace auctionlab {

// Exact finite-intensity laws of the auction outcome (volume, price bounds,
// range) as Poisson mixtures of the fixed-count conditional laws. All
// series are summed in log space with certified truncation bounds; ops
// throw ToleranceError when the bound cannot be brought below `tol`.
//
// Cancellation is NOT folded in here: callers with decaying orders first
// map their parameters through fold_cancellation(). The theta fields of
// AuctionParams are ignored by everything in this header.

// P(executed volume = k). Double series over the two side counts.
SeriesResult volume_pmf(const AuctionParams& params, int k, double tol = 1e-12);

// Same quantity, summed side-first so each inner sum collapses into a
// confluent hypergeometric factor. Independent evaluation path used to
// cross-check volume_pmf.
SeriesResult volume_pmf_hyp(const AuctionParams& params, int k, double tol = 1e-12);

// Closed form for the balanced case alpha = 1/2 (lambda_t = lambda * T).
double volume_pmf_symmetric(double lambda_t, int k);

// P(no executed trade), in closed form; stable across the alpha -> 1/2
// removable singularity.
double prob_no_trade(const AuctionParams& params);

// Density of the lower/upper clearing price bound at x, conditioned on
// both book sides being nonempty. Double series; requires alpha in (0, 1).
SeriesResult lower_price_density(const AuctionParams& params, const PriceDistribution& dist,
                                 double x, double tol = 1e-9);
SeriesResult upper_price_density(const AuctionParams& params, const PriceDistribution& dist,
                                 double x, double tol = 1e-9);

// Alternate single-series form of the lower-bound density: the bid-count
// sum is kept and each ask-count sum collapses into 1F1(p+2; 1; z). Cross-
// check path for lower_price_density.
SeriesResult lower_price_density_hyp(const AuctionParams& params, const PriceDistribution& dist,
                                     double x, double tol = 1e-9);

// Density of the clearing range R = U - L for uniform prices on (lo, hi),
// in closed form (conditioned on both sides nonempty).
double range_density_uniform(const AuctionParams& params, double lo, double hi, double delta);

// Density of the gap between the n-th and (n+1)-th order statistic of
// n_bids + m_asks i.i.d. prices (the clearing range given the two side
// counts), by adaptive quadrature over the gap location.
double conditional_range_density(int m_asks, int n_bids, const PriceDistribution& dist,
                                 double delta, double quad_tol = 1e-9);

// Range density for an arbitrary price distribution: Poisson mixture of
// conditional_range_density over the side counts. The error bound folds in
// truncation (certified) and quadrature (estimated) contributions.
SeriesResult range_density_general(const AuctionParams& params, const PriceDistribution& dist,
                                   double delta, double tol = 1e-6);

// P(V = k) for k = 0..k_max with a certified bound on the omitted mass.
DiscretePmf volume_pmf_table(const AuctionParams& params, int k_max, double tol = 1e-12);

// Default truncation point: carries all but ~1e-12 of the volume law.
int default_volume_k_max(double mu);

// Evenly spaced inclusive grid, the default x-axis for tabulated curves.
std::vector<double> linspace(double lo, double hi, int n);

// Density curve tabulated on a grid, with per-point error bounds.
struct DensityCurve {
  std::vector<double> x;
  std::vector<double> density;
  std::vector<double> error_bound;
};

DensityCurve tabulate_lower_price_density(const AuctionParams& params,
                                          const PriceDistribution& dist,
                                          const std::vector<double>& grid, double tol = 1e-9);
DensityCurve tabulate_upper_price_density(const AuctionParams& params,
                                          const PriceDistribution& dist,
                                          const std::vector<double>& grid, double tol = 1e-9);

}  // namespace auctionlab
