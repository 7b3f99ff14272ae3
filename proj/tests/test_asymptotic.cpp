#include <cmath>
#include <stdexcept>

#include "doctest.h"

#include "auctionlab/asymptotic.hpp"
#include "auctionlab/params.hpp"
#include "auctionlab/price_dist.hpp"
#include "auctionlab/special.hpp"

using namespace auctionlab;

namespace {

AuctionParams flow(double lambda_t, double alpha, double ta = 0.0, double tb = 0.0) {
  AuctionParams p;
  p.lambda_total = lambda_t;
  p.alpha = alpha;
  p.horizon = 1.0;
  p.theta_ask = ta;
  p.theta_bid = tb;
  return p;
}

}  // namespace

TEST_SUITE("asymptotic") {

TEST_CASE("volume law: mean and sd from the product of side shares") {
  NormalLaw law = asymptotic_volume(flow(100, 0.3));
  double ab = 0.3 * 0.7;
  CHECK(law.mean == doctest::Approx(100.0 * ab).epsilon(1e-14));
  CHECK(law.sd == doctest::Approx(std::sqrt(100.0 * ab * (1.0 - 2.0 * ab))).epsilon(1e-14));
  // Balanced flow: mean mu/4.
  CHECK(asymptotic_volume(flow(80, 0.5)).mean == doctest::Approx(20.0).epsilon(1e-14));
}

TEST_CASE("price law concentrates at the flow-balancing quantile") {
  auto uni = make_uniform(0.0, 1.0);
  NormalLaw law = asymptotic_price(flow(100, 0.3), *uni);
  CHECK(law.mean == doctest::Approx(0.7).epsilon(1e-12));  // F^{-1}(1 - alpha)
  CHECK(law.sd == doctest::Approx(std::sqrt(2.0 * 0.21 / 100.0)).epsilon(1e-12));

  auto norm = make_normal(0.0, 1.0);
  NormalLaw nlaw = asymptotic_price(flow(400, 0.5), *norm);
  CHECK(nlaw.mean == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(nlaw.sd ==
        doctest::Approx(std::sqrt(2.0 * M_PI) * std::sqrt(0.5 / 400.0)).epsilon(1e-12));
}

TEST_CASE("range law is exponential with rate = intensity times density at the quantile") {
  auto uni = make_uniform(0.0, 1.0);
  ExponentialLaw law = asymptotic_range(flow(50, 0.3), *uni);
  CHECK(law.rate == doctest::Approx(50.0).epsilon(1e-12));
  CHECK(law.mean() == doctest::Approx(0.02).epsilon(1e-12));
  CHECK(law.pdf(0.0) == doctest::Approx(law.rate).epsilon(1e-12));
  CHECK(law.cdf(law.mean()) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));

  auto norm = make_normal(0.0, 1.0);
  ExponentialLaw nlaw = asymptotic_range(flow(50, 0.5), *norm);
  CHECK(nlaw.rate == doctest::Approx(50.0 * std_normal_pdf(0.0)).epsilon(1e-12));
}

TEST_CASE("law helpers agree with the standard normal primitives") {
  NormalLaw law{2.0, 3.0};
  for (double x : {-4.0, 0.0, 2.0, 7.5}) {
    double z = (x - 2.0) / 3.0;
    CHECK(law.pdf(x) == doctest::Approx(std_normal_pdf(z) / 3.0).epsilon(1e-14));
    CHECK(law.cdf(x) == doctest::Approx(std_normal_cdf(z)).epsilon(1e-14));
  }
}

TEST_CASE("decaying books reduce exactly to their effective decay-free model") {
  auto norm = make_normal(0.0, 1.0);
  AuctionParams raw = flow(40, 0.3, 1.5, 0.2);
  AuctionParams folded = fold_cancellation(raw);
  CHECK(asymptotic_volume(raw).mean == asymptotic_volume(folded).mean);
  CHECK(asymptotic_volume(raw).sd == asymptotic_volume(folded).sd);
  CHECK(asymptotic_price(raw, *norm).mean == asymptotic_price(folded, *norm).mean);
  CHECK(asymptotic_price(raw, *norm).sd == asymptotic_price(folded, *norm).sd);
  CHECK(asymptotic_range(raw, *norm).rate == asymptotic_range(folded, *norm).rate);
  // Decay shrinks the surviving flow, widening the price law.
  CHECK(asymptotic_price(raw, *norm).sd > asymptotic_price(flow(40, 0.3), *norm).sd);
}

TEST_CASE("degenerate one-sided flow is rejected") {
  auto uni = make_uniform(0.0, 1.0);
  CHECK_THROWS_AS((void)asymptotic_volume(flow(10, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS((void)asymptotic_volume(flow(10, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS((void)asymptotic_price(flow(10, 0.0), *uni), std::invalid_argument);
  CHECK_THROWS_AS((void)asymptotic_range(flow(10, 1.0), *uni), std::invalid_argument);
}

}  // TEST_SUITE
