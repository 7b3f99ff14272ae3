#include <cmath>
#include <stdexcept>

#include "doctest.h"

#include "auctionlab/params.hpp"

using namespace auctionlab;

namespace {

AuctionParams make(double lambda, double alpha, double t, double ta, double tb) {
  AuctionParams p;
  p.lambda_total = lambda;
  p.alpha = alpha;
  p.horizon = t;
  p.theta_ask = ta;
  p.theta_bid = tb;
  return p;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("parameter validation rejects out-of-domain values") {
  CHECK_NOTHROW(make(10, 0.5, 1, 0, 0).validate());
  CHECK_NOTHROW(make(10, 0.0, 1, 0, 0).validate());  // one-sided flow is allowed
  CHECK_THROWS_AS(make(0, 0.5, 1, 0, 0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(make(-3, 0.5, 1, 0, 0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(make(10, -0.1, 1, 0, 0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(make(10, 1.5, 1, 0, 0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(make(10, 0.5, 0, 0, 0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(make(10, 0.5, 1, -1, 0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(make(10, 0.5, 1, 0, -1).validate(), std::invalid_argument);
  CHECK(make(8, 0.25, 2, 0, 0).mu() == 16.0);
}

TEST_CASE("effective_window matches the closed form across scales") {
  CHECK(effective_window(0.0, 3.0) == 3.0);
  for (double t : {0.5, 1.0, 4.0}) {
    for (double theta : {1e-12, 1e-9, 3e-8, 1e-5, 0.01, 0.7, 2.0, 25.0}) {
      long double z = static_cast<long double>(theta) * t;
      long double want = static_cast<long double>(t) * (-std::expm1l(-z) / z);
      CHECK(effective_window(theta, t) ==
            doctest::Approx(static_cast<double>(want)).epsilon(1e-12));
    }
  }
  // Decreasing in theta: more decay, less surviving window.
  double prev = effective_window(0.0, 1.0);
  for (double theta = 0.1; theta < 20.0; theta *= 1.7) {
    double w = effective_window(theta, 1.0);
    CHECK(w < prev);
    prev = w;
  }
}

TEST_CASE("equal decay on both sides preserves alpha bit for bit") {
  AuctionParams p = make(10, 0.3, 1, 1.0, 1.0);
  EffectiveParams eff = effective_params(p);
  CHECK(eff.alpha_eff == 0.3);  // exact equality, not approximate
  CHECK(eff.lambda_eff == doctest::Approx(10.0 * (1.0 - std::exp(-1.0))).epsilon(1e-14));
  CHECK(eff.lambda_eff == doctest::Approx(6.321205588285577).epsilon(1e-14));

  AuctionParams q = make(7, 0.41, 2, 0.0, 0.0);
  EffectiveParams eq = effective_params(q);
  CHECK(eq.alpha_eff == 0.41);
  CHECK(eq.lambda_eff == 7.0);
}

TEST_CASE("asymmetric decay reweights the sides by their surviving windows") {
  AuctionParams p = make(20, 0.5, 1, 2.0, 0.7);
  double ga = effective_window(2.0, 1.0);
  double gb = effective_window(0.7, 1.0);
  EffectiveParams eff = effective_params(p);
  CHECK(eff.alpha_eff == doctest::Approx(0.5 * ga / (0.5 * ga + 0.5 * gb)).epsilon(1e-14));
  CHECK(eff.lambda_eff == doctest::Approx(20.0 * (0.5 * ga + 0.5 * gb)).epsilon(1e-14));
  // Faster ask decay must shrink the ask share.
  CHECK(eff.alpha_eff < 0.5);
}

TEST_CASE("fold_cancellation produces a decay-free equivalent model") {
  AuctionParams p = make(20, 0.5, 1.5, 2.0, 0.7);
  AuctionParams folded = fold_cancellation(p);
  CHECK(folded.theta_ask == 0.0);
  CHECK(folded.theta_bid == 0.0);
  CHECK(folded.horizon == p.horizon);
  EffectiveParams eff = effective_params(p);
  CHECK(folded.lambda_total == doctest::Approx(eff.lambda_eff).epsilon(1e-15));
  CHECK(folded.alpha == doctest::Approx(eff.alpha_eff).epsilon(1e-15));
  // Folding a decay-free model is the identity.
  AuctionParams base = make(9, 0.25, 2, 0, 0);
  AuctionParams same = fold_cancellation(base);
  CHECK(same.lambda_total == 9.0);
  CHECK(same.alpha == 0.25);
}

}  // TEST_SUITE
