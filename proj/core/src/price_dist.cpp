#include "auctionlab/price_dist.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "auctionlab/special.hpp"

namespace auctionlab {

namespace {

// Shortest decimal digits that round-trip, so spec() output is exact.
std::string fmt(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, end);
}

class UniformDist final : public PriceDistribution {
 public:
  UniformDist(double lo, double hi) : lo_(lo), hi_(hi), width_(hi - lo) {
    if (!(std::isfinite(lo) && std::isfinite(hi) && hi > lo)) {
      throw std::invalid_argument("uniform: need finite lo < hi");
    }
  }
  double cdf(double x) const override {
    if (x <= lo_) return 0.0;
    if (x >= hi_) return 1.0;
    return (x - lo_) / width_;
  }
  double pdf(double x) const override { return (x >= lo_ && x <= hi_) ? 1.0 / width_ : 0.0; }
  double quantile(double p) const override {
    check_p(p);
    return lo_ + p * width_;
  }
  std::pair<double, double> support() const override { return {lo_, hi_}; }
  double pdf_sup() const override { return 1.0 / width_; }
  std::string spec() const override { return "uniform:" + fmt(lo_) + "," + fmt(hi_); }

 private:
  static void check_p(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile: need p in (0, 1)");
  }
  double lo_, hi_, width_;
};

class NormalDist final : public PriceDistribution {
 public:
  NormalDist(double mean, double sd) : mean_(mean), sd_(sd) {
    if (!(std::isfinite(mean) && std::isfinite(sd) && sd > 0.0)) {
      throw std::invalid_argument("normal: need finite mean and sd > 0");
    }
  }
  double cdf(double x) const override { return std_normal_cdf((x - mean_) / sd_); }
  double pdf(double x) const override { return std_normal_pdf((x - mean_) / sd_) / sd_; }
  double quantile(double p) const override {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile: need p in (0, 1)");
    return mean_ + sd_ * std_normal_quantile(p);
  }
  // +-10 sd covers all but ~1.5e-23 of the mass.
  std::pair<double, double> support() const override {
    return {mean_ - 10.0 * sd_, mean_ + 10.0 * sd_};
  }
  double pdf_sup() const override { return std_normal_pdf(0.0) / sd_; }
  std::string spec() const override { return "normal:" + fmt(mean_) + "," + fmt(sd_); }

 private:
  double mean_, sd_;
};

class ExponentialDist final : public PriceDistribution {
 public:
  explicit ExponentialDist(double rate) : rate_(rate) {
    if (!(std::isfinite(rate) && rate > 0.0)) {
      throw std::invalid_argument("exponential: need rate > 0");
    }
  }
  double cdf(double x) const override { return x <= 0.0 ? 0.0 : -std::expm1(-rate_ * x); }
  double pdf(double x) const override { return x < 0.0 ? 0.0 : rate_ * std::exp(-rate_ * x); }
  double quantile(double p) const override {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile: need p in (0, 1)");
    return -std::log1p(-p) / rate_;
  }
  // Quantile of 1 - 1e-16; beyond it the CDF is 1 in double precision.
  std::pair<double, double> support() const override { return {0.0, 37.0 / rate_}; }
  double pdf_sup() const override { return rate_; }
  std::string spec() const override { return "exponential:" + fmt(rate_); }

 private:
  double rate_;
};

std::vector<double> parse_args(std::string_view s, std::size_t expected, const char* family) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    std::string_view piece = s.substr(pos, comma == std::string_view::npos ? std::string_view::npos
                                                                           : comma - pos);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), v);
    if (ec != std::errc{} || ptr != piece.data() + piece.size()) {
      throw std::invalid_argument(std::string("distribution '") + family +
                                  "': bad numeric argument '" + std::string(piece) + "'");
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (out.size() != expected) {
    throw std::invalid_argument(std::string("distribution '") + family + "': expected " +
                                std::to_string(expected) + " argument(s)");
  }
  return out;
}

}  // namespace

PriceDistPtr make_uniform(double lo, double hi) { return std::make_shared<UniformDist>(lo, hi); }
PriceDistPtr make_normal(double mean, double sd) { return std::make_shared<NormalDist>(mean, sd); }
PriceDistPtr make_exponential(double rate) { return std::make_shared<ExponentialDist>(rate); }

PriceDistPtr parse_distribution(std::string_view spec) {
  std::size_t colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("distribution spec must look like 'family:arg1,arg2'");
  }
  std::string_view family = spec.substr(0, colon);
  std::string_view rest = spec.substr(colon + 1);
  if (family == "uniform") {
    auto a = parse_args(rest, 2, "uniform");
    return make_uniform(a[0], a[1]);
  }
  if (family == "normal") {
    auto a = parse_args(rest, 2, "normal");
    return make_normal(a[0], a[1]);
  }
  if (family == "exponential") {
    auto a = parse_args(rest, 1, "exponential");
    return make_exponential(a[0]);
  }
  throw std::invalid_argument("unknown distribution family '" + std::string(family) + "'");
}

}  // namespace auctionlab
