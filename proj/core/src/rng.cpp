#include "auctionlab/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace auctionlab {

namespace {

constexpr std::uint64_t kMult0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMult1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
  __uint128_t p = static_cast<__uint128_t>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

inline void round_once(std::array<std::uint64_t, 4>& c, const std::array<std::uint64_t, 2>& k) {
  std::uint64_t hi0, lo0, hi1, lo1;
  mulhilo(kMult0, c[0], hi0, lo0);
  mulhilo(kMult1, c[2], hi1, lo1);
  c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

std::array<std::uint64_t, 4> PhiloxRng::block(const std::array<std::uint64_t, 2>& key,
                                              const std::array<std::uint64_t, 4>& counter) {
  std::array<std::uint64_t, 4> c = counter;
  std::array<std::uint64_t, 2> k = key;
  round_once(c, k);
  for (int r = 1; r < 10; ++r) {
    k[0] += kWeyl0;
    k[1] += kWeyl1;
    round_once(c, k);
  }
  return c;
}

PhiloxRng::PhiloxRng(std::uint64_t seed, std::uint64_t stream_id) : key_{seed, stream_id} {}

void PhiloxRng::refill() {
  ++block_index_;
  buffer_ = block(key_, {block_index_, 0, 0, 0});
  buffer_pos_ = 0;
}

std::uint64_t PhiloxRng::next_u64() {
  if (buffer_pos_ >= 4) refill();
  return buffer_[static_cast<std::size_t>(buffer_pos_++)];
}

double PhiloxRng::uniform01() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double PhiloxRng::exponential(double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("exponential: need rate > 0");
  return -std::log(uniform01()) / rate;
}

long long PhiloxRng::poisson(double mu) {
  if (!(mu >= 0.0)) throw std::invalid_argument("poisson: need mu >= 0");
  long long total = 0;
  while (mu > 500.0) {
    total += poisson(500.0);
    mu -= 500.0;
  }
  if (mu == 0.0) return total;
  double limit = std::exp(-mu);
  double prod = 1.0;
  long long k = 0;
  for (;;) {
    prod *= uniform01();
    if (prod <= limit) break;
    ++k;
  }
  return total + k;
}

}  // namespace auctionlab
