#pragma once

#include <array>
#include <cstdint>

namespace auctionlab {

// Address of a reproducible random stream: every (seed, stream_id) pair
// names a statistically independent sequence, regardless of which thread
// or process consumes it.
struct RngState {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

// Counter-based generator (Philox-4x64-10). Output is a pure function of
// (seed, stream_id, position), so replies are bit-identical across runs,
// platforms and worker counts; there is no shared state to hand between
// threads.
class PhiloxRng {
 public:
  PhiloxRng(std::uint64_t seed, std::uint64_t stream_id);
  explicit PhiloxRng(RngState state) : PhiloxRng(state.seed, state.stream_id) {}

  std::uint64_t next_u64();

  // Uniform on the open interval (0, 1): (x >> 11 + 0.5) * 2^-53, which
  // never returns 0 or 1 and is safe under log().
  double uniform01();

  // Exponential with the given rate via inversion.
  double exponential(double rate);

  // Poisson(mu) by the multiplicative method, applied to chunks of mean
  // <= 500 so the running product never underflows. Exact for all mu >= 0.
  long long poisson(double mu);

  // One raw 4x64 block for the given counter value (test hook; the
  // generator itself consumes blocks at counter = 1, 2, ...).
  static std::array<std::uint64_t, 4> block(const std::array<std::uint64_t, 2>& key,
                                            const std::array<std::uint64_t, 4>& counter);

 private:
  void refill();

  std::array<std::uint64_t, 2> key_;
  std::uint64_t block_index_ = 0;  // last consumed counter value
  std::array<std::uint64_t, 4> buffer_{};
  int buffer_pos_ = 4;  // empty
};

}  // namespace auctionlab
