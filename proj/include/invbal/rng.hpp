#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace invbal {

/// Philox4x32-10 counter-based generator.
///
/// A draw is a pure function of (key, counter), so any random number used by
/// the simulator can be addressed by (seed, stream, period, draw index)
/// without threading generator state through the code.
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;

  explicit Philox4x32(std::uint64_t seed)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)} {}

  Block operator()(Block ctr) const {
    std::array<std::uint32_t, 2> key = key_;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  std::array<std::uint32_t, 2> key_;
};

/// Domain-separation tags so generation and simulation never share draws.
enum class RngStream : std::uint32_t {
  Choice = 1,
  Duration = 2,
  Prices = 10,
  Weights = 11,
  Types = 12,
  Shocks = 13,
  SignFlip = 14,
  Tiny = 20,
  Sampling = 30,
};

/// Addressable uniform source: u(stream, a, b) in [0, 1) with 53 random bits.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : gen_(seed) {}

  double uniform(RngStream stream, std::uint64_t a, std::uint32_t b = 0) const {
    const auto block = gen_({static_cast<std::uint32_t>(stream),
                             static_cast<std::uint32_t>(a),
                             static_cast<std::uint32_t>(a >> 32), b});
    const std::uint64_t bits =
        (std::uint64_t{block[0]} << 32 | block[1]) >> 11;
    return static_cast<double>(bits) * 0x1.0p-53;
  }

  /// Uniform on (0, 1], safe to take a logarithm of.
  double uniform_pos(RngStream stream, std::uint64_t a,
                     std::uint32_t b = 0) const {
    return 1.0 - uniform(stream, a, b);
  }

 private:
  Philox4x32 gen_;
};

/// Sequential view on one stream of a CounterRng.
class RngCursor {
 public:
  RngCursor(const CounterRng& rng, RngStream stream, std::uint32_t lane = 0)
      : rng_(&rng), stream_(stream), lane_(lane) {}

  double uniform() { return rng_->uniform(stream_, next_++, lane_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Failures before the first success, P(k) = q (1-q)^k on {0, 1, ...}.
  std::int64_t geometric0(double q) {
    if (q >= 1.0) return 0;
    const double u = 1.0 - uniform();
    return static_cast<std::int64_t>(std::floor(std::log(u) / std::log1p(-q)));
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  const CounterRng* rng_;
  RngStream stream_;
  std::uint32_t lane_;
  std::uint64_t next_ = 0;
};

/// Trials up to and including the first success, support {1, 2, ...}.
inline std::int64_t geometric1(double p, double u_pos) {
  if (p >= 1.0) return 1;
  return 1 + static_cast<std::int64_t>(std::floor(std::log(u_pos) / std::log1p(-p)));
}

}  // namespace invbal
