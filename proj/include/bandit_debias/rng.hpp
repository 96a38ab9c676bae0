#pragma once
// Counter-based random streams.
//
// Every random draw in the toolkit comes from a Philox4x32-10 block cipher
// keyed by a 64-bit seed and indexed by a 128-bit counter. The upper 64 bits
// of the counter name the stream (see StreamId), the lower 64 bits count
// blocks within it. Two streams with a different (key, stream) pair never
// share a counter value, so replications, worlds and bootstrap replays can be
// evaluated in any order, on any number of threads, with identical results.
//
// Derived variates are fixed algorithms so another implementation fed the
// same 64-bit words reproduces them:
//   uniform()       (w >> 11) * 2^-53                      in [0, 1)
//   uniform_open()  ((w >> 11) + 0.5) * 2^-53              in (0, 1)
//   normal()        Box-Muller, cosine branch only:
//                   u1 = uniform_open(), u2 = uniform(),
//                   sqrt(-2 ln u1) * cos(2 pi u2)
//   index(n)        high 64 bits of w * n (multiply-shift)

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace bdb {

__extension__ using uint128 = unsigned __int128;

namespace detail {

inline void philox_round(std::array<std::uint32_t, 4>& ctr,
                         const std::array<std::uint32_t, 2>& key) noexcept {
  constexpr std::uint64_t kM0 = 0xD2511F53u;
  constexpr std::uint64_t kM1 = 0xCD9E8D57u;
  const std::uint64_t p0 = kM0 * ctr[0];
  const std::uint64_t p1 = kM1 * ctr[2];
  const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const auto lo0 = static_cast<std::uint32_t>(p0);
  const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const auto lo1 = static_cast<std::uint32_t>(p1);
  ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

}  // namespace detail

/// Philox4x32 with 10 rounds (Salmon et al. 2011 constants).
inline std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                                  std::array<std::uint32_t, 2> key) noexcept {
  constexpr std::uint32_t kW0 = 0x9E3779B9u;
  constexpr std::uint32_t kW1 = 0xBB67AE85u;
  for (int r = 0; r < 10; ++r) {
    detail::philox_round(ctr, key);
    if (r != 9) {
      key[0] += kW0;
      key[1] += kW1;
    }
  }
  return ctr;
}

/// SplitMix64 finalizer; used to derive per-cell seeds from a master seed.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

enum class Purpose : std::uint8_t { Reward = 1, Policy = 2, Propensity = 3, Auxiliary = 4 };
enum class World : std::uint8_t { Real = 0, Bootstrap = 1 };

/// Structured stream name, packed into the upper counter half:
///   bits 63..60 purpose, 59..58 world, 57..32 replication, 31..0 replay/round.
struct StreamId {
  Purpose purpose = Purpose::Reward;
  World world = World::Real;
  std::uint32_t replication = 0;  // < 2^26
  std::uint32_t index = 0;        // bootstrap replay b, or round t for propensities

  static constexpr std::uint32_t kMaxReplication = (1u << 26) - 1;

  constexpr std::uint64_t pack() const noexcept {
    return (static_cast<std::uint64_t>(purpose) << 60) |
           (static_cast<std::uint64_t>(world) << 58) |
           (static_cast<std::uint64_t>(replication & kMaxReplication) << 32) |
           static_cast<std::uint64_t>(index);
  }

  friend constexpr bool operator==(const StreamId&, const StreamId&) = default;
};

/// A single-owner random stream. Copying a stream copies its position.
class RngStream {
 public:
  RngStream(std::uint64_t key, std::uint64_t stream) noexcept : key_(key), stream_(stream) {}
  RngStream(std::uint64_t key, const StreamId& id) noexcept : RngStream(key, id.pack()) {}

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t stream() const noexcept { return stream_; }
  /// Number of 64-bit words consumed so far.
  std::uint64_t position() const noexcept { return block_ * 2 - (have_ ? 1 : 0); }

  std::uint64_t next_u64() noexcept {
    if (have_) {
      have_ = false;
      return spare_;
    }
    const std::array<std::uint32_t, 4> ctr{
        static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
        static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    const std::array<std::uint32_t, 2> k{static_cast<std::uint32_t>(key_),
                                         static_cast<std::uint32_t>(key_ >> 32)};
    const auto out = philox4x32_10(ctr, k);
    ++block_;
    spare_ = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
    have_ = true;
    return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
  }

  double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform_open() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() noexcept {
    const double u1 = uniform_open();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t index(std::uint64_t n) noexcept {
    return static_cast<std::uint64_t>((static_cast<uint128>(next_u64()) * n) >> 64);
  }

 private:
  std::uint64_t key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::uint64_t spare_ = 0;
  bool have_ = false;
};

}  // namespace bdb
