#include <doctest.h>

#include <cmath>
#include <set>

#include "bandit_debias/rng.hpp"

using namespace bdb;

TEST_CASE("philox4x32-10 known-answer vectors") {
  // Random123 kat_vectors.
  CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) ==
        std::array<std::uint32_t, 4>{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        std::array<std::uint32_t, 4>{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        std::array<std::uint32_t, 4>{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("splitmix64 reference outputs") {
  // First outputs of the reference SplitMix64 generator seeded with 0 are
  // mix64(0), mix64(golden), ...
  CHECK(mix64(0) == 0xe220a8397b1dcdafull);
  CHECK(mix64(0x9E3779B97F4A7C15ull) == 0x6e789e6aa1b965f4ull);
}

TEST_CASE("stream ids pack into disjoint bit fields") {
  const StreamId a{Purpose::Reward, World::Real, 0, 0};
  const StreamId b{Purpose::Policy, World::Real, 0, 0};
  const StreamId c{Purpose::Reward, World::Bootstrap, 0, 0};
  const StreamId d{Purpose::Reward, World::Real, 1, 0};
  const StreamId e{Purpose::Reward, World::Real, 0, 1};
  std::set<std::uint64_t> packed{a.pack(), b.pack(), c.pack(), d.pack(), e.pack()};
  CHECK(packed.size() == 5);
  CHECK(StreamId{Purpose::Auxiliary, World::Bootstrap, StreamId::kMaxReplication, 0xffffffffu}.pack() ==
        0x47FFFFFFFFFFFFFFull);
}

TEST_CASE("stream words are the philox block output, two per block") {
  RngStream s(0, 0);
  const auto block = philox4x32_10({0, 0, 0, 0}, {0, 0});
  CHECK(s.next_u64() == ((std::uint64_t{block[1]} << 32) | block[0]));
  CHECK(s.position() == 1);
  CHECK(s.next_u64() == ((std::uint64_t{block[3]} << 32) | block[2]));
  CHECK(s.position() == 2);
  const auto next = philox4x32_10({1, 0, 0, 0}, {0, 0});
  CHECK(s.next_u64() == ((std::uint64_t{next[1]} << 32) | next[0]));
}

TEST_CASE("copying a stream copies its position") {
  RngStream a(42, StreamId{Purpose::Reward, World::Real, 3, 0});
  a.next_u64();
  RngStream b = a;
  for (int i = 0; i < 10; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("variates follow the documented formulas") {
  RngStream words(9, 9), u(9, 9);
  const std::uint64_t w = words.next_u64();
  CHECK(u.uniform() == static_cast<double>(w >> 11) * 0x1.0p-53);

  RngStream raw(5, 1), n(5, 1);
  const double u1 = (static_cast<double>(raw.next_u64() >> 11) + 0.5) * 0x1.0p-53;
  const double u2 = static_cast<double>(raw.next_u64() >> 11) * 0x1.0p-53;
  CHECK(n.normal() == std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2));
  CHECK(n.position() == 2);

  RngStream ri(3, 3), rw(3, 3);
  const std::uint64_t x = rw.next_u64();
  CHECK(ri.index(10) == static_cast<std::uint64_t>((static_cast<uint128>(x) * 10u) >> 64));
}

TEST_CASE("uniform_open never returns 0 or 1; index stays in range") {
  RngStream s(1, 2);
  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform_open();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    REQUIRE(s.index(7) < 7);
  }
}

TEST_CASE("normal draws have unit moments") {
  RngStream s(2024, StreamId{Purpose::Auxiliary, World::Real, 0, 0});
  const int n = 400000;
  double sum = 0.0, ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal();
    sum += z;
    ss += z * z;
  }
  CHECK(std::abs(sum / n) < 4.0 / std::sqrt(n));
  CHECK(std::abs(ss / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
}
