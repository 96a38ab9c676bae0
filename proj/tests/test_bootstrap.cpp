#include <doctest.h>

#include <cmath>

#include "bandit_debias/bootstrap.hpp"
#include "bandit_debias/errors.hpp"

using namespace bdb;

namespace {

BanditLog make_log(std::size_t arms, std::vector<std::size_t> actions, std::vector<double> rewards) {
  BanditLog log;
  log.arms = arms;
  log.horizon = actions.size();
  log.actions = std::move(actions);
  log.rewards = std::move(rewards);
  log.policy = UcbSpec{};
  return log;
}

BootstrapWorld world_of(const BanditLog& log, BootstrapKind kind) {
  return build_world(summarize(log), log, BootstrapSpec{kind, 10});
}

RngStream stream(std::uint64_t key) { return RngStream(key, StreamId{Purpose::Reward, World::Bootstrap, 0, 0}); }

}  // namespace

TEST_CASE("multiplier world with zero variance is a point mass") {
  const auto log = make_log(1, {0, 0, 0}, {2.0, 2.0, 2.0});
  const auto w = world_of(log, BootstrapKind::MultiplierGaussian);
  auto rng = stream(1);
  for (int i = 0; i < 100; ++i) CHECK(w.sample(0, rng) == 2.0);
  CHECK(rng.position() == 0);
}

TEST_CASE("multiplier world moments match the MLE summary") {
  const auto log = make_log(1, {0, 0}, {1.0, 3.0});
  const auto w = world_of(log, BootstrapKind::MultiplierGaussian);
  CHECK(w.mean(0) == 2.0);
  CHECK(w.variance(0) == 1.0);
  auto rng = stream(2);
  const int n = 1'000'000;
  double sum = 0.0, ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = w.sample(0, rng);
    sum += x;
    ss += x * x;
  }
  const double mean = sum / n;
  CHECK(std::abs(mean - 2.0) < 0.004);
  CHECK(std::abs(ss / n - mean * mean - 1.0) < 0.006);
}

TEST_CASE("multiplier weights form reproduces the same law") {
  // z* = n^{-1/2} sum (z_i - mu) w_i + mu is N(mu, sigma^2_MLE); compare the
  // weight construction's empirical variance with the direct sampler's.
  const std::vector<double> z{0.3, -1.2, 2.5, 0.9};
  double mu = 0.0;
  for (double v : z) mu += v / 4;
  const auto log = make_log(1, {0, 0, 0, 0}, z);
  const auto w = world_of(log, BootstrapKind::MultiplierGaussian);
  auto r1 = stream(3);
  auto r2 = stream(4);
  const int n = 400000;
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double x = mu;
    for (double v : z) x += (v - mu) * r1.normal() / 2.0;
    s1 += (x - mu) * (x - mu);
    const double y = w.sample(0, r2);
    s2 += (y - mu) * (y - mu);
  }
  CHECK(std::abs(s1 / n - s2 / n) < 6.0 * w.variance(0) * std::sqrt(2.0 / n));
}

TEST_CASE("efron world resamples observed values uniformly") {
  const auto log = make_log(2, {0, 1, 0, 1}, {0.0, 5.0, 1.0, 5.0});
  const auto w = world_of(log, BootstrapKind::Efron);
  CHECK(w.pool(0) == std::vector<double>{0.0, 1.0});
  auto rng = stream(5);
  const int n = 100000;
  int ones = 0;
  for (int i = 0; i < n; ++i) {
    const double x = w.sample(0, rng);
    REQUIRE((x == 0.0 || x == 1.0));
    ones += x == 1.0 ? 1 : 0;
    REQUIRE(w.sample(1, rng) == 5.0);
  }
  CHECK(std::abs(ones / double(n) - 0.5) < 4.0 * 0.5 / std::sqrt(n));
}

TEST_CASE("world construction errors") {
  const auto log = make_log(3, {0, 1}, {1.0, 2.0});
  CHECK_THROWS_AS(world_of(log, BootstrapKind::MultiplierGaussian), ZeroCountArm);
  const auto ok = make_log(1, {0}, {1.0});
  CHECK_THROWS_AS(build_world(summarize(ok), ok, BootstrapSpec{BootstrapKind::Efron, 0}), ConfigError);
}

TEST_CASE("bootstrap kind names") {
  CHECK(bootstrap_kind_from_string("mb") == BootstrapKind::MultiplierGaussian);
  CHECK(bootstrap_kind_from_string("efron") == BootstrapKind::Efron);
  CHECK(bootstrap_kind_from_string("eb") == BootstrapKind::Efron);
  CHECK(to_string(BootstrapKind::Efron) == "efron");
  CHECK_THROWS_AS(bootstrap_kind_from_string("wild"), ConfigError);
}
