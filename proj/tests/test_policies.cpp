#include <doctest.h>

#include <cmath>

#include "bandit_debias/errors.hpp"
#include "bandit_debias/policies.hpp"

using namespace bdb;

namespace {

RngStream policy_stream(std::uint64_t key) {
  return RngStream(key, StreamId{Purpose::Policy, World::Real, 0, 0});
}

RngStream unused() { return RngStream(0, 0); }

}  // namespace

TEST_CASE("etc explores in blocks then commits to the higher mean") {
  const PolicySpec spec = EtcSpec{1};
  PolicyState s(spec, 2);
  auto rng = policy_stream(1);
  CHECK(select_arm(spec, s, rng) == 0);
  s.update(0, 1.0);
  CHECK(select_arm(spec, s, rng) == 1);
  s.update(1, 0.0);
  REQUIRE(s.committed_arm().has_value());
  for (int t = 3; t <= 20; ++t) {
    CHECK(select_arm(spec, s, rng) == 0);
    s.update(0, -5.0);  // exploitation rewards never revisit the decision
  }
  CHECK(rng.position() == 0);
}

TEST_CASE("etc exploration schedule is ceil(t/m) and ties commit to arm 1") {
  const PolicySpec spec = EtcSpec{3};
  PolicyState s(spec, 3);
  auto rng = policy_stream(2);
  const std::size_t expected[] = {0, 0, 0, 1, 1, 1, 2, 2, 2};
  for (std::size_t arm : expected) {
    CHECK(select_arm(spec, s, rng) == arm);
    s.update(arm, 1.0);
  }
  CHECK(select_arm(spec, s, rng) == 0);
}

TEST_CASE("ucb plays unpulled arms first, then the largest index") {
  const PolicySpec spec = UcbSpec{};
  PolicyState s(spec, 2);
  auto rng = policy_stream(3);
  CHECK(select_arm(spec, s, rng) == 0);
  s.update(0, 0.0);
  CHECK(select_arm(spec, s, rng) == 1);
  s.update(1, 0.0);
  // t = 3, equal counts and means: tie to the lowest index.
  CHECK(select_arm(spec, s, rng) == 0);
  s.update(0, 0.0);
  // t = 4: arm 2 has the larger bonus sqrt(log 4 / 1) vs sqrt(log 4 / 2).
  CHECK(select_arm(spec, s, rng) == 1);
  s.update(1, -10.0);
  // t = 5: 0 + sqrt(log5/2) = 0.897 vs -5 + sqrt(log5/2).
  CHECK(select_arm(spec, s, rng) == 0);
}

TEST_CASE("epsilon-greedy selection frequencies") {
  const PolicySpec spec = EgSpec{0.05};
  PolicyState s(spec, 2);
  s.update(0, 0.0);
  s.update(1, 1.0);
  REQUIRE(greedy_arm(s) == 1);
  auto rng = policy_stream(4);
  const int n = 1'000'000;
  int second = 0;
  for (int i = 0; i < n; ++i) second += select_arm(spec, s, rng) == 1 ? 1 : 0;
  const double p = 0.975;
  CHECK(std::abs(second / double(n) - p) < 4.0 * std::sqrt(p * (1 - p) / n));

  const auto e = propensities(spec, s, unused());
  REQUIRE(e.has_value());
  CHECK((*e)[1] == doctest::Approx(0.975));
  CHECK((*e)[0] == doctest::Approx(0.025));
}

TEST_CASE("epsilon-greedy treats unpulled arms as greedy-best") {
  const PolicySpec spec = EgSpec{0.0};
  PolicyState s(spec, 3);
  auto rng = policy_stream(5);
  CHECK(select_arm(spec, s, rng) == 0);
  s.update(0, 10.0);
  CHECK(select_arm(spec, s, rng) == 1);
  s.update(1, -1.0);
  CHECK(select_arm(spec, s, rng) == 2);
  s.update(2, 3.0);
  CHECK(select_arm(spec, s, rng) == 0);
}

TEST_CASE("counts and running means") {
  PolicyState s(UcbSpec{}, 2);
  s.update(0, 1.0);
  CHECK(s.count(0) == 1);
  s.update(0, 3.0);
  CHECK(s.count(0) == 2);
  CHECK(s.mean(0) == 2.0);
  CHECK(s.mean(1) == 0.0);
  CHECK(s.round() == 3);
}

TEST_CASE("thompson sampling conjugate posterior") {
  const PolicySpec spec = TsSpec{0.0, 1.0, 1.0};
  PolicyState s(spec, 2);
  s.update(0, 2.0);
  CHECK(s.posterior_mean(0) == doctest::Approx(1.0));
  CHECK(s.posterior_variance(0) == doctest::Approx(0.5));
  CHECK(s.posterior_mean(1) == 0.0);
  CHECK(s.posterior_variance(1) == 1.0);

  const PolicySpec informative = TsSpec{1.0, 4.0, 2.0};
  PolicyState t(informative, 1);
  t.update(0, 3.0);
  t.update(0, 5.0);
  // (1/4 * 1 + 8/2) / (1/4 + 2/2)
  CHECK(t.posterior_mean(0) == doctest::Approx(4.25 / 1.25));
  CHECK(t.posterior_variance(0) == doctest::Approx(1.0 / 1.25));
}

TEST_CASE("thompson sampling propensities") {
  const PolicySpec spec = TsSpec{};
  PolicyState s(spec, 2);
  auto e = propensities(spec, s, unused());
  REQUIRE(e.has_value());
  CHECK((*e)[0] == doctest::Approx(0.5));
  CHECK((*e)[1] == doctest::Approx(0.5));

  s.update(0, 1.0);
  s.update(1, -0.5);
  e = propensities(spec, s, unused());
  // P(N(0.5, 0.5) > N(-0.25, 0.5)) = Phi(0.75)
  CHECK((*e)[0] == doctest::Approx(0.7733726476231317).epsilon(1e-12));
  CHECK((*e)[0] + (*e)[1] == doctest::Approx(1.0));

  // Frequency of the sampler agrees with the closed form.
  auto rng = policy_stream(6);
  const int n = 200000;
  int first = 0;
  for (int i = 0; i < n; ++i) first += select_arm(spec, s, rng) == 0 ? 1 : 0;
  const double p = (*e)[0];
  CHECK(std::abs(first / double(n) - p) < 4.0 * std::sqrt(p * (1 - p) / n));

  // Far-apart posteriors: the minority probability is tiny but positive.
  PolicyState far(spec, 2);
  for (int i = 0; i < 200; ++i) far.update(0, 5.0);
  far.update(1, -5.0);
  e = propensities(spec, far, unused());
  CHECK((*e)[1] > 0.0);
  CHECK((*e)[1] < 1e-20);
}

TEST_CASE("thompson sampling propensities for K > 2 by Monte Carlo") {
  const PolicySpec spec = TsSpec{};
  PolicyState s(spec, 3);
  const RngStream mc(7, StreamId{Purpose::Propensity, World::Real, 0, 1});
  const auto e = propensities(spec, s, mc);
  REQUIRE(e.has_value());
  double total = 0.0;
  for (double p : *e) {
    total += p;
    CHECK(std::abs(p - 1.0 / 3.0) < 4.0 * std::sqrt((2.0 / 9.0) / kTsPropensityDraws));
  }
  CHECK(total == doctest::Approx(1.0));
  CHECK(*propensities(spec, s, mc) == *e);
}

TEST_CASE("deterministic policies have no propensities") {
  CHECK_FALSE(propensities(EtcSpec{2}, PolicyState(EtcSpec{2}, 2), unused()).has_value());
  CHECK_FALSE(propensity(UcbSpec{}, PolicyState(UcbSpec{}, 2), 0, unused()).has_value());
  CHECK(has_propensities(TsSpec{}));
  CHECK(has_propensities(EgSpec{}));
  CHECK_FALSE(has_propensities(EtcSpec{}));
}

TEST_CASE("policy json and validation") {
  for (const PolicySpec& p : {PolicySpec{EtcSpec{7}}, PolicySpec{UcbSpec{}}, PolicySpec{TsSpec{0.5, 2.0, 3.0}},
                              PolicySpec{EgSpec{0.1}}}) {
    CHECK(to_json(policy_from_json(to_json(p))) == to_json(p));
  }
  CHECK(policy_name(policy_from_json({{"name", "eg"}})) == "eg");
  CHECK_THROWS_AS(policy_from_json({{"name", "exp3"}}), ConfigError);
  CHECK_THROWS_AS(policy_from_json({{"name", "eg"}, {"epsilon", 2.0}}), ConfigError);
  CHECK_THROWS_AS(policy_from_json({{"name", "ts"}, {"prior_variance", 0.0}}), ConfigError);
  CHECK_THROWS_AS(validate_policy(EtcSpec{10}, 2, 19), ConfigError);
  CHECK_NOTHROW(validate_policy(EtcSpec{10}, 2, 20));
}
