#include <doctest.h>

#include <cmath>

#include "bandit_debias/errors.hpp"
#include "bandit_debias/estimators.hpp"

using namespace bdb;

namespace {

std::vector<RewardDistribution> bernoulli_pair() {
  return {RewardDistribution::bernoulli(0.3), RewardDistribution::bernoulli(0.6)};
}

struct Running {
  double sum = 0.0, ss = 0.0;
  int n = 0;
  void add(double x) {
    sum += x;
    ss += x * x;
    ++n;
  }
  double mean() const { return sum / n; }
  double se() const { return std::sqrt((ss / n - mean() * mean()) / (n - 1)); }
};

}  // namespace

TEST_CASE("single arm: IPW and AIPW equal the sample mean") {
  const std::vector<RewardDistribution> arm{RewardDistribution::gaussian(2.0, 1.0)};
  for (const PolicySpec& p : {PolicySpec{EgSpec{0.3}}, PolicySpec{TsSpec{}}}) {
    const auto log = run_experiment(1, 50, p, arm, 3);
    const auto set = estimate(log, 3);
    CHECK(*set.arms[0].ipw == doctest::Approx(set.arms[0].sample_mean).epsilon(1e-13));
    CHECK(*set.arms[0].aipw == doctest::Approx(set.arms[0].sample_mean).epsilon(1e-13));
  }
}

TEST_CASE("AIPW with zero plug-in means is IPW") {
  const auto log = run_experiment(2, 80, TsSpec{}, bernoulli_pair(), 4);
  const auto e = *propensity_trace(log, 4);
  const RoundTable zeros{2, 80, std::vector<double>(160, 0.0)};
  const auto ipw = ipw_estimate(log, e);
  const auto aipw = aipw_estimate(log, e, zeros);
  CHECK(ipw == aipw);
}

TEST_CASE("hand-computed IPW and AIPW") {
  BanditLog log;
  log.arms = 2;
  log.horizon = 3;
  log.actions = {0, 1, 0};
  log.rewards = {1.0, 2.0, 3.0};
  log.policy = EgSpec{0.5};
  const RoundTable e{2, 3, {0.5, 0.5, 0.25, 0.75, 0.75, 0.25}};
  const auto ipw = ipw_estimate(log, e);
  CHECK(ipw[0] == doctest::Approx((1.0 / 0.5 + 3.0 / 0.75) / 3));
  CHECK(ipw[1] == doctest::Approx((2.0 / 0.75) / 3));

  const auto m = running_means(log);
  CHECK(m(0, 0) == 0.0);
  CHECK(m(1, 0) == 1.0);
  CHECK(m(2, 1) == 2.0);
  const auto aipw = aipw_estimate(log, e, m);
  // arm 1: t1: 0 + (1-0)/0.5; t2: 1; t3: 1 + (3-1)/0.75
  CHECK(aipw[0] == doctest::Approx((2.0 + 1.0 + 1.0 + 2.0 / 0.75) / 3));
  // arm 2: t1: 0; t2: 0 + 2/0.75; t3: 2
  CHECK(aipw[1] == doctest::Approx((2.0 / 0.75 + 2.0) / 3));
}

TEST_CASE("epsilon-greedy propensities follow the replayed greedy arm") {
  const auto log = run_experiment(2, 30, EgSpec{0.2}, bernoulli_pair(), 5);
  const auto e = *propensity_trace(log, 5);
  PolicyState s(log.policy, 2);
  for (std::size_t t = 0; t < 30; ++t) {
    const std::size_t g = greedy_arm(s);
    CHECK(e(t, g) == doctest::Approx(0.9));
    CHECK(e(t, 1 - g) == doctest::Approx(0.1));
    s.update(log.actions[t], log.rewards[t]);
  }
}

TEST_CASE("zero propensity on a chosen arm is a division hazard") {
  BanditLog log;
  log.arms = 2;
  log.horizon = 2;
  log.actions = {0, 1};
  log.rewards = {1.0, 0.0};
  log.policy = EgSpec{0.0};
  // Greedy-only: round 2 must pick unpulled arm 2, so an action of arm 1 there
  // has propensity 0.
  log.actions = {0, 0};
  CHECK_THROWS_AS(estimate(log, 1), DivisionHazard);
  try {
    estimate(log, 1);
  } catch (const DivisionHazard& h) {
    CHECK(h.round() == 2);
  }
}

TEST_CASE("deterministic policies give sample means only") {
  const auto log = run_experiment(2, 40, UcbSpec{}, bernoulli_pair(), 1);
  const auto set = estimate(log, 1);
  CHECK_FALSE(set.propensities.has_value());
  CHECK_FALSE(set.arms[0].ipw.has_value());
  CHECK(to_json(set)["arms"][0]["ipw"].is_null());
}

TEST_CASE("IPW is unbiased under uniform exploration and Thompson sampling") {
  const auto arms = bernoulli_pair();
  for (const PolicySpec& p : {PolicySpec{EgSpec{1.0}}, PolicySpec{TsSpec{}}}) {
    Running ipw[2], aipw[2];
    for (std::uint64_t r = 0; r < 2000; ++r) {
      const auto log = run_experiment(2, 100, p, arms, 1000 + r);
      const auto set = estimate(log, 1000 + r);
      for (std::size_t k = 0; k < 2; ++k) {
        ipw[k].add(*set.arms[k].ipw);
        aipw[k].add(*set.arms[k].aipw);
      }
    }
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(std::abs(ipw[k].mean() - arms[k].mean()) < 3 * ipw[k].se());
      CHECK(std::abs(aipw[k].mean() - arms[k].mean()) < 3 * aipw[k].se());
    }
  }
}

TEST_CASE("estimator list parsing") {
  CHECK(parse_estimators("mean,aipw") == std::vector<Estimator>{Estimator::Mean, Estimator::Aipw});
  CHECK_THROWS_AS(parse_estimators("mean,dr"), ConfigError);
  CHECK_THROWS_AS(parse_estimators(""), ConfigError);
}

TEST_CASE("zero-count arm reports no sample mean") {
  BanditLog log;
  log.arms = 3;
  log.horizon = 2;
  log.actions = {0, 1};
  log.rewards = {1.0, 0.0};
  log.policy = UcbSpec{};
  const auto set = estimate(log, 1);
  CHECK(std::isnan(set.arms[2].sample_mean));
  CHECK(to_json(set)["arms"][2]["sample_mean"].is_null());
}
