#include "bandit_debias/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "bandit_debias/errors.hpp"

namespace bdb {

namespace {

struct Moments {
  double mean;
  double variance;
  double proxy;
};

Moments validate(const Gaussian& g) {
  if (!std::isfinite(g.mean) || !std::isfinite(g.variance) || g.variance < 0.0) {
    throw ConfigError("gaussian: mean must be finite and variance >= 0");
  }
  return {g.mean, g.variance, g.variance};
}

Moments validate(const Bernoulli& b) {
  if (!(b.p >= 0.0 && b.p <= 1.0)) {
    throw ConfigError("bernoulli: p must lie in [0, 1]");
  }
  return {b.p, b.p * (1.0 - b.p), 0.25};
}

Moments validate(const FiniteDiscrete& f) {
  if (f.support.empty() || f.support.size() != f.probs.size()) {
    throw ConfigError("finite: support and probs must be non-empty and of equal length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < f.probs.size(); ++i) {
    if (!(f.probs[i] >= 0.0) || !std::isfinite(f.support[i])) {
      throw ConfigError("finite: probabilities must be >= 0 and support finite");
    }
    if (i > 0 && !(f.support[i] > f.support[i - 1])) {
      throw ConfigError("finite: support must be strictly increasing");
    }
    total += f.probs[i];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw ConfigError("finite: probabilities must sum to 1");
  }
  double mean = 0.0;
  for (std::size_t i = 0; i < f.probs.size(); ++i) mean += f.probs[i] * f.support[i];
  double var = 0.0;
  for (std::size_t i = 0; i < f.probs.size(); ++i) {
    const double d = f.support[i] - mean;
    var += f.probs[i] * d * d;
  }
  const double width = f.support.back() - f.support.front();
  return {mean, var, width * width / 4.0};
}

// log sum_i w_i exp(h x_i) and the first two tilted moments, max-shifted.
struct Tilted {
  double log_mgf;
  double mean;
  double variance;
};

Tilted tilt_atoms(const std::vector<double>& xs, const std::vector<double>& ws, double h) {
  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (ws[i] > 0.0) shift = std::max(shift, h * xs[i]);
  }
  double z = 0.0;
  double m1 = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (ws[i] <= 0.0) continue;
    const double e = ws[i] * std::exp(h * xs[i] - shift);
    z += e;
    m1 += e * xs[i];
  }
  const double mean = m1 / z;
  double var = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (ws[i] <= 0.0) continue;
    const double e = ws[i] * std::exp(h * xs[i] - shift);
    const double d = xs[i] - mean;
    var += e * d * d;
  }
  return {shift + std::log(z), mean, var / z};
}

Tilted tilt(const RewardDistribution::Law& law, double h) {
  if (const auto* g = std::get_if<Gaussian>(&law)) {
    return {g->mean * h + 0.5 * g->variance * h * h, g->mean + g->variance * h, g->variance};
  }
  if (const auto* b = std::get_if<Bernoulli>(&law)) {
    if (b->p == 0.0) return {0.0, 0.0, 0.0};
    if (b->p == 1.0) return {h, 1.0, 0.0};
    // log(1 - p + p e^h) and the tilted success probability, both stable in h.
    const double a = std::log1p(-b->p);
    const double c = std::log(b->p) + h;
    const double hi = std::max(a, c);
    const double lse = hi + std::log1p(std::exp(std::min(a, c) - hi));
    const double q = std::exp(c - lse);
    return {lse, q, q * (1.0 - q)};
  }
  const auto& f = std::get<FiniteDiscrete>(law);
  return tilt_atoms(f.support, f.probs, h);
}

}  // namespace

RewardDistribution::RewardDistribution(Law law, std::optional<double> variance_proxy)
    : law_(std::move(law)) {
  const Moments mo = std::visit([](const auto& l) { return validate(l); }, law_);
  mean_ = mo.mean;
  variance_ = mo.variance;
  variance_proxy_ = mo.proxy;
  if (variance_proxy) {
    if (!(*variance_proxy >= variance_ * (1.0 - 1e-12))) {
      throw ConfigError("variance_proxy must be >= the variance");
    }
    variance_proxy_ = *variance_proxy;
    explicit_proxy_ = true;
  }
  if (const auto* f = std::get_if<FiniteDiscrete>(&law_)) {
    cumulative_.resize(f->probs.size());
    std::partial_sum(f->probs.begin(), f->probs.end(), cumulative_.begin());
  }
}

std::vector<std::pair<double, double>> RewardDistribution::atoms() const {
  std::vector<std::pair<double, double>> out;
  if (const auto* g = std::get_if<Gaussian>(&law_)) {
    if (g->variance == 0.0) out.emplace_back(g->mean, 1.0);
  } else if (const auto* b = std::get_if<Bernoulli>(&law_)) {
    if (b->p < 1.0) out.emplace_back(0.0, 1.0 - b->p);
    if (b->p > 0.0) out.emplace_back(1.0, b->p);
  } else {
    const auto& f = std::get<FiniteDiscrete>(law_);
    for (std::size_t i = 0; i < f.support.size(); ++i) {
      if (f.probs[i] > 0.0) out.emplace_back(f.support[i], f.probs[i]);
    }
  }
  return out;
}

double RewardDistribution::sample(RngStream& rng) const noexcept {
  if (const auto* g = std::get_if<Gaussian>(&law_)) {
    if (g->variance == 0.0) return g->mean;
    return g->mean + std::sqrt(g->variance) * rng.normal();
  }
  if (const auto* b = std::get_if<Bernoulli>(&law_)) {
    return rng.uniform() < b->p ? 1.0 : 0.0;
  }
  const auto& f = std::get<FiniteDiscrete>(law_);
  // Scale by the table total so rounding in the partial sums never leaves
  // the last atom unreachable.
  const double u = rng.uniform() * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()),
                                         f.support.size() - 1);
  return f.support[idx];
}

double RewardDistribution::log_mgf(double h) const noexcept {
  if (h == 0.0) return 0.0;
  return tilt(law_, h).log_mgf;
}

LogMgfDerivatives RewardDistribution::log_mgf_derivatives(double h) const noexcept {
  const Tilted t = tilt(law_, h);
  return {t.mean, t.variance};
}

std::pair<double, double> RewardDistribution::tilted_mean_range() const noexcept {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (variance_ == 0.0) return {mean_, mean_};
  if (std::holds_alternative<Gaussian>(law_)) return {-inf, inf};
  const auto a = atoms();
  return {a.front().first, a.back().first};
}

RewardDistribution distribution_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    throw ConfigError("distribution: expected an object with a string field \"type\"");
  }
  const std::string type = j.at("type").get<std::string>();
  std::optional<double> proxy;
  if (j.contains("variance_proxy")) proxy = j.at("variance_proxy").get<double>();
  try {
    if (type == "gaussian" || type == "normal") {
      return {Gaussian{j.at("mean").get<double>(), j.at("variance").get<double>()}, proxy};
    }
    if (type == "bernoulli") {
      return {Bernoulli{j.at("p").get<double>()}, proxy};
    }
    if (type == "finite" || type == "finite_discrete") {
      return {FiniteDiscrete{j.at("support").get<std::vector<double>>(),
                             j.at("probs").get<std::vector<double>>()},
              proxy};
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("distribution \"") + type + "\": " + e.what());
  }
  throw ConfigError("distribution: unknown type \"" + type + "\"");
}

nlohmann::json to_json(const RewardDistribution& d) {
  nlohmann::json j;
  if (const auto* g = std::get_if<Gaussian>(&d.law())) {
    j = {{"type", "gaussian"}, {"mean", g->mean}, {"variance", g->variance}};
  } else if (const auto* b = std::get_if<Bernoulli>(&d.law())) {
    j = {{"type", "bernoulli"}, {"p", b->p}};
  } else {
    const auto& f = std::get<FiniteDiscrete>(d.law());
    j = {{"type", "finite"}, {"support", f.support}, {"probs", f.probs}};
  }
  if (d.has_explicit_variance_proxy()) j["variance_proxy"] = d.variance_proxy();
  return j;
}

}  // namespace bdb
