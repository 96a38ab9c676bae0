#include "bandit_debias/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bandit_debias/errors.hpp"
#include "bandit_debias/simulator.hpp"

namespace bdb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Atoms closer than this (relative) are the same point; enumeration sums
// accumulate rounding, so exact equality is too strict.
double atom_tol(double x) { return 1e-9 * std::max(1.0, std::abs(x)); }

double exploitation_factor(int m, std::size_t T) {
  const double t = static_cast<double>(T);
  const double mm = static_cast<double>(m);
  return (t - 2.0 * mm) / (t - mm);
}

void check_etc_horizon(int m, std::size_t T) {
  if (m < 1) throw ConfigError("m must be >= 1");
  if (T < 2 * static_cast<std::size_t>(m)) throw ConfigError("T must be >= 2m");
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }
double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(kTwoPi); }

void merge_atoms(std::vector<std::pair<double, double>>& atoms) {
  std::sort(atoms.begin(), atoms.end());
  std::size_t out = 0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (out > 0 && atoms[i].first - atoms[out - 1].first <= atom_tol(atoms[i].first)) {
      atoms[out - 1].second += atoms[i].second;
    } else {
      atoms[out++] = atoms[i];
    }
  }
  atoms.resize(out);
}

// Law of an arm's exploration mean: Gaussian, or discrete atoms.
struct MeanLaw {
  bool continuous = false;
  double mean = 0.0;
  double sd = 0.0;
  std::vector<std::pair<double, double>> atoms;
  std::vector<double> prefix;  // prefix[i] = P(first i atoms)

  static MeanLaw make(const RewardDistribution& d, int m, const EnumerationOptions& opts) {
    MeanLaw law;
    law.mean = d.mean();
    if (d.is_gaussian() && !d.is_degenerate()) {
      law.continuous = true;
      law.sd = std::sqrt(d.variance() / m);
      return law;
    }
    law.atoms = sample_mean_atoms(d, m, opts);
    law.prefix.assign(law.atoms.size() + 1, 0.0);
    for (std::size_t i = 0; i < law.atoms.size(); ++i) {
      law.prefix[i + 1] = law.prefix[i] + law.atoms[i].second;
    }
    return law;
  }

  // P(X <= x) if inclusive, else P(X < x).
  double cdf(double x, bool inclusive) const {
    if (continuous) return sd == 0.0 ? (x >= mean ? 1.0 : 0.0) : normal_cdf((x - mean) / sd);
    const double edge = inclusive ? x + atom_tol(x) : x - atom_tol(x);
    const auto it = std::upper_bound(atoms.begin(), atoms.end(), edge,
                                     [](double v, const auto& a) { return v < a.first; });
    return prefix[static_cast<std::size_t>(it - atoms.begin())];
  }
};

// E[(mu_k - X) G(X)] where X is arm k's exploration mean and G(x) is the
// probability that arm k wins against the other arm at X = x.
template <class G>
double weighted_deviation(const MeanLaw& self, const MeanLaw& other, G&& win) {
  if (!self.continuous) {
    double acc = 0.0;
    for (const auto& [v, p] : self.atoms) acc += p * (self.mean - v) * win(v);
    return acc;
  }
  // x = mean + sd z over z in [-10, 10]; integrand phi(z) (-sd z) G(x).
  std::vector<double> cuts{-10.0, 10.0};
  auto add_cut = [&](double x) {
    const double z = (x - self.mean) / self.sd;
    if (z > -10.0 && z < 10.0) cuts.push_back(z);
  };
  if (other.continuous) {
    add_cut(other.mean);
  } else {
    for (const auto& a : other.atoms) add_cut(a.first);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  auto f = [&](double z) { return normal_pdf(z) * (-self.sd * z) * win(self.mean + self.sd * z); };
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    acc += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, cuts[i], cuts[i + 1],
                                                                         15, 1e-13);
  }
  return acc;
}

// Best rational approximation with denominator <= cap (continued fractions).
bool to_rational(double x, long long cap, long long& num, long long& den) {
  const double target = x;
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = std::abs(x);
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(r);
    if (a > 9e15) break;
    const long long ai = static_cast<long long>(a);
    const long long h2 = ai * h1 + h0;
    const long long k2 = ai * k1 + k0;
    if (k2 > cap) break;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    const double approx = static_cast<double>(h1) / static_cast<double>(k1);
    if (std::abs(approx - std::abs(target)) <= 1e-12 * std::max(1.0, std::abs(target))) break;
    const double frac = r - a;
    if (frac < 1e-15) break;
    r = 1.0 / frac;
  }
  if (k1 == 0) return false;
  num = target < 0 ? -h1 : h1;
  den = k1;
  return std::abs(static_cast<double>(num) / static_cast<double>(den) - target) <=
         atom_tol(target);
}

}  // namespace

void EtcGaussianParams::validate() const {
  if (!(var1 >= 0.0) || !(var2 >= 0.0) || !(var1 + var2 > 0.0)) {
    throw ConfigError("variances must be >= 0 with a positive sum");
  }
  check_etc_horizon(m, T);
}

double etc_bias_gaussian(const EtcGaussianParams& p, std::size_t arm) {
  p.validate();
  if (arm > 1) throw ConfigError("arm must be 0 or 1");
  const double s = p.var1 + p.var2;
  const double vk = arm == 0 ? p.var1 : p.var2;
  const double gap = p.mu1 - p.mu2;
  return -exploitation_factor(p.m, p.T) * vk / std::sqrt(kTwoPi * s * p.m) *
         std::exp(-p.m * gap * gap / (2.0 * s));
}

double log_bias_g(const EtcGaussianParams& p, std::size_t arm) {
  p.validate();
  if (arm > 1) throw ConfigError("arm must be 0 or 1");
  if (p.T == 2 * static_cast<std::size_t>(p.m)) throw LogOfZero("g_k undefined at T = 2m (zero bias)");
  const double vk = arm == 0 ? p.var1 : p.var2;
  if (vk == 0.0) throw LogOfZero("g_k undefined for a zero-variance arm (zero bias)");
  const double s = p.var1 + p.var2;
  const double gap = p.mu1 - p.mu2;
  return std::log(exploitation_factor(p.m, p.T)) + std::log(vk) -
         0.5 * std::log(kTwoPi * s * p.m) - p.m * gap * gap / (2.0 * s);
}

double thm1_ratio(const EtcGaussianParams& truth, const EtcGaussianParams& estimate, std::size_t arm) {
  return log_bias_g(estimate, arm) / log_bias_g(truth, arm);
}

std::vector<std::pair<double, double>> sample_mean_atoms(const RewardDistribution& d, int m,
                                                         const EnumerationOptions& opts) {
  if (m < 1) throw ConfigError("m must be >= 1");
  if (d.is_gaussian() && !d.is_degenerate()) {
    throw ConfigError("sample_mean_atoms: law is continuous");
  }
  const auto base = d.atoms();
  std::vector<std::pair<double, double>> sums{{0.0, 1.0}};
  std::vector<std::pair<double, double>> next;
  for (int i = 0; i < m; ++i) {
    if (sums.size() * base.size() > 4 * opts.max_atoms) {
      throw EnumerationCapExceeded("enumeration of " + std::to_string(m) +
                                   "-sample means exceeds " + std::to_string(opts.max_atoms) +
                                   " atoms");
    }
    next.clear();
    next.reserve(sums.size() * base.size());
    for (const auto& [s, p] : sums) {
      for (const auto& [x, q] : base) next.emplace_back(s + x, p * q);
    }
    merge_atoms(next);
    if (next.size() > opts.max_atoms) {
      throw EnumerationCapExceeded("enumeration of " + std::to_string(m) +
                                   "-sample means exceeds " + std::to_string(opts.max_atoms) +
                                   " atoms");
    }
    sums.swap(next);
  }
  for (auto& a : sums) a.first /= m;
  return sums;
}

double etc_bias_general(const RewardDistribution& arm1, const RewardDistribution& arm2, int m,
                        std::size_t T, std::size_t arm, const EnumerationOptions& opts) {
  check_etc_horizon(m, T);
  if (arm > 1) throw ConfigError("arm must be 0 or 1");
  if (T == 2 * static_cast<std::size_t>(m)) return 0.0;
  const MeanLaw a = MeanLaw::make(arm1, m, opts);
  const MeanLaw b = MeanLaw::make(arm2, m, opts);
  double e;
  if (arm == 0) {
    // Arm 0 is committed iff X0 >= X1.
    e = weighted_deviation(a, b, [&](double x) { return b.cdf(x, true); });
  } else {
    e = weighted_deviation(b, a, [&](double y) { return a.cdf(y, false); });
  }
  return exploitation_factor(m, T) * e;
}

McEstimate etc_bias_monte_carlo(const RewardDistribution& arm1, const RewardDistribution& arm2,
                                int m, std::size_t T, std::size_t arm, std::size_t replications,
                                std::uint64_t seed, int workers) {
  check_etc_horizon(m, T);
  if (arm > 1) throw ConfigError("arm must be 0 or 1");
  if (replications < 2) throw ConfigError("Monte Carlo needs at least 2 replications");
  const double factor = exploitation_factor(m, T);
  std::vector<double> values(replications);
  const long long n = static_cast<long long>(replications);
  workers = std::max(workers, 1);
#pragma omp parallel for schedule(static) num_threads(workers) if (workers > 1)
  for (long long r = 0; r < n; ++r) {
    RngStream rng(seed, StreamId{Purpose::Auxiliary, World::Real, static_cast<std::uint32_t>(r), 0});
    double s0 = 0.0, s1 = 0.0;
    for (int i = 0; i < m; ++i) s0 += arm1.sample(rng);
    for (int i = 0; i < m; ++i) s1 += arm2.sample(rng);
    const double x0 = s0 / m, x1 = s1 / m;
    const bool commit0 = x0 >= x1;
    double v = 0.0;
    if (arm == 0 && commit0) v = arm1.mean() - x0;
    if (arm == 1 && !commit0) v = arm2.mean() - x1;
    values[static_cast<std::size_t>(r)] = factor * v;
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(replications);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(replications - 1));
  return {mean, sd / std::sqrt(static_cast<double>(replications)), replications};
}

double exact_tail_probability(const RewardDistribution& d, double x, int m,
                              const EnumerationOptions& opts) {
  double acc = 0.0;
  for (const auto& [v, p] : sample_mean_atoms(d, m, opts)) {
    if (v >= x - atom_tol(x)) acc += p;
  }
  return acc;
}

double exact_tail_expectation(const RewardDistribution& d, double x, int m,
                              const EnumerationOptions& opts) {
  double acc = 0.0;
  for (const auto& [v, p] : sample_mean_atoms(d, m, opts)) {
    if (v >= x - atom_tol(x)) acc += p * (x - v);
  }
  return acc;
}

LegendreFenchel legendre_fenchel(const RewardDistribution& d, double x) {
  const auto [lo_x, hi_x] = d.tilted_mean_range();
  if (!(x > lo_x && x < hi_x)) {
    throw OutOfRange("x = " + std::to_string(x) + " is outside the interior of the range of eta'");
  }
  if (x == d.mean()) return {0.0, 0.0};
  auto slope = [&](double h) { return d.log_mgf_derivatives(h).first; };

  double lo = -1.0, hi = 1.0;
  for (int i = 0; slope(hi) < x; ++i) {
    if (i > 2000) throw NumericError("legendre_fenchel: cannot bracket the tilt");
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; slope(lo) > x; ++i) {
    if (i > 2000) throw NumericError("legendre_fenchel: cannot bracket the tilt");
    hi = lo;
    lo *= 2.0;
  }
  double z = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const auto der = d.log_mgf_derivatives(z);
    const double resid = der.first - x;
    if (std::abs(resid) <= 1e-10) return {z * x - d.log_mgf(z), z};
    if (resid > 0.0) {
      hi = z;
    } else {
      lo = z;
    }
    double next = der.second > 0.0 ? z - resid / der.second : lo;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    z = next;
  }
  throw NumericError("legendre_fenchel: no convergence in 200 iterations");
}

std::optional<double> lattice_span(std::span<const double> points) {
  if (points.size() < 2) return std::nullopt;
  std::vector<double> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end());
  long long g_num = 0;  // gcd so far as g_num / g_den
  long long g_den = 1;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double diff = pts[i] - pts[0];
    if (diff <= atom_tol(pts[i])) continue;
    long long num = 0, den = 1;
    if (!to_rational(diff, 1'000'000, num, den)) return std::nullopt;
    // gcd(a/b, c/d) = gcd(a d, c b) / (b d)
    const uint128 l = static_cast<uint128>(g_num) * static_cast<unsigned long long>(den);
    const uint128 r = static_cast<uint128>(num) * static_cast<unsigned long long>(g_den);
    const uint128 bd = static_cast<uint128>(g_den) * static_cast<unsigned long long>(den);
    if (l > UINT64_MAX || r > UINT64_MAX || bd > UINT64_MAX) return std::nullopt;
    std::uint64_t n = std::gcd(static_cast<std::uint64_t>(l), static_cast<std::uint64_t>(r));
    std::uint64_t dd = static_cast<std::uint64_t>(bd);
    const std::uint64_t c = std::gcd(n, dd);
    n /= c;
    dd /= c;
    g_num = static_cast<long long>(n);
    g_den = static_cast<long long>(dd);
  }
  if (g_num == 0) return std::nullopt;
  return static_cast<double>(g_num) / static_cast<double>(g_den);
}

bool LDProfile::threshold_on_mean_lattice(int m) const noexcept {
  if (!lattice || !lattice_span) return false;
  const double steps = m * (threshold - support_min) / *lattice_span;
  return std::abs(steps - std::round(steps)) <= 1e-6 * std::max(1.0, std::abs(steps));
}

std::optional<double> LDProfile::tail_expectation_limit() const noexcept {
  if (!threshold_span) return std::nullopt;
  const double u = zeta * *threshold_span;
  return u * std::exp(-u) / (1.0 - std::exp(-u));
}

std::optional<double> LDProfile::tail_expectation_limit_support_span() const noexcept {
  if (!lattice_span) return std::nullopt;
  const double u = zeta * *lattice_span;
  const double q = 1.0 - std::exp(-u);
  return u * u * std::exp(-u) / (q * q);
}

LDProfile bahadur_rao_constants(const RewardDistribution& d, double mu2) {
  if (d.is_degenerate()) throw OutOfRange("degenerate law: no large-deviation regime");
  if (mu2 == d.mean()) throw OutOfRange("mu2 equals the mean: the tilt is zero and c0 is singular");
  const auto lf = legendre_fenchel(d, mu2);
  LDProfile p;
  p.mean = d.mean();
  p.threshold = mu2;
  p.zeta = lf.zeta;
  p.rate = lf.rate;
  p.eta_at_zeta = d.log_mgf(lf.zeta);
  p.eta_second = d.log_mgf_derivatives(lf.zeta).second;
  if (!d.is_gaussian()) {
    std::vector<double> support;
    for (const auto& a : d.atoms()) support.push_back(a.first);
    p.support_min = support.front();
    p.lattice_span = lattice_span(support);
    p.span_undetected = !p.lattice_span.has_value();
    p.lattice = p.lattice_span.has_value();
    support.push_back(mu2);
    p.threshold_span = lattice_span(support);
    const auto atoms = d.atoms();
    p.threshold_not_atom = std::none_of(atoms.begin(), atoms.end(), [&](const auto& a) {
      return std::abs(a.first - mu2) <= atom_tol(mu2);
    });
  }
  const double az = std::abs(p.zeta);
  if (p.lattice) {
    const double span = *p.lattice_span;
    p.c0 = span / (1.0 - std::exp(-az * span));
    p.c1 = -span * std::exp(-p.zeta * span) / ((1.0 - std::exp(-p.zeta * span)) * p.zeta);
  } else {
    p.c0 = 1.0 / az;
    p.c1 = -1.0 / (p.zeta * p.zeta);
  }
  p.c_star = p.c0 * std::abs(p.mean - mu2);
  return p;
}

double bahadur_rao_tail(const LDProfile& p, int m) {
  return p.c0 * std::exp(-m * p.rate) / std::sqrt(kTwoPi * m * p.eta_second);
}

double lemma2_scale(const LDProfile& p, int m) {
  return -p.zeta * p.zeta * std::sqrt(kTwoPi * m * p.eta_second) * m * std::exp(m * p.rate);
}

double prop2_bias_asymptotic(const RewardDistribution& d, double mu2, int m, std::size_t T) {
  check_etc_horizon(m, T);
  const LDProfile p = bahadur_rao_constants(d, mu2);
  if (T == 2 * static_cast<std::size_t>(m)) return 0.0;
  return exploitation_factor(m, T) * std::exp(-m * p.rate) / std::sqrt(kTwoPi * m * p.eta_second) *
         (-p.c_star);
}

QuantileSummary summarize_quantiles(std::vector<double> values) {
  QuantileSummary q;
  q.n = values.size();
  if (values.empty()) {
    q.q05 = q.q25 = q.median = q.q75 = q.q95 = q.mean = std::numeric_limits<double>::quiet_NaN();
    return q;
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  q.mean = sum / static_cast<double>(values.size());
  std::sort(values.begin(), values.end());
  auto at = [&](double prob) {
    const double pos = prob * static_cast<double>(values.size() - 1);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(i);
    return i + 1 < values.size() ? values[i] + frac * (values[i + 1] - values[i]) : values[i];
  };
  q.q05 = at(0.05);
  q.q25 = at(0.25);
  q.median = at(0.5);
  q.q75 = at(0.75);
  q.q95 = at(0.95);
  return q;
}

std::vector<Thm1Row> thm1_ratio_experiment(const EtcGaussianParams& p, std::span<const int> m_grid,
                                           std::size_t replications, std::uint64_t seed,
                                           int workers) {
  p.validate();
  if (replications < 1) throw ConfigError("replications must be >= 1");
  const double horizon_ratio = static_cast<double>(p.T) / p.m;
  const std::vector<RewardDistribution> laws{RewardDistribution::gaussian(p.mu1, p.var1),
                                             RewardDistribution::gaussian(p.mu2, p.var2)};
  workers = std::max(workers, 1);
  std::vector<Thm1Row> rows;
  for (std::size_t gi = 0; gi < m_grid.size(); ++gi) {
    Thm1Row row;
    row.m = m_grid[gi];
    row.T = static_cast<std::size_t>(std::llround(row.m * horizon_ratio));
    EtcGaussianParams truth = p;
    truth.m = row.m;
    truth.T = row.T;
    truth.validate();
    std::vector<double> r0(replications), r1(replications);
    const long long n = static_cast<long long>(replications);
#pragma omp parallel for schedule(dynamic, 4) num_threads(workers) if (workers > 1)
    for (long long r = 0; r < n; ++r) {
      const auto log = run_experiment(2, row.T, EtcSpec{row.m}, laws,
                                      ExperimentStreams::make(seed, World::Real,
                                                              static_cast<std::uint32_t>(r),
                                                              static_cast<std::uint32_t>(gi)));
      const auto s = summarize(log);
      const auto idx = static_cast<std::size_t>(r);
      if (s.arms[0].variance == 0.0 || s.arms[1].variance == 0.0) {
        r0[idx] = r1[idx] = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      const EtcGaussianParams hat{s.arms[0].mean, s.arms[1].mean, s.arms[0].variance,
                                  s.arms[1].variance, row.m, row.T};
      r0[idx] = thm1_ratio(truth, hat, 0);
      r1[idx] = thm1_ratio(truth, hat, 1);
    }
    for (std::size_t i = 0; i < replications; ++i) {
      if (std::isnan(r0[i])) {
        ++row.excluded;
        continue;
      }
      row.ratios[0].push_back(r0[i]);
      row.ratios[1].push_back(r1[i]);
    }
    for (int k = 0; k < 2; ++k) {
      row.ratio_summary[k] = summarize_quantiles(row.ratios[k]);
      std::vector<double> dev;
      std::size_t inside = 0;
      for (double v : row.ratios[k]) {
        dev.push_back(std::abs(v - 1.0));
        if (std::abs(v - 1.0) < 0.1) ++inside;
      }
      row.median_abs_error[k] = summarize_quantiles(dev).median;
      row.within_tenth[k] =
          row.ratios[k].empty() ? 0.0 : static_cast<double>(inside) / static_cast<double>(row.ratios[k].size());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Thm2Result thm2_ratio_check(const RewardDistribution& d, double mu2, std::span<const int> m_grid,
                            std::size_t replications, std::uint64_t seed, int workers,
                            int horizon_ratio) {
  if (replications < 1) throw ConfigError("replications must be >= 1");
  if (horizon_ratio < 2) throw ConfigError("horizon_ratio must be >= 2");
  const LDProfile profile = bahadur_rao_constants(d, mu2);
  Thm2Result out;
  out.rate = profile.rate;
  const double gap = d.mean() - mu2;
  out.analytic_limit = gap * gap / (2.0 * d.variance()) / profile.rate;
  out.bound = d.variance_proxy() / d.variance();
  const std::vector<RewardDistribution> laws{d, RewardDistribution::point_mass(mu2)};
  workers = std::max(workers, 1);
  for (std::size_t gi = 0; gi < m_grid.size(); ++gi) {
    Thm2Row row;
    row.m = m_grid[gi];
    row.T = static_cast<std::size_t>(horizon_ratio) * static_cast<std::size_t>(row.m);
    std::vector<double> ratios(replications);
    const long long n = static_cast<long long>(replications);
#pragma omp parallel for schedule(dynamic, 4) num_threads(workers) if (workers > 1)
    for (long long r = 0; r < n; ++r) {
      const auto log = run_experiment(2, row.T, EtcSpec{row.m}, laws,
                                      ExperimentStreams::make(seed, World::Real,
                                                              static_cast<std::uint32_t>(r),
                                                              static_cast<std::uint32_t>(gi)));
      const auto s = summarize(log);
      const double v = s.arms[0].variance;
      const double g = s.arms[0].mean - mu2;
      ratios[static_cast<std::size_t>(r)] =
          v == 0.0 ? std::numeric_limits<double>::quiet_NaN() : g * g / (2.0 * v) / profile.rate;
    }
    std::vector<double> kept;
    for (double v : ratios) {
      if (std::isnan(v)) {
        ++row.excluded;
      } else {
        kept.push_back(v);
      }
    }
    row.ratio_summary = summarize_quantiles(std::move(kept));
    out.rows.push_back(row);
  }
  if (!out.rows.empty()) out.bound_violated = out.rows.back().ratio_summary.median > out.bound;
  return out;
}

nlohmann::json to_json(const LDProfile& p) {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  return {{"mean", p.mean},
          {"threshold", p.threshold},
          {"zeta", p.zeta},
          {"rate", p.rate},
          {"eta_at_zeta", p.eta_at_zeta},
          {"eta_second", p.eta_second},
          {"lattice", p.lattice},
          {"lattice_span", opt(p.lattice_span)},
          {"threshold_span", opt(p.threshold_span)},
          {"span_undetected", p.span_undetected},
          {"threshold_not_atom", p.threshold_not_atom},
          {"c0", p.c0},
          {"c1", p.c1},
          {"c_star", p.c_star}};
}

nlohmann::json to_json(const QuantileSummary& q) {
  return {{"n", q.n},         {"q05", q.q05}, {"q25", q.q25}, {"median", q.median},
          {"q75", q.q75},     {"q95", q.q95}, {"mean", q.mean}};
}

}  // namespace bdb
