#pragma once
// Exact and asymptotic oracles for the sample-mean bias of two-armed
// explore-then-commit.
//
// Arms are 0-based. With X_k the exploration mean of arm k over m pulls and
// arm 0 committed iff X_0 >= X_1,
//   bias_k = (T - 2m) / (T - m) * E[(mu_k - X_k) 1{commit k}].

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bandit_debias/distributions.hpp"

namespace bdb {

struct EtcGaussianParams {
  double mu1 = 0.0;
  double mu2 = 0.0;
  double var1 = 1.0;
  double var2 = 1.0;
  int m = 1;
  std::size_t T = 2;

  /// Throws ConfigError unless var1 + var2 > 0, variances >= 0, m >= 1, T >= 2m.
  void validate() const;
};

/// Closed form for Gaussian arms:
///   -((T-2m)/(T-m)) var_k / sqrt(2 pi (var1+var2) m) exp(-m (mu1-mu2)^2 / (2 (var1+var2))).
double etc_bias_gaussian(const EtcGaussianParams& p, std::size_t arm);

/// log |etc_bias_gaussian|, evaluated in log space. Throws LogOfZero at T = 2m.
double log_bias_g(const EtcGaussianParams& p, std::size_t arm);

/// g_k(estimate) / g_k(truth).
double thm1_ratio(const EtcGaussianParams& truth, const EtcGaussianParams& estimate, std::size_t arm);

struct EnumerationOptions {
  std::size_t max_atoms = 2'000'000;  // per sample-mean law
};

/// Law of the mean of m i.i.d. draws: sorted (value, probability) atoms, by
/// repeated convolution. Throws EnumerationCapExceeded past the cap and
/// ConfigError for non-degenerate Gaussian laws.
std::vector<std::pair<double, double>> sample_mean_atoms(const RewardDistribution& d, int m,
                                                         const EnumerationOptions& opts = {});

/// Exact bias of arm `arm` for any pair of supported laws. Discrete laws are
/// enumerated; Gaussian laws are integrated by adaptive Gauss-Kronrod over
/// +-10 standard deviations of the exploration mean, split at the other arm's
/// atoms.
double etc_bias_general(const RewardDistribution& arm1, const RewardDistribution& arm2, int m,
                        std::size_t T, std::size_t arm, const EnumerationOptions& opts = {});

struct McEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  std::size_t replications = 0;
};

/// Monte Carlo fallback for etc_bias_general (exploration phase only).
McEstimate etc_bias_monte_carlo(const RewardDistribution& arm1, const RewardDistribution& arm2,
                                int m, std::size_t T, std::size_t arm, std::size_t replications,
                                std::uint64_t seed, int workers = 1);

/// P(Xbar_m >= x), exact by enumeration.
double exact_tail_probability(const RewardDistribution& d, double x, int m,
                              const EnumerationOptions& opts = {});
/// E[(x - Xbar_m) 1{Xbar_m >= x}], exact by enumeration (<= 0).
double exact_tail_expectation(const RewardDistribution& d, double x, int m,
                              const EnumerationOptions& opts = {});

struct LegendreFenchel {
  double rate = 0.0;  // Lambda*(x)
  double zeta = 0.0;  // eta'(zeta) = x
};

/// Solves eta'(zeta) = x (bracket expansion from [-1, 1], then safeguarded
/// Newton to |eta'(zeta) - x| <= 1e-10) and returns Lambda* = zeta x - eta(zeta).
/// Throws OutOfRange if x is not interior to the range of eta', NumericError
/// if 200 iterations do not suffice.
LegendreFenchel legendre_fenchel(const RewardDistribution& d, double x);

/// Large-deviation profile of arm 1 against a threshold mu2.
struct LDProfile {
  double mean = 0.0;       // mu1
  double threshold = 0.0;  // mu2
  double support_min = 0.0;
  double zeta = 0.0;
  double rate = 0.0;        // Lambda*(mu2)
  double eta_at_zeta = 0.0;
  double eta_second = 0.0;  // eta''(zeta)
  bool lattice = false;
  std::optional<double> lattice_span;    // gcd of support differences
  std::optional<double> threshold_span;  // largest d with (X - mu2)/d integer
  bool span_undetected = false;          // lattice test failed to resolve the support
  bool threshold_not_atom = false;       // P(X = mu2) = 0: lattice premise violated
  double c0 = 0.0;
  double c1 = 0.0;
  double c_star = 0.0;

  /// True if mu2 is a point of the lattice of m-sample means.
  bool threshold_on_mean_lattice(int m) const noexcept;
  /// zeta d e^{-zeta d} / (1 - e^{-zeta d}) with d = threshold_span.
  std::optional<double> tail_expectation_limit() const noexcept;
  /// (zeta d)^2 e^{-zeta d} / (1 - e^{-zeta d})^2 with d = lattice_span.
  std::optional<double> tail_expectation_limit_support_span() const noexcept;
};

/// Throws OutOfRange when mu2 is not interior or equals the mean.
LDProfile bahadur_rao_constants(const RewardDistribution& d, double mu2);

/// Lattice span of a discrete law (gcd of support differences over rationals
/// with denominators up to 1e6). nullopt for continuous or unresolvable laws.
std::optional<double> lattice_span(std::span<const double> points);

/// c0 e^{-m Lambda*} / sqrt(2 pi m eta''): leading order of P(Xbar_m >= mu2).
double bahadur_rao_tail(const LDProfile& p, int m);

/// J_m(mu2) = -zeta^2 sqrt(2 pi m eta'') m e^{m Lambda*}.
double lemma2_scale(const LDProfile& p, int m);

/// Leading-order bias of arm 1 when arm 2 is deterministic at mu2:
///   ((T-2m)/(T-m)) e^{-m Lambda*} / sqrt(2 pi m eta'') (-c_star).
double prop2_bias_asymptotic(const RewardDistribution& d, double mu2, int m, std::size_t T);

struct QuantileSummary {
  std::size_t n = 0;
  double q05 = 0.0, q25 = 0.0, median = 0.0, q75 = 0.0, q95 = 0.0, mean = 0.0;
};
QuantileSummary summarize_quantiles(std::vector<double> values);

struct Thm1Row {
  int m = 0;
  std::size_t T = 0;
  std::size_t excluded = 0;  // replications with a zero sample variance
  std::vector<double> ratios[2];
  QuantileSummary ratio_summary[2];
  double median_abs_error[2] = {0.0, 0.0};  // median |ratio - 1|
  double within_tenth[2] = {0.0, 0.0};      // fraction with |ratio - 1| < 0.1
};

/// For each m: simulate R real-world ETC experiments with horizon T = m * p.T / p.m
/// and record g_k(hat)/g_k(true), hat from the per-arm sample means and MLE
/// variances. Replication r of grid point i uses streams {*, real, r, i}.
std::vector<Thm1Row> thm1_ratio_experiment(const EtcGaussianParams& p, std::span<const int> m_grid,
                                           std::size_t replications, std::uint64_t seed,
                                           int workers = 1);

struct Thm2Row {
  int m = 0;
  std::size_t T = 0;
  std::size_t excluded = 0;  // replications with a zero sample variance
  QuantileSummary ratio_summary;
};

struct Thm2Result {
  double rate = 0.0;            // Lambda*(mu2)
  double analytic_limit = 0.0;  // ((mu1-mu2)^2 / (2 sigma1^2)) / Lambda*
  double bound = 0.0;           // a^2 / sigma1^2
  bool bound_violated = false;  // median at the largest m exceeds the bound
  std::vector<Thm2Row> rows;
};

/// Lambda_hat* / Lambda* with Lambda_hat* = (mu_hat1 - mu2)^2 / (2 sigma_hat1^2)
/// from real-world ETC runs (arm 2 deterministic at mu2, T = horizon_ratio * m).
Thm2Result thm2_ratio_check(const RewardDistribution& d, double mu2, std::span<const int> m_grid,
                            std::size_t replications, std::uint64_t seed, int workers = 1,
                            int horizon_ratio = 4);

nlohmann::json to_json(const LDProfile& p);
nlohmann::json to_json(const QuantileSummary& q);

}  // namespace bdb
