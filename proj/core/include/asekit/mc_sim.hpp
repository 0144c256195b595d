#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "asekit/counter_rng.hpp"

namespace asekit::sim {

enum class GainModel {
  /// Rayleigh channels and explicit ZF precoders at every BS.
  full_zf,
  /// g00 ~ Gamma(M+1-K, 1), g_i0 ~ Gamma(K, 1), independent.
  gamma_approx,
};

struct SimulationConfig {
  double lambda_b = 1.0;  // BS per km^2
  int antennas = 1;       // M
  int users = 1;          // K
  double alpha = 4.0;
  double window_radius = 0.0;  // km; <= 0 picks a radius holding ~1000 BSs on average
  std::int64_t trials = 10000;
  std::uint64_t seed = 1;
  GainModel mode = GainModel::full_zf;
  double transmit_power = 1.0;  // W; cancels in the SIR
  unsigned threads = 0;         // 0 = hardware concurrency
  bool keep_samples = false;    // retain per-trial records for CSV export
  // full_zf only. The serving BS always gets an explicit M x K channel. For
  // interferers the default samples the Cholesky factor of H^H H directly
  // (same joint law, O(K^2) draws); set this to draw every interferer's
  // M x K block and cross-channel as well.
  bool literal_channels = false;

  /// Throws DomainError on invalid parameters.
  void validate() const;
  double effective_window_radius() const;
  /// lambda_b * pi * R^2.
  double expected_bs_count() const;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
  double r = 0.0;  // distance to the origin
};

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  std::int64_t count = 0;
};

struct TrialSample {
  std::int64_t trial = 0;
  double sir = 0.0;
  double rate = 0.0;
  std::int64_t n_bs = 0;
  double r0 = 0.0;
  double g00 = 0.0;
  double g_nearest_interferer = 0.0;
};

struct SimulationResult {
  double mean_rate = 0.0;  // nats/s/Hz
  double std_error = 0.0;
  std::int64_t trials_used = 0;
  std::array<double, 5> sir_quantiles{};  // 5, 25, 50, 75, 95 %
  Moments g00_moments;
  Moments gi0_moments;  // nearest interferer of each trial
  std::int64_t resampled_trials = 0;
  std::vector<TrialSample> samples;  // filled when keep_samples is set
  std::vector<std::string> warnings;
};

/// Homogeneous PPP restricted to a disk of the given radius. Points are
/// produced in order of increasing distance (radial arrival construction),
/// so a larger window with the same stream extends a smaller one.
std::vector<Point> sample_ppp(double lambda_b, double window_radius, CounterRng& rng);

/// Unit-norm ZF precoder: normalized columns of H (H^H H)^-1. Throws
/// DomainError if H is not full column rank.
Eigen::MatrixXcd zf_precoder(const Eigen::MatrixXcd& channel);

/// Monte Carlo SIR and rate of the typical user at the origin served by its
/// nearest BS. Results are bit-identical for a given config whatever the
/// thread count.
SimulationResult simulate_typical_user(const SimulationConfig& config);

struct RateEstimate {
  double mean_rate = 0.0;
  double std_error = 0.0;
};

RateEstimate estimate_mean_rate(const SimulationConfig& config);

struct GammaApproxReport {
  int users = 1;
  double gi0_mean = 0.0;
  double gi0_mean_std_error = 0.0;
  double gi0_variance = 0.0;
  double expected_mean = 0.0;      // K
  double expected_variance = 0.0;  // K
  double mean_rel_deviation = 0.0;
  double variance_rel_deviation = 0.0;
  double ks_statistic = 0.0;  // empirical g_i0 against the Gamma(K, 1) CDF
  double ks_p_value = 0.0;
  double rate_full_zf = 0.0;
  double rate_full_zf_se = 0.0;
  double rate_gamma = 0.0;
  double rate_gamma_se = 0.0;
  double rate_rel_gap = 0.0;  // |full - gamma| / gamma
};

/// Runs the config in both gain models with the same seed and compares the
/// nearest-interferer gain against Gamma(K, 1). Needs >= 10^4 trials.
GammaApproxReport validate_gamma_approx(const SimulationConfig& config);

/// CSV with columns trial,sir,rate,n_bs,r0.
void write_samples_csv(std::ostream& out, const std::vector<TrialSample>& samples);

// Statistics helpers shared with the tests.

/// Pairwise (cascade) summation; order-fixed, so deterministic.
double pairwise_sum(const double* data, std::size_t n);
Moments sample_moments(const std::vector<double>& values);
/// Linear-interpolation quantile of unsorted data, q in [0, 1].
double quantile(std::vector<double> values, double q);
/// Asymptotic Kolmogorov survival function Q(lambda) = P(K > lambda).
double kolmogorov_survival(double lambda);

}  // namespace asekit::sim
