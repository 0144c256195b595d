#include "asekit/mc_sim.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

#include <boost/random/normal_distribution.hpp>

#include "asekit/errors.hpp"
#include "asekit/numerics.hpp"
#include "asekit/parallel.hpp"
#include "zf_kernel.hpp"

namespace asekit::sim {
namespace {

constexpr double kDefaultExpectedCount = 1000.0;
constexpr double kMinExpectedCount = 200.0;
constexpr int kMaxResamples = 10000;
constexpr std::uint32_t kPositionStream = 0;
constexpr std::uint32_t kGainStream = 1;

struct TrialOutcome {
  double sir = 0.0;
  double rate = 0.0;
  std::int64_t n_bs = 0;
  double r0 = 0.0;
  double g00 = 0.0;
  double g_near = 0.0;
  int resamples = 0;
};

// CN(0, 1) entries.
template <class Engine>
class ComplexGaussian {
 public:
  explicit ComplexGaussian(Engine& rng) : rng_(rng) {}

  void fill(Eigen::MatrixXcd& m) { fill(m.data(), m.size()); }
  void fill(Eigen::VectorXcd& v) { fill(v.data(), v.size()); }
  void fill(std::complex<double>* p, Eigen::Index n) {
    for (Eigen::Index i = 0; i < n; ++i) p[i] = draw();
  }
  std::complex<double> draw() {
    const double re = normal_(rng_);
    const double im = normal_(rng_);
    return {re, im};
  }

 private:
  Engine& rng_;
  boost::random::normal_distribution<double> normal_{0.0, std::numbers::sqrt2 / 2.0};
};

class TrialRunner {
 public:
  explicit TrialRunner(const SimulationConfig& cfg)
      : cfg_(cfg),
        radius_(cfg.effective_window_radius()),
        channel_(cfg.antennas, cfg.users),
        probe_(cfg.antennas),
        kernel_(cfg.antennas, cfg.users),
        whitened_(cfg.users) {
    for (int i = 0; i < cfg.users; ++i) pivot_.emplace_back(cfg.antennas - i, 1.0);
  }

  TrialOutcome run(std::int64_t trial) {
    TrialOutcome out;
    CounterRng positions(cfg_.seed, static_cast<std::uint64_t>(trial), kPositionStream);
    std::vector<Point> pts = sample_ppp(cfg_.lambda_b, radius_, positions);
    // A serving BS and at least one interferer are needed for a finite SIR.
    while (pts.size() < 2) {
      if (++out.resamples > kMaxResamples) {
        throw DomainError("simulate_typical_user: window too sparse to place two BSs");
      }
      pts = sample_ppp(cfg_.lambda_b, radius_, positions);
    }

    // Fading needs tens of thousands of draws per trial, so the counter stream
    // only keys a fast per-trial engine.
    CounterRng key(cfg_.seed, static_cast<std::uint64_t>(trial), kGainStream);
    std::array<std::uint32_t, 8> words{};
    for (std::size_t i = 0; i < words.size(); i += 2) {
      const std::uint64_t w = key();
      words[i] = static_cast<std::uint32_t>(w);
      words[i + 1] = static_cast<std::uint32_t>(w >> 32);
    }
    std::seed_seq seq(words.begin(), words.end());
    std::mt19937_64 gains(seq);
    // libstdc++'s gamma keeps a spare normal; without a reset the draws
    // would depend on which trials shared this runner.
    for (auto& p : pivot_) p.reset();
    const double share = cfg_.transmit_power / cfg_.users;
    double interference = 0.0;
    if (cfg_.mode == GainModel::full_zf) {
      ComplexGaussian<std::mt19937_64> cn(gains);
      // Serving BS: column 0 is the typical user's channel.
      cn.fill(channel_);
      kernel_.factor(channel_);
      out.g00 = kernel_.own_gain(0);
      for (std::size_t i = 1; i < pts.size(); ++i) {
        double g = 0.0;
        if (cfg_.literal_channels) {
          cn.fill(channel_);
          cn.fill(probe_);
          kernel_.factor(channel_);
          g = kernel_.projection_gain(probe_);
        } else {
          g = bartlett_gain(cn, gains);
        }
        if (i == 1) out.g_near = g;
        interference += share * g * std::pow(pts[i].r, -cfg_.alpha);
      }
    } else {
      std::gamma_distribution<double> desired(cfg_.antennas + 1.0 - cfg_.users, 1.0);
      std::gamma_distribution<double> leak(static_cast<double>(cfg_.users), 1.0);
      out.g00 = desired(gains);
      for (std::size_t i = 1; i < pts.size(); ++i) {
        const double g = leak(gains);
        if (i == 1) out.g_near = g;
        interference += share * g * std::pow(pts[i].r, -cfg_.alpha);
      }
    }
    out.r0 = pts[0].r;
    out.n_bs = static_cast<std::int64_t>(pts.size());
    out.sir = share * out.g00 * std::pow(out.r0, -cfg_.alpha) / interference;
    out.rate = std::log1p(out.sir);
    return out;
  }

 private:
  // The interferer's gain depends on its channel H only through the Cholesky
  // factor L of H^H H, and on the cross-channel v only through H^H v, which
  // given H is L z with z ~ CN(0, I). For H with i.i.d. CN(0, 1) entries, L
  // has |L_ii|^2 ~ Gamma(M - i, 1) and CN(0, 1) below the diagonal (Bartlett),
  // so O(K^2) draws reproduce the joint law of the M x K construction.
  double bartlett_gain(ComplexGaussian<std::mt19937_64>& cn, std::mt19937_64& engine) {
    const int k = cfg_.users;
    for (int i = 0; i < k; ++i) {
      kernel_.cholesky(i, i) = std::sqrt(pivot_[i](engine));
      for (int j = 0; j < i; ++j) kernel_.cholesky(i, j) = cn.draw();
    }
    kernel_.adopt_cholesky();
    cn.fill(whitened_.data(), k);
    return kernel_.whitened_projection_gain(whitened_.data());
  }

  const SimulationConfig& cfg_;
  double radius_;
  std::vector<std::gamma_distribution<double>> pivot_;
  Eigen::MatrixXcd channel_;
  Eigen::VectorXcd probe_;
  ZfKernel kernel_;
  std::vector<std::complex<double>> whitened_;
};

}  // namespace

void SimulationConfig::validate() const {
  if (!(lambda_b > 0.0) || !std::isfinite(lambda_b)) {
    throw DomainError("BS density must be positive");
  }
  if (users < 1 || users > antennas) {
    throw DomainError("need 1 <= K <= M (M=" + std::to_string(antennas) +
                      ", K=" + std::to_string(users) + ")");
  }
  if (!(alpha > 2.0)) throw DomainError("path-loss exponent must exceed 2");
  if (trials < 1) throw DomainError("trials must be >= 1");
  if (!(transmit_power > 0.0)) throw DomainError("transmit power must be positive");
  if (!std::isfinite(window_radius)) throw DomainError("window radius must be finite");
}

double SimulationConfig::effective_window_radius() const {
  if (window_radius > 0.0) return window_radius;
  return std::sqrt(kDefaultExpectedCount / (std::numbers::pi * lambda_b));
}

double SimulationConfig::expected_bs_count() const {
  const double r = effective_window_radius();
  return lambda_b * std::numbers::pi * r * r;
}

std::vector<Point> sample_ppp(double lambda_b, double window_radius, CounterRng& rng) {
  if (!(lambda_b > 0.0)) throw DomainError("sample_ppp: density must be positive");
  if (!(window_radius > 0.0)) throw DomainError("sample_ppp: window radius must be positive");
  // pi lambda r_n^2 are the arrival times of a unit-rate Poisson process.
  std::vector<Point> pts;
  const double mass = std::numbers::pi * lambda_b;
  const double limit = mass * window_radius * window_radius;
  double arrival = 0.0;
  for (;;) {
    arrival += -std::log(rng.uniform_open());
    if (arrival > limit) break;
    const double r = std::sqrt(arrival / mass);
    const double theta = 2.0 * std::numbers::pi * rng.uniform_open();
    pts.push_back({r * std::cos(theta), r * std::sin(theta), r});
  }
  return pts;
}

SimulationResult simulate_typical_user(const SimulationConfig& config) {
  config.validate();
  const auto n = static_cast<std::size_t>(config.trials);
  std::vector<TrialOutcome> outcomes(n);

  const unsigned workers = resolve_thread_count(config.threads, n);
  const std::size_t chunk = (n + workers - 1) / workers;
  parallel_for(
      workers,
      [&](std::size_t w) {
        TrialRunner runner(config);
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        for (std::size_t t = begin; t < end; ++t) {
          outcomes[t] = runner.run(static_cast<std::int64_t>(t));
        }
      },
      workers);

  std::vector<double> rates(n), sirs(n), g00(n), gnear(n);
  SimulationResult result;
  if (config.expected_bs_count() < kMinExpectedCount) {
    result.warnings.push_back("expected BS count " + std::to_string(config.expected_bs_count()) +
                              " is below " + std::to_string(static_cast<int>(kMinExpectedCount)) +
                              "; edge truncation may bias the rate upward");
  }
  for (std::size_t t = 0; t < n; ++t) {
    rates[t] = outcomes[t].rate;
    sirs[t] = outcomes[t].sir;
    g00[t] = outcomes[t].g00;
    gnear[t] = outcomes[t].g_near;
    result.resampled_trials += outcomes[t].resamples > 0 ? 1 : 0;
  }
  const Moments rate_m = sample_moments(rates);
  result.mean_rate = rate_m.mean;
  result.std_error = std::sqrt(rate_m.variance / static_cast<double>(n));
  result.trials_used = static_cast<std::int64_t>(n);
  std::sort(sirs.begin(), sirs.end());
  constexpr std::array<double, 5> levels = {0.05, 0.25, 0.5, 0.75, 0.95};
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const double pos = levels[i] * (n - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const auto hi = std::min(lo + 1, n - 1);
    result.sir_quantiles[i] = sirs[lo] + (pos - lo) * (sirs[hi] - sirs[lo]);
  }
  result.g00_moments = sample_moments(g00);
  result.gi0_moments = sample_moments(gnear);
  if (config.keep_samples) {
    result.samples.reserve(n);
    for (std::size_t t = 0; t < n; ++t) {
      const auto& o = outcomes[t];
      result.samples.push_back(
          {static_cast<std::int64_t>(t), o.sir, o.rate, o.n_bs, o.r0, o.g00, o.g_near});
    }
  }
  return result;
}

RateEstimate estimate_mean_rate(const SimulationConfig& config) {
  const SimulationResult r = simulate_typical_user(config);
  return {r.mean_rate, r.std_error};
}

GammaApproxReport validate_gamma_approx(const SimulationConfig& config) {
  if (config.trials < 10000) {
    throw DomainError("validate_gamma_approx: needs at least 10^4 trials");
  }
  SimulationConfig full = config;
  full.mode = GainModel::full_zf;
  full.keep_samples = true;
  SimulationConfig approx = config;
  approx.mode = GainModel::gamma_approx;
  approx.keep_samples = false;

  const SimulationResult fr = simulate_typical_user(full);
  const SimulationResult gr = simulate_typical_user(approx);

  GammaApproxReport rep;
  const double k = config.users;
  rep.users = config.users;
  rep.gi0_mean = fr.gi0_moments.mean;
  rep.gi0_variance = fr.gi0_moments.variance;
  rep.gi0_mean_std_error = std::sqrt(fr.gi0_moments.variance / fr.gi0_moments.count);
  rep.expected_mean = k;
  rep.expected_variance = k;
  rep.mean_rel_deviation = (rep.gi0_mean - k) / k;
  rep.variance_rel_deviation = (rep.gi0_variance - k) / k;

  std::vector<double> g;
  g.reserve(fr.samples.size());
  for (const auto& s : fr.samples) g.push_back(s.g_nearest_interferer);
  std::sort(g.begin(), g.end());
  const double n = static_cast<double>(g.size());
  double d = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double cdf = numerics::regularized_lower_gamma(k, g[i]);
    d = std::max({d, cdf - i / n, (i + 1) / n - cdf});
  }
  rep.ks_statistic = d;
  const double sn = std::sqrt(n);
  rep.ks_p_value = kolmogorov_survival((sn + 0.12 + 0.11 / sn) * d);

  rep.rate_full_zf = fr.mean_rate;
  rep.rate_full_zf_se = fr.std_error;
  rep.rate_gamma = gr.mean_rate;
  rep.rate_gamma_se = gr.std_error;
  rep.rate_rel_gap = std::fabs(fr.mean_rate - gr.mean_rate) / gr.mean_rate;
  return rep;
}

void write_samples_csv(std::ostream& out, const std::vector<TrialSample>& samples) {
  out << "trial,sir,rate,n_bs,r0\n";
  const auto old_precision = out.precision(17);
  for (const auto& s : samples) {
    out << s.trial << ',' << s.sir << ',' << s.rate << ',' << s.n_bs << ',' << s.r0 << '\n';
  }
  out.precision(old_precision);
}

}  // namespace asekit::sim
