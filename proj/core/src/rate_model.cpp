#include "asekit/rate_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "asekit/errors.hpp"

namespace asekit {
namespace {

// Below this z the integrands switch to their first-order expansions.
constexpr double kSmallZ = 1e-8;

void check_alpha(double alpha) {
  if (!(alpha > 2.0) || !std::isfinite(alpha)) {
    throw DomainError("path-loss exponent must exceed 2, got " + std::to_string(alpha));
  }
}

void check_exact_args(double antennas, int users, double alpha) {
  check_alpha(alpha);
  if (users < 1) {
    throw DomainError("active users K must be >= 1, got " + std::to_string(users));
  }
  if (!(antennas >= users - 1.0) || !std::isfinite(antennas)) {
    throw DomainError("antennas M must be >= K - 1 (M=" + std::to_string(antennas) +
                      ", K=" + std::to_string(users) + ")");
  }
}

void check_relaxed_args(double antennas, double users, double alpha) {
  check_alpha(alpha);
  if (!(users > 0.0) || !std::isfinite(users)) {
    throw DomainError("active users K must be positive, got " + std::to_string(users));
  }
  if (!(antennas >= users) || !std::isfinite(antennas)) {
    throw DomainError("relaxed rate requires K <= M (M=" + std::to_string(antennas) +
                      ", K=" + std::to_string(users) + ")");
  }
}

RateResult finish(const numerics::QuadratureResult& q, bool lower) {
  return {q.value, lower, q.error_estimate};
}

}  // namespace

namespace detail {

double exact_denominator(double z, int users, double alpha) {
  const double k = static_cast<double>(users);
  const double delta = 2.0 / alpha;
  const double x = z / (1.0 + z);
  return std::exp(-k * std::log1p(z)) +
         std::pow(z, delta) * k * numerics::incomplete_beta(x, 1.0 - delta, k + delta);
}

double lower_bound_denominator(double z, double alpha) {
  const double delta = 2.0 / alpha;
  return std::exp(-z) + std::pow(z, delta) * numerics::lower_incomplete_gamma(1.0 - delta, z);
}

}  // namespace detail

void NetworkConfig::validate() const {
  if (!(lambda_b > 0.0) || !std::isfinite(lambda_b)) {
    throw DomainError("BS density must be positive, got " + std::to_string(lambda_b));
  }
  check_alpha(alpha);
  if (!(users >= 1.0)) {
    throw DomainError("active users K must be >= 1, got " + std::to_string(users));
  }
  if (!(users <= antennas) || !std::isfinite(antennas)) {
    throw DomainError("active users K must not exceed antennas M (M=" +
                      std::to_string(antennas) + ", K=" + std::to_string(users) + ")");
  }
}

RateResult mean_rate_exact(double antennas, int users, double alpha,
                           const numerics::QuadratureSpec& spec) {
  check_exact_args(antennas, users, alpha);
  const double e = antennas + 1.0 - users;
  if (e == 0.0) return {0.0, false, 0.0};
  const double scale = std::max(1.0, e + 1.0);
  const auto integrand = [=](double z) {
    if (z * scale < kSmallZ) {
      return e * (1.0 - 0.5 * (e + 1.0) * z) / detail::exact_denominator(z, users, alpha);
    }
    const double numer = -std::expm1(-e * std::log1p(z));
    return numer / (z * detail::exact_denominator(z, users, alpha));
  };
  return finish(numerics::integrate_semi_infinite(integrand, spec), false);
}

RateResult mean_rate_lower_bound(double antennas, double users, double alpha,
                                 const numerics::QuadratureSpec& spec) {
  check_relaxed_args(antennas, users, alpha);
  const double c = (antennas - users) / users;
  if (c == 0.0) return {0.0, true, 0.0};
  const double scale = std::max(1.0, c);
  const auto integrand = [=](double z) {
    if (z * scale < kSmallZ) {
      return c * (1.0 - 0.5 * c * z) / detail::lower_bound_denominator(z, alpha);
    }
    return -std::expm1(-z * c) / (z * detail::lower_bound_denominator(z, alpha));
  };
  return finish(numerics::integrate_semi_infinite(integrand, spec), true);
}

double ase_exact(const NetworkConfig& cfg, const numerics::QuadratureSpec& spec) {
  cfg.validate();
  if (cfg.users != std::floor(cfg.users)) {
    throw DomainError("exact ASE requires an integral number of active users, got " +
                      std::to_string(cfg.users));
  }
  const int k = static_cast<int>(cfg.users);
  return cfg.lambda_b * cfg.users * mean_rate_exact(cfg.antennas, k, cfg.alpha, spec).mean_rate;
}

double ase_lower_bound(const NetworkConfig& cfg, const numerics::QuadratureSpec& spec) {
  cfg.validate();
  return cfg.lambda_b * cfg.users *
         mean_rate_lower_bound(cfg.antennas, cfg.users, cfg.alpha, spec).mean_rate;
}

double d_mean_rate_exact_dM(double antennas, int users, double alpha,
                            const numerics::QuadratureSpec& spec) {
  check_exact_args(antennas, users, alpha);
  const double e = antennas + 1.0 - users;
  const double scale = std::max(1.0, e);
  const auto integrand = [=](double z) {
    if (z * scale < kSmallZ) {
      return (1.0 - 0.5 * z) * (1.0 - e * z) / detail::exact_denominator(z, users, alpha);
    }
    const double lp = std::log1p(z);
    return lp * std::exp(-e * lp) / (z * detail::exact_denominator(z, users, alpha));
  };
  return numerics::integrate_semi_infinite(integrand, spec).value;
}

double d_k_rate_lb_dK(double antennas, double users, double alpha,
                      const numerics::QuadratureSpec& spec) {
  check_relaxed_args(antennas, users, alpha);
  const double ratio = antennas / users;
  const double c = ratio - 1.0;
  if (c == 0.0) return -std::numeric_limits<double>::infinity();
  const double scale = std::max(1.0, ratio);
  const auto integrand = [=](double z) {
    if (z * scale < kSmallZ) {
      return (-1.0 + z * (0.5 * c * c + c)) / detail::lower_bound_denominator(z, alpha);
    }
    const double decay = std::exp(-z * c);
    const double numer = -std::expm1(-z * c) - z * ratio * decay;
    return numer / (z * detail::lower_bound_denominator(z, alpha));
  };
  return numerics::integrate_semi_infinite(integrand, spec).value;
}

double d_rate_lb_dM(double antennas, double users, double alpha,
                    const numerics::QuadratureSpec& spec) {
  check_relaxed_args(antennas, users, alpha);
  const double c = (antennas - users) / users;
  if (c == 0.0) return std::numeric_limits<double>::infinity();
  const auto integrand = [=](double z) {
    return std::exp(-z * c) / (users * detail::lower_bound_denominator(z, alpha));
  };
  return numerics::integrate_semi_infinite(integrand, spec).value;
}

}  // namespace asekit
