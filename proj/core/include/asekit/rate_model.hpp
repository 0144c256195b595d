#pragma once

#include "asekit/numerics.hpp"

namespace asekit {

/// Deployment point of a single-tier network. `antennas` and `users` are
/// real-valued so the relaxed (continuous) analysis can share the type; the
/// exact-rate family insists on an integral user count.
struct NetworkConfig {
  double lambda_b = 1.0;  // BS per km^2
  double antennas = 1.0;  // M
  double users = 1.0;     // K, active users per BS per slot
  double alpha = 4.0;     // path-loss exponent

  /// Throws DomainError unless lambda_b > 0, alpha > 2 and 1 <= K <= M.
  void validate() const;
};

struct RateResult {
  double mean_rate = 0.0;  // nats/s/Hz per user
  bool is_lower_bound = false;
  double quadrature_error_estimate = 0.0;
};

/// Mean rate of the typical user under ZF with M antennas and K scheduled
/// users per cell, Rayleigh fading and nearest-BS association in a PPP
/// network. Independent of density and transmit power.
///
///   E[R] = int_0^inf (1/z) (1 - (1+z)^-(M+1-K)) / D(z) dz,
///   D(z) = (1+z)^-K + z^(2/alpha) K B(z/(1+z); 1 - 2/alpha, K + 2/alpha).
///
/// M may be real and as small as K - 1 (where the rate vanishes); that range
/// is what the antenna-count root finder brackets over.
RateResult mean_rate_exact(double antennas, int users, double alpha,
                           const numerics::QuadratureSpec& spec = {});

/// Jensen lower bound on the mean rate. Depends on (M, K) only through K/M:
///
///   E_lb[R] = int_0^inf (1/z) (1 - exp(-z (M-K)/K)) / D_lb(z) dz,
///   D_lb(z) = exp(-z) + z^(2/alpha) gamma(1 - 2/alpha, z).
///
/// Accepts real 0 < K <= M; returns exactly 0 at K = M.
RateResult mean_rate_lower_bound(double antennas, double users, double alpha,
                                 const numerics::QuadratureSpec& spec = {});

/// lambda_b * K * E[R]; requires an integral K.
double ase_exact(const NetworkConfig& cfg, const numerics::QuadratureSpec& spec = {});

/// lambda_b * K * E_lb[R].
double ase_lower_bound(const NetworkConfig& cfg, const numerics::QuadratureSpec& spec = {});

/// dE[R]/dM with K held fixed, M real and >= K - 1. Only the
/// (1+z)^-(M+1-K) term depends on M.
double d_mean_rate_exact_dM(double antennas, int users, double alpha,
                            const numerics::QuadratureSpec& spec = {});

/// d(K E_lb[R]) / dK at fixed M. Equals the gain derivative at u = K/M for
/// every M. Diverges to -inf at K = M, which is returned as such.
double d_k_rate_lb_dK(double antennas, double users, double alpha,
                      const numerics::QuadratureSpec& spec = {});

/// dE_lb[R]/dM at fixed K. Diverges to +inf at M = K.
double d_rate_lb_dM(double antennas, double users, double alpha,
                    const numerics::QuadratureSpec& spec = {});

namespace detail {
/// The two rate denominators, exposed for tests and the gain function.
double exact_denominator(double z, int users, double alpha);
double lower_bound_denominator(double z, double alpha);
}  // namespace detail

}  // namespace asekit
