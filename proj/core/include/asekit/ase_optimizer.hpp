#pragma once

#include "asekit/numerics.hpp"

namespace asekit {

/// ASE-optimal loading fraction u* = K/M and the gain on ASE per antenna
/// (GAPA) G(u*). Both depend on the path-loss exponent only.
struct LoadingSolution {
  double u_star = 0.0;
  double gapa = 0.0;  // nats/s/Hz per antenna
  double alpha = 4.0;
};

/// G(u) = u * E_lb[R] at K/M = u. Zero at u = 1; extends continuously to 0 at 0+.
double gain_function(double u, double alpha, const numerics::QuadratureSpec& spec = {});

/// dG/du on (0, 1); strictly decreasing.
double gain_derivative(double u, double alpha, const numerics::QuadratureSpec& spec = {});

/// Root of gain_derivative on [1e-4, 1 - 1e-4]. Results are memoized per
/// alpha behind a mutex; see solve_optimal_user_fraction for the uncached path.
LoadingSolution optimal_user_fraction(double alpha);

LoadingSolution solve_optimal_user_fraction(double alpha,
                                            const numerics::QuadratureSpec& quad = {},
                                            const numerics::BisectionSpec& bis = {});

/// Best of floor(u* M) and ceil(u* M), clamped to [1, M], for K * E_lb[R].
/// Ties go to the smaller K.
int optimal_k_lower_bound(int antennas, double alpha);

/// Exhaustive argmax over K in 1..M of K * E[R]; ties go to the smaller K.
int optimal_k_exact(int antennas, double alpha, const numerics::QuadratureSpec& spec = {});

/// lambda_b * M * G(u*), the lower-bound ASE at optimal loading.
double ase_at_optimal_loading(double lambda_b, double antennas, double alpha);

}  // namespace asekit
