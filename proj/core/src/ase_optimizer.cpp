#include "asekit/ase_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "asekit/errors.hpp"
#include "asekit/rate_model.hpp"

namespace asekit {
namespace {

constexpr double kBracketInset = 1e-4;

void check_fraction(double u, bool allow_one) {
  const bool ok = allow_one ? (u > 0.0 && u <= 1.0) : (u > 0.0 && u < 1.0);
  if (!ok) {
    throw DomainError("loading fraction u out of range: " + std::to_string(u));
  }
}

std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

std::map<double, LoadingSolution>& cache() {
  static std::map<double, LoadingSolution> c;
  return c;
}

}  // namespace

double gain_function(double u, double alpha, const numerics::QuadratureSpec& spec) {
  check_fraction(u, true);
  return u * mean_rate_lower_bound(1.0, u, alpha, spec).mean_rate;
}

double gain_derivative(double u, double alpha, const numerics::QuadratureSpec& spec) {
  check_fraction(u, false);
  return d_k_rate_lb_dK(1.0, u, alpha, spec);
}

LoadingSolution solve_optimal_user_fraction(double alpha, const numerics::QuadratureSpec& quad,
                                            const numerics::BisectionSpec& bis) {
  if (!(alpha > 2.0)) {
    throw DomainError("path-loss exponent must exceed 2, got " + std::to_string(alpha));
  }
  const double u = numerics::bisect([&](double t) { return gain_derivative(t, alpha, quad); },
                                    kBracketInset, 1.0 - kBracketInset, bis);
  return {u, gain_function(u, alpha, quad), alpha};
}

LoadingSolution optimal_user_fraction(double alpha) {
  {
    std::lock_guard lock(cache_mutex());
    if (auto it = cache().find(alpha); it != cache().end()) return it->second;
  }
  // Solved outside the lock; concurrent misses for the same alpha compute the
  // same deterministic value.
  const LoadingSolution sol = solve_optimal_user_fraction(alpha);
  std::lock_guard lock(cache_mutex());
  cache().emplace(alpha, sol);
  return sol;
}

int optimal_k_lower_bound(int antennas, double alpha) {
  if (antennas < 1) throw DomainError("antennas M must be >= 1");
  if (antennas == 1) return 1;
  const double target = optimal_user_fraction(alpha).u_star * antennas;
  int lo = std::max(1, static_cast<int>(std::floor(target)));
  int hi = std::min(antennas, static_cast<int>(std::ceil(target)));
  lo = std::min(lo, antennas);
  hi = std::max(hi, 1);
  if (lo == hi) return lo;
  const auto objective = [&](int k) {
    return k * mean_rate_lower_bound(antennas, k, alpha).mean_rate;
  };
  return objective(hi) > objective(lo) ? hi : lo;
}

int optimal_k_exact(int antennas, double alpha, const numerics::QuadratureSpec& spec) {
  if (antennas < 1) throw DomainError("antennas M must be >= 1");
  int best_k = 1;
  double best = -1.0;
  for (int k = 1; k <= antennas; ++k) {
    const double value = k * mean_rate_exact(antennas, k, alpha, spec).mean_rate;
    if (value > best) {
      best = value;
      best_k = k;
    }
  }
  return best_k;
}

double ase_at_optimal_loading(double lambda_b, double antennas, double alpha) {
  if (!(lambda_b >= 0.0) || !(antennas > 0.0)) {
    throw DomainError("ase_at_optimal_loading: need lambda_b >= 0 and M > 0");
  }
  return lambda_b * antennas * optimal_user_fraction(alpha).gapa;
}

}  // namespace asekit
