#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "asekit/numerics.hpp"

namespace asekit {

/// Per-BS power model EC = P/eta + M Pc + K^3 Ppre + P0 (watts).
struct BsPowerProfile {
  double p_watts = 1.0;  // total transmit power P
  double eta = 1.0;      // power amplifier efficiency, (0, 1]
  double pc = 1.0;       // circuit power per antenna
  double ppre = 1.0;     // precoding power coefficient
  double p0 = 1.0;       // non-transmission power

  void validate() const;

  /// P/eta + P0, the part of EC that does not scale with M or K.
  double fixed_power() const { return p_watts / eta + p0; }
};

/// 10^((dBm - 30) / 10).
double dbm_to_watts(double dbm);

/// Built-in tiers: "macro", "micro", "pico" and the as-listed variants
/// "macro-listed", "micro-listed". Throws DomainError for unknown names.
BsPowerProfile builtin_profile(std::string_view name);
std::vector<std::string> builtin_profile_names();

struct PlanningProblem {
  BsPowerProfile profile;
  double alpha = 4.0;
  double t_target = 1.0;  // ASE target, nats/s/Hz/km^2
  int k_search_max = 64;
  int m_search_max = 512;
  unsigned threads = 0;  // 0 = hardware concurrency

  void validate() const;
};

enum class PlanningMethod { optimal, suboptimal, su_mimo_baseline, single_antenna_baseline };

std::string_view to_string(PlanningMethod method);

struct PlanningSolution {
  double lambda_b_star = 0.0;  // BS per km^2
  int m_star = 0;
  int k_star = 0;
  double nec = 0.0;                // W per km^2
  double energy_efficiency = 0.0;  // nats/s/Hz/W
  int iterations = 0;
  PlanningMethod method = PlanningMethod::optimal;
  // Suboptimal planner only: whether the alternation met its tolerance, and
  // the relaxed optimum before rounding.
  bool converged = true;
  double m_relaxed = 0.0;
  double k_relaxed = 0.0;
};

enum class BaselineKind { su_mimo, single_antenna };

double bs_energy(const BsPowerProfile& profile, int antennas, int users);

/// Same model over real (M, K), used by the relaxed optimizers.
double bs_energy_relaxed(const BsPowerProfile& profile, double antennas, double users);

double network_energy(double lambda_b, const BsPowerProfile& profile, int antennas, int users);

/// Density meeting the target with equality: T / (K E[R]).
double required_density(double t_target, int antennas, int users, double alpha);

/// K E[R] / EC.
double energy_efficiency(const BsPowerProfile& profile, int antennas, int users, double alpha);

/// F(M) = dE[R]/dM * EC(M, K) - E[R] Pc. Decreasing in M with a single root
/// on [K - 1, inf).
double antenna_stationarity(const BsPowerProfile& profile, double antennas, int users,
                            double alpha);

/// Energy-optimal integer antenna count for a fixed K: the root of F(M),
/// clamped to >= K and rounded to whichever neighbor gives the smaller
/// network energy. The upper bracket starts at m_hi (0 picks a default) and is
/// doubled until F changes sign; BracketError if that needs more than m_cap.
int optimal_m_given_k(const BsPowerProfile& profile, int users, double alpha, double m_hi = 0.0,
                      double m_cap = 1 << 20);

/// Exhaustive over K = 1..k_search_max with M from optimal_m_given_k (capped at
/// m_search_max); keeps the pair with the highest energy efficiency.
PlanningSolution plan_optimal(const PlanningProblem& problem);

/// Lower-bound user stationarity F_K(M, K) = d(K E_lb)/dK * EC - 3 K^3 E_lb Ppre.
double user_stationarity_lb(const BsPowerProfile& profile, double antennas, double users,
                            double alpha);

/// Lower-bound antenna stationarity F_M(M, K) = dE_lb/dM * EC - E_lb Pc.
double antenna_stationarity_lb(const BsPowerProfile& profile, double antennas, double users,
                               double alpha);

/// Real-valued K solving F_K = 0 on (0, u* M).
double suboptimal_k_given_m(const BsPowerProfile& profile, double antennas, double alpha);

/// Real-valued M solving F_M = 0 on (K, inf), expanding the bracket from m_hi
/// by doubling up to m_cap.
double suboptimal_m_given_k(const BsPowerProfile& profile, double users, double alpha,
                            double m_hi = 0.0, double m_cap = 1 << 20);

/// Alternates the two relaxed solvers from K = initial_k until |dM| + |dK|
/// drops below 1e-6 (at most 50 rounds), rounds to the best feasible
/// integer neighbor under the exact rate and sizes the density with the
/// exact rate. `converged` is false when the round limit was hit.
PlanningSolution plan_suboptimal(const PlanningProblem& problem, double initial_k = 1.0);

PlanningSolution plan_baseline(const PlanningProblem& problem, BaselineKind kind);

/// Fills density, NEC and EE for a fixed (M, K).
PlanningSolution evaluate_plan(const PlanningProblem& problem, int antennas, int users,
                               PlanningMethod method);

}  // namespace asekit
