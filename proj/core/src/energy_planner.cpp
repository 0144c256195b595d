#include "asekit/energy_planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "asekit/ase_optimizer.hpp"
#include "asekit/errors.hpp"
#include "asekit/parallel.hpp"
#include "asekit/rate_model.hpp"

namespace asekit {
namespace {

constexpr double kRelaxedInset = 1e-4;
constexpr double kAlternationTolerance = 1e-6;
constexpr int kMaxAlternations = 50;

void check_pair(int antennas, int users) {
  if (users < 1 || antennas < 1) {
    throw DomainError("need M >= 1 and K >= 1 (M=" + std::to_string(antennas) +
                      ", K=" + std::to_string(users) + ")");
  }
  if (users > antennas) {
    throw DomainError("active users K must not exceed antennas M (M=" +
                      std::to_string(antennas) + ", K=" + std::to_string(users) + ")");
  }
}

double default_upper(double users) { return std::max(2.0 * users, users + 8.0); }

// Doubles hi until f(hi) < 0. Returns nullopt if f is still positive at cap.
template <class F>
std::optional<double> expand_bracket(const F& f, double hi, double cap) {
  hi = std::min(hi, cap);
  while (f(hi) > 0.0) {
    if (hi >= cap) return std::nullopt;
    hi = std::min(2.0 * hi, cap);
  }
  return hi;
}

// Root of F(M) for a fixed K, or nullopt when F stays positive up to cap.
std::optional<double> antenna_root(const BsPowerProfile& profile, int users, double alpha,
                                   double m_hi, double cap) {
  const auto f = [&](double m) { return antenna_stationarity(profile, m, users, alpha); };
  const double lo = users - 1.0;
  const auto hi = expand_bracket(f, m_hi > lo ? m_hi : default_upper(users), cap);
  if (!hi) return std::nullopt;
  return numerics::bisect(f, lo, *hi);
}

// NEC per unit ASE target; the rounding objective of the exact planner.
double energy_per_target(const BsPowerProfile& profile, int antennas, int users, double alpha) {
  return bs_energy(profile, antennas, users) /
         (users * mean_rate_exact(antennas, users, alpha).mean_rate);
}

int round_antennas(const BsPowerProfile& profile, double m_tilde, int users, double alpha) {
  m_tilde = std::max(m_tilde, static_cast<double>(users));
  const int lo = std::max(users, static_cast<int>(std::floor(m_tilde)));
  const int hi = std::max(users, static_cast<int>(std::ceil(m_tilde)));
  if (lo == hi) return lo;
  return energy_per_target(profile, hi, users, alpha) <
                 energy_per_target(profile, lo, users, alpha)
             ? hi
             : lo;
}

int bounded_optimal_m(const BsPowerProfile& profile, int users, double alpha, int m_max) {
  const auto root = antenna_root(profile, users, alpha, 0.0, m_max);
  if (!root) return m_max;
  return std::min(m_max, round_antennas(profile, *root, users, alpha));
}

}  // namespace

std::string_view to_string(PlanningMethod method) {
  switch (method) {
    case PlanningMethod::optimal: return "optimal";
    case PlanningMethod::suboptimal: return "suboptimal";
    case PlanningMethod::su_mimo_baseline: return "su_mimo_baseline";
    case PlanningMethod::single_antenna_baseline: return "single_antenna_baseline";
  }
  return "unknown";
}

void PlanningProblem::validate() const {
  profile.validate();
  if (!(alpha > 2.0)) throw DomainError("path-loss exponent must exceed 2");
  if (!(t_target > 0.0) || !std::isfinite(t_target)) {
    throw DomainError("ASE target must be positive");
  }
  if (k_search_max < 1 || m_search_max < 1 || k_search_max > m_search_max) {
    throw DomainError("need 1 <= k_search_max <= m_search_max");
  }
}

double bs_energy(const BsPowerProfile& profile, int antennas, int users) {
  check_pair(antennas, users);
  return bs_energy_relaxed(profile, antennas, users);
}

double bs_energy_relaxed(const BsPowerProfile& profile, double antennas, double users) {
  return profile.p_watts / profile.eta + antennas * profile.pc +
         users * users * users * profile.ppre + profile.p0;
}

double network_energy(double lambda_b, const BsPowerProfile& profile, int antennas, int users) {
  if (!(lambda_b >= 0.0)) throw DomainError("BS density must be non-negative");
  return lambda_b * bs_energy(profile, antennas, users);
}

double required_density(double t_target, int antennas, int users, double alpha) {
  check_pair(antennas, users);
  if (!(t_target > 0.0)) throw DomainError("ASE target must be positive");
  return t_target / (users * mean_rate_exact(antennas, users, alpha).mean_rate);
}

double energy_efficiency(const BsPowerProfile& profile, int antennas, int users, double alpha) {
  check_pair(antennas, users);
  return users * mean_rate_exact(antennas, users, alpha).mean_rate /
         bs_energy(profile, antennas, users);
}

double antenna_stationarity(const BsPowerProfile& profile, double antennas, int users,
                            double alpha) {
  const double slope = d_mean_rate_exact_dM(antennas, users, alpha);
  const double rate = mean_rate_exact(antennas, users, alpha).mean_rate;
  return slope * bs_energy_relaxed(profile, antennas, users) - rate * profile.pc;
}

int optimal_m_given_k(const BsPowerProfile& profile, int users, double alpha, double m_hi,
                      double m_cap) {
  profile.validate();
  if (users < 1) throw DomainError("active users K must be >= 1");
  const auto root = antenna_root(profile, users, alpha, m_hi, m_cap);
  if (!root) {
    throw BracketError("optimal_m_given_k: F(M) still positive at cap M=" +
                       std::to_string(m_cap));
  }
  return round_antennas(profile, *root, users, alpha);
}

PlanningSolution evaluate_plan(const PlanningProblem& problem, int antennas, int users,
                               PlanningMethod method) {
  PlanningSolution sol;
  sol.method = method;
  sol.m_star = antennas;
  sol.k_star = users;
  sol.lambda_b_star = required_density(problem.t_target, antennas, users, problem.alpha);
  sol.nec = network_energy(sol.lambda_b_star, problem.profile, antennas, users);
  sol.energy_efficiency = energy_efficiency(problem.profile, antennas, users, problem.alpha);
  return sol;
}

PlanningSolution plan_optimal(const PlanningProblem& problem) {
  problem.validate();
  const auto n = static_cast<std::size_t>(problem.k_search_max);
  std::vector<int> best_m(n);
  std::vector<double> efficiency(n);
  parallel_for(
      n,
      [&](std::size_t i) {
        const int k = static_cast<int>(i) + 1;
        best_m[i] = bounded_optimal_m(problem.profile, k, problem.alpha, problem.m_search_max);
        efficiency[i] = energy_efficiency(problem.profile, best_m[i], k, problem.alpha);
      },
      problem.threads);
  // Sequential reduction keeps the tie-break (smaller K) independent of threading.
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (efficiency[i] > efficiency[best]) best = i;
  }
  return evaluate_plan(problem, best_m[best], static_cast<int>(best) + 1,
                       PlanningMethod::optimal);
}

double user_stationarity_lb(const BsPowerProfile& profile, double antennas, double users,
                            double alpha) {
  const double slope = d_k_rate_lb_dK(antennas, users, alpha);
  const double rate = mean_rate_lower_bound(antennas, users, alpha).mean_rate;
  return slope * bs_energy_relaxed(profile, antennas, users) -
         3.0 * users * users * users * rate * profile.ppre;
}

double antenna_stationarity_lb(const BsPowerProfile& profile, double antennas, double users,
                               double alpha) {
  const double slope = d_rate_lb_dM(antennas, users, alpha);
  const double rate = mean_rate_lower_bound(antennas, users, alpha).mean_rate;
  return slope * bs_energy_relaxed(profile, antennas, users) - rate * profile.pc;
}

double suboptimal_k_given_m(const BsPowerProfile& profile, double antennas, double alpha) {
  profile.validate();
  if (!(antennas > 0.0)) throw DomainError("antennas M must be positive");
  const auto f = [&](double k) { return user_stationarity_lb(profile, antennas, k, alpha); };
  const double lo = kRelaxedInset * antennas;
  const double hi = optimal_user_fraction(alpha).u_star * antennas;
  if (f(lo) <= 0.0) return lo;
  return numerics::bisect(f, lo, hi);
}

double suboptimal_m_given_k(const BsPowerProfile& profile, double users, double alpha,
                            double m_hi, double m_cap) {
  profile.validate();
  if (!(users > 0.0)) throw DomainError("active users K must be positive");
  const auto f = [&](double m) { return antenna_stationarity_lb(profile, m, users, alpha); };
  const double lo = users * (1.0 + kRelaxedInset);
  if (f(lo) <= 0.0) return lo;
  const auto hi = expand_bracket(f, m_hi > lo ? m_hi : default_upper(users), m_cap);
  if (!hi) {
    throw BracketError("suboptimal_m_given_k: F_M still positive at cap M=" +
                       std::to_string(m_cap));
  }
  return numerics::bisect(f, lo, *hi);
}

PlanningSolution plan_suboptimal(const PlanningProblem& problem, double initial_k) {
  problem.validate();
  if (!(initial_k >= 1.0)) throw DomainError("initial K must be >= 1");
  const auto& profile = problem.profile;
  double k = initial_k;
  double m = std::numeric_limits<double>::quiet_NaN();
  int rounds = 0;
  bool converged = false;
  while (rounds < kMaxAlternations) {
    ++rounds;
    const double m_next = suboptimal_m_given_k(profile, k, problem.alpha);
    const double k_next = suboptimal_k_given_m(profile, m_next, problem.alpha);
    const bool settled =
        std::fabs(m_next - m) + std::fabs(k_next - k) < kAlternationTolerance;
    m = m_next;
    k = k_next;
    if (settled) {
      converged = true;
      break;
    }
  }

  // Best feasible integer neighbor of the relaxed optimum under the exact
  // rate; candidates are scanned in (M, K) order so ties keep the smaller M,
  // then the smaller K.
  int best_m = 0;
  int best_k = 0;
  double best_ee = -1.0;
  for (double mc : {std::floor(m), std::ceil(m)}) {
    for (double kc : {std::floor(k), std::ceil(k)}) {
      const int mi = static_cast<int>(mc);
      const int ki = static_cast<int>(kc);
      if (ki < 1 || ki > mi || (mi == best_m && ki == best_k)) continue;
      const double ee = energy_efficiency(profile, mi, ki, problem.alpha);
      if (ee > best_ee) {
        best_ee = ee;
        best_m = mi;
        best_k = ki;
      }
    }
  }
  if (best_m == 0) {
    throw DomainError("plan_suboptimal: no feasible integer neighbor of the relaxed optimum");
  }
  PlanningSolution sol = evaluate_plan(problem, best_m, best_k, PlanningMethod::suboptimal);
  sol.iterations = rounds;
  sol.converged = converged;
  sol.m_relaxed = m;
  sol.k_relaxed = k;
  return sol;
}

PlanningSolution plan_baseline(const PlanningProblem& problem, BaselineKind kind) {
  problem.validate();
  if (kind == BaselineKind::single_antenna) {
    return evaluate_plan(problem, 1, 1, PlanningMethod::single_antenna_baseline);
  }
  const int m = bounded_optimal_m(problem.profile, 1, problem.alpha, problem.m_search_max);
  return evaluate_plan(problem, m, 1, PlanningMethod::su_mimo_baseline);
}

}  // namespace asekit
