#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "asekit/ase_optimizer.hpp"
#include "asekit/energy_planner.hpp"
#include "asekit/errors.hpp"
#include "asekit/rate_model.hpp"

using namespace asekit;

namespace {

PlanningProblem problem_for(const char* tier, double target = 1.0) {
  PlanningProblem p;
  p.profile = builtin_profile(tier);
  p.t_target = target;
  p.k_search_max = 24;
  p.m_search_max = 256;
  return p;
}

// Brute force over the whole (M, K) grid; the planner only visits one M per K.
std::pair<int, int> brute_force_ee(const BsPowerProfile& profile, int k_max, int m_max) {
  double best = -1.0;
  std::pair<int, int> arg{0, 0};
  for (int k = 1; k <= k_max; ++k) {
    for (int m = k; m <= m_max; ++m) {
      const double ee = energy_efficiency(profile, m, k, 4.0);
      if (ee > best) {
        best = ee;
        arg = {m, k};
      }
    }
  }
  return arg;
}

}  // namespace

TEST(PowerProfile, DbmConversion) {
  EXPECT_NEAR(dbm_to_watts(30.0), 1.0, 1e-15);
  EXPECT_NEAR(dbm_to_watts(54.0), 251.188643150958, 1e-9);
  EXPECT_NEAR(dbm_to_watts(46.0), 39.8107170553497, 1e-10);
  EXPECT_NEAR(dbm_to_watts(33.0), 1.99526231496888, 1e-12);
}

TEST(PowerProfile, BuiltinFixedToCircuitRatios) {
  const auto ratio = [](const char* name) {
    const auto p = builtin_profile(name);
    return p.fixed_power() / p.pc;
  };
  EXPECT_NEAR(ratio("macro"), 39.03, 5e-3);
  EXPECT_NEAR(ratio("micro"), 11.42, 5e-3);
  EXPECT_NEAR(ratio("pico"), 3.888, 5e-3);
  for (const auto& name : builtin_profile_names()) EXPECT_NO_THROW(builtin_profile(name).validate());
  EXPECT_THROW(builtin_profile("femto"), DomainError);
}

TEST(PowerProfile, Validation) {
  auto p = builtin_profile("pico");
  p.eta = 1.5;
  EXPECT_THROW(p.validate(), DomainError);
  p = builtin_profile("pico");
  p.pc = 0.0;
  EXPECT_THROW(p.validate(), DomainError);
  p = builtin_profile("pico");
  p.p0 = std::numeric_limits<double>::infinity();
  EXPECT_THROW(p.validate(), DomainError);
  p = builtin_profile("pico");
  p.eta = 1.0;
  EXPECT_NO_THROW(p.validate());
}

TEST(BsEnergy, ComponentSum) {
  const auto pico = builtin_profile("pico");
  const double expected = std::pow(10.0, 0.3) / 0.08 + 5 * 6.8 + 8 * 1.74 + 1.5;
  EXPECT_NEAR(bs_energy(pico, 5, 2), expected, 1e-12);
  const auto macro = builtin_profile("macro-listed");
  EXPECT_NEAR(bs_energy(macro, 1, 1), 251.188643150958 / 0.388 + 16.9 + 1.74 + 65.8, 1e-9);
  EXPECT_NEAR(bs_energy(macro, 1, 1), 731.83, 0.01);
  EXPECT_DOUBLE_EQ(bs_energy_relaxed(pico, 5.0, 2.0), bs_energy(pico, 5, 2));
  EXPECT_THROW(bs_energy(pico, 0, 0), DomainError);
  EXPECT_THROW(bs_energy(pico, 3, 4), DomainError);
}

TEST(NetworkEnergy, LinearInDensity) {
  const auto macro = builtin_profile("macro-listed");
  const double one = network_energy(1.0, macro, 35, 6);
  EXPECT_NEAR(network_energy(3.5, macro, 35, 6), 3.5 * one, 1e-9 * one);
  EXPECT_NEAR(one, 1680.5, 0.1);
  EXPECT_DOUBLE_EQ(network_energy(0.0, macro, 35, 6), 0.0);
}

TEST(RequiredDensity, MeetsTargetWithEquality) {
  for (int k : {1, 3, 6}) {
    const double lam = required_density(10.0, 12, k, 4.0);
    const double ase = lam * k * mean_rate_exact(12, k, 4.0).mean_rate;
    EXPECT_NEAR(ase, 10.0, 1e-9);
    EXPECT_NEAR(required_density(20.0, 12, k, 4.0), 2.0 * lam, 1e-12 * lam);
  }
}

TEST(EnergyEfficiency, InverseOfEnergyPerTarget) {
  const auto micro = builtin_profile("micro");
  const double ee = energy_efficiency(micro, 11, 3, 4.0);
  const double lam = required_density(1.0, 11, 3, 4.0);
  EXPECT_NEAR(ee * network_energy(lam, micro, 11, 3), 1.0, 1e-12);
}

TEST(EnergyEfficiency, ScalesInverselyWithPower) {
  auto p = builtin_profile("macro");
  const double base = energy_efficiency(p, 35, 6, 4.0);
  p.p_watts *= 2;
  p.pc *= 2;
  p.ppre *= 2;
  p.p0 *= 2;
  EXPECT_NEAR(energy_efficiency(p, 35, 6, 4.0), base / 2, 1e-14);
}

TEST(AntennaStationarity, DecreasingWithPositiveLeftEnd) {
  const auto macro = builtin_profile("macro");
  for (int k : {1, 4, 6}) {
    double prev = antenna_stationarity(macro, k - 1.0, k, 4.0);
    EXPECT_GT(prev, 0.0);
    for (double m = k; m <= 200.0; m += 0.5) {
      const double f = antenna_stationarity(macro, m, k, 4.0);
      EXPECT_LT(f, prev) << "k=" << k << " m=" << m;
      prev = f;
    }
    EXPECT_LT(prev, 0.0);
  }
}

TEST(OptimalMGivenK, KnownDesigns) {
  EXPECT_EQ(optimal_m_given_k(builtin_profile("macro"), 6, 4.0), 35);
  EXPECT_EQ(optimal_m_given_k(builtin_profile("micro"), 3, 4.0), 11);
  EXPECT_EQ(optimal_m_given_k(builtin_profile("pico"), 2, 4.0), 5);
}

TEST(OptimalMGivenK, IsTheBestIntegerForThatK) {
  const auto macro = builtin_profile("macro");
  const int m = optimal_m_given_k(macro, 6, 4.0);
  const double best = energy_efficiency(macro, m, 6, 4.0);
  for (int other = 6; other <= 120; ++other) {
    EXPECT_LE(energy_efficiency(macro, other, 6, 4.0), best * (1 + 1e-12)) << other;
  }
}

TEST(OptimalMGivenK, CircuitDominatedLimitMaximizesRatePerAntenna) {
  // With Pc dominating EC the objective tends to E[R](M) / M.
  auto p = builtin_profile("pico");
  p.pc = 1e6;
  int best = 3;
  for (int m = 3; m <= 30; ++m) {
    if (mean_rate_exact(m, 3, 4.0).mean_rate / m > mean_rate_exact(best, 3, 4.0).mean_rate / best)
      best = m;
  }
  EXPECT_EQ(optimal_m_given_k(p, 3, 4.0), best);
  EXPECT_LT(optimal_m_given_k(p, 3, 4.0), optimal_m_given_k(builtin_profile("pico"), 3, 4.0));
}

TEST(OptimalMGivenK, BracketCapIsReported) {
  auto p = builtin_profile("macro");
  p.pc = 1e-6;
  EXPECT_THROW(optimal_m_given_k(p, 6, 4.0, 0.0, 64.0), BracketError);
}

TEST(PlanningProblem, Validation) {
  auto p = problem_for("macro");
  EXPECT_NO_THROW(p.validate());
  p.t_target = 0.0;
  EXPECT_THROW(p.validate(), DomainError);
  p = problem_for("macro");
  p.k_search_max = 0;
  EXPECT_THROW(p.validate(), DomainError);
  p = problem_for("macro");
  p.alpha = 2.0;
  EXPECT_THROW(p.validate(), DomainError);
  p = problem_for("macro");
  p.profile.eta = 0.0;
  EXPECT_THROW(plan_optimal(p), DomainError);
}

TEST(PlanOptimal, TierDesigns) {
  const auto macro = plan_optimal(problem_for("macro"));
  EXPECT_EQ(macro.m_star, 35);
  EXPECT_EQ(macro.k_star, 6);
  EXPECT_NEAR(macro.nec, 96.17, 0.01);
  const auto micro = plan_optimal(problem_for("micro"));
  EXPECT_EQ(micro.m_star, 11);
  EXPECT_EQ(micro.k_star, 3);
  EXPECT_NEAR(micro.nec, 48.08, 0.01);
  const auto pico = plan_optimal(problem_for("pico"));
  EXPECT_EQ(pico.m_star, 5);
  EXPECT_EQ(pico.k_star, 2);
  EXPECT_NEAR(pico.nec, 18.02, 0.01);
  EXPECT_EQ(pico.method, PlanningMethod::optimal);
}

TEST(PlanOptimal, EfficiencyNearTierValues) {
  EXPECT_NEAR(plan_optimal(problem_for("macro")).energy_efficiency, 0.01, 0.002);
  EXPECT_NEAR(plan_optimal(problem_for("micro")).energy_efficiency, 0.02, 0.004);
  EXPECT_NEAR(plan_optimal(problem_for("pico")).energy_efficiency, 0.05, 0.01);
}

TEST(PlanOptimal, MatchesBruteForce) {
  for (const char* tier : {"micro", "pico"}) {
    const auto sol = plan_optimal(problem_for(tier));
    const auto [m, k] = brute_force_ee(builtin_profile(tier), 12, 60);
    EXPECT_EQ(sol.m_star, m) << tier;
    EXPECT_EQ(sol.k_star, k) << tier;
  }
}

TEST(PlanOptimal, TargetOnlyScalesDensityAndEnergy) {
  const auto one = plan_optimal(problem_for("macro", 1.0));
  for (double t : {10.0, 100.0}) {
    const auto sol = plan_optimal(problem_for("macro", t));
    EXPECT_EQ(sol.m_star, one.m_star);
    EXPECT_EQ(sol.k_star, one.k_star);
    EXPECT_NEAR(sol.lambda_b_star, t * one.lambda_b_star, 1e-12 * t * one.lambda_b_star);
    EXPECT_NEAR(sol.nec, t * one.nec, 1e-12 * t * one.nec);
    EXPECT_DOUBLE_EQ(sol.energy_efficiency, one.energy_efficiency);
  }
}

TEST(PlanOptimal, ThreadCountDoesNotChangeResult) {
  auto p = problem_for("micro");
  p.threads = 1;
  const auto serial = plan_optimal(p);
  p.threads = 4;
  const auto parallel = plan_optimal(p);
  EXPECT_EQ(serial.m_star, parallel.m_star);
  EXPECT_EQ(serial.k_star, parallel.k_star);
  EXPECT_EQ(serial.nec, parallel.nec);
}

TEST(PlanOptimal, DensityMeetsTarget) {
  const auto sol = plan_optimal(problem_for("pico", 7.0));
  const double ase = ase_exact(NetworkConfig{sol.lambda_b_star, static_cast<double>(sol.m_star), static_cast<double>(sol.k_star), 4.0});
  EXPECT_NEAR(ase, 7.0, 1e-9);
}

TEST(SuboptimalSolvers, RootsAreStationary) {
  const auto macro = builtin_profile("macro");
  const double k = suboptimal_k_given_m(macro, 35.0, 4.0);
  EXPECT_NEAR(user_stationarity_lb(macro, 35.0, k, 4.0), 0.0, 1e-6);
  EXPECT_GT(k, 0.0);
  EXPECT_LT(k, optimal_user_fraction(4.0).u_star * 35.0);
  const double m = suboptimal_m_given_k(macro, 6.0, 4.0);
  EXPECT_NEAR(antenna_stationarity_lb(macro, m, 6.0, 4.0), 0.0, 1e-6);
  EXPECT_GT(m, 6.0);
}

TEST(SuboptimalSolvers, RespondToPowerComponents) {
  auto p = builtin_profile("micro");
  const double k_base = suboptimal_k_given_m(p, 20.0, 4.0);
  p.p0 *= 10.0;
  EXPECT_GT(suboptimal_k_given_m(p, 20.0, 4.0), k_base);
  p = builtin_profile("micro");
  const double m_base = suboptimal_m_given_k(p, 3.0, 4.0);
  p.pc *= 0.1;
  EXPECT_GT(suboptimal_m_given_k(p, 3.0, 4.0), m_base);
}

TEST(SuboptimalSolvers, RejectBadInputs) {
  const auto p = builtin_profile("micro");
  EXPECT_THROW(suboptimal_k_given_m(p, 0.0, 4.0), DomainError);
  EXPECT_THROW(suboptimal_m_given_k(p, -1.0, 4.0), DomainError);
}

TEST(PlanSuboptimal, CloseToOptimal) {
  for (const char* tier : {"macro", "micro", "pico"}) {
    const auto p = problem_for(tier);
    const auto opt = plan_optimal(p);
    const auto sub = plan_suboptimal(p);
    EXPECT_TRUE(sub.converged) << tier;
    EXPECT_LE(sub.iterations, 30) << tier;
    EXPECT_GE(sub.nec, opt.nec * (1 - 1e-12)) << tier;
    EXPECT_LE(sub.nec, opt.nec * 1.03) << tier;
    EXPECT_EQ(sub.method, PlanningMethod::suboptimal);
    EXPECT_LE(sub.k_star, sub.m_star);
    EXPECT_LE(std::fabs(sub.m_star - sub.m_relaxed), 1.0);
    EXPECT_LE(std::fabs(sub.k_star - sub.k_relaxed), 1.0);
  }
}

TEST(PlanSuboptimal, StartingPointDoesNotMatter) {
  const auto p = problem_for("macro");
  const auto base = plan_suboptimal(p, 1.0);
  for (double k0 : {4.0, 16.0}) {
    const auto sol = plan_suboptimal(p, k0);
    EXPECT_EQ(sol.m_star, base.m_star);
    EXPECT_EQ(sol.k_star, base.k_star);
    EXPECT_NEAR(sol.m_relaxed, base.m_relaxed, 1e-4);
    EXPECT_NEAR(sol.k_relaxed, base.k_relaxed, 1e-4);
  }
  EXPECT_THROW(plan_suboptimal(p, 0.5), DomainError);
}

TEST(PlanBaseline, SingleAntennaDensity) {
  const auto p = problem_for("macro", 5.0);
  const auto sa = plan_baseline(p, BaselineKind::single_antenna);
  EXPECT_EQ(sa.m_star, 1);
  EXPECT_EQ(sa.k_star, 1);
  EXPECT_NEAR(sa.lambda_b_star * mean_rate_exact(1, 1, 4.0).mean_rate, 5.0, 1e-9);
  EXPECT_EQ(sa.method, PlanningMethod::single_antenna_baseline);
}

TEST(PlanBaseline, SuMimoUsesOneUser) {
  const auto p = problem_for("macro");
  const auto su = plan_baseline(p, BaselineKind::su_mimo);
  EXPECT_EQ(su.k_star, 1);
  EXPECT_EQ(su.m_star, optimal_m_given_k(p.profile, 1, 4.0));
  EXPECT_EQ(su.method, PlanningMethod::su_mimo_baseline);
}

TEST(PlanBaseline, SavingsOrdering) {
  // Optimal beats single-user MIMO, which beats a single antenna.
  for (const char* tier : {"macro", "micro", "pico"}) {
    const auto p = problem_for(tier);
    const double opt = plan_optimal(p).nec;
    const double su = plan_baseline(p, BaselineKind::su_mimo).nec;
    const double sa = plan_baseline(p, BaselineKind::single_antenna).nec;
    EXPECT_LT(opt, su) << tier;
    EXPECT_LT(su, sa) << tier;
  }
  const auto further = [](const char* tier) {
    const auto p = problem_for(tier);
    const double opt = plan_optimal(p).nec;
    const double su = plan_baseline(p, BaselineKind::su_mimo).nec;
    const double sa = plan_baseline(p, BaselineKind::single_antenna).nec;
    return (su - opt) / sa;
  };
  EXPECT_NEAR(further("macro"), 0.303, 0.005);
  EXPECT_NEAR(further("micro"), 0.258, 0.005);
  EXPECT_NEAR(further("pico"), 0.095, 0.005);
}
