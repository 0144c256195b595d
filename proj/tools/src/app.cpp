#include <cmath>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "asekit/ase_optimizer.hpp"
#include "asekit/energy_planner.hpp"
#include "asekit/errors.hpp"
#include "asekit/mc_sim.hpp"
#include "asekit/rate_model.hpp"
#include "asekit_cli/app.hpp"
#include "output.hpp"

namespace asekit::cli {
namespace {

struct Options {
  double alpha = 4.0;
  std::string format = "text";

  double antennas = 0.0;
  double users = 0.0;
  double lambda_b = 1.0;

  std::string profile = "macro";
  double target = 1.0;
  int k_max = 64;
  int m_max = 512;
  unsigned threads = 0;
  double initial_k = 1.0;
  std::string baseline = "su-mimo";

  sim::SimulationConfig sim;
  std::string mode = "full-zf";
  std::string samples_csv;

  std::string quantity;
  std::string axis;
  std::string range;
  std::string fixed;
  std::string output;
  std::string sweep_format = "csv";
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--alpha", o.alpha, "path-loss exponent (> 2)")->capture_default_str();
  cmd->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
}

void add_planning(CLI::App* cmd, Options& o) {
  add_common(cmd, o);
  cmd->add_option("--profile", o.profile, "built-in tier or key=value profile file")
      ->capture_default_str();
  cmd->add_option("--target", o.target, "ASE target, nats/s/Hz/km^2")->capture_default_str();
  cmd->add_option("--k-max", o.k_max, "largest K searched")->capture_default_str();
  cmd->add_option("--m-max", o.m_max, "largest M allowed")->capture_default_str();
  cmd->add_option("--threads", o.threads, "worker threads, 0 = all cores");
}

void add_simulation(CLI::App* cmd, Options& o) {
  add_common(cmd, o);
  auto& s = o.sim;
  cmd->add_option("-M,--antennas", s.antennas, "antennas per BS")->required();
  cmd->add_option("-K,--users", s.users, "scheduled users per BS")->required();
  cmd->add_option("--lambda-b", s.lambda_b, "BS density, BS/km^2")->capture_default_str();
  cmd->add_option("--window", s.window_radius, "window radius in km, 0 = ~1000 BSs");
  cmd->add_option("--trials", s.trials, "Monte Carlo trials")->capture_default_str();
  cmd->add_option("--seed", s.seed, "64-bit seed")->capture_default_str();
  cmd->add_option("--mode", o.mode, "gain model")
      ->check(CLI::IsMember({"full-zf", "gamma"}))
      ->capture_default_str();
  cmd->add_option("--power", s.transmit_power, "transmit power, W")->capture_default_str();
  cmd->add_option("--threads", s.threads, "worker threads, 0 = all cores");
  cmd->add_flag("--literal-channels", s.literal_channels,
                "draw every interferer's M x K channel block explicitly");
}

PlanningProblem planning_problem(const Options& o) {
  PlanningProblem p;
  p.profile = load_profile(o.profile);
  p.alpha = o.alpha;
  p.t_target = o.target;
  p.k_search_max = o.k_max;
  p.m_search_max = o.m_max;
  p.threads = o.threads;
  return p;
}

void add_solution(Record& r, const PlanningSolution& s) {
  r.add("method", std::string(to_string(s.method)))
      .add("m_star", static_cast<long long>(s.m_star))
      .add("k_star", static_cast<long long>(s.k_star))
      .add("lambda_b_star", s.lambda_b_star, "BS/km^2")
      .add("nec", s.nec, "W/km^2")
      .add("energy_efficiency", s.energy_efficiency, "nats/s/Hz/W");
}

int require_integer(double v, const char* name) {
  const double r = std::round(v);
  if (std::fabs(v - r) > 1e-9) {
    throw DomainError(std::string(name) + " must be an integer, got " + format_double(v));
  }
  return static_cast<int>(r);
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"ASE and energy planning for multi-antenna PPP cellular networks", "asekit"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto* rate = app.add_subcommand("rate", "mean rate per user, exact and lower bound");
  add_common(rate, o);
  rate->add_option("-M,--antennas", o.antennas, "antennas per BS")->required();
  rate->add_option("-K,--users", o.users, "scheduled users per BS")->required();

  auto* ase = app.add_subcommand("ase", "area spectral efficiency, exact and lower bound");
  add_common(ase, o);
  ase->add_option("-M,--antennas", o.antennas, "antennas per BS")->required();
  ase->add_option("-K,--users", o.users, "scheduled users per BS")->required();
  ase->add_option("--lambda-b", o.lambda_b, "BS density, BS/km^2")->capture_default_str();

  auto* optk = app.add_subcommand("optimal-k", "ASE-optimal number of scheduled users");
  add_common(optk, o);
  optk->add_option("-M,--antennas", o.antennas, "antennas per BS")->required();

  auto* gapa = app.add_subcommand("gapa", "optimal loading fraction and gain per antenna");
  add_common(gapa, o);

  auto* plan = app.add_subcommand("plan", "energy-optimal (lambda_b, M, K), exhaustive in K");
  add_planning(plan, o);

  auto* plan_sub = app.add_subcommand("plan-sub", "alternating lower-bound planner");
  add_planning(plan_sub, o);
  plan_sub->add_option("--initial-k", o.initial_k, "starting K")->capture_default_str();

  auto* baseline = app.add_subcommand("baseline", "SU-MIMO or single-antenna deployment");
  add_planning(baseline, o);
  baseline->add_option("--kind", o.baseline, "baseline")
      ->check(CLI::IsMember({"su-mimo", "single-antenna"}))
      ->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo mean rate of the typical user");
  add_simulation(simulate, o);
  simulate->add_option("--samples-csv", o.samples_csv, "write per-trial samples here");

  auto* vapprox = app.add_subcommand("validate-approx",
                                     "compare ZF interference with the Gamma(K, 1) model");
  add_simulation(vapprox, o);

  auto* sweep = app.add_subcommand("sweep", "tabulate a quantity along one parameter");
  sweep->add_option("--quantity", o.quantity, "rate_exact|rate_lb|ase_exact|ase_lb|nec|ee")
      ->required();
  sweep->add_option("--axis", o.axis, "M|K|u|lambda_b|t_target")->required();
  sweep->add_option("--range", o.range, "start:stop:step, stop included")->required();
  sweep->add_option("--fixed", o.fixed, "name=value,... for the other parameters");
  sweep->add_option("--profile", o.profile, "power profile for nec and ee")
      ->capture_default_str();
  sweep->add_option("--output", o.output, "output file; relative paths use $ASEKIT_OUTPUT_DIR");
  sweep->add_option("--format", o.sweep_format, "table format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sweep->add_option("--threads", o.threads, "worker threads, 0 = all cores");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }

  const bool json = o.format == "json";
  try {
    Record r;
    int status = kExitOk;
    if (rate->parsed()) {
      const int k = require_integer(o.users, "K");
      NetworkConfig{1.0, o.antennas, o.users, o.alpha}.validate();
      const RateResult ex = mean_rate_exact(o.antennas, k, o.alpha);
      const RateResult lb = mean_rate_lower_bound(o.antennas, o.users, o.alpha);
      r.add("antennas", o.antennas).add("users", o.users).add("alpha", o.alpha);
      r.add("mean_rate_exact", ex.mean_rate, "nats/s/Hz")
          .add("mean_rate_lb", lb.mean_rate, "nats/s/Hz")
          .add("quadrature_error", ex.quadrature_error_estimate, "nats/s/Hz");
    } else if (ase->parsed()) {
      require_integer(o.users, "K");
      const NetworkConfig cfg{o.lambda_b, o.antennas, o.users, o.alpha};
      r.add("lambda_b", o.lambda_b, "BS/km^2").add("antennas", o.antennas).add("users", o.users);
      r.add("ase_exact", ase_exact(cfg), "nats/s/Hz/km^2")
          .add("ase_lb", ase_lower_bound(cfg), "nats/s/Hz/km^2");
    } else if (optk->parsed()) {
      const int m = require_integer(o.antennas, "M");
      const LoadingSolution ls = optimal_user_fraction(o.alpha);
      r.add("antennas", static_cast<long long>(m))
          .add("k_exact", static_cast<long long>(optimal_k_exact(m, o.alpha)))
          .add("k_lower_bound", static_cast<long long>(optimal_k_lower_bound(m, o.alpha)))
          .add("u_star", ls.u_star);
    } else if (gapa->parsed()) {
      const LoadingSolution ls = optimal_user_fraction(o.alpha);
      r.add("alpha", o.alpha).add("u_star", ls.u_star).add("gapa", ls.gapa, "nats/s/Hz");
    } else if (plan->parsed()) {
      add_solution(r, plan_optimal(planning_problem(o)));
    } else if (plan_sub->parsed()) {
      const PlanningSolution s = plan_suboptimal(planning_problem(o), o.initial_k);
      add_solution(r, s);
      r.add("iterations", static_cast<long long>(s.iterations))
          .add("converged", s.converged)
          .add("m_relaxed", s.m_relaxed)
          .add("k_relaxed", s.k_relaxed);
      if (!s.converged) {
        err << "error: alternation stopped at the round limit without converging\n";
        status = kExitNonConvergence;
      }
    } else if (baseline->parsed()) {
      const auto kind =
          o.baseline == "su-mimo" ? BaselineKind::su_mimo : BaselineKind::single_antenna;
      add_solution(r, plan_baseline(planning_problem(o), kind));
    } else if (simulate->parsed() || vapprox->parsed()) {
      sim::SimulationConfig cfg = o.sim;
      cfg.alpha = o.alpha;
      cfg.mode = o.mode == "gamma" ? sim::GainModel::gamma_approx : sim::GainModel::full_zf;
      if (simulate->parsed()) {
        cfg.keep_samples = !o.samples_csv.empty();
        const sim::SimulationResult res = sim::simulate_typical_user(cfg);
        for (const auto& w : res.warnings) err << "warning: " << w << '\n';
        r.add("mean_rate", res.mean_rate, "nats/s/Hz")
            .add("std_error", res.std_error, "nats/s/Hz")
            .add("trials", static_cast<long long>(res.trials_used))
            .add("window_radius", cfg.effective_window_radius(), "km")
            .add("expected_bs", cfg.expected_bs_count());
        const char* names[] = {"sir_q05", "sir_q25", "sir_q50", "sir_q75", "sir_q95"};
        for (std::size_t i = 0; i < 5; ++i) r.add(names[i], res.sir_quantiles[i]);
        r.add("g00_mean", res.g00_moments.mean)
            .add("g00_variance", res.g00_moments.variance)
            .add("gi0_mean", res.gi0_moments.mean)
            .add("gi0_variance", res.gi0_moments.variance)
            .add("resampled_trials", static_cast<long long>(res.resampled_trials));
        if (!o.samples_csv.empty()) {
          const std::string path = resolve_output_path(o.samples_csv);
          std::ofstream f(path);
          if (!f) throw DomainError("cannot open '" + path + "' for writing");
          sim::write_samples_csv(f, res.samples);
        }
      } else {
        const sim::GammaApproxReport rep = sim::validate_gamma_approx(cfg);
        r.add("users", static_cast<long long>(rep.users))
            .add("gi0_mean", rep.gi0_mean)
            .add("gi0_mean_std_error", rep.gi0_mean_std_error)
            .add("gi0_variance", rep.gi0_variance)
            .add("mean_rel_deviation", rep.mean_rel_deviation)
            .add("variance_rel_deviation", rep.variance_rel_deviation)
            .add("ks_statistic", rep.ks_statistic)
            .add("ks_p_value", rep.ks_p_value)
            .add("rate_full_zf", rep.rate_full_zf, "nats/s/Hz")
            .add("rate_full_zf_se", rep.rate_full_zf_se, "nats/s/Hz")
            .add("rate_gamma", rep.rate_gamma, "nats/s/Hz")
            .add("rate_gamma_se", rep.rate_gamma_se, "nats/s/Hz")
            .add("rate_rel_gap", rep.rate_rel_gap);
      }
    } else if (sweep->parsed()) {
      SweepRequest req;
      req.quantity = parse_quantity(o.quantity);
      req.axis = parse_axis(o.axis);
      req.range = parse_range(o.range);
      req.fixed = parse_fixed(o.fixed);
      req.profile = o.profile;
      req.format = o.sweep_format == "json" ? SweepFormat::json : SweepFormat::csv;
      req.threads = o.threads;
      req.output_path = resolve_output_path(o.output);
      const auto rows = evaluate_sweep(req);
      if (req.output_path.empty()) {
        write_sweep(out, req, rows);
      } else {
        std::ostringstream buf;
        write_sweep(buf, req, rows);
        std::ofstream f(req.output_path, std::ios::binary | std::ios::trunc);
        if (!f) throw DomainError("cannot open '" + req.output_path + "' for writing");
        f << buf.str();
        if (!f) throw DomainError("failed writing '" + req.output_path + "'");
      }
      return kExitOk;
    }
    r.write(out, json);
    return status;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << " (achieved error " << format_double(e.achieved_error())
        << ")\n";
    return kExitNonConvergence;
  } catch (const BracketError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
}

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_command(args, out, err);
}

}  // namespace asekit::cli
