// Command-line driver: annealing runs, ensembles, ground-truth oracles,
// Gibbs grids, adjoint diagnostics and schedule validation.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pmeans/diagnostics.hpp"
#include "pmeans/gibbs.hpp"
#include "pmeans/io.hpp"
#include "pmeans/oracle.hpp"
#include "pmeans/potential.hpp"
#include "pmeans/schedule.hpp"
#include "pmeans/simulate.hpp"

namespace {

using namespace pmeans;
namespace fs = std::filesystem;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::int64_t seed_override = -1;
  int threads_override = 0;
};

RunConfig load(const CommonArgs& a) {
  RunConfig cfg = load_config(a.config_path);
  if (a.seed_override >= 0)
    cfg.sim.master_seed = static_cast<std::uint64_t>(a.seed_override);
  if (a.threads_override > 0) cfg.threads = a.threads_override;
  fs::create_directories(a.out_dir);
  return cfg;
}

double depth_estimate(const RunConfig& cfg, int n = 1024) {
  const PotentialGrid g = build_potential_grid(cfg.sim.p, cfg.measure, n);
  if (g.degenerate) return 0.0;
  return critical_depth(g).b;
}

void print_schedule_warnings(const RunConfig& cfg) {
  const double b_est = depth_estimate(cfg);
  const ScheduleReport rep =
      validate(cfg.schedule, cfg.sim.p, b_est, cfg.measure.holder_a());
  for (const auto& w : rep.warnings) std::cout << "warning: " << w << "\n";
}

void write_summary(const CommonArgs& a, const nlohmann::json& body, double wall_s) {
  nlohmann::json j = body;
  j["meta"] = {{"wall_time_s", wall_s}};
  write_file(a.out_dir + "/summary.json", j.dump(2) + "\n");
}

int cmd_simulate(const CommonArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  RunConfig cfg = load(a);
  print_schedule_warnings(cfg);
  const std::uint64_t traj_seed = Rng::split_seed(cfg.sim.master_seed, 0);
  const TrajectoryRecord rec = run_trajectory(cfg.measure, cfg.schedule, cfg.sim, traj_seed);
  write_file(a.out_dir + "/trajectory.jsonl", trajectory_jsonl(cfg.sim, rec));
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_summary(a,
                {{"final_position", rec.final_position.theta},
                 {"jump_count", rec.jump_count},
                 {"seed", cfg.sim.master_seed}},
                wall);
  std::cout << "final_position " << fmt_double(rec.final_position.theta)
            << "\njump_count " << rec.jump_count << "\n";
  return 0;
}

int cmd_ensemble(const CommonArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  RunConfig cfg = load(a);
  print_schedule_warnings(cfg);
  const EnsembleSummary e = run_ensemble(cfg.measure, cfg.schedule, cfg.sim,
                                         cfg.n_traj, cfg.bins, cfg.delta, cfg.threads);
  write_file(a.out_dir + "/ensemble.jsonl", ensemble_jsonl(e));
  std::ostringstream csv;
  csv << "t,bin_center,mass\n";
  for (const auto& c : e.checkpoints)
    for (int b = 0; b < e.bins; ++b)
      csv << fmt_double(c.t) << ","
          << fmt_double(-pi + two_pi * (b + 0.5) / e.bins) << ","
          << fmt_double(c.hist[b]) << "\n";
  write_file(a.out_dir + "/histograms.csv", csv.str());
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_summary(a,
                {{"n_traj", e.n_traj},
                 {"total_jumps", e.total_jumps},
                 {"seed", cfg.sim.master_seed},
                 {"final_nbhd_mass",
                  e.checkpoints.empty() ? 0.0 : e.checkpoints.back().nbhd_mass}},
                wall);
  if (!e.checkpoints.empty())
    std::cout << "final_nbhd_mass " << fmt_double(e.checkpoints.back().nbhd_mass)
              << "\n";
  return 0;
}

int cmd_oracle(const CommonArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  RunConfig cfg = load(a);
  OracleResult res;
  std::string method = "grid";
  if (cfg.measure.is_empirical() && cfg.sim.p == 2.0) {
    const auto& e = cfg.measure.empirical_data();
    std::vector<CirclePoint> atoms;
    for (double x : e.atoms) atoms.push_back(CirclePoint(x));
    res = exact_mean_p2_empirical(atoms, e.weights);
    method = "exact_cut_enumeration";
  } else {
    res = grid_minimize(cfg.sim.p, cfg.measure, 8192, 1e-10);
  }
  nlohmann::json j;
  j["method"] = method;
  j["degenerate"] = res.degenerate;
  j["minimizers"] = nlohmann::json::array();
  for (const auto& mi : res.minima)
    j["minimizers"].push_back({{"x", mi.location.theta}, {"value", mi.value}});
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_summary(a, j, wall);
  for (const auto& mi : res.minima)
    std::cout << fmt_double(mi.location.theta) << " " << fmt_double(mi.value) << "\n";
  if (res.degenerate) std::cout << "degenerate: constant potential\n";
  return 0;
}

int cmd_gibbs(const CommonArgs& a, const std::vector<double>& betas) {
  RunConfig cfg = load(a);
  const PotentialGrid g = build_potential_grid(cfg.sim.p, cfg.measure, 1024);
  std::ostringstream csv;
  csv << "beta,theta,density\n";
  for (double beta : betas) {
    const GibbsGrid gg = gibbs_build(g, beta);
    for (int i = 0; i < gg.n; ++i)
      csv << fmt_double(beta) << "," << fmt_double(gg.theta(i)) << ","
          << fmt_double(gg.density[i]) << "\n";
  }
  write_file(a.out_dir + "/gibbs.csv", csv.str());
  std::cout << "wrote " << betas.size() << " Gibbs grids\n";
  return 0;
}

int cmd_diagnose(const CommonArgs& a) {
  RunConfig cfg = load(a);
  std::vector<double> alphas = cfg.alpha_list;
  std::vector<double> betas = cfg.beta_list;
  if (alphas.empty()) alphas = {1e-4, 3e-4, 1e-3, 3e-3};
  if (betas.empty()) betas = {1.0, 2.0};
  const ScalingStudy study =
      lstar_scaling_study(cfg.measure, alphas, betas, cfg.grid_n);
  std::ostringstream csv;
  csv << "alpha,beta,sup_abs_lstar\n";
  for (const auto& r : study.rows)
    csv << fmt_double(r.alpha) << "," << fmt_double(r.beta) << ","
        << fmt_double(r.sup_abs) << "\n";
  write_file(a.out_dir + "/adjoint_scaling.csv", csv.str());
  for (std::size_t i = 0; i < study.slopes.size(); ++i)
    std::cout << "beta " << fmt_double(betas[i]) << " slope "
              << fmt_double(study.slopes[i]) << "\n";
  std::cout << (study.slope_ok ? "slope check: pass" : "slope check: fail") << "\n";
  return 0;
}

int cmd_validate_schedule(const CommonArgs& a) {
  RunConfig cfg = load(a);
  const double b_est = depth_estimate(cfg, 4096);
  const ScheduleReport rep =
      validate(cfg.schedule, cfg.sim.p, b_est, cfg.measure.holder_a());
  std::cout << "estimated_depth " << fmt_double(b_est) << "\n"
            << "recommended_b " << fmt_double(rep.recommended_b) << "\n"
            << "b_exceeds_depth " << (rep.b_exceeds_depth ? "yes" : "no") << "\n"
            << "kernel_constraint " << (rep.z_constraint_ok ? "ok" : "violated") << "\n"
            << "divergence_integral " << (rep.divergence ? "infinite" : "finite") << "\n";
  if (rep.dominance_found)
    std::cout << "dominance_t_star " << fmt_double(rep.t_star) << "\n";
  for (const auto& w : rep.warnings) std::cout << "warning: " << w << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"intrinsic p-means of circle measures by annealing jump diffusions"};
  app.require_subcommand(1);

  CommonArgs args;
  std::vector<double> gibbs_betas{0.0, 1.0, 4.0, 16.0};
  std::string cmd_name;

  for (const char* name : {"simulate", "ensemble", "oracle", "gibbs", "diagnose",
                           "validate-schedule"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", args.config_path, "JSON config file")->required();
    sub->add_option("--seed", args.seed_override, "override master seed");
    sub->add_option("--threads", args.threads_override, "trajectory worker threads");
    sub->add_option("--out", args.out_dir, "output directory");
    if (std::string(name) == "gibbs")
      sub->add_option("--beta", gibbs_betas, "inverse temperatures");
    sub->callback([name, &cmd_name] { cmd_name = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_name == "simulate") return cmd_simulate(args);
    if (cmd_name == "ensemble") return cmd_ensemble(args);
    if (cmd_name == "oracle") return cmd_oracle(args);
    if (cmd_name == "gibbs") return cmd_gibbs(args, gibbs_betas);
    if (cmd_name == "diagnose") return cmd_diagnose(args);
    if (cmd_name == "validate-schedule") return cmd_validate_schedule(args);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
