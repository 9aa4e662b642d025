#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bwk/algos.hpp"
#include "bwk/bench.hpp"
#include "bwk/config.hpp"
#include "bwk/ground_truth.hpp"
#include "bwk/instance.hpp"
#include "bwk/json_io.hpp"
#include "bwk/lp.hpp"
#include "bwk/lp_approx.hpp"

namespace fs = std::filesystem;

namespace {

bwk::Json inspect_json(const bwk::Instance& inst, const bwk::GroundTruth& gt) {
  bwk::Json j;
  j["m"] = inst.m;
  j["d"] = inst.d;
  j["T"] = inst.T;
  j["B"] = inst.B[0];
  j["b"] = inst.b();
  j["opt_lp"] = gt.opt_lp;
  j["xi_star"] = gt.xi_star;
  j["eta_star"] = gt.eta_star;
  j["support_arms"] = gt.support.arms_in;
  j["binding_rows"] = gt.support.rows_binding;
  j["slack_rows"] = gt.support.rows_slack;
  j["delta"] = gt.delta;
  j["sigma"] = gt.sigma;
  j["chi"] = gt.chi;
  j["nondegenerate"] = gt.nondegenerate;
  return j;
}

std::string vec_text(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v[i]);
    s += buf;
  }
  return s + "]";
}

std::string idx_text(const std::vector<std::size_t>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(v[i]);
  }
  return s + "]";
}

int cmd_inspect(const std::string& config_path, std::uint64_t t_override) {
  bwk::CliConfig cfg = bwk::load_cli_config(config_path);
  bwk::Instance inst = t_override > 0 ? bwk::with_horizon(cfg.instance, t_override) : cfg.instance;
  bwk::GroundTruth gt = bwk::compute_ground_truth(inst);
  std::cout << "instance: m=" << inst.m << " d=" << inst.d << " T=" << inst.T << " B=" << inst.B[0]
            << " b=" << inst.b() << "\n";
  std::cout << "planning optimum: " << gt.opt_lp << "\n";
  std::cout << "xi_star: " << vec_text(gt.xi_star) << "\n";
  std::cout << "eta_star: " << vec_text(gt.eta_star) << "\n";
  std::cout << "support arms: " << idx_text(gt.support.arms_in) << "\n";
  std::cout << "binding rows: " << idx_text(gt.support.rows_binding) << "\n";
  std::cout << "slack rows: " << idx_text(gt.support.rows_slack) << "\n";
  std::cout << "delta=" << gt.delta << " sigma=" << gt.sigma << " chi=" << gt.chi
            << " nondegenerate=" << (gt.nondegenerate ? "true" : "false") << "\n";
  bwk::Json j = inspect_json(inst, gt);
  if (gt.nondegenerate) {
    bwk::SidConstants sc = bwk::sid_constants(gt, inst);
    double bound = bwk::lp_accuracy_bound(gt, inst);
    std::cout << "theta=" << sc.theta << " eps_phase2=" << sc.eps_phase2
              << " eps_lp_bound=" << bound << "\n";
    j["theta"] = sc.theta;
    j["eps_phase2"] = sc.eps_phase2;
    j["eps_lp_bound"] = bound;
  } else {
    std::cout << "identification constants unavailable: the planning optimum is degenerate\n";
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

struct SimulateArgs {
  std::string config_path;
  std::string algo;
  std::uint64_t t_override = 0;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string mode;
  std::string backend;
  double c1 = 1.0;
  double c2 = 1.0;
  std::string eps_lp = "auto";
  double mw_eps = -1.0;
  bool mode_set = false, backend_set = false, c1_set = false, c2_set = false, eps_set = false,
       mw_set = false;
};

int cmd_simulate(const SimulateArgs& args) {
  bwk::CliConfig cfg = bwk::load_cli_config(args.config_path);
  bwk::Instance inst =
      args.t_override > 0 ? bwk::with_horizon(cfg.instance, args.t_override) : cfg.instance;

  bwk::AlgoSpec spec;
  bool found = false;
  for (const auto& s : cfg.algos) {
    if (bwk::sweep_label(s) == args.algo || bwk::to_string(s.algo) == args.algo) {
      spec = s;
      found = true;
      break;
    }
  }
  if (!found) spec.algo = bwk::algo_from_string(args.algo);

  if (args.backend_set) spec.cfg.backend = bwk::backend_from_string(args.backend);
  if (args.mode_set) {
    if (args.mode == "exact") {
      spec.cfg.approx_lp = false;
    } else if (args.mode == "approx") {
      spec.cfg.approx_lp = true;
    } else {
      throw std::invalid_argument("mode must be exact or approx");
    }
  }
  if (args.c1_set) spec.cfg.c1 = args.c1;
  if (args.c2_set) spec.cfg.c2 = args.c2;
  if (args.eps_set) {
    if (args.eps_lp == "auto") {
      spec.cfg.eps_lp = 0.0;
    } else {
      spec.cfg.eps_lp = std::stod(args.eps_lp);
      if (!(spec.cfg.eps_lp > 0.0)) throw std::invalid_argument("eps_lp must be positive or auto");
    }
  }
  if (args.mw_set) spec.cfg.mw_eps_override = args.mw_eps;
  spec.cfg.seed = args.seed;

  bwk::RunTrace trace = bwk::run_algorithm(inst, spec.algo, spec.cfg);
  bwk::GroundTruth gt = bwk::compute_ground_truth(inst);
  bwk::Decomposition dec = bwk::regret_decomposition(trace, inst, gt);

  std::string out_dir = args.out_dir.empty() ? cfg.output_dir : args.out_dir;
  fs::create_directories(out_dir);
  std::string path = out_dir + "/trace-" + args.algo + "-" + std::to_string(args.seed) + ".json";
  bwk::write_file_atomic(path, bwk::trace_to_json(trace).dump(2) + "\n");

  std::cout << "algo: " << trace.algo << "\n";
  std::cout << "tau: " << trace.tau << " stop_reason: " << trace.stop_reason << "\n";
  std::cout << "pseudo_regret: " << dec.pseudo_regret
            << " realized_regret: " << gt.opt_lp - trace.realized_reward << "\n";
  std::cout << "suboptimal_term: " << dec.suboptimal_term
            << " leftover_term: " << dec.leftover_term << "\n";
  std::cout << "qmc_queries: " << trace.qmc_queries << " lp_solves: " << trace.lp_solves << "\n";
  if (trace.identification_done) {
    std::cout << "identified support: " << idx_text(trace.support_arms)
              << " slack rows: " << idx_text(trace.slack_rows) << "\n";
  }
  std::cout << "trace: " << path << "\n";
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_override, bool dry_run) {
  bwk::CliConfig cfg = bwk::load_cli_config(config_path);
  std::string out_dir = out_override.empty() ? cfg.output_dir : out_override;
  fs::create_directories(out_dir);

  bwk::SweepPlan plan;
  plan.base = cfg.instance;
  plan.algos = cfg.algos;
  plan.t_grid = cfg.t_grid;
  plan.replications = cfg.replications;
  plan.seed = cfg.seed;

  std::vector<std::string> labels;
  {
    std::vector<std::string> base_labels;
    for (const auto& s : plan.algos) base_labels.push_back(bwk::sweep_label(s));
    std::vector<int> counts(base_labels.size(), 0);
    for (std::size_t i = 0; i < base_labels.size(); ++i) {
      int c = 1;
      for (std::size_t k = 0; k < i; ++k) {
        if (base_labels[k] == base_labels[i]) ++c;
      }
      labels.push_back(c == 1 ? base_labels[i] : base_labels[i] + "#" + std::to_string(c));
    }
  }

  if (dry_run) {
    for (std::size_t ai = 0; ai < plan.algos.size(); ++ai) {
      for (std::uint64_t t : plan.t_grid) {
        std::cout << "cell algo=" << labels[ai] << " T=" << t
                  << " replications=" << plan.replications << "\n";
      }
    }
    std::cout << "dry-run: no files written\n";
    return 0;
  }

  std::vector<bwk::RegretRecord> rows = bwk::run_sweep(plan);
  std::string runs_path = out_dir + "/runs.csv";
  std::string summary_path = out_dir + "/summary.csv";
  bwk::write_runs_csv(runs_path, rows);
  bwk::write_summary_csv(summary_path, rows);
  std::cout << "runs: " << runs_path << "\n";
  std::cout << "summary: " << summary_path << "\n";

  for (const std::string& label : labels) {
    std::vector<double> ts, ys;
    for (std::uint64_t t : plan.t_grid) {
      double sum = 0.0;
      int n = 0;
      for (const auto& r : rows) {
        if (r.algo == label && r.T == t &&
            (r.status == "completed" || r.status == "phase1-budget-exhausted")) {
          sum += r.pseudo_regret;
          ++n;
        }
      }
      if (n > 0) {
        ts.push_back(static_cast<double>(t));
        ys.push_back(sum / n);
      }
    }
    try {
      double slope = bwk::fit_loglog_slope(ts, ys);
      std::cout << label << ": regret slope=" << slope << "\n";
    } catch (const std::exception&) {
      std::cout << label << ": regret slope=n/a\n";
    }
  }
  return 0;
}

int cmd_lp(const std::string& path, const std::string& mode, double eps) {
  if (mode == "approx" && !(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  bwk::Json j = bwk::load_json_file(path);
  bwk::LpProblem lp = bwk::parse_lp_json(j.dump());
  if (mode == "exact") {
    bwk::LpSolution sol = bwk::solve_exact(lp);
    std::cout << bwk::lp_solution_to_json(sol) << "\n";
    return 0;
  }
  if (mode != "approx") throw std::invalid_argument("mode must be exact or approx");
  double scale = bwk::scale_factor_for(lp);
  bwk::LpProblem scaled = bwk::scale_rhs(lp, scale);
  bwk::ApproxSolution sol = bwk::solve_approx(scaled, eps);
  bwk::Json out;
  out["status"] = bwk::to_string(sol.status);
  out["approx_failed"] = sol.approx_failed;
  out["value"] = sol.value * scale;
  std::vector<double> x = sol.x;
  for (double& v : x) v *= scale;
  out["x"] = x;
  out["max_violation"] = sol.max_violation * scale;
  out["eps"] = sol.eps;
  out["eps_game"] = sol.eps_game;
  out["dual_bound"] = sol.dual_bound;
  out["scale"] = scale;
  out["game_solves"] = sol.game_solves;
  out["mw_iters"] = sol.mw_iters;
  out["used_mw"] = sol.used_mw;
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"desk-scale simulation lab for bandits with knapsacks"};
  app.footer(
      "defaults: c1=1, c2=1, eps_lp=auto, mw_eps=sqrt(ln d / B), backend=idealized, "
      "lp mode=exact");
  app.require_subcommand(1);

  std::string inspect_config;
  std::uint64_t inspect_t = 0;
  CLI::App* inspect = app.add_subcommand("inspect", "print the exact planning profile of an instance");
  inspect->add_option("--config", inspect_config, "experiment config file")->required();
  inspect->add_option("--t", inspect_t, "override the horizon");

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand("simulate", "run one algorithm once and write its trace");
  simulate->add_option("--config", sim.config_path, "experiment config file")->required();
  simulate->add_option("--algo", sim.algo, "algorithm name or sweep label")->required();
  simulate->add_option("--t", sim.t_override, "override the horizon");
  simulate->add_option("--seed", sim.seed, "run seed")->capture_default_str();
  simulate->add_option("--out", sim.out_dir, "output directory (default: config output_dir)");
  CLI::Option* o_mode = simulate->add_option("--mode", sim.mode, "lp mode: exact or approx");
  CLI::Option* o_backend =
      simulate->add_option("--backend", sim.backend, "estimator backend (default: idealized)");
  CLI::Option* o_c1 = simulate->add_option("--c1", sim.c1, "scalar estimation constant (default: 1)");
  CLI::Option* o_c2 = simulate->add_option("--c2", sim.c2, "vector estimation constant (default: 1)");
  CLI::Option* o_eps =
      simulate->add_option("--eps-lp", sim.eps_lp, "planning accuracy (default: auto)");
  CLI::Option* o_mw =
      simulate->add_option("--mw-eps", sim.mw_eps, "price update step (default: sqrt(ln d / B))");

  std::string sweep_config, sweep_out;
  bool dry_run = false;
  CLI::App* sweep = app.add_subcommand("sweep", "run the full experiment grid and write CSVs");
  sweep->add_option("--config", sweep_config, "experiment config file")->required();
  sweep->add_option("--out", sweep_out, "output directory (default: config output_dir)");
  sweep->add_flag("--dry-run", dry_run, "print the planned cells and write nothing");

  std::string lp_path, lp_mode = "exact";
  double lp_eps = 0.01;
  CLI::App* lp = app.add_subcommand("lp", "solve one packing problem from a JSON file");
  CLI::Option* lp_cfg = lp->add_option("--config", lp_path, "problem file");
  lp->add_option("--file", lp_path, "problem file (alias for --config)")->excludes(lp_cfg);
  lp->add_option("--mode", lp_mode, "exact or approx")->capture_default_str();
  lp->add_option("--eps", lp_eps, "accuracy for approx mode")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (inspect->parsed()) return cmd_inspect(inspect_config, inspect_t);
    if (simulate->parsed()) {
      sim.mode_set = o_mode->count() > 0;
      sim.backend_set = o_backend->count() > 0;
      sim.c1_set = o_c1->count() > 0;
      sim.c2_set = o_c2->count() > 0;
      sim.eps_set = o_eps->count() > 0;
      sim.mw_set = o_mw->count() > 0;
      return cmd_simulate(sim);
    }
    if (sweep->parsed()) return cmd_sweep(sweep_config, sweep_out, dry_run);
    if (lp->parsed()) {
      if (lp_path.empty()) throw std::invalid_argument("lp needs --config or --file");
      return cmd_lp(lp_path, lp_mode, lp_eps);
    }
    std::cerr << "error: no subcommand\n";
    return 1;
  } catch (const bwk::SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
