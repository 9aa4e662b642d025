#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>

#include "bwk/algos.hpp"
#include "bwk/bench.hpp"
#include "bwk/estimators.hpp"
#include "bwk/ground_truth.hpp"
#include "bwk/instance.hpp"
#include "bwk/lp.hpp"
#include "bwk/lp_approx.hpp"
#include "bwk/rng.hpp"

namespace py = pybind11;

namespace {

bwk::LpProblem make_lp(const std::vector<double>& objective,
                       const std::vector<std::vector<double>>& A,
                       const std::vector<double>& rhs, const std::vector<std::size_t>& pins,
                       const std::vector<std::vector<double>>& geq_A,
                       const std::vector<double>& geq_rhs) {
  bwk::LpProblem lp;
  lp.objective = objective;
  lp.A = A;
  lp.rhs = rhs;
  lp.pins = pins;
  lp.geq_A = geq_A;
  lp.geq_rhs = geq_rhs;
  lp.validate();
  return lp;
}

py::dict ground_truth_dict(const bwk::GroundTruth& gt) {
  py::dict d;
  d["opt_lp"] = gt.opt_lp;
  d["xi_star"] = gt.xi_star;
  d["eta_star"] = gt.eta_star;
  d["arms_in"] = gt.support.arms_in;
  d["arms_out"] = gt.support.arms_out;
  d["rows_binding"] = gt.support.rows_binding;
  d["rows_slack"] = gt.support.rows_slack;
  d["opt_drop_arm"] = gt.opt_drop_arm;
  d["opt_tighten_row"] = gt.opt_tighten_row;
  d["delta"] = gt.delta;
  d["sigma"] = gt.sigma;
  d["chi"] = gt.chi;
  d["nondegenerate"] = gt.nondegenerate;
  d["unique_optimum"] = gt.unique_optimum;
  return d;
}

py::dict trace_dict(const bwk::RunTrace& trace) {
  py::dict d;
  d["algo"] = trace.algo;
  d["T"] = trace.T;
  d["seed"] = trace.seed;
  d["tau"] = trace.tau;
  d["phase1_rounds"] = trace.phase1_rounds;
  d["stop_reason"] = trace.stop_reason;
  d["pseudo_reward"] = trace.pseudo_reward;
  d["realized_reward"] = trace.realized_reward;
  d["budget_remaining"] = trace.budget_remaining;
  d["pulls"] = trace.pulls;
  d["qmc_calls"] = trace.qmc_calls;
  d["qmc_queries"] = trace.qmc_queries;
  d["lp_solves"] = trace.lp_solves;
  d["modeled_quantum_cost"] = trace.modeled_quantum_cost;
  d["modeled_classical_cost"] = trace.modeled_classical_cost;
  d["support_arms"] = trace.support_arms;
  d["slack_rows"] = trace.slack_rows;
  d["identification_done"] = trace.identification_done;
  d["identification_round"] = trace.identification_round;
  d["trace_json"] = bwk::trace_to_json(trace).dump(2);
  return d;
}

bwk::QmcBackend qmc_backend_from(const std::string& s) {
  if (s == "idealized") return bwk::QmcBackend::kIdealized;
  if (s == "ae-phase") return bwk::QmcBackend::kAePhase;
  throw std::invalid_argument("unknown qmc backend '" + s + "', expected idealized or ae-phase");
}

}  // namespace

PYBIND11_MODULE(_bwk, m) {
  m.doc() = "simulation core for bandits with knapsacks: planning oracles, "
            "mean-estimation backends, and the two bandit algorithms";

  py::class_<bwk::Instance>(m, "Instance")
      .def_readonly("m", &bwk::Instance::m)
      .def_readonly("d", &bwk::Instance::d)
      .def_readonly("T", &bwk::Instance::T)
      .def_readonly("B", &bwk::Instance::B)
      .def("b", &bwk::Instance::b)
      .def("reward_means", &bwk::Instance::reward_means)
      .def("cost_means", &bwk::Instance::cost_means)
      .def("__repr__", [](const bwk::Instance& inst) {
        return "<Instance m=" + std::to_string(inst.m) + " d=" + std::to_string(inst.d) +
               " T=" + std::to_string(inst.T) + ">";
      });

  m.def("load_instance", &bwk::load_instance_file, py::arg("path"),
        "read an instance description from a JSON file");
  m.def("instance_from_json", &bwk::load_instance_json, py::arg("text"));
  m.def("instance_to_json", &bwk::instance_to_json, py::arg("instance"));
  m.def("with_horizon", &bwk::with_horizon, py::arg("instance"), py::arg("T"),
        "rescale an instance to a new horizon at the same budget rate");
  m.def(
      "generate_planted",
      [](std::size_t m_arms, std::size_t d_user, std::uint64_t T, double budget_rate,
         double margin, std::uint64_t seed, int max_attempts) {
        bwk::PlantedSpec spec;
        spec.m = m_arms;
        spec.d_user = d_user;
        spec.T = T;
        spec.budget_rate = budget_rate;
        spec.margin = margin;
        spec.seed = seed;
        spec.max_attempts = max_attempts;
        py::gil_scoped_release release;
        return bwk::generate_planted(spec);
      },
      py::arg("m") = 3, py::arg("d_user") = 2, py::arg("T") = 1000,
      py::arg("budget_rate") = 0.5, py::arg("margin") = 0.05, py::arg("seed") = 0,
      py::arg("max_attempts") = 50,
      "sample a nondegenerate instance with the requested structural margin");

  m.def(
      "ground_truth",
      [](const bwk::Instance& inst) { return ground_truth_dict(bwk::compute_ground_truth(inst)); },
      py::arg("instance"), "exact planning solution and structural margins");
  m.def(
      "identification_constants",
      [](const bwk::Instance& inst) {
        bwk::GroundTruth gt = bwk::compute_ground_truth(inst);
        bwk::SidConstants sc = bwk::sid_constants(gt, inst);
        py::dict d;
        d["theta"] = sc.theta;
        d["eps_phase2"] = sc.eps_phase2;
        d["delta_qmc"] = sc.delta_qmc;
        d["eps_lp_bound"] = bwk::lp_accuracy_bound(gt, inst);
        return d;
      },
      py::arg("instance"));
  m.def(
      "lp_accuracy_bound",
      [](const bwk::Instance& inst) {
        bwk::GroundTruth gt = bwk::compute_ground_truth(inst);
        return bwk::lp_accuracy_bound(gt, inst);
      },
      py::arg("instance"));

  m.def(
      "solve_lp_exact",
      [](const std::vector<double>& objective, const std::vector<std::vector<double>>& A,
         const std::vector<double>& rhs, const std::vector<std::size_t>& pins,
         const std::vector<std::vector<double>>& geq_A, const std::vector<double>& geq_rhs) {
        bwk::LpSolution s = bwk::solve_exact(make_lp(objective, A, rhs, pins, geq_A, geq_rhs));
        py::dict d;
        d["status"] = bwk::to_string(s.status);
        d["value"] = s.value;
        d["x"] = s.x;
        d["dual"] = s.dual;
        d["feas_violation"] = s.feas_violation;
        return d;
      },
      py::arg("objective"), py::arg("A"), py::arg("rhs"),
      py::arg("pins") = std::vector<std::size_t>{},
      py::arg("geq_A") = std::vector<std::vector<double>>{},
      py::arg("geq_rhs") = std::vector<double>{},
      "maximize objective.x subject to A x <= rhs, geq_A x >= geq_rhs, x >= 0");

  m.def(
      "solve_lp_approx",
      [](const std::vector<double>& objective, const std::vector<std::vector<double>>& A,
         const std::vector<double>& rhs, double eps, const std::vector<std::size_t>& pins,
         const std::vector<std::vector<double>>& geq_A, const std::vector<double>& geq_rhs) {
        if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
        bwk::LpProblem lp = make_lp(objective, A, rhs, pins, geq_A, geq_rhs);
        double scale = bwk::scale_factor_for(lp);
        bwk::ApproxSolution s = bwk::solve_approx(bwk::scale_rhs(lp, scale), eps);
        py::dict d;
        d["status"] = bwk::to_string(s.status);
        d["approx_failed"] = s.approx_failed;
        d["value"] = s.value * scale;
        std::vector<double> x = s.x;
        for (double& v : x) v *= scale;
        d["x"] = x;
        d["max_violation"] = s.max_violation * scale;
        d["eps"] = s.eps;
        d["eps_game"] = s.eps_game;
        d["dual_bound"] = s.dual_bound;
        d["scale"] = scale;
        d["game_solves"] = s.game_solves;
        d["mw_iters"] = s.mw_iters;
        d["used_mw"] = s.used_mw;
        return d;
      },
      py::arg("objective"), py::arg("A"), py::arg("rhs"), py::arg("eps"),
      py::arg("pins") = std::vector<std::size_t>{},
      py::arg("geq_A") = std::vector<std::vector<double>>{},
      py::arg("geq_rhs") = std::vector<double>{},
      "eps-accurate solve through the zero-sum-game reduction; eps is relative to "
      "the internally rescaled problem, outputs are mapped back to input units");

  m.def("hoeffding_radius", &bwk::hoeffding_radius, py::arg("n"), py::arg("horizon_T"));
  m.def("univariate_query_count", &bwk::univariate_query_count, py::arg("eps"), py::arg("delta"),
        py::arg("c1") = 1.0);
  m.def("multivariate_query_count", &bwk::multivariate_query_count, py::arg("eps"),
        py::arg("delta"), py::arg("d"), py::arg("c2") = 1.0);
  m.def("multivariate_inverse_samples", &bwk::multivariate_inverse_samples, py::arg("N"),
        py::arg("c2") = 1.0);
  m.def(
      "qmc_mean_univariate",
      [](double true_mean, double eps, double delta, std::uint64_t seed,
         const std::string& backend, double c1) {
        bwk::Rng rng(seed);
        bwk::QmcScalar s =
            bwk::qmc_mean_univariate(true_mean, eps, delta, qmc_backend_from(backend), rng, c1);
        return py::make_tuple(s.estimate, s.queries);
      },
      py::arg("true_mean"), py::arg("eps"), py::arg("delta"), py::arg("seed") = 0,
      py::arg("backend") = "idealized", py::arg("c1") = 1.0,
      "returns (estimate, queries); |estimate - true_mean| <= eps with prob >= 1 - delta");
  m.def(
      "qmc_mean_multivariate",
      [](const std::vector<double>& true_mean, double eps, double delta, std::uint64_t seed,
         double c2) {
        bwk::Rng rng(seed);
        bwk::QmcVector v = bwk::qmc_mean_multivariate(true_mean, eps, delta, rng, c2);
        return py::make_tuple(v.estimate, v.queries);
      },
      py::arg("true_mean"), py::arg("eps"), py::arg("delta"), py::arg("seed") = 0,
      py::arg("c2") = 1.0);
  m.def("amplitude_law", &bwk::amplitude_law, py::arg("a"), py::arg("M"),
        "outcome distribution of the phase readout on an M-point grid");
  m.def(
      "ae_schedule",
      [](double eps, double delta) {
        bwk::AeSchedule s = bwk::ae_schedule(eps, delta);
        return py::make_tuple(s.M, s.repeats);
      },
      py::arg("eps"), py::arg("delta"));

  m.def(
      "run",
      [](const bwk::Instance& inst, const std::string& algo, std::uint64_t seed,
         const std::string& backend, const std::string& lp_mode, double eps_lp, double c1,
         double c2, double mw_eps_override, bool record_rounds, bool inject_exact_bounds,
         bool supply_ground_truth_params) {
        bwk::AlgoKind kind = bwk::algo_from_string(algo);
        bwk::RunConfig cfg;
        cfg.backend = bwk::backend_from_string(backend);
        if (lp_mode == "exact") {
          cfg.approx_lp = false;
        } else if (lp_mode == "approx") {
          cfg.approx_lp = true;
        } else {
          throw std::invalid_argument("lp_mode must be 'exact' or 'approx'");
        }
        cfg.eps_lp = eps_lp;
        cfg.c1 = c1;
        cfg.c2 = c2;
        cfg.mw_eps_override = mw_eps_override;
        cfg.seed = seed;
        cfg.record_rounds = record_rounds;
        cfg.inject_exact_bounds = inject_exact_bounds;
        cfg.supply_ground_truth_params = supply_ground_truth_params;
        bwk::RunTrace trace;
        {
          py::gil_scoped_release release;
          trace = bwk::run_algorithm(inst, kind, cfg);
        }
        py::dict d = trace_dict(trace);
        try {
          bwk::GroundTruth gt = bwk::compute_ground_truth(inst);
          bwk::Decomposition dec = bwk::regret_decomposition(trace, inst, gt);
          d["pseudo_regret"] = dec.pseudo_regret;
          d["realized_regret"] = gt.opt_lp - trace.realized_reward;
          d["suboptimal_term"] = dec.suboptimal_term;
          d["leftover_term"] = dec.leftover_term;
        } catch (const std::exception&) {
          // leave the regret fields out when no planning solution is available
        }
        return d;
      },
      py::arg("instance"), py::arg("algo"), py::arg("seed") = 0,
      py::arg("backend") = "idealized", py::arg("lp_mode") = "exact", py::arg("eps_lp") = 0.0,
      py::arg("c1") = 1.0, py::arg("c2") = 1.0, py::arg("mw_eps_override") = -1.0,
      py::arg("record_rounds") = false, py::arg("inject_exact_bounds") = false,
      py::arg("supply_ground_truth_params") = true,
      "play one seeded episode and return the trace summary plus regret accounting");
}
