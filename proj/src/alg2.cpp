#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "bwk/algos.hpp"
#include "run_common.hpp"

namespace bwk {

using detail_run::clamp01;
using detail_run::push_event;
using detail_run::sample_index;
using detail_run::Sim;

SidConstants sid_constants(const GroundTruth& gt, const Instance& inst) {
  if (!(gt.delta > 0.0) || !(gt.sigma > 0.0) || !(gt.chi > 0.0)) {
    throw std::invalid_argument("identification constants need positive structural margins");
  }
  double m = static_cast<double>(inst.m);
  double d = static_cast<double>(inst.d);
  double b = inst.b();
  double gap = std::min(gt.chi, gt.delta);
  SidConstants sc;
  double t1 = std::min(1.0, gt.sigma * gt.sigma) * gap / (12.0 * std::min(m * m, d * d));
  double t2 = gt.delta / (5.0 * std::pow(2.0 + 1.0 / b, 2.0));
  sc.theta = std::min(t1, t2);
  sc.eps_phase2 = std::min(1.0, gt.sigma) * gap * b / (5.0 * std::pow(d, 1.5));
  double T = static_cast<double>(inst.T);
  sc.delta_qmc = d / (T * T * T);
  return sc;
}

double lp_accuracy_bound(const GroundTruth& gt, const Instance& inst) {
  SidConstants sc = sid_constants(gt, inst);
  double T = static_cast<double>(inst.T);
  double l2 = std::log(T) * std::log(T);
  double md = static_cast<double>(std::min(inst.m, inst.d));
  double b = inst.b();
  double gap = std::min(gt.chi, gt.delta);
  double t1 = gt.sigma * gt.chi * l2 / (40.0 * std::pow(md, 1.5));
  double t2 = 2.0 * b * sc.theta * gap * l2 / 405.0;
  double t3 = gt.delta / 4.0;
  return std::min({t1, t2, t3});
}

bool phase2_condition(const std::vector<double>& support_cost_radii, double theta,
                      const std::vector<double>& budget,
                      const std::vector<std::size_t>& rows_to_check, std::uint64_t t,
                      std::uint64_t T, double b, double eps_phase2) {
  for (double rad : support_cost_radii) {
    if (rad > theta) return false;
  }
  if (t > T) return false;
  double rem = static_cast<double>(T - t + 1);
  for (std::size_t j : rows_to_check) {
    double rate = budget[j] / rem;
    if (rate < b - eps_phase2 || rate > b + eps_phase2) return false;
  }
  return true;
}

Phase2Solve phase2_distribution(const std::vector<double>& r_up,
                                const std::vector<std::vector<double>>& c_lo,
                                const std::vector<std::size_t>& support,
                                const std::vector<std::size_t>& binding_rows,
                                const std::vector<double>& budget, double scale,
                                bool balanced, const LpRoundOptions& opt) {
  std::size_t m = r_up.size();
  std::size_t d = c_lo.size();
  Phase2Solve out;
  out.xi.assign(m, 0.0);
  if (support.empty() || !(scale > 0.0)) {
    out.fallback_uniform = true;
    double u = 1.0 / static_cast<double>(m);
    for (double& v : out.xi) v = u;
    return out;
  }
  auto uniform_support = [&]() {
    out.fallback_uniform = true;
    std::fill(out.xi.begin(), out.xi.end(), 0.0);
    double u = 1.0 / static_cast<double>(support.size());
    for (std::size_t i : support) out.xi[i] = u;
  };

  std::vector<char> in_support(m, 0);
  for (std::size_t i : support) in_support[i] = 1;
  LpProblem base;
  base.objective = r_up;
  base.A = c_lo;
  base.rhs.resize(d);
  for (std::size_t j = 0; j < d; ++j) base.rhs[j] = std::max(0.0, std::min(budget[j], scale));
  for (std::size_t i = 0; i < m; ++i) {
    if (!in_support[i]) base.pins.push_back(i);
  }

  auto account = [&](std::size_t rows, bool approx_solve) {
    ++out.lp_solves;
    std::size_t nvars = support.size();
    if (!approx_solve) {
      out.modeled_classical += modeled_cost(SolveKind::kClassicalExact, nvars, rows, 1.0);
    } else if (opt.quantum_units) {
      out.modeled_quantum += modeled_cost(SolveKind::kQuantumApprox, nvars, rows, opt.eps);
    } else {
      out.modeled_classical += modeled_cost(SolveKind::kClassicalApprox, nvars, rows, opt.eps);
    }
  };

  auto try_solve = [&](const LpProblem& lp, std::size_t rows) -> std::vector<double> {
    if (!opt.approx) {
      LpSolution s = solve_exact(lp);
      account(rows, false);
      if (s.status != LpStatus::kOptimal) return {};
      return s.x;
    }
    LpProblem scaled;
    try {
      scaled = scale_rhs(lp, scale);
    } catch (const std::invalid_argument&) {
      return {};
    }
    ApproxOptions ao = opt.aopt;
    if (ao.dual_bound <= 0.0) {
      double bmin = std::numeric_limits<double>::infinity();
      for (double v : scaled.rhs) bmin = std::min(bmin, v);
      if (!(bmin > 1e-12)) return {};
      ao.dual_bound = 1.0 + 1.0 / bmin;
    }
    ApproxSolution s = solve_approx(scaled, opt.eps, ao);
    account(rows, true);
    if (s.approx_failed) {
      out.approx_failed = true;
      return {};
    }
    if (s.status != LpStatus::kOptimal) return {};
    std::vector<double> x = s.x;
    for (double& v : x) v *= scale;
    return x;
  };

  std::vector<double> raw;
  if (balanced && !binding_rows.empty()) {
    bool reachable = true;
    for (std::size_t j : binding_rows) {
      if (budget[j] > scale) {
        reachable = false;
        break;
      }
    }
    if (reachable) {
      LpProblem bal = base;
      for (std::size_t j : binding_rows) {
        bal.geq_A.push_back(c_lo[j]);
        bal.geq_rhs.push_back(budget[j]);
      }
      raw = try_solve(bal, d + binding_rows.size());
      if (!raw.empty()) {
        out.used_balanced = true;
      } else {
        out.balanced_infeasible = true;
      }
    } else {
      out.balanced_infeasible = true;
    }
  }
  if (raw.empty()) raw = try_solve(base, d);
  if (raw.empty()) {
    uniform_support();
    return out;
  }
  double s = 0.0;
  for (std::size_t i : support) s += std::max(0.0, raw[i]);
  if (s <= 1e-12) {
    uniform_support();
    return out;
  }
  for (std::size_t i : support) out.xi[i] = std::max(0.0, raw[i]) / s;
  return out;
}

namespace {

struct QBound {
  double r_est = 0.5;
  double r_rad = 1.0;
  std::vector<double> c_est;
  double c_rad = 1.0;
};

RunTrace run_alg2_impl(const Instance& inst, const RunConfig& cfg, const SidConstants& sc,
                       double eps_lp, bool quantum) {
  RunTrace trace;
  trace.algo = quantum ? "alg2-quantum" : "alg2-classical";
  trace.T = inst.T;
  trace.seed = cfg.seed;
  Sim sim(inst, trace);
  Rng rng(cfg.seed);

  const std::size_t m = inst.m;
  const std::size_t d = inst.d;
  const std::uint64_t T = inst.T;
  const double lnT = std::log(static_cast<double>(std::max<std::uint64_t>(T, 2)));
  const double b = inst.b();
  const bool inject = cfg.inject_exact_bounds;
  const QmcBackend qb =
      cfg.backend == Backend::kAeAnalytic ? QmcBackend::kAePhase : QmcBackend::kIdealized;

  std::vector<QBound> q(m);
  for (auto& e : q) e.c_est.assign(d, 0.5);
  std::vector<char> arm_in(m, 0), row_out(d, 0);
  std::size_t n_arm = 0, n_row = 0;
  bool stopped = false;
  bool ident = false;

  // working copies of the sweep bounds
  std::vector<double> r_lo(m), r_up(m);
  std::vector<std::vector<double>> clo(d, std::vector<double>(m));
  std::vector<std::vector<double>> cup(d, std::vector<double>(m));

  auto sweep_bounds = [&]() {
    for (std::size_t i = 0; i < m; ++i) {
      double re, rr, cr;
      const std::vector<double>* ce;
      std::vector<double> means(d, 0.5);
      if (inject || quantum) {
        re = q[i].r_est;
        rr = q[i].r_rad;
        cr = q[i].c_rad;
        ce = &q[i].c_est;
      } else {
        std::uint64_t n = sim.stats[i].n;
        double rad = n > 0 ? std::sqrt(2.0 * lnT / static_cast<double>(n)) : 1.0;
        re = n > 0 ? sim.stats[i].reward_sum / static_cast<double>(n) : 0.5;
        rr = rad;
        cr = rad;
        if (n > 0) {
          for (std::size_t j = 0; j < d; ++j)
            means[j] = sim.stats[i].cost_sum[j] / static_cast<double>(n);
        }
        ce = &means;
      }
      r_lo[i] = clamp01(re - rr);
      r_up[i] = clamp01(re + rr);
      for (std::size_t j = 0; j < d; ++j) {
        clo[j][i] = clamp01((*ce)[j] - cr);
        cup[j][i] = clamp01((*ce)[j] + cr);
      }
    }
  };

  const double kAdmit = 1e-9;  // numeric guard only; structural gaps dwarf it
  double b_scaled_min = std::numeric_limits<double>::infinity();
  for (double v : inst.B) b_scaled_min = std::min(b_scaled_min, v / static_cast<double>(T));

  auto account_lp = [&](std::size_t nvars, std::size_t rows, bool approx_solve, double eps) {
    ++trace.lp_solves;
    if (!approx_solve) {
      trace.modeled_classical_cost += modeled_cost(SolveKind::kClassicalExact, nvars, rows, 1.0);
    } else if (quantum) {
      trace.modeled_quantum_cost += modeled_cost(SolveKind::kQuantumApprox, nvars, rows, eps);
    } else {
      trace.modeled_classical_cost += modeled_cost(SolveKind::kClassicalApprox, nvars, rows, eps);
    }
  };

  // best value achievable with optimistic rewards and costs, optionally with
  // one arm forced out; empty when the solve gives no usable value
  auto solve_primal = [&](const std::vector<double>& obj, const std::vector<std::vector<double>>& A,
                          std::optional<std::size_t> pin) -> std::optional<double> {
    LpProblem lp;
    lp.objective = obj;
    lp.A = A;
    lp.rhs = inst.B;
    if (pin) lp.pins.push_back(*pin);
    std::size_t nvars = m - (pin ? 1 : 0);
    if (!cfg.approx_lp) {
      LpSolution s = solve_exact(lp);
      account_lp(nvars, d, false, 0.0);
      if (s.status != LpStatus::kOptimal) return std::nullopt;
      return s.value;
    }
    LpProblem scaled = scale_rhs(lp, static_cast<double>(T));
    ApproxOptions ao;
    ao.dual_bound = 1.0 + 1.0 / b_scaled_min;
    ApproxSolution s = solve_approx(scaled, eps_lp, ao);
    account_lp(nvars, d, true, eps_lp);
    if (s.approx_failed) {
      push_event(trace, trace.tau, "approx-failed", "planning bound during exploration");
      return std::nullopt;
    }
    if (s.status != LpStatus::kOptimal) return std::nullopt;
    return static_cast<double>(T) * s.value;
  };

  // cheapest dual certificate that row j could be promoted to binding
  auto solve_row_bound = [&](std::size_t j) -> std::optional<double> {
    if (!cfg.approx_lp) {
      LpProblem lp;
      lp.objective.assign(d, 0.0);
      for (std::size_t k = 0; k < d; ++k) lp.objective[k] = -inst.B[k];
      for (std::size_t i = 0; i < m; ++i) {
        std::vector<double> row(d);
        for (std::size_t k = 0; k < d; ++k) row[k] = clo[k][i];
        lp.geq_A.push_back(std::move(row));
        lp.geq_rhs.push_back(r_up[i] + cup[j][i]);
      }
      LpSolution s = solve_exact(lp);
      account_lp(d, m, false, 0.0);
      if (s.status == LpStatus::kInfeasible) return std::numeric_limits<double>::infinity();
      if (s.status != LpStatus::kOptimal) return std::nullopt;
      return -s.value - inst.B[j];
    }
    LpProblem lp;
    lp.objective.assign(d, -1.0);
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<double> row(d);
      for (std::size_t k = 0; k < d; ++k) row[k] = -clo[k][i];
      lp.A.push_back(std::move(row));
      lp.rhs.push_back(-(r_up[i] + cup[j][i]) * b / 2.0);
    }
    ApproxOptions ao;
    ao.dual_bound = 1.0 + 2.0 / b;
    ApproxSolution s = solve_approx(lp, eps_lp / 2.0, ao);
    account_lp(d, m, true, eps_lp / 2.0);
    if (s.approx_failed) {
      push_event(trace, trace.tau, "approx-failed", "row bound during exploration");
      return std::nullopt;
    }
    if (s.status == LpStatus::kInfeasible) return std::numeric_limits<double>::infinity();
    // value of the substituted maximization recovers the dual budget
    double T2 = 2.0 * static_cast<double>(T);
    return -T2 * s.value - inst.B[j];
  };

  std::uint64_t sweep = 0;
  for (std::uint64_t k = 1; !ident && !stopped; ++k) {
    sweep = k;
    double r_k = std::pow(2.0, 1.0 - static_cast<double>(k));
    std::uint64_t n_k = static_cast<std::uint64_t>(std::ceil(lnT / r_k));
    if (n_k == 0) n_k = 1;
    for (std::size_t i = 0; i < m && !stopped; ++i) {
      for (std::uint64_t p = 0; p < n_k; ++p) {
        if (!sim.can_continue()) {
          stopped = true;
          break;
        }
        sim.pull(i, rng, cfg.record_rounds);
      }
    }
    if (stopped) break;

    if (inject) {
      if (k == 1) {
        for (std::size_t i = 0; i < m; ++i) {
          q[i].r_est = sim.r_mean[i];
          q[i].r_rad = 0.0;
          for (std::size_t j = 0; j < d; ++j) q[i].c_est[j] = sim.c_mean[j][i];
          q[i].c_rad = 0.0;
        }
      }
    } else if (quantum) {
      double lr = std::log(1.0 / sc.delta_qmc);
      double lc = std::log(static_cast<double>(d) / sc.delta_qmc);
      double eps_r = cfg.c1 * lr / static_cast<double>(n_k);
      std::uint64_t n_mult = multivariate_inverse_samples(n_k, cfg.c2);
      double eps_c = std::sqrt(static_cast<double>(d)) * lc / static_cast<double>(n_mult);
      for (std::size_t i = 0; i < m; ++i) {
        if (eps_r <= 1.0) {
          QmcScalar qs = qmc_mean_univariate(sim.r_mean[i], eps_r, sc.delta_qmc, qb, rng, cfg.c1);
          q[i].r_est = qs.estimate;
          q[i].r_rad = eps_r;
          ++trace.qmc_calls;
          trace.qmc_queries += qs.queries;
        }
        if (eps_c <= 1.0) {
          std::vector<double> truth(d);
          for (std::size_t j = 0; j < d; ++j) truth[j] = sim.c_mean[j][i];
          QmcVector qv = qmc_mean_multivariate(truth, eps_c, sc.delta_qmc, rng, cfg.c2);
          q[i].c_est = qv.estimate;
          q[i].c_rad = eps_c;
          ++trace.qmc_calls;
          trace.qmc_queries += qv.queries;
        }
      }
    }

    sweep_bounds();
    double gate = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) gate = std::min(gate, clo[0][i]);
    if (!(gate > 0.0)) continue;

    std::optional<double> opt_l = solve_primal(r_lo, cup, std::nullopt);
    if (!opt_l) continue;
    for (std::size_t i = 0; i < m; ++i) {
      if (arm_in[i]) continue;
      std::optional<double> ub = solve_primal(r_up, clo, i);
      double v = ub ? *ub : std::numeric_limits<double>::infinity();
      if (*opt_l > v + kAdmit * std::max(1.0, std::fabs(*opt_l))) {
        arm_in[i] = 1;
        ++n_arm;
      }
    }
    for (std::size_t j = 0; j < d; ++j) {
      if (row_out[j]) continue;
      std::optional<double> ub = solve_row_bound(j);
      double v = ub ? *ub : std::numeric_limits<double>::infinity();
      if (*opt_l > v + kAdmit * std::max(1.0, std::fabs(*opt_l))) {
        row_out[j] = 1;
        ++n_row;
      }
    }
    if (n_arm + n_row >= d) ident = true;
  }

  trace.phase1_rounds = trace.tau;
  if (stopped) {
    trace.stop_reason = "phase1-budget-exhausted";
    return trace;
  }

  trace.identification_done = true;
  trace.identification_round = trace.tau;
  for (std::size_t i = 0; i < m; ++i) {
    if (arm_in[i]) trace.support_arms.push_back(i);
  }
  std::vector<std::size_t> binding_rows;
  for (std::size_t j = 0; j < d; ++j) {
    if (row_out[j]) {
      trace.slack_rows.push_back(j);
    } else {
      binding_rows.push_back(j);
    }
  }
  push_event(trace, trace.tau, "identification",
             "sweep=" + std::to_string(sweep) + " arms=" + std::to_string(n_arm) +
                 " slack_rows=" + std::to_string(n_row));

  const std::vector<std::size_t>& support = trace.support_arms;
  std::vector<double> r_up_eff(m, 1.0);
  std::vector<std::vector<double>> c_lo_eff(d, std::vector<double>(m, 0.0));
  std::vector<double> cost_rad(m, 1.0);
  LpRoundOptions ro;
  ro.approx = cfg.approx_lp;
  ro.eps = eps_lp / (lnT * lnT);
  ro.quantum_units = quantum;
  ro.b = b;

  while (true) {
    if (!sim.can_continue()) {
      trace.stop_reason = sim.stop_reason();
      break;
    }
    for (std::size_t i = 0; i < m; ++i) {
      std::uint64_t n = sim.stats[i].n;
      double mean_r = n > 0 ? sim.stats[i].reward_sum / static_cast<double>(n) : 0.5;
      if (inject) {
        r_up_eff[i] = clamp01(q[i].r_est);
        cost_rad[i] = 0.0;
        for (std::size_t j = 0; j < d; ++j) c_lo_eff[j][i] = clamp01(q[i].c_est[j]);
        continue;
      }
      if (quantum) {
        double crad = n > 0 ? std::sqrt(3.0 * lnT / static_cast<double>(n)) : 1.0;
        if (crad < q[i].r_rad) {
          r_up_eff[i] = clamp01(mean_r + crad);
        } else {
          r_up_eff[i] = clamp01(q[i].r_est + q[i].r_rad);
        }
        if (crad < q[i].c_rad) {
          cost_rad[i] = crad;
          for (std::size_t j = 0; j < d; ++j) {
            double mc = n > 0 ? sim.stats[i].cost_sum[j] / static_cast<double>(n) : 0.5;
            c_lo_eff[j][i] = clamp01(mc - crad);
          }
        } else {
          cost_rad[i] = q[i].c_rad;
          for (std::size_t j = 0; j < d; ++j) c_lo_eff[j][i] = clamp01(q[i].c_est[j] - q[i].c_rad);
        }
      } else {
        double rad = n > 0 ? std::sqrt(2.0 * lnT / static_cast<double>(n)) : 1.0;
        r_up_eff[i] = clamp01(mean_r + rad);
        cost_rad[i] = rad;
        for (std::size_t j = 0; j < d; ++j) {
          double mc = n > 0 ? sim.stats[i].cost_sum[j] / static_cast<double>(n) : 0.5;
          c_lo_eff[j][i] = clamp01(mc - rad);
        }
      }
    }
    std::vector<double> radii;
    radii.reserve(support.size());
    for (std::size_t i : support) radii.push_back(cost_rad[i]);
    bool balanced = phase2_condition(radii, sc.theta, trace.budget_remaining, binding_rows,
                                     trace.tau + 1, T, b, sc.eps_phase2);
    double scale = static_cast<double>(T - trace.tau);
    Phase2Solve ps = phase2_distribution(r_up_eff, c_lo_eff, support, binding_rows,
                                         trace.budget_remaining, scale, balanced, ro);
    trace.lp_solves += ps.lp_solves;
    trace.modeled_quantum_cost += ps.modeled_quantum;
    trace.modeled_classical_cost += ps.modeled_classical;
    if (ps.balanced_infeasible) {
      push_event(trace, trace.tau + 1, "balanced-infeasible", "relaxed to the one-sided plan");
    }
    if (ps.approx_failed) {
      push_event(trace, trace.tau + 1, "approx-failed", "per-round plan");
    }
    if (ps.fallback_uniform) {
      push_event(trace, trace.tau + 1, "uniform-fallback", "played uniformly over the support");
    }
    std::size_t arm = sample_index(ps.xi, rng);
    sim.pull(arm, rng, cfg.record_rounds);
  }
  return trace;
}

}  // namespace

RunTrace run_alg2_quantum(const Instance& inst, const RunConfig& cfg, const SidConstants& sc,
                          double eps_lp_resolved) {
  if (cfg.backend == Backend::kClassical) {
    throw std::invalid_argument("estimator backend 'classical' is only valid for classical algorithms");
  }
  return run_alg2_impl(inst, cfg, sc, eps_lp_resolved, true);
}

RunTrace run_alg2_classical(const Instance& inst, const RunConfig& cfg, const SidConstants& sc,
                            double eps_lp_resolved) {
  return run_alg2_impl(inst, cfg, sc, eps_lp_resolved, false);
}

RunTrace run_algorithm(const Instance& inst, AlgoKind algo, const RunConfig& cfg) {
  switch (algo) {
    case AlgoKind::kAlg1Quantum:
      return run_alg1_quantum(inst, cfg);
    case AlgoKind::kAlg1Classical:
      return run_alg1_classical(inst, cfg);
    default:
      break;
  }
  if (!cfg.supply_ground_truth_params) {
    throw std::invalid_argument(
        "identification runs derive their constants from the exact planning solution; enable "
        "supply_ground_truth_params or drive the phase-level API directly");
  }
  GroundTruth gt = compute_ground_truth(inst);
  if (!gt.nondegenerate) {
    throw std::invalid_argument(
        "this algorithm requires a nondegenerate instance: the planning problem must have a "
        "unique optimum with as many supported arms as binding resources");
  }
  SidConstants sc = sid_constants(gt, inst);
  double eps = cfg.eps_lp > 0.0 ? cfg.eps_lp : lp_accuracy_bound(gt, inst);
  if (algo == AlgoKind::kAlg2Quantum) return run_alg2_quantum(inst, cfg, sc, eps);
  return run_alg2_classical(inst, cfg, sc, eps);
}

}  // namespace bwk
