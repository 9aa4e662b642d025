#include "bwk/ground_truth.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bwk {

SupportClassification classify_support(const std::vector<double>& xi,
                                        const std::vector<std::vector<double>>& cost,
                                        const std::vector<double>& budget,
                                        double tol) {
  SupportClassification out;
  std::size_t m = xi.size();
  std::size_t d = budget.size();
  if (cost.size() != d) throw std::invalid_argument("cost row count must match budget length");
  for (std::size_t i = 0; i < m; ++i) {
    if (xi[i] > tol) {
      out.arms_in.push_back(i);
    } else {
      out.arms_out.push_back(i);
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    if (cost[j].size() != m) throw std::invalid_argument("cost row length must match arm count");
    double used = 0.0;
    for (std::size_t i = 0; i < m; ++i) used += cost[j][i] * xi[i];
    if (std::fabs(used - budget[j]) <= tol * std::max(1.0, budget[j])) {
      out.rows_binding.push_back(j);
    } else {
      out.rows_slack.push_back(j);
    }
  }
  return out;
}

LpProblem make_primal(const Instance& inst) {
  LpProblem lp;
  lp.objective = inst.reward_means();
  lp.A = inst.cost_means();
  lp.rhs = inst.B;
  return lp;
}

namespace {

double solve_tighten_row(const std::vector<double>& r,
                         const std::vector<std::vector<double>>& C,
                         const std::vector<double>& B,
                         std::size_t j) {
  // cheapest dual budget that prices every arm out even after charging row j's
  // cost on top of the reward: min B.eta with C^T eta >= r + C_j, eta >= 0
  std::size_t m = r.size();
  std::size_t d = B.size();
  LpProblem lp;
  lp.objective.assign(d, 0.0);
  for (std::size_t k = 0; k < d; ++k) lp.objective[k] = -B[k];
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> row(d, 0.0);
    for (std::size_t k = 0; k < d; ++k) row[k] = C[k][i];
    lp.geq_A.push_back(std::move(row));
    lp.geq_rhs.push_back(r[i] + C[j][i]);
  }
  LpSolution sol = solve_exact(lp);
  if (sol.status == LpStatus::kInfeasible) return std::numeric_limits<double>::infinity();
  if (sol.status != LpStatus::kOptimal) throw std::runtime_error("row-tightening solve failed");
  return -sol.value - B[j];
}

}  // namespace

GroundTruth compute_ground_truth(const Instance& inst) {
  GroundTruth gt;
  gt.primal = make_primal(inst);
  LpSolution base = solve_exact(gt.primal);
  if (base.status != LpStatus::kOptimal) {
    throw std::runtime_error("instance planning problem has no bounded optimum");
  }
  gt.opt_lp = base.value;
  gt.xi_star = base.x;
  gt.eta_star = base.dual;
  for (double& v : gt.eta_star) v = std::max(0.0, v);
  std::vector<std::vector<double>> C = inst.cost_means();
  std::vector<double> r = inst.reward_means();
  gt.support = classify_support(gt.xi_star, C, inst.B);

  std::size_t m = inst.m;
  std::size_t d = inst.d;

  gt.opt_drop_arm.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    LpProblem drop = gt.primal;
    drop.pins = {i};
    LpSolution sol = solve_exact(drop);
    if (sol.status != LpStatus::kOptimal) throw std::runtime_error("arm-drop solve failed");
    gt.opt_drop_arm[i] = sol.value;
  }
  gt.opt_tighten_row.assign(d, std::numeric_limits<double>::infinity());
  for (std::size_t j = 0; j < d; ++j) {
    gt.opt_tighten_row[j] = solve_tighten_row(r, C, inst.B, j);
  }

  double rival = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t i : gt.support.arms_in) {
    rival = std::max(rival, gt.opt_drop_arm[i]);
    any = true;
  }
  for (std::size_t j : gt.support.rows_slack) {
    if (std::isfinite(gt.opt_tighten_row[j])) {
      rival = std::max(rival, gt.opt_tighten_row[j]);
      any = true;
    }
  }
  double T = static_cast<double>(inst.T);
  gt.delta = any ? (gt.opt_lp - rival) / T : std::numeric_limits<double>::quiet_NaN();

  const auto& in = gt.support.arms_in;
  const auto& bind = gt.support.rows_binding;
  if (!in.empty() && !bind.empty()) {
    Eigen::MatrixXd block(bind.size(), in.size());
    for (std::size_t a = 0; a < bind.size(); ++a)
      for (std::size_t b = 0; b < in.size(); ++b) block(a, b) = C[bind[a]][in[b]];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(block);
    gt.sigma = svd.singularValues().tail(1)(0);
  } else {
    gt.sigma = 0.0;
  }

  gt.chi = 0.0;
  if (!in.empty()) {
    double mn = std::numeric_limits<double>::infinity();
    for (std::size_t i : in) mn = std::min(mn, gt.xi_star[i] / T);
    gt.chi = mn;
  }

  double xmax = 1.0;
  for (double v : gt.xi_star) xmax = std::max(xmax, std::fabs(v));
  double match_tol = 1e-6 * xmax;
  bool unique = true;
  for (int sgn : {+1, -1}) {
    LpProblem pert = gt.primal;
    for (std::size_t i = 0; i < m; ++i) {
      pert.objective[i] += sgn * 1e-7 * static_cast<double>(i + 1) / static_cast<double>(m);
    }
    LpSolution sol = solve_exact(pert);
    if (sol.status != LpStatus::kOptimal) {
      unique = false;
      break;
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (std::fabs(sol.x[i] - gt.xi_star[i]) > match_tol) {
        unique = false;
        break;
      }
    }
    if (!unique) break;
  }
  gt.unique_optimum = unique;
  gt.nondegenerate = unique && in.size() == bind.size();
  return gt;
}

}  // namespace bwk
