#pragma once
#include <cstddef>
#include <vector>

#include "bwk/instance.hpp"
#include "bwk/lp.hpp"

namespace bwk {

struct SupportClassification {
  std::vector<std::size_t> arms_in;      // positive mass in the optimum
  std::vector<std::size_t> arms_out;     // zero mass
  std::vector<std::size_t> rows_binding;  // resources consumed to the budget
  std::vector<std::size_t> rows_slack;    // resources with leftover
};

SupportClassification classify_support(const std::vector<double>& xi,
                                       const std::vector<std::vector<double>>& cost,
                                       const std::vector<double>& budget,
                                       double tol = 1e-9);

struct GroundTruth {
  double opt_lp = 0.0;
  std::vector<double> xi_star;
  std::vector<double> eta_star;
  SupportClassification support;
  std::vector<double> opt_drop_arm;     // best value with one arm forced out
  std::vector<double> opt_tighten_row;  // dual bound for promoting one row to binding
  double delta = 0.0;                   // optimality gap of the best structural rival, per round
  double sigma = 0.0;                   // smallest singular value of the binding square block
  double chi = 0.0;                     // smallest per-round mass on a supported arm
  bool nondegenerate = false;
  bool unique_optimum = false;
  LpProblem primal;
};

LpProblem make_primal(const Instance& inst);
GroundTruth compute_ground_truth(const Instance& inst);

}  // namespace bwk
