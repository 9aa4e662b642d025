#pragma once
#include <cstdint>
#include <vector>

#include "bwk/lp.hpp"

namespace bwk {

struct GameMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> a;  // row major

  double at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
  double& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
};

struct GameSolution {
  std::vector<double> row_strategy;
  std::vector<double> col_strategy;
  double value = 0.0;  // payoff to the row player under the returned strategies
  double gap = 0.0;    // max_i (A y)_i - min_j (x A)_j
  std::uint64_t iters = 0;
};

struct MwOptions {
  std::uint64_t check_every = 64;  // cadence of the certified-gap early exit; 0 disables
};

std::uint64_t mw_iteration_cap(std::size_t rows, std::size_t cols, double eps_game);

// deterministic multiplicative-weights self-play, averaged iterates; stops
// early once the duality gap of the averages certifies eps_game
GameSolution solve_zero_sum_mw(const GameMatrix& g, double eps_game, const MwOptions& opt = {});

// value and strategies via the exact LP formulation
GameSolution solve_zero_sum_exact(const GameMatrix& g);

// divide rhs by factor; every coefficient must land in [-1,1]
LpProblem scale_rhs(const LpProblem& lp, double factor);
double scale_factor_for(const LpProblem& lp);  // smallest row-driven uniform divisor covering every rhs

// feasibility game of a scaled LP at threshold alpha: rows are the simplex
// couplings, the objective threshold, and the constraints; columns are the
// variables plus a spare and a homogenizing coordinate
GameMatrix build_game(const LpProblem& scaled, double alpha);

enum class ApproxEngine { kAuto, kMw, kExactGame };

struct ApproxOptions {
  ApproxEngine engine = ApproxEngine::kAuto;
  double dual_bound = 0.0;               // 0: derive 1 + 1/min(rhs)
  std::uint64_t mw_iter_budget = 2000000;  // kAuto switches to exact games above this
};

struct ApproxSolution {
  LpStatus status = LpStatus::kOptimal;  // kInfeasible: no certificate at alpha = -1
  bool approx_failed = false;
  std::vector<double> x;
  double value = 0.0;
  double max_violation = 0.0;
  double eps = 0.0;
  double eps_game = 0.0;
  double dual_bound = 0.0;
  std::uint64_t game_solves = 0;
  std::uint64_t mw_iters = 0;
  bool used_mw = false;
};

// binary search over the value threshold with per-step game certificates;
// the input must already be scaled (all coefficients in [-1,1])
ApproxSolution solve_approx(const LpProblem& scaled, double eps, const ApproxOptions& opt = {});

enum class SolveKind { kQuantumApprox, kClassicalApprox, kClassicalExact };
double modeled_cost(SolveKind kind, std::size_t m, std::size_t d, double eps);

}  // namespace bwk
