#pragma once
#include <cstddef>
#include <string>
#include <vector>

namespace bwk {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };
std::string to_string(LpStatus s);

// maximize objective.x  subject to  A x <= rhs,  geq_A x >= geq_rhs,
// x >= 0, and x[i] = 0 for i in pins
struct LpProblem {
  std::vector<double> objective;
  std::vector<std::vector<double>> A;
  std::vector<double> rhs;
  std::vector<std::size_t> pins;
  std::vector<std::vector<double>> geq_A;
  std::vector<double> geq_rhs;

  std::size_t num_vars() const { return objective.size(); }
  void validate() const;
};

struct LpSolution {
  LpStatus status = LpStatus::kOptimal;
  double value = 0.0;
  std::vector<double> x;        // pinned coordinates stay zero
  std::vector<double> dual;     // multipliers of the <= rows
  double feas_violation = 0.0;  // max positive residual of x
};

// dense two-phase simplex with Bland's rule; duals from the final basis
LpSolution solve_exact(const LpProblem& lp);

// independent reference: enumerate basic feasible points inside a large box,
// flagging box-active optima as unbounded; num_vars + rows <= 12
LpSolution brute_force_vertices(const LpProblem& lp);

double max_violation(const LpProblem& lp, const std::vector<double>& x);

LpProblem parse_lp_json(const std::string& text);
std::string lp_solution_to_json(const LpSolution& s);

namespace detail {

// pins removed, >= rows negated and appended after the <= rows
struct Canonical {
  std::size_t n = 0;
  std::vector<double> c;
  std::vector<std::vector<double>> D;
  std::vector<double> d;
  std::vector<std::size_t> col_map;
  std::size_t n_leq = 0;
};
Canonical canonicalize(const LpProblem& lp);

}  // namespace detail

}  // namespace bwk
