#include "bwk/lp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bwk/json_io.hpp"

namespace bwk {

namespace {
constexpr double kTol = 1e-9;
constexpr double kPivTol = 1e-11;
}

std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
  }
  return "?";
}

void LpProblem::validate() const {
  std::size_t n = objective.size();
  if (A.size() != rhs.size()) throw std::invalid_argument("lp: A/rhs row mismatch");
  for (const auto& row : A)
    if (row.size() != n) throw std::invalid_argument("lp: A column mismatch");
  if (geq_A.size() != geq_rhs.size()) throw std::invalid_argument("lp: geq_A/geq_rhs row mismatch");
  for (const auto& row : geq_A)
    if (row.size() != n) throw std::invalid_argument("lp: geq_A column mismatch");
  for (std::size_t p : pins)
    if (p >= n) throw std::invalid_argument("lp: pin index out of range");
}

namespace detail {

Canonical canonicalize(const LpProblem& lp) {
  lp.validate();
  Canonical cn;
  std::size_t n_all = lp.num_vars();
  std::vector<bool> pinned(n_all, false);
  for (std::size_t p : lp.pins) pinned[p] = true;
  for (std::size_t j = 0; j < n_all; ++j)
    if (!pinned[j]) cn.col_map.push_back(j);
  cn.n = cn.col_map.size();
  cn.c.resize(cn.n);
  for (std::size_t j = 0; j < cn.n; ++j) cn.c[j] = lp.objective[cn.col_map[j]];
  cn.n_leq = lp.A.size();
  for (std::size_t r = 0; r < lp.A.size(); ++r) {
    std::vector<double> row(cn.n);
    for (std::size_t j = 0; j < cn.n; ++j) row[j] = lp.A[r][cn.col_map[j]];
    cn.D.push_back(std::move(row));
    cn.d.push_back(lp.rhs[r]);
  }
  for (std::size_t r = 0; r < lp.geq_A.size(); ++r) {
    std::vector<double> row(cn.n);
    for (std::size_t j = 0; j < cn.n; ++j) row[j] = -lp.geq_A[r][cn.col_map[j]];
    cn.D.push_back(std::move(row));
    cn.d.push_back(-lp.geq_rhs[r]);
  }
  return cn;
}

}  // namespace detail

namespace {

// dense tableau over columns [structural | slack | artificial]
struct Tableau {
  std::size_t R = 0, n = 0, na = 0;
  std::vector<std::vector<double>> body;
  std::vector<double> rhs;
  std::vector<std::size_t> basis;
  std::vector<bool> negated;       // rows flipped at setup
  std::vector<std::vector<double>> init_cols;  // copy of the equality system

  std::size_t cols() const { return n + R + na; }
  bool is_artificial(std::size_t j) const { return j >= n + R; }
};

Tableau build_tableau(const detail::Canonical& cn) {
  Tableau t;
  t.R = cn.D.size();
  t.n = cn.n;
  t.negated.assign(t.R, false);
  std::size_t na = 0;
  for (double di : cn.d)
    if (di < 0) ++na;
  t.na = na;
  t.body.assign(t.R, std::vector<double>(t.n + t.R + t.na, 0.0));
  t.rhs.assign(t.R, 0.0);
  t.basis.assign(t.R, 0);
  std::size_t next_art = 0;
  for (std::size_t r = 0; r < t.R; ++r) {
    double sgn = cn.d[r] < 0 ? -1.0 : 1.0;
    t.negated[r] = cn.d[r] < 0;
    for (std::size_t j = 0; j < t.n; ++j) t.body[r][j] = sgn * cn.D[r][j];
    t.body[r][t.n + r] = sgn;
    t.rhs[r] = sgn * cn.d[r];
    if (t.negated[r]) {
      std::size_t aj = t.n + t.R + next_art++;
      t.body[r][aj] = 1.0;
      t.basis[r] = aj;
    } else {
      t.basis[r] = t.n + r;
    }
  }
  t.init_cols = t.body;
  return t;
}

void pivot(Tableau& t, std::size_t pr, std::size_t pc) {
  double piv = t.body[pr][pc];
  for (double& v : t.body[pr]) v /= piv;
  t.rhs[pr] /= piv;
  for (std::size_t r = 0; r < t.R; ++r) {
    if (r == pr) continue;
    double f = t.body[r][pc];
    if (f == 0.0) continue;
    for (std::size_t j = 0; j < t.cols(); ++j) t.body[r][j] -= f * t.body[pr][j];
    t.rhs[r] -= f * t.rhs[pr];
    t.body[r][pc] = 0.0;
  }
  t.body[pr][pc] = 1.0;
  t.basis[pr] = pc;
}

// Bland's rule: entering = lowest eligible column, leaving = min ratio with
// lowest basis index on ties; returns false on optimality, throws on
// unbounded when phase == 2
bool simplex_iterate(Tableau& t, const std::vector<double>& cost, bool allow_artificial,
                     bool* unbounded) {
  std::vector<double> cb(t.R);
  for (std::size_t r = 0; r < t.R; ++r) cb[r] = cost[t.basis[r]];
  std::size_t enter = t.cols();
  for (std::size_t j = 0; j < t.cols(); ++j) {
    if (!allow_artificial && t.is_artificial(j)) continue;
    bool basic = false;
    for (std::size_t r = 0; r < t.R; ++r)
      if (t.basis[r] == j) { basic = true; break; }
    if (basic) continue;
    double red = cost[j];
    for (std::size_t r = 0; r < t.R; ++r) red -= cb[r] * t.body[r][j];
    if (red > kTol) { enter = j; break; }
  }
  if (enter == t.cols()) return false;
  std::size_t leave = t.R;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < t.R; ++r) {
    double a = t.body[r][enter];
    if (a > kPivTol) {
      double ratio = t.rhs[r] / a;
      if (ratio < best - 1e-12 ||
          (ratio < best + 1e-12 && (leave == t.R || t.basis[r] < t.basis[leave]))) {
        best = ratio;
        leave = r;
      }
    }
  }
  if (leave == t.R) {
    if (unbounded) *unbounded = true;
    return false;
  }
  pivot(t, leave, enter);
  return true;
}

void run_simplex(Tableau& t, const std::vector<double>& cost, bool allow_artificial,
                 bool* unbounded) {
  std::size_t cap = 20000 + 500 * (t.R + t.cols());
  for (std::size_t it = 0; it < cap; ++it) {
    if (!simplex_iterate(t, cost, allow_artificial, unbounded)) return;
  }
  throw std::runtime_error("simplex iteration cap exceeded");
}

}  // namespace

LpSolution solve_exact(const LpProblem& lp) {
  detail::Canonical cn = detail::canonicalize(lp);
  LpSolution sol;
  sol.x.assign(lp.num_vars(), 0.0);
  if (cn.D.empty()) {
    // no constraints beyond nonnegativity
    bool positive = false;
    for (double cj : cn.c)
      if (cj > kTol) positive = true;
    if (positive) { sol.status = LpStatus::kUnbounded; return sol; }
    sol.status = LpStatus::kOptimal;
    sol.value = 0.0;
    return sol;
  }
  Tableau t = build_tableau(cn);

  if (t.na > 0) {
    std::vector<double> cost1(t.cols(), 0.0);
    for (std::size_t j = t.n + t.R; j < t.cols(); ++j) cost1[j] = -1.0;
    run_simplex(t, cost1, true, nullptr);
    double art_sum = 0;
    for (std::size_t r = 0; r < t.R; ++r)
      if (t.is_artificial(t.basis[r])) art_sum += t.rhs[r];
    double scale = 1.0;
    for (double di : cn.d) scale = std::max(scale, std::fabs(di));
    if (art_sum > 1e-7 * scale) {
      sol.status = LpStatus::kInfeasible;
      return sol;
    }
    for (std::size_t r = 0; r < t.R; ++r) {
      if (!t.is_artificial(t.basis[r])) continue;
      for (std::size_t j = 0; j < t.n + t.R; ++j) {
        if (std::fabs(t.body[r][j]) > 1e-8) { pivot(t, r, j); break; }
      }
    }
  }

  std::vector<double> cost2(t.cols(), 0.0);
  for (std::size_t j = 0; j < t.n; ++j) cost2[j] = cn.c[j];
  bool unbounded = false;
  run_simplex(t, cost2, false, &unbounded);
  if (unbounded) {
    sol.status = LpStatus::kUnbounded;
    return sol;
  }

  for (std::size_t r = 0; r < t.R; ++r)
    if (t.basis[r] < t.n) sol.x[cn.col_map[t.basis[r]]] = t.rhs[r];
  sol.value = 0;
  for (std::size_t j = 0; j < lp.num_vars(); ++j) sol.value += lp.objective[j] * sol.x[j];
  sol.feas_violation = max_violation(lp, sol.x);

  // duals: solve B^T y = c_B on the initial equality system
  Eigen::MatrixXd B(t.R, t.R);
  Eigen::VectorXd cb(t.R);
  for (std::size_t r = 0; r < t.R; ++r) {
    cb(static_cast<Eigen::Index>(r)) = cost2[t.basis[r]];
    for (std::size_t k = 0; k < t.R; ++k)
      B(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(r)) =
          t.init_cols[k][t.basis[r]];
  }
  Eigen::VectorXd y = B.transpose().fullPivLu().solve(cb);
  sol.dual.assign(cn.n_leq, 0.0);
  for (std::size_t r = 0; r < cn.n_leq; ++r) {
    double v = y(static_cast<Eigen::Index>(r));
    sol.dual[r] = t.negated[r] ? -v : v;
  }
  sol.status = LpStatus::kOptimal;
  return sol;
}

double max_violation(const LpProblem& lp, const std::vector<double>& x) {
  double worst = 0;
  for (std::size_t r = 0; r < lp.A.size(); ++r) {
    double lhs = 0;
    for (std::size_t j = 0; j < lp.num_vars(); ++j) lhs += lp.A[r][j] * x[j];
    worst = std::max(worst, lhs - lp.rhs[r]);
  }
  for (std::size_t r = 0; r < lp.geq_A.size(); ++r) {
    double lhs = 0;
    for (std::size_t j = 0; j < lp.num_vars(); ++j) lhs += lp.geq_A[r][j] * x[j];
    worst = std::max(worst, lp.geq_rhs[r] - lhs);
  }
  for (std::size_t j = 0; j < lp.num_vars(); ++j) worst = std::max(worst, -x[j]);
  return worst;
}

LpSolution brute_force_vertices(const LpProblem& lp) {
  detail::Canonical cn = detail::canonicalize(lp);
  if (cn.n + cn.D.size() > 12)
    throw std::invalid_argument("brute force size guard: vars + rows must be <= 12");
  constexpr double kBox = 1e7;
  std::size_t n = cn.n;
  // constraint list: D rows, box rows x_j <= kBox, then x_j >= 0
  std::size_t total = cn.D.size() + 2 * n;
  auto row_of = [&](std::size_t k, std::vector<double>& row, double& rv) {
    row.assign(n, 0.0);
    if (k < cn.D.size()) {
      row = cn.D[k];
      rv = cn.d[k];
    } else if (k < cn.D.size() + n) {
      row[k - cn.D.size()] = 1.0;
      rv = kBox;
    } else {
      row[k - cn.D.size() - n] = -1.0;
      rv = 0.0;
    }
  };
  LpSolution best;
  best.status = LpStatus::kInfeasible;
  best.x.assign(lp.num_vars(), 0.0);
  double best_val = -std::numeric_limits<double>::infinity();
  bool box_active_at_best = false;

  // iterate all n-subsets of {0..total-1}
  std::vector<std::size_t> sel(n);
  for (std::size_t j = 0; j < n; ++j) sel[j] = j;
  auto advance = [&]() -> bool {
    std::size_t j = n;
    while (j > 0) {
      --j;
      if (sel[j] < total - n + j) {
        ++sel[j];
        for (std::size_t k = j + 1; k < n; ++k) sel[k] = sel[k - 1] + 1;
        return true;
      }
    }
    return false;
  };
  if (n == 0) {
    // only the origin; feasible iff all d >= 0
    bool ok = true;
    for (double di : cn.d)
      if (di < -kTol) ok = false;
    best.status = ok ? LpStatus::kOptimal : LpStatus::kInfeasible;
    best.value = 0;
    return best;
  }
  while (true) {
    Eigen::MatrixXd M(n, n);
    Eigen::VectorXd v(n);
    std::vector<double> row;
    double rv;
    for (std::size_t j = 0; j < n; ++j) {
      row_of(sel[j], row, rv);
      for (std::size_t k = 0; k < n; ++k)
        M(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = row[k];
      v(static_cast<Eigen::Index>(j)) = rv;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    if (lu.isInvertible()) {
      Eigen::VectorXd xv = lu.solve(v);
      bool feas = true;
      for (std::size_t k = 0; k < total && feas; ++k) {
        row_of(k, row, rv);
        double lhs = 0;
        for (std::size_t j = 0; j < n; ++j) lhs += row[j] * xv(static_cast<Eigen::Index>(j));
        if (lhs > rv + kTol * (1.0 + std::fabs(rv))) feas = false;
      }
      if (feas) {
        double val = 0;
        for (std::size_t j = 0; j < n; ++j) val += cn.c[j] * xv(static_cast<Eigen::Index>(j));
        if (best.status == LpStatus::kInfeasible || val > best_val + 1e-12) {
          best_val = val;
          best.status = LpStatus::kOptimal;
          std::fill(best.x.begin(), best.x.end(), 0.0);
          box_active_at_best = false;
          for (std::size_t j = 0; j < n; ++j) {
            best.x[cn.col_map[j]] = xv(static_cast<Eigen::Index>(j));
            if (xv(static_cast<Eigen::Index>(j)) > kBox * (1.0 - 1e-9))
              box_active_at_best = true;
          }
        }
      }
    }
    if (!advance()) break;
  }
  if (best.status == LpStatus::kOptimal) {
    if (box_active_at_best) {
      best.status = LpStatus::kUnbounded;
      return best;
    }
    best.value = best_val;
    best.feas_violation = max_violation(lp, best.x);
  }
  return best;
}

LpProblem parse_lp_json(const std::string& text) {
  Json j = parse_json_text(text, "lp");
  const std::string path = "lp";
  check_keys(j, path, {"objective", "A", "rhs", "pins", "geq_A", "geq_rhs"});
  LpProblem lp;
  lp.objective = get_number_array(j, path, "objective");
  const Json& aj = require_field(j, path, "A");
  if (!aj.is_array()) throw SchemaError("expected array at lp.A");
  for (std::size_t r = 0; r < aj.size(); ++r) {
    if (!aj[r].is_array()) throw SchemaError("expected array at lp.A[" + std::to_string(r) + "]");
    lp.A.push_back(aj[r].get<std::vector<double>>());
  }
  lp.rhs = get_number_array(j, path, "rhs");
  if (j.contains("pins")) {
    const Json& pj = j["pins"];
    if (!pj.is_array()) throw SchemaError("expected array at lp.pins");
    for (const auto& p : pj) lp.pins.push_back(p.get<std::size_t>());
  }
  if (j.contains("geq_A")) {
    const Json& gj = j["geq_A"];
    if (!gj.is_array()) throw SchemaError("expected array at lp.geq_A");
    for (std::size_t r = 0; r < gj.size(); ++r)
      lp.geq_A.push_back(gj[r].get<std::vector<double>>());
    lp.geq_rhs = get_number_array(j, path, "geq_rhs");
  }
  lp.validate();
  return lp;
}

std::string lp_solution_to_json(const LpSolution& s) {
  Json j;
  j["status"] = to_string(s.status);
  j["value"] = s.value;
  j["x"] = s.x;
  j["dual"] = s.dual;
  j["feas_violation"] = s.feas_violation;
  return j.dump(2);
}

}  // namespace bwk
