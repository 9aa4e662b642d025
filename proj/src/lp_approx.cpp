#include "bwk/lp_approx.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace bwk {

namespace {

double max_row_payoff(const GameMatrix& g, const std::vector<double>& col) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.rows; ++i) {
    double v = 0.0;
    for (std::size_t j = 0; j < g.cols; ++j) v += g.at(i, j) * col[j];
    best = std::max(best, v);
  }
  return best;
}

double min_col_payoff(const GameMatrix& g, const std::vector<double>& row) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < g.cols; ++j) {
    double v = 0.0;
    for (std::size_t i = 0; i < g.rows; ++i) v += g.at(i, j) * row[i];
    best = std::min(best, v);
  }
  return best;
}

void normalize(std::vector<double>& p) {
  double s = 0.0;
  for (double v : p) s += v;
  if (s <= 0.0) {
    double u = 1.0 / static_cast<double>(p.size());
    for (double& v : p) v = u;
    return;
  }
  for (double& v : p) v /= s;
}

}  // namespace

std::uint64_t mw_iteration_cap(std::size_t rows, std::size_t cols, double eps_game) {
  if (eps_game <= 0.0) throw std::invalid_argument("eps_game must be positive");
  double n = static_cast<double>(rows + cols);
  double cap = std::ceil(16.0 * std::log(n) / (eps_game * eps_game));
  if (cap < 1.0) cap = 1.0;
  if (cap > 9e18) return static_cast<std::uint64_t>(9e18);
  return static_cast<std::uint64_t>(cap);
}

GameSolution solve_zero_sum_mw(const GameMatrix& g, double eps_game, const MwOptions& opt) {
  if (g.rows == 0 || g.cols == 0) throw std::invalid_argument("empty game");
  if (eps_game <= 0.0) throw std::invalid_argument("eps_game must be positive");
  for (double v : g.a) {
    if (!(v >= -1.0 - 1e-12 && v <= 1.0 + 1e-12)) {
      throw std::invalid_argument("game payoffs must lie in [-1,1]");
    }
  }
  const double eta = eps_game / 2.0;
  const std::uint64_t cap = mw_iteration_cap(g.rows, g.cols, eps_game);

  std::vector<double> wr(g.rows, 1.0), wc(g.cols, 1.0);
  std::vector<double> pr(g.rows), pc(g.cols);
  std::vector<double> sum_r(g.rows, 0.0), sum_c(g.cols, 0.0);
  std::vector<double> avg_r(g.rows), avg_c(g.cols);

  GameSolution out;
  std::uint64_t it = 0;
  while (it < cap) {
    ++it;
    double sr = 0.0, sc = 0.0;
    for (double v : wr) sr += v;
    for (double v : wc) sc += v;
    for (std::size_t i = 0; i < g.rows; ++i) pr[i] = wr[i] / sr;
    for (std::size_t j = 0; j < g.cols; ++j) pc[j] = wc[j] / sc;
    for (std::size_t i = 0; i < g.rows; ++i) sum_r[i] += pr[i];
    for (std::size_t j = 0; j < g.cols; ++j) sum_c[j] += pc[j];

    // full-information payoffs under the current mixed strategies
    for (std::size_t i = 0; i < g.rows; ++i) {
      double gain = 0.0;
      for (std::size_t j = 0; j < g.cols; ++j) gain += g.at(i, j) * pc[j];
      wr[i] *= std::exp(eta * gain);
    }
    for (std::size_t j = 0; j < g.cols; ++j) {
      double loss = 0.0;
      for (std::size_t i = 0; i < g.rows; ++i) loss += g.at(i, j) * pr[i];
      wc[j] *= std::exp(-eta * loss);
    }
    if (it % 128 == 0) {
      double mr = *std::max_element(wr.begin(), wr.end());
      double mc = *std::max_element(wc.begin(), wc.end());
      for (double& v : wr) v /= mr;
      for (double& v : wc) v /= mc;
    }

    bool check = opt.check_every != 0 && (it % opt.check_every == 0 || it == cap);
    if (check) {
      for (std::size_t i = 0; i < g.rows; ++i) avg_r[i] = sum_r[i] / static_cast<double>(it);
      for (std::size_t j = 0; j < g.cols; ++j) avg_c[j] = sum_c[j] / static_cast<double>(it);
      double gap = max_row_payoff(g, avg_c) - min_col_payoff(g, avg_r);
      if (gap <= eps_game) break;
    }
  }

  for (std::size_t i = 0; i < g.rows; ++i) avg_r[i] = sum_r[i] / static_cast<double>(it);
  for (std::size_t j = 0; j < g.cols; ++j) avg_c[j] = sum_c[j] / static_cast<double>(it);
  normalize(avg_r);
  normalize(avg_c);
  out.row_strategy = avg_r;
  out.col_strategy = avg_c;
  out.iters = it;
  double hi = max_row_payoff(g, avg_c);
  double lo = min_col_payoff(g, avg_r);
  out.gap = hi - lo;
  double v = 0.0;
  for (std::size_t i = 0; i < g.rows; ++i) {
    double rowv = 0.0;
    for (std::size_t j = 0; j < g.cols; ++j) rowv += g.at(i, j) * avg_c[j];
    v += avg_r[i] * rowv;
  }
  out.value = v;
  return out;
}

GameSolution solve_zero_sum_exact(const GameMatrix& g) {
  if (g.rows == 0 || g.cols == 0) throw std::invalid_argument("empty game");
  // max (vm - vp) over y >= 0, vp, vm >= 0 with A y - vp + vm <= 0, sum y = 1;
  // the optimum has vp - vm equal to the game value
  LpProblem lp;
  std::size_t n = g.cols + 2;
  lp.objective.assign(n, 0.0);
  lp.objective[g.cols] = -1.0;
  lp.objective[g.cols + 1] = 1.0;
  for (std::size_t i = 0; i < g.rows; ++i) {
    std::vector<double> row(n, 0.0);
    for (std::size_t j = 0; j < g.cols; ++j) row[j] = g.at(i, j);
    row[g.cols] = -1.0;
    row[g.cols + 1] = 1.0;
    lp.A.push_back(std::move(row));
    lp.rhs.push_back(0.0);
  }
  std::vector<double> ones(n, 0.0), neg(n, 0.0);
  for (std::size_t j = 0; j < g.cols; ++j) {
    ones[j] = 1.0;
    neg[j] = -1.0;
  }
  lp.A.push_back(ones);
  lp.rhs.push_back(1.0);
  lp.A.push_back(neg);
  lp.rhs.push_back(-1.0);

  LpSolution sol = solve_exact(lp);
  if (sol.status != LpStatus::kOptimal) throw std::runtime_error("game value solve failed");

  GameSolution out;
  out.col_strategy.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(g.cols));
  for (double& v : out.col_strategy) v = std::max(0.0, v);
  normalize(out.col_strategy);
  out.value = -sol.value;
  out.row_strategy.assign(g.rows, 0.0);
  if (sol.dual.size() >= g.rows) {
    for (std::size_t i = 0; i < g.rows; ++i) out.row_strategy[i] = std::max(0.0, sol.dual[i]);
  }
  normalize(out.row_strategy);
  out.gap = max_row_payoff(g, out.col_strategy) - min_col_payoff(g, out.row_strategy);
  out.iters = 0;
  return out;
}

LpProblem scale_rhs(const LpProblem& lp, double factor) {
  if (!(factor > 0.0)) throw std::invalid_argument("scale factor must be positive");
  LpProblem out = lp;
  for (double& v : out.rhs) v /= factor;
  for (double& v : out.geq_rhs) v /= factor;
  auto check = [](double v, const char* what) {
    if (!(v >= -1.0 - 1e-12 && v <= 1.0 + 1e-12)) {
      throw std::invalid_argument(std::string("coefficients outside [-1,1] after scaling: ") + what);
    }
  };
  for (double v : out.objective) check(v, "objective");
  for (const auto& row : out.A)
    for (double v : row) check(v, "constraint matrix");
  for (double v : out.rhs) check(v, "rhs");
  for (const auto& row : out.geq_A)
    for (double v : row) check(v, "lower-bound matrix");
  for (double v : out.geq_rhs) check(v, "lower-bound rhs");
  return out;
}

double scale_factor_for(const LpProblem& lp) {
  lp.validate();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < lp.A.size(); ++k) {
    double mn = std::numeric_limits<double>::infinity();
    for (double v : lp.A[k]) mn = std::min(mn, v);
    if (mn > 0.0 && lp.rhs[k] > 0.0) best = std::min(best, lp.rhs[k] / mn);
  }
  if (!std::isfinite(best)) {
    throw std::invalid_argument("cannot derive a scale: need a constraint row with all-positive coefficients and positive rhs");
  }
  // a looser row may carry a larger rhs than the binding ratio; grow the
  // divisor until every right-hand side lands in [-1,1]
  for (double v : lp.rhs) best = std::max(best, std::fabs(v));
  for (double v : lp.geq_rhs) best = std::max(best, std::fabs(v));
  return best;
}

GameMatrix build_game(const LpProblem& scaled, double alpha) {
  scaled.validate();
  if (!(alpha >= -1.0 - 1e-12 && alpha <= 1.0 + 1e-12)) {
    throw std::invalid_argument("alpha must lie in [-1,1]");
  }
  detail::Canonical cn = detail::canonicalize(scaled);
  auto check = [](double v) {
    if (!(v >= -1.0 - 1e-12 && v <= 1.0 + 1e-12)) {
      throw std::invalid_argument("game construction needs coefficients in [-1,1]");
    }
  };
  for (double v : cn.c) check(v);
  for (const auto& row : cn.D)
    for (double v : row) check(v);
  for (double v : cn.d) check(v);

  GameMatrix g;
  g.rows = cn.D.size() + 3;
  g.cols = cn.n + 2;
  g.a.assign(g.rows * g.cols, 0.0);
  std::size_t w = cn.n + 1;  // homogenizing coordinate
  for (std::size_t j = 0; j < cn.n; ++j) {
    g.at(0, j) = 1.0;
    g.at(1, j) = -1.0;
  }
  g.at(0, cn.n) = 1.0;
  g.at(0, w) = -1.0;
  g.at(1, cn.n) = 1.0;
  g.at(1, w) = 1.0;
  for (std::size_t j = 0; j < cn.n; ++j) g.at(2, j) = -cn.c[j];
  g.at(2, w) = alpha;
  for (std::size_t k = 0; k < cn.D.size(); ++k) {
    for (std::size_t j = 0; j < cn.n; ++j) g.at(3 + k, j) = cn.D[k][j];
    g.at(3 + k, w) = -cn.d[k];
  }
  return g;
}

ApproxSolution solve_approx(const LpProblem& scaled, double eps, const ApproxOptions& opt) {
  scaled.validate();
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");

  // spare zero column so a feasible point with slack mass always exists
  LpProblem aug = scaled;
  std::size_t n0 = scaled.num_vars();
  aug.objective.push_back(0.0);
  for (auto& row : aug.A) row.push_back(0.0);
  for (auto& row : aug.geq_A) row.push_back(0.0);

  detail::Canonical cn = detail::canonicalize(aug);

  double dual_bound = opt.dual_bound;
  if (dual_bound <= 0.0) {
    double mn = std::numeric_limits<double>::infinity();
    for (double v : cn.d) mn = std::min(mn, v);
    if (!(mn > 0.0)) {
      throw std::invalid_argument("dual bound underivable: pass one explicitly or provide strictly positive rhs");
    }
    dual_bound = 1.0 + 1.0 / mn;
  }
  const double kR = 1.0;

  ApproxSolution out;
  out.eps = eps;
  out.dual_bound = dual_bound;

  double eps_game = eps / (6.0 * kR * (dual_bound + 1.0));
  GameMatrix game = build_game(aug, 0.0);
  const std::size_t wcol = game.cols - 1;

  auto run_pass = [&](double epsg, ApproxSolution& res) -> bool {
    res.eps_game = epsg;
    bool use_mw;
    switch (opt.engine) {
      case ApproxEngine::kMw:
        use_mw = true;
        break;
      case ApproxEngine::kExactGame:
        use_mw = false;
        break;
      default:
        use_mw = mw_iteration_cap(game.rows, game.cols, epsg) <= opt.mw_iter_budget;
        break;
    }
    res.used_mw = use_mw;

    std::vector<double> cert;
    auto certify = [&](double alpha) -> bool {
      game.at(2, wcol) = alpha;
      GameSolution gs = use_mw ? solve_zero_sum_mw(game, epsg) : solve_zero_sum_exact(game);
      ++res.game_solves;
      res.mw_iters += gs.iters;
      double worst = max_row_payoff(game, gs.col_strategy);
      if (worst <= epsg + 1e-12) {
        cert = gs.col_strategy;
        return true;
      }
      return false;
    };

    double lo = -kR, hi = kR;
    if (!certify(lo)) {
      res.status = LpStatus::kInfeasible;
      return true;  // settled: no threshold is certifiable
    }
    while (hi - lo > eps / 2.0) {
      double mid = 0.5 * (lo + hi);
      if (certify(mid)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }

    double w = cert[wcol];
    if (w < epsg) return false;  // degenerate certificate, caller retries tighter
    std::vector<double> x(n0, 0.0);
    for (std::size_t k = 0; k < cn.n; ++k) {
      if (cn.col_map[k] < n0) x[cn.col_map[k]] = std::max(0.0, cert[k] / w);
    }
    double value = 0.0;
    for (std::size_t j = 0; j < n0; ++j) value += scaled.objective[j] * x[j];
    double viol = max_violation(scaled, x);
    if (viol > eps + 1e-12) return false;
    res.status = LpStatus::kOptimal;
    res.x = std::move(x);
    res.value = value;
    res.max_violation = viol;
    return true;
  };

  ApproxSolution pass = out;
  if (run_pass(eps_game, pass)) {
    pass.eps = eps;
    pass.dual_bound = dual_bound;
    return pass;
  }
  ApproxSolution retry = out;
  retry.game_solves = pass.game_solves;
  retry.mw_iters = pass.mw_iters;
  if (run_pass(eps_game / 2.0, retry)) {
    retry.eps = eps;
    retry.dual_bound = dual_bound;
    return retry;
  }
  retry.approx_failed = true;
  retry.eps = eps;
  retry.dual_bound = dual_bound;
  return retry;
}

double modeled_cost(SolveKind kind, std::size_t m, std::size_t d, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  double md = static_cast<double>(m + d);
  switch (kind) {
    case SolveKind::kQuantumApprox:
      return std::sqrt(md) * std::pow(eps, -2.5);
    case SolveKind::kClassicalApprox:
      return md * std::pow(eps, -2.0);
    case SolveKind::kClassicalExact:
    default:
      return std::pow(static_cast<double>(std::max(m, d)), 2.372);
  }
}

}  // namespace bwk
