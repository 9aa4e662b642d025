#include "bwk/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>

#include "bwk/json_io.hpp"
#include "bwk/rng.hpp"

namespace bwk {

namespace {

double draw_in(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

}  // namespace

Instance generate_planted(const PlantedSpec& spec) {
  if (spec.m < 2) throw std::invalid_argument("planted instances need at least two arms");
  if (spec.d_user < 1) throw std::invalid_argument("planted instances need at least one user resource");
  if (spec.m < spec.d_user + 1) {
    throw std::invalid_argument("planted instances need m >= d_user + 1 to support a square optimum");
  }
  if (!(spec.margin > 0.0)) throw std::invalid_argument("margin must be positive");
  if (!(spec.budget_rate > 0.0 && spec.budget_rate < 1.0)) {
    throw std::invalid_argument("budget rate must lie in (0,1)");
  }
  if (spec.T < 4) throw std::invalid_argument("horizon too short");
  if (spec.max_attempts < 1) throw std::invalid_argument("max_attempts must be positive");

  const std::size_t m = spec.m;
  const std::size_t d = spec.d_user + 1;
  const std::size_t s = d;  // planted support size
  const double b = spec.budget_rate;

  for (int attempt = 0; attempt < spec.max_attempts; ++attempt) {
    Rng rng(mix_seed(spec.seed, static_cast<std::uint64_t>(attempt), 0xB4D6E7, 0));
    std::vector<double> xi_hat(s);
    double tot = 0.0;
    for (double& v : xi_hat) {
      v = draw_in(rng, 0.5, 1.5);
      tot += v;
    }
    for (double& v : xi_hat) v /= tot;

    std::vector<double> rewards(m);
    for (std::size_t i = 0; i < m; ++i) {
      rewards[i] = i < s ? draw_in(rng, 0.6, 0.9) : draw_in(rng, 0.05, 0.2);
    }

    std::vector<std::vector<double>> user_cost(spec.d_user, std::vector<double>(m, 0.0));
    bool ok = true;
    for (std::size_t j = 0; j < spec.d_user && ok; ++j) {
      std::vector<double> raw(s);
      double dot = 0.0;
      for (std::size_t i = 0; i < s; ++i) {
        raw[i] = draw_in(rng, 0.3, 0.7);
        dot += raw[i] * xi_hat[i];
      }
      double f = b / dot;
      for (std::size_t i = 0; i < s; ++i) {
        user_cost[j][i] = raw[i] * f;
        if (user_cost[j][i] > 1.0) ok = false;
      }
      for (std::size_t i = s; i < m; ++i) user_cost[j][i] = draw_in(rng, 0.5, 0.9);
    }
    if (!ok) continue;

    std::vector<Arm> arms(m);
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<double> cost(spec.d_user);
      for (std::size_t j = 0; j < spec.d_user; ++j) cost[j] = user_cost[j][i];
      Atom hi{rewards[i], 1.0, cost};
      Atom lo{1.0 - rewards[i], 0.0, cost};
      arms[i].atoms = {hi, lo};
    }
    Instance inst = augment_time_resource(m, spec.d_user, spec.T, b * static_cast<double>(spec.T), arms);
    GroundTruth gt = compute_ground_truth(inst);
    if (gt.nondegenerate && gt.delta >= spec.margin && gt.chi > 0.0 && gt.sigma > 0.0) {
      return inst;
    }
  }
  throw std::runtime_error("could not plant an instance with the requested margin");
}

Decomposition regret_decomposition(const RunTrace& trace, const Instance& inst,
                                   const GroundTruth& gt) {
  Decomposition out;
  std::vector<double> r = inst.reward_means();
  std::vector<std::vector<double>> C = inst.cost_means();
  out.pseudo_regret = gt.opt_lp - trace.pseudo_reward;
  double sub = 0.0;
  std::vector<double> used(inst.d, 0.0);
  for (std::size_t i = 0; i < inst.m; ++i) {
    double priced = 0.0;
    for (std::size_t j = 0; j < inst.d; ++j) priced += C[j][i] * gt.eta_star[j];
    sub += static_cast<double>(trace.pulls[i]) * (priced - r[i]);
    for (std::size_t j = 0; j < inst.d; ++j)
      used[j] += static_cast<double>(trace.pulls[i]) * C[j][i];
  }
  double left = 0.0;
  for (std::size_t j = 0; j < inst.d; ++j) left += gt.eta_star[j] * (inst.B[j] - used[j]);
  out.suboptimal_term = sub;
  out.leftover_term = left;
  return out;
}

std::string sweep_label(const AlgoSpec& spec) {
  if (!spec.label.empty()) return spec.label;
  std::string s = to_string(spec.algo);
  if (spec.cfg.approx_lp) s += "+approx";
  return s;
}

namespace {

struct TCache {
  Instance inst;
  bool gt_ok = false;
  GroundTruth gt;
  std::string gt_err;
};

struct Cell {
  std::size_t algo_idx = 0;
  std::size_t t_idx = 0;
  std::uint64_t rep = 0;
};

unsigned thread_count(std::size_t cells) {
  unsigned n = 0;
  if (const char* env = std::getenv("BWK_THREADS")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end && *end == '\0' && v >= 1 && v <= 256) n = static_cast<unsigned>(v);
  }
  if (n == 0) {
    n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
  }
  if (cells < n) n = static_cast<unsigned>(cells == 0 ? 1 : cells);
  return n;
}

bool same_sets(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  return a == b;  // both are kept sorted ascending
}

}  // namespace

std::vector<RegretRecord> run_sweep(const SweepPlan& plan) {
  if (plan.algos.empty()) throw std::invalid_argument("sweep needs at least one algorithm");
  if (plan.t_grid.empty()) throw std::invalid_argument("sweep needs a horizon grid");
  if (plan.replications == 0) throw std::invalid_argument("sweep needs at least one replication");

  std::vector<std::string> labels(plan.algos.size());
  std::map<std::string, int> seen;
  for (std::size_t i = 0; i < plan.algos.size(); ++i) {
    std::string base = sweep_label(plan.algos[i]);
    int& count = seen[base];
    ++count;
    labels[i] = count == 1 ? base : base + "#" + std::to_string(count);
  }

  std::vector<TCache> caches(plan.t_grid.size());
  for (std::size_t ti = 0; ti < plan.t_grid.size(); ++ti) {
    caches[ti].inst = with_horizon(plan.base, plan.t_grid[ti]);
    try {
      caches[ti].gt = compute_ground_truth(caches[ti].inst);
      caches[ti].gt_ok = true;
    } catch (const std::exception& e) {
      caches[ti].gt_err = e.what();
    }
  }

  std::vector<Cell> cells;
  for (std::size_t ai = 0; ai < plan.algos.size(); ++ai) {
    for (std::size_t ti = 0; ti < plan.t_grid.size(); ++ti) {
      for (std::uint64_t rep = 0; rep < plan.replications; ++rep) {
        cells.push_back(Cell{ai, ti, rep});
      }
    }
  }
  std::vector<RegretRecord> rows(cells.size());

  auto run_cell = [&](std::size_t idx) {
    const Cell& cell = cells[idx];
    const AlgoSpec& spec = plan.algos[cell.algo_idx];
    const TCache& cache = caches[cell.t_idx];
    const Instance& inst = cache.inst;
    RegretRecord rec;
    rec.algo = labels[cell.algo_idx];
    rec.T = inst.T;
    rec.B = inst.B[0];
    rec.m = inst.m;
    rec.d = inst.d;
    rec.replication = cell.rep;
    rec.seed = mix_seed(plan.seed, cell.algo_idx, inst.T, cell.rep);
    bool identifies = algo_identifies(spec.algo);
    rec.identification_correct = identifies ? 0 : -1;
    try {
      if (!cache.gt_ok) throw std::runtime_error(cache.gt_err);
      RunConfig cfg = spec.cfg;
      cfg.seed = rec.seed;
      RunTrace trace;
      if (identifies) {
        if (!cfg.supply_ground_truth_params) {
          throw std::invalid_argument(
              "identification runs derive their constants from the exact planning solution");
        }
        if (!cache.gt.nondegenerate) {
          throw std::invalid_argument(
              "this algorithm requires a nondegenerate instance: the planning problem must have "
              "a unique optimum with as many supported arms as binding resources");
        }
        SidConstants sc = sid_constants(cache.gt, inst);
        double eps = cfg.eps_lp > 0.0 ? cfg.eps_lp : lp_accuracy_bound(cache.gt, inst);
        trace = spec.algo == AlgoKind::kAlg2Quantum ? run_alg2_quantum(inst, cfg, sc, eps)
                                                    : run_alg2_classical(inst, cfg, sc, eps);
      } else {
        trace = spec.algo == AlgoKind::kAlg1Quantum ? run_alg1_quantum(inst, cfg)
                                                    : run_alg1_classical(inst, cfg);
      }
      Decomposition dec = regret_decomposition(trace, inst, cache.gt);
      rec.pseudo_regret = dec.pseudo_regret;
      rec.realized_regret = cache.gt.opt_lp - trace.realized_reward;
      rec.tau = trace.tau;
      rec.phase1_rounds = trace.phase1_rounds;
      if (identifies) {
        bool correct = trace.identification_done &&
                       same_sets(trace.support_arms, cache.gt.support.arms_in) &&
                       same_sets(trace.slack_rows, cache.gt.support.rows_slack);
        rec.identification_correct = correct ? 1 : 0;
      }
      std::uint64_t pulls = 0;
      for (std::uint64_t p : trace.pulls) pulls += p;
      rec.pulls = pulls;
      rec.qmc_query_total = trace.qmc_queries;
      rec.lp_solve_count = trace.lp_solves;
      rec.modeled_quantum_cost = trace.modeled_quantum_cost;
      rec.modeled_classical_cost = trace.modeled_classical_cost;
      rec.suboptimal_term = dec.suboptimal_term;
      rec.leftover_term = dec.leftover_term;
      rec.status = trace.stop_reason == "phase1-budget-exhausted" ? "phase1-budget-exhausted"
                                                                  : "completed";
    } catch (const std::exception& e) {
      rec.status = sanitize(e.what());
    }
    rows[idx] = std::move(rec);
  };

  unsigned workers = thread_count(cells.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&]() {
        while (true) {
          std::size_t i = next.fetch_add(1);
          if (i >= cells.size()) break;
          run_cell(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  return rows;
}

void write_runs_csv(const std::string& path, const std::vector<RegretRecord>& rows) {
  std::string out =
      "algo,T,B,m,d,replication,seed,pseudo_regret,realized_regret,tau,phase1_rounds,"
      "identification_correct,pulls,qmc_query_total,lp_solve_count,modeled_quantum_cost,"
      "modeled_classical_cost,suboptimal_term,leftover_term,status\n";
  for (const auto& r : rows) {
    out += r.algo;
    out += ',' + std::to_string(r.T);
    out += ',' + fmt(r.B);
    out += ',' + std::to_string(r.m);
    out += ',' + std::to_string(r.d);
    out += ',' + std::to_string(r.replication);
    out += ',' + std::to_string(r.seed);
    out += ',' + fmt(r.pseudo_regret);
    out += ',' + fmt(r.realized_regret);
    out += ',' + std::to_string(r.tau);
    out += ',' + std::to_string(r.phase1_rounds);
    out += ',' + std::to_string(r.identification_correct);
    out += ',' + std::to_string(r.pulls);
    out += ',' + std::to_string(r.qmc_query_total);
    out += ',' + std::to_string(r.lp_solve_count);
    out += ',' + fmt(r.modeled_quantum_cost);
    out += ',' + fmt(r.modeled_classical_cost);
    out += ',' + fmt(r.suboptimal_term);
    out += ',' + fmt(r.leftover_term);
    out += ',' + r.status;
    out += '\n';
  }
  write_file_atomic(path, out);
}

void write_summary_csv(const std::string& path, const std::vector<RegretRecord>& rows) {
  struct Agg {
    std::vector<double> pseudo, realized, tau, qmc, mqc, mcc;
  };
  std::vector<std::pair<std::pair<std::string, std::uint64_t>, Agg>> groups;
  auto find_group = [&](const std::string& algo, std::uint64_t T) -> Agg& {
    for (auto& g : groups) {
      if (g.first.first == algo && g.first.second == T) return g.second;
    }
    groups.push_back({{algo, T}, Agg{}});
    return groups.back().second;
  };
  for (const auto& r : rows) {
    Agg& g = find_group(r.algo, r.T);
    if (r.status != "completed" && r.status != "phase1-budget-exhausted") continue;
    g.pseudo.push_back(r.pseudo_regret);
    g.realized.push_back(r.realized_regret);
    g.tau.push_back(static_cast<double>(r.tau));
    g.qmc.push_back(static_cast<double>(r.qmc_query_total));
    g.mqc.push_back(r.modeled_quantum_cost);
    g.mcc.push_back(r.modeled_classical_cost);
  }
  auto mean = [](const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  auto se = [&](const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double mu = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - mu) * (x - mu);
    double var = ss / static_cast<double>(v.size() - 1);
    return std::sqrt(var / static_cast<double>(v.size()));
  };
  std::string out =
      "algo,T,n,pseudo_regret_mean,pseudo_regret_se,realized_regret_mean,realized_regret_se,"
      "tau_mean,qmc_query_total_mean,modeled_quantum_cost_mean,modeled_classical_cost_mean\n";
  for (const auto& g : groups) {
    const Agg& a = g.second;
    out += g.first.first;
    out += ',' + std::to_string(g.first.second);
    out += ',' + std::to_string(a.pseudo.size());
    out += ',' + fmt(mean(a.pseudo));
    out += ',' + fmt(se(a.pseudo));
    out += ',' + fmt(mean(a.realized));
    out += ',' + fmt(se(a.realized));
    out += ',' + fmt(mean(a.tau));
    out += ',' + fmt(mean(a.qmc));
    out += ',' + fmt(mean(a.mqc));
    out += ',' + fmt(mean(a.mcc));
    out += '\n';
  }
  write_file_atomic(path, out);
}

double fit_loglog_slope(const std::vector<double>& t_values, const std::vector<double>& y_values) {
  if (t_values.size() != y_values.size()) {
    throw std::invalid_argument("log-log fit needs matching vectors");
  }
  std::vector<double> xs, zs;
  for (std::size_t i = 0; i < t_values.size(); ++i) {
    if (t_values[i] > 0.0 && y_values[i] > 0.0) {
      xs.push_back(std::log(t_values[i]));
      zs.push_back(std::log(y_values[i]));
    }
  }
  if (xs.size() < 3) throw std::invalid_argument("log-log fit needs at least three positive points");
  double xm = 0.0, zm = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xm += xs[i];
    zm += zs[i];
  }
  xm /= static_cast<double>(xs.size());
  zm /= static_cast<double>(xs.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    num += (xs[i] - xm) * (zs[i] - zm);
    den += (xs[i] - xm) * (xs[i] - xm);
  }
  if (den <= 0.0) throw std::invalid_argument("log-log fit needs varying horizons");
  return num / den;
}

}  // namespace bwk
