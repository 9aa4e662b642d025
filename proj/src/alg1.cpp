#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bwk/algos.hpp"
#include "run_common.hpp"

namespace bwk {

std::string to_string(AlgoKind k) {
  switch (k) {
    case AlgoKind::kAlg1Quantum:
      return "alg1-quantum";
    case AlgoKind::kAlg1Classical:
      return "alg1-classical";
    case AlgoKind::kAlg2Quantum:
      return "alg2-quantum";
    case AlgoKind::kAlg2Classical:
    default:
      return "alg2-classical";
  }
}

AlgoKind algo_from_string(const std::string& s) {
  if (s == "alg1-quantum") return AlgoKind::kAlg1Quantum;
  if (s == "alg1-classical") return AlgoKind::kAlg1Classical;
  if (s == "alg2-quantum") return AlgoKind::kAlg2Quantum;
  if (s == "alg2-classical") return AlgoKind::kAlg2Classical;
  throw std::invalid_argument("unknown algorithm: " + s);
}

bool algo_is_quantum(AlgoKind k) {
  return k == AlgoKind::kAlg1Quantum || k == AlgoKind::kAlg2Quantum;
}

bool algo_identifies(AlgoKind k) {
  return k == AlgoKind::kAlg2Quantum || k == AlgoKind::kAlg2Classical;
}

std::string to_string(Backend b) {
  switch (b) {
    case Backend::kIdealizedQ:
      return "idealized";
    case Backend::kAeAnalytic:
      return "ae-analytic";
    case Backend::kClassical:
    default:
      return "classical";
  }
}

Backend backend_from_string(const std::string& s) {
  if (s == "idealized") return Backend::kIdealizedQ;
  if (s == "ae-analytic") return Backend::kAeAnalytic;
  if (s == "classical") return Backend::kClassical;
  throw std::invalid_argument("unknown estimator backend: " + s);
}

namespace {

using detail_run::clamp01;
using detail_run::Sim;

QmcBackend qmc_backend_for(Backend b) {
  return b == Backend::kAeAnalytic ? QmcBackend::kAePhase : QmcBackend::kIdealized;
}

// largest index of the reward-to-priced-cost ratio; a zero denominator with
// positive reward dominates everything, ties go to the lowest index
std::size_t select_arm(const std::vector<double>& r_up, const std::vector<std::vector<double>>& c_lo,
                       const std::vector<double>& v) {
  std::size_t m = r_up.size();
  std::size_t d = v.size();
  std::size_t best = 0;
  double best_score = -1.0;
  for (std::size_t i = 0; i < m; ++i) {
    double denom = 0.0;
    for (std::size_t j = 0; j < d; ++j) denom += std::max(0.0, c_lo[j][i]) * v[j];
    double score;
    if (denom <= 0.0) {
      score = r_up[i] > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    } else {
      score = r_up[i] / denom;
    }
    if (score > best_score) {
      best_score = score;
      best = i;
    }
  }
  return best;
}

RunTrace run_alg1_impl(const Instance& inst, const RunConfig& cfg, bool quantum) {
  RunTrace trace;
  trace.algo = quantum ? "alg1-quantum" : "alg1-classical";
  trace.T = inst.T;
  trace.seed = cfg.seed;
  Sim sim(inst, trace);
  Rng rng(cfg.seed);

  const std::size_t m = inst.m;
  const std::size_t d = inst.d;
  const double lnT = std::log(static_cast<double>(std::max<std::uint64_t>(inst.T, 2)));
  const double delta_qmc = 1.0 / (static_cast<double>(inst.T) * static_cast<double>(inst.T));
  const QmcBackend qb = qmc_backend_for(cfg.backend);

  std::vector<double> r_est(m, 0.5), r_rad(m, 1.0);
  std::vector<double> next_rad(m, 1.0);
  std::vector<std::uint64_t> pending(m, 0);
  const bool inject = cfg.inject_exact_bounds;
  const bool batched = quantum && !inject;
  bool stopped = false;

  auto finish = [&]() {
    trace.stop_reason = sim.stop_reason();
    stopped = true;
  };

  auto run_qmc = [&](std::size_t i, double eps) {
    QmcScalar q = qmc_mean_univariate(sim.r_mean[i], eps, delta_qmc, qb, rng, cfg.c1);
    r_est[i] = q.estimate;
    r_rad[i] = 2.0 * cfg.c1 * lnT / static_cast<double>(q.queries);
    ++trace.qmc_calls;
    trace.qmc_queries += q.queries;
    pending[i] = 0;
  };

  // warm-up: one estimation batch per arm in the amplitude lane, one pull in
  // the sample lane
  for (std::size_t i = 0; i < m && !stopped; ++i) {
    if (batched) {
      std::uint64_t batch =
          static_cast<std::uint64_t>(std::ceil(2.0 * cfg.c1 * lnT / next_rad[i]));
      if (batch == 0) batch = 1;
      for (std::uint64_t p = 0; p < batch; ++p) {
        if (!sim.can_continue()) {
          finish();
          break;
        }
        sim.pull(i, rng, cfg.record_rounds);
      }
      if (stopped) break;
      run_qmc(i, next_rad[i]);
      next_rad[i] *= 0.5;
    } else {
      if (!sim.can_continue()) {
        finish();
        break;
      }
      sim.pull(i, rng, cfg.record_rounds);
    }
  }
  trace.phase1_rounds = trace.tau;

  double b_min = *std::min_element(inst.B.begin(), inst.B.end());
  double mw_eps = cfg.mw_eps_override > 0.0
                      ? cfg.mw_eps_override
                      : std::sqrt(std::max(0.0, std::log(static_cast<double>(d))) / b_min);
  std::vector<double> v(d, 1.0);
  std::vector<double> r_up(m, 1.0);
  std::vector<std::vector<double>> c_lo(d, std::vector<double>(m, 0.0));

  while (!stopped) {
    if (!sim.can_continue()) {
      finish();
      break;
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (inject) {
        r_up[i] = clamp01(sim.r_mean[i]);
        for (std::size_t j = 0; j < d; ++j) c_lo[j][i] = sim.c_mean[j][i];
        continue;
      }
      if (quantum) {
        r_up[i] = clamp01(r_est[i] + r_rad[i]);
      } else {
        std::uint64_t n = sim.stats[i].n;
        if (n == 0) {
          r_up[i] = 1.0;
        } else {
          double mean = sim.stats[i].reward_sum / static_cast<double>(n);
          r_up[i] = clamp01(mean + hoeffding_radius(n, inst.T));
        }
      }
      std::uint64_t n = sim.stats[i].n;
      double crad = n == 0 ? 1.0 : hoeffding_radius(n, inst.T);
      for (std::size_t j = 0; j < d; ++j) {
        double mean = n == 0 ? 0.0 : sim.stats[i].cost_sum[j] / static_cast<double>(n);
        c_lo[j][i] = std::max(0.0, mean - crad);
      }
    }
    std::size_t a = select_arm(r_up, c_lo, v);
    for (std::size_t j = 0; j < d; ++j) {
      v[j] *= std::pow(1.0 + mw_eps, clamp01(c_lo[j][a]));
    }
    sim.pull(a, rng, cfg.record_rounds);
    if (batched) {
      ++pending[a];
      std::uint64_t batch =
          static_cast<std::uint64_t>(std::ceil(2.0 * cfg.c1 * lnT / next_rad[a]));
      if (batch == 0) batch = 1;
      if (pending[a] >= batch) {
        run_qmc(a, next_rad[a]);
        next_rad[a] *= 0.5;
      }
    }
  }
  return trace;
}

}  // namespace

RunTrace run_alg1_quantum(const Instance& inst, const RunConfig& cfg) {
  if (cfg.backend == Backend::kClassical) {
    throw std::invalid_argument("estimator backend 'classical' is only valid for classical algorithms");
  }
  return run_alg1_impl(inst, cfg, true);
}

RunTrace run_alg1_classical(const Instance& inst, const RunConfig& cfg) {
  return run_alg1_impl(inst, cfg, false);
}

}  // namespace bwk
