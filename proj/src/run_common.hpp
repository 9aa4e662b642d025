#pragma once
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "bwk/algos.hpp"
#include "bwk/instance.hpp"
#include "bwk/rng.hpp"

namespace bwk {
namespace detail_run {

inline double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

struct ArmStats {
  std::uint64_t n = 0;
  double reward_sum = 0.0;
  std::vector<double> cost_sum;
};

// one pull = one atom draw: the environment charges sampled costs and pays the
// sampled reward whether or not the algorithm observes them
struct Sim {
  const Instance& inst;
  RunTrace& trace;
  std::vector<ArmStats> stats;
  std::vector<double> r_mean;
  std::vector<std::vector<double>> c_mean;

  Sim(const Instance& i, RunTrace& t) : inst(i), trace(t) {
    stats.assign(inst.m, ArmStats{});
    for (auto& st : stats) st.cost_sum.assign(inst.d, 0.0);
    r_mean = inst.reward_means();
    c_mean = inst.cost_means();
    trace.budget_remaining = inst.B;
    trace.pulls.assign(inst.m, 0);
  }

  bool can_continue() const {
    if (trace.tau >= inst.T) return false;
    for (double v : trace.budget_remaining) {
      if (v < 1.0) return false;
    }
    return true;
  }

  const char* stop_reason() const {
    if (trace.tau >= inst.T) return "horizon";
    for (double v : trace.budget_remaining) {
      if (v < 1.0) return "budget-exhausted";
    }
    return "horizon";
  }

  void pull(std::size_t arm, Rng& rng, bool record) {
    Draw dr = sample_arm(inst, arm, rng);
    ++trace.tau;
    ++trace.pulls[arm];
    ArmStats& st = stats[arm];
    ++st.n;
    st.reward_sum += dr.reward;
    for (std::size_t j = 0; j < inst.d; ++j) {
      st.cost_sum[j] += dr.cost[j];
      trace.budget_remaining[j] -= dr.cost[j];
    }
    trace.pseudo_reward += r_mean[arm];
    trace.realized_reward += dr.reward;
    if (record) trace.rounds.push_back(RoundRecord{arm, dr.reward, dr.cost});
  }
};

inline void push_event(RunTrace& trace, std::uint64_t t, const std::string& kind,
                       const std::string& detail) {
  if (trace.events.size() < 200) {
    trace.events.push_back(RunEvent{t, kind, detail});
  } else if (trace.events.size() == 200) {
    trace.events.push_back(RunEvent{t, "events-truncated", ""});
  }
}

inline std::size_t sample_index(const std::vector<double>& weights, Rng& rng) {
  double u = uniform01(rng);
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last = i;
    if (u <= acc) return i;
  }
  return last;
}

}  // namespace detail_run
}  // namespace bwk
