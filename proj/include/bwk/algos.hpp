#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "bwk/estimators.hpp"
#include "bwk/ground_truth.hpp"
#include "bwk/instance.hpp"
#include "bwk/json_io.hpp"
#include "bwk/lp_approx.hpp"
#include "bwk/rng.hpp"

namespace bwk {

enum class AlgoKind { kAlg1Quantum, kAlg1Classical, kAlg2Quantum, kAlg2Classical };

std::string to_string(AlgoKind k);
AlgoKind algo_from_string(const std::string& s);
bool algo_is_quantum(AlgoKind k);
bool algo_identifies(AlgoKind k);

enum class Backend { kIdealizedQ, kAeAnalytic, kClassical };
std::string to_string(Backend b);
Backend backend_from_string(const std::string& s);

struct SidConstants {
  double theta = 0.0;       // cost-accuracy gate for the balanced phase
  double eps_phase2 = 0.0;  // tolerance on the per-round budget rate
  double delta_qmc = 0.0;   // failure probability handed to the estimators
};

SidConstants sid_constants(const GroundTruth& gt, const Instance& inst);

// accuracy at which approximate planning provably preserves the analysis
double lp_accuracy_bound(const GroundTruth& gt, const Instance& inst);

struct RunConfig {
  Backend backend = Backend::kIdealizedQ;
  bool approx_lp = false;
  double eps_lp = 0.0;  // <= 0 resolves to lp_accuracy_bound
  double c1 = 1.0;
  double c2 = 1.0;
  double mw_eps_override = -1.0;  // < 0: use sqrt(ln d / B)
  std::uint64_t seed = 0;
  bool record_rounds = false;
  bool inject_exact_bounds = false;        // testing hook: zero-width estimates up front
  bool supply_ground_truth_params = true;  // identification runs derive constants from truth
};

struct RoundRecord {
  std::size_t arm = 0;
  double reward = 0.0;
  std::vector<double> cost;
};

struct RunEvent {
  std::uint64_t t = 0;
  std::string kind;
  std::string detail;
};

struct RunTrace {
  std::string algo;
  std::uint64_t T = 0;
  std::uint64_t seed = 0;
  std::uint64_t tau = 0;            // rounds played
  std::uint64_t phase1_rounds = 0;  // rounds spent before the play phase
  std::string stop_reason;
  double pseudo_reward = 0.0;    // sum of pulled arms' mean rewards
  double realized_reward = 0.0;  // sum of sampled rewards
  std::vector<double> budget_remaining;
  std::vector<std::uint64_t> pulls;  // per arm
  std::uint64_t qmc_calls = 0;
  std::uint64_t qmc_queries = 0;
  std::uint64_t lp_solves = 0;
  double modeled_quantum_cost = 0.0;
  double modeled_classical_cost = 0.0;
  std::vector<std::size_t> support_arms;  // identified support, when applicable
  std::vector<std::size_t> slack_rows;    // identified slack resources
  bool identification_done = false;
  std::uint64_t identification_round = 0;
  std::vector<RunEvent> events;
  std::vector<RoundRecord> rounds;  // only when record_rounds
};

Json trace_to_json(const RunTrace& trace);

// true when every watched resource is still draining at the planned per-round
// rate and the cost knowledge on the support is sharp enough to balance
bool phase2_condition(const std::vector<double>& support_cost_radii, double theta,
                      const std::vector<double>& budget,
                      const std::vector<std::size_t>& rows_to_check, std::uint64_t t,
                      std::uint64_t T, double b, double eps_phase2);

struct LpRoundOptions {
  bool approx = false;
  double eps = 0.01;  // scaled accuracy of one approximate solve
  bool quantum_units = false;
  double b = 0.0;  // per-round budget rate, used for dual bounds
  ApproxOptions aopt;
};

struct Phase2Solve {
  std::vector<double> xi;  // length m, a distribution over the support
  bool used_balanced = false;
  bool fallback_uniform = false;
  bool balanced_infeasible = false;
  bool approx_failed = false;
  std::uint64_t lp_solves = 0;
  double modeled_quantum = 0.0;
  double modeled_classical = 0.0;
};

Phase2Solve phase2_distribution(const std::vector<double>& r_up,
                                const std::vector<std::vector<double>>& c_lo,
                                const std::vector<std::size_t>& support,
                                const std::vector<std::size_t>& binding_rows,
                                const std::vector<double>& budget, double scale,
                                bool balanced, const LpRoundOptions& opt);

RunTrace run_alg1_quantum(const Instance& inst, const RunConfig& cfg);
RunTrace run_alg1_classical(const Instance& inst, const RunConfig& cfg);
RunTrace run_alg2_quantum(const Instance& inst, const RunConfig& cfg, const SidConstants& sc,
                          double eps_lp_resolved);
RunTrace run_alg2_classical(const Instance& inst, const RunConfig& cfg, const SidConstants& sc,
                            double eps_lp_resolved);

RunTrace run_algorithm(const Instance& inst, AlgoKind algo, const RunConfig& cfg);

}  // namespace bwk
