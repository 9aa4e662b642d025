#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "bwk/algos.hpp"
#include "bwk/ground_truth.hpp"
#include "bwk/instance.hpp"

namespace bwk {

struct PlantedSpec {
  std::size_t m = 3;
  std::size_t d_user = 2;
  std::uint64_t T = 1000;
  double budget_rate = 0.5;
  double margin = 0.05;  // floor on the per-round structural gap
  std::uint64_t seed = 0;
  int max_attempts = 50;
};

// draws random instances until one verifiably has a unique square optimum and
// a structural gap of at least the requested margin
Instance generate_planted(const PlantedSpec& spec);

struct RegretRecord {
  std::string algo;
  std::uint64_t T = 0;
  double B = 0.0;
  std::size_t m = 0;
  std::size_t d = 0;
  std::uint64_t replication = 0;
  std::uint64_t seed = 0;
  double pseudo_regret = 0.0;
  double realized_regret = 0.0;
  std::uint64_t tau = 0;
  std::uint64_t phase1_rounds = 0;
  int identification_correct = -1;  // -1 when the algorithm does not identify
  std::uint64_t pulls = 0;
  std::uint64_t qmc_query_total = 0;
  std::uint64_t lp_solve_count = 0;
  double modeled_quantum_cost = 0.0;
  double modeled_classical_cost = 0.0;
  double suboptimal_term = 0.0;
  double leftover_term = 0.0;
  std::string status;
};

struct Decomposition {
  double pseudo_regret = 0.0;
  double suboptimal_term = 0.0;  // mass placed on dual-priced-out arms
  double leftover_term = 0.0;    // budget value left unspent at the stop
};

// splits the planning regret against the dual prices; the two terms add back
// to the pseudo regret exactly
Decomposition regret_decomposition(const RunTrace& trace, const Instance& inst,
                                   const GroundTruth& gt);

struct AlgoSpec {
  AlgoKind algo = AlgoKind::kAlg1Quantum;
  RunConfig cfg;
  std::string label;  // empty: derived from the algorithm and lp mode
};

struct SweepPlan {
  Instance base;
  std::vector<AlgoSpec> algos;
  std::vector<std::uint64_t> t_grid;
  std::uint64_t replications = 1;
  std::uint64_t seed = 0;
};

std::string sweep_label(const AlgoSpec& spec);

// deterministic cell order (algorithm, T, replication); BWK_THREADS workers
std::vector<RegretRecord> run_sweep(const SweepPlan& plan);

void write_runs_csv(const std::string& path, const std::vector<RegretRecord>& rows);
void write_summary_csv(const std::string& path, const std::vector<RegretRecord>& rows);

// least-squares slope of ln(y) against ln(T); needs three positive points
double fit_loglog_slope(const std::vector<double>& t_values, const std::vector<double>& y_values);

}  // namespace bwk
