#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "bwk/bench.hpp"
#include "bwk/ground_truth.hpp"
#include "bwk/instance.hpp"
#include "doctest.h"

namespace {

bwk::Instance extended_k() {
  std::vector<bwk::Arm> arms(3);
  arms[0].atoms = {{1.0, 0.9, {1.0, 0.1}}};
  arms[1].atoms = {{1.0, 0.5, {0.2, 0.1}}};
  arms[2].atoms = {{1.0, 0.1, {1.0, 0.1}}};
  return bwk::augment_time_resource(3, 2, 100000, 50000.0, std::move(arms));
}

bwk::Instance bernoulli_pair() {
  std::vector<bwk::Arm> arms(2);
  arms[0].atoms = {{0.8, 1.0, {0.6}}, {0.2, 0.0, {0.1}}};
  arms[1].atoms = {{0.4, 1.0, {0.3}}, {0.6, 0.0, {0.2}}};
  return bwk::augment_time_resource(2, 1, 1024, 512.0, std::move(arms));
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("planted instances meet the requested margins") {
  bwk::PlantedSpec spec;
  spec.m = 3;
  spec.d_user = 1;
  spec.T = 1000;
  spec.budget_rate = 0.5;
  spec.margin = 0.05;
  spec.seed = 4;
  bwk::Instance inst = bwk::generate_planted(spec);
  bwk::GroundTruth gt = bwk::compute_ground_truth(inst);
  CHECK(gt.nondegenerate);
  CHECK(gt.delta >= 0.05);
  CHECK(gt.chi > 0.0);
  CHECK(gt.sigma > 0.0);

  bwk::Instance again = bwk::generate_planted(spec);
  CHECK(bwk::instance_to_json(inst) == bwk::instance_to_json(again));

  spec.seed = 5;
  bwk::Instance other = bwk::generate_planted(spec);
  CHECK(bwk::instance_to_json(inst) != bwk::instance_to_json(other));
}

TEST_CASE("planted generation rejects bad parameters") {
  bwk::PlantedSpec spec;
  spec.m = 1;
  CHECK_THROWS_AS(bwk::generate_planted(spec), std::invalid_argument);
  spec = {};
  spec.margin = 0.0;
  CHECK_THROWS_AS(bwk::generate_planted(spec), std::invalid_argument);
  spec = {};
  spec.m = 2;
  spec.d_user = 2;  // needs m >= d_user + 1
  CHECK_THROWS_AS(bwk::generate_planted(spec), std::invalid_argument);
  spec = {};
  spec.budget_rate = 1.5;
  CHECK_THROWS_AS(bwk::generate_planted(spec), std::invalid_argument);
}

TEST_CASE("regret decomposition is an exact identity") {
  bwk::Instance inst = bernoulli_pair();
  bwk::GroundTruth gt = bwk::compute_ground_truth(inst);
  bwk::RunConfig cfg;
  cfg.seed = 21;
  bwk::RunTrace trace = bwk::run_alg1_classical(inst, cfg);
  bwk::Decomposition dec = bwk::regret_decomposition(trace, inst, gt);
  CHECK(dec.pseudo_regret == doctest::Approx(gt.opt_lp - trace.pseudo_reward).epsilon(1e-12));
  double slack = 1e-6 * std::max(1.0, gt.opt_lp);
  CHECK(std::fabs(dec.pseudo_regret - dec.suboptimal_term - dec.leftover_term) <= slack);
  CHECK(dec.pseudo_regret <= dec.suboptimal_term + dec.leftover_term + slack);
  CHECK(dec.pseudo_regret >= -slack);
}

TEST_CASE("decomposition terms on synthetic pull counts") {
  bwk::Instance inst = extended_k();
  bwk::GroundTruth gt = bwk::compute_ground_truth(inst);

  bwk::RunTrace trace;
  trace.pulls = {10, 10, 0};
  trace.pseudo_reward = 10 * 0.9 + 10 * 0.5;
  bwk::Decomposition dec = bwk::regret_decomposition(trace, inst, gt);
  // dual prices make the supported arms regret-neutral
  CHECK(dec.suboptimal_term == doctest::Approx(0.0).epsilon(1e-12));
  double used_time = 0.5 * 20, used_r1 = 1.0 * 10 + 0.2 * 10;
  double leftover =
      0.8 * (50000.0 - used_time) + 0.5 * (50000.0 - used_r1);
  CHECK(dec.leftover_term == doctest::Approx(leftover).epsilon(1e-12));
  CHECK(dec.pseudo_regret ==
        doctest::Approx(dec.suboptimal_term + dec.leftover_term).epsilon(1e-12));

  bwk::RunTrace off;
  off.pulls = {0, 0, 5};
  off.pseudo_reward = 5 * 0.1;
  bwk::Decomposition dec2 = bwk::regret_decomposition(off, inst, gt);
  // the dual-priced gap of the third arm is (0.5, 1.0, 0.1) . (0.8, 0.5, 0) - 0.1
  CHECK(dec2.suboptimal_term == doctest::Approx(5 * 0.8).epsilon(1e-12));
}

TEST_CASE("log-log slope fitting") {
  std::vector<double> ts = {4096, 8192, 16384, 32768, 65536};
  std::vector<double> root, flat, logs;
  for (double t : ts) {
    root.push_back(std::sqrt(t));
    flat.push_back(7.5);
    logs.push_back(std::log(t));
  }
  CHECK(bwk::fit_loglog_slope(ts, root) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(bwk::fit_loglog_slope(ts, flat) == doctest::Approx(0.0));
  double s = bwk::fit_loglog_slope(ts, logs);
  CHECK(s > 0.0);
  CHECK(s < 0.15);

  CHECK_THROWS_AS(bwk::fit_loglog_slope({10, 20}, {1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(bwk::fit_loglog_slope({10, 20, 30}, {1, -2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(bwk::fit_loglog_slope({10, 10, 10}, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("sweep produces deterministic ordered rows and csv files") {
  bwk::SweepPlan plan;
  plan.base = bernoulli_pair();
  bwk::AlgoSpec a1c;
  a1c.algo = bwk::AlgoKind::kAlg1Classical;
  bwk::AlgoSpec a1q;
  a1q.algo = bwk::AlgoKind::kAlg1Quantum;
  plan.algos = {a1c, a1q};
  plan.t_grid = {256, 512};
  plan.replications = 3;
  plan.seed = 9;

  std::vector<bwk::RegretRecord> rows = bwk::run_sweep(plan);
  REQUIRE(rows.size() == 12);
  CHECK(rows[0].algo == "alg1-classical");
  CHECK(rows[6].algo == "alg1-quantum");
  CHECK(rows[0].T == 256);
  CHECK(rows[3].T == 512);
  CHECK(rows[0].replication == 0);
  CHECK(rows[1].replication == 1);
  for (const auto& r : rows) {
    CHECK(r.status == "completed");
    CHECK(r.identification_correct == -1);
    CHECK(r.pseudo_regret >= -1e-6 * 100.0);
    CHECK(r.m == 2);
    CHECK(r.d == 2);
  }

  std::vector<bwk::RegretRecord> rows2 = bwk::run_sweep(plan);
  REQUIRE(rows2.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].seed == rows2[i].seed);
    CHECK(rows[i].pseudo_regret == rows2[i].pseudo_regret);
    CHECK(rows[i].tau == rows2[i].tau);
  }

  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "bwk_test_sweep";
  fs::create_directories(dir);
  std::string runs_a = (dir / "runs_a.csv").string();
  std::string runs_b = (dir / "runs_b.csv").string();
  bwk::write_runs_csv(runs_a, rows);
  bwk::write_runs_csv(runs_b, rows2);
  std::string text_a = slurp(runs_a);
  CHECK(text_a == slurp(runs_b));
  CHECK(text_a.rfind("algo,T,B,m,d,replication,seed,pseudo_regret,realized_regret,tau,"
                     "phase1_rounds,identification_correct,pulls,qmc_query_total,"
                     "lp_solve_count,modeled_quantum_cost,modeled_classical_cost,"
                     "suboptimal_term,leftover_term,status",
                     0) == 0);

  std::string summary = (dir / "summary.csv").string();
  bwk::write_summary_csv(summary, rows);
  std::string stext = slurp(summary);
  CHECK(stext.rfind("algo,T,n,pseudo_regret_mean,pseudo_regret_se,realized_regret_mean,"
                    "realized_regret_se,tau_mean,qmc_query_total_mean,"
                    "modeled_quantum_cost_mean,modeled_classical_cost_mean",
                    0) == 0);
  // header + one line per (algo, T) cell
  CHECK(std::count(stext.begin(), stext.end(), '\n') == 5);
}

TEST_CASE("sweep respects the thread override and stays deterministic") {
  bwk::SweepPlan plan;
  plan.base = bernoulli_pair();
  bwk::AlgoSpec spec;
  spec.algo = bwk::AlgoKind::kAlg1Classical;
  plan.algos = {spec};
  plan.t_grid = {256};
  plan.replications = 6;
  plan.seed = 2;

  std::vector<bwk::RegretRecord> serial = bwk::run_sweep(plan);
  setenv("BWK_THREADS", "4", 1);
  std::vector<bwk::RegretRecord> parallel = bwk::run_sweep(plan);
  unsetenv("BWK_THREADS");
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].pseudo_regret == parallel[i].pseudo_regret);
    CHECK(serial[i].seed == parallel[i].seed);
  }
}

TEST_CASE("duplicate algorithm entries get numbered labels") {
  bwk::AlgoSpec a;
  a.algo = bwk::AlgoKind::kAlg1Classical;
  bwk::AlgoSpec b = a;
  bwk::AlgoSpec c = a;
  c.cfg.approx_lp = true;
  CHECK(bwk::sweep_label(a) == "alg1-classical");
  CHECK(bwk::sweep_label(c) == "alg1-classical+approx");
  bwk::AlgoSpec named = a;
  named.label = "baseline";
  CHECK(bwk::sweep_label(named) == "baseline");

  bwk::SweepPlan plan;
  plan.base = bernoulli_pair();
  plan.algos = {a, b};
  plan.t_grid = {128};
  plan.replications = 1;
  plan.seed = 1;
  std::vector<bwk::RegretRecord> rows = bwk::run_sweep(plan);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].algo == "alg1-classical");
  CHECK(rows[1].algo == "alg1-classical#2");
}

TEST_CASE("failed cells carry their reason and keep the sweep alive") {
  bwk::SweepPlan plan;
  plan.base = bernoulli_pair();  // degenerate optimum: one supported arm, two binding rows
  bwk::AlgoSpec bad;
  bad.algo = bwk::AlgoKind::kAlg2Quantum;
  bad.cfg.supply_ground_truth_params = true;
  bwk::AlgoSpec good;
  good.algo = bwk::AlgoKind::kAlg1Classical;
  plan.algos = {bad, good};
  plan.t_grid = {128};
  plan.replications = 2;
  plan.seed = 3;
  std::vector<bwk::RegretRecord> rows = bwk::run_sweep(plan);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].status != "completed");
  CHECK(rows[0].status.find(',') == std::string::npos);
  CHECK(rows[2].status == "completed");

  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "bwk_test_sweep";
  fs::create_directories(dir);
  std::string summary = (dir / "summary_fail.csv").string();
  bwk::write_summary_csv(summary, rows);
  std::string stext = slurp(summary);
  // the failed cell keeps its line but aggregates nothing
  CHECK(std::count(stext.begin(), stext.end(), '\n') == 3);
  CHECK(stext.find("alg1-classical,128,2") != std::string::npos);
  CHECK(stext.find("alg2-quantum,128,0") != std::string::npos);
}
