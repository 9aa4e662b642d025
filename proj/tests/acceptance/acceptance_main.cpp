// Acceptance gate: every release-blocking behavior of the library, one
// printed line per criterion. Exit status is the number of failures.
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bwk/algos.hpp"
#include "bwk/bench.hpp"
#include "bwk/estimators.hpp"
#include "bwk/ground_truth.hpp"
#include "bwk/instance.hpp"
#include "bwk/json_io.hpp"
#include "bwk/lp.hpp"
#include "bwk/lp_approx.hpp"
#include "bwk/rng.hpp"

namespace {

using Clock = std::chrono::steady_clock;

struct Line {
  std::string name;
  bool pass = false;
  std::string detail;
  double secs = 0.0;
};

struct SweepRow {
  double pseudo = 0.0;
  double sub = 0.0;
  double left = 0.0;
  double opt = 0.0;
};

std::vector<SweepRow> g_rows;
int g_budget_violations = 0;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  unsigned workers = std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  if (const char* env = std::getenv("BWK_THREADS")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end && *end == '\0' && v >= 1 && v <= 256) workers = static_cast<unsigned>(v);
  }
  if (workers > n) workers = static_cast<unsigned>(n == 0 ? 1 : n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::string first_error;
  auto body = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) break;
      try {
        fn(i);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (first_error.empty()) first_error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (!first_error.empty()) throw std::runtime_error(first_error);
}

bwk::Instance canonical_k() {
  std::vector<bwk::Arm> arms(2);
  arms[0].atoms = {{1.0, 0.9, {1.0}}};
  arms[1].atoms = {{1.0, 0.5, {0.2}}};
  return bwk::augment_time_resource(2, 1, 100, 50.0, std::move(arms));
}

bwk::Instance extended_k() {
  std::vector<bwk::Arm> arms(3);
  arms[0].atoms = {{1.0, 0.9, {1.0, 0.1}}};
  arms[1].atoms = {{1.0, 0.5, {0.2, 0.1}}};
  arms[2].atoms = {{1.0, 0.1, {1.0, 0.1}}};
  return bwk::augment_time_resource(3, 2, 100000, 50000.0, std::move(arms));
}

double draw_in(bwk::Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * bwk::uniform01(rng);
}

bwk::LpProblem random_lp(bwk::Rng& rng) {
  std::size_t n = 1 + static_cast<std::size_t>(bwk::uniform01(rng) * 5);
  std::size_t rows = 1 + static_cast<std::size_t>(bwk::uniform01(rng) * 5);
  if (n > 5) n = 5;
  if (rows > 5) rows = 5;
  bwk::LpProblem lp;
  lp.objective.resize(n);
  for (double& v : lp.objective) v = draw_in(rng, 0.1, 1.0);
  lp.A.assign(rows, std::vector<double>(n));
  lp.rhs.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (double& v : lp.A[r]) v = draw_in(rng, 0.05, 1.0);
    lp.rhs[r] = draw_in(rng, 0.5, 3.0);
  }
  return lp;
}

bwk::LpProblem random_scaled_lp(bwk::Rng& rng) {
  std::size_t n = 1 + static_cast<std::size_t>(bwk::uniform01(rng) * 4);
  std::size_t rows = 1 + static_cast<std::size_t>(bwk::uniform01(rng) * 4);
  if (n > 4) n = 4;
  if (rows > 4) rows = 4;
  bwk::LpProblem lp;
  lp.objective.resize(n);
  for (double& v : lp.objective) v = draw_in(rng, 0.1, 0.9);
  lp.A.assign(rows, std::vector<double>(n));
  lp.rhs.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (double& v : lp.A[r]) v = draw_in(rng, 0.05, 0.9);
    lp.rhs[r] = draw_in(rng, 0.3, 3.0);
  }
  return bwk::scale_rhs(lp, bwk::scale_factor_for(lp));
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void record_run(std::vector<SweepRow>& rows, std::vector<int>& safety, std::size_t slot,
                const bwk::RunTrace& trace, const bwk::Instance& inst,
                const bwk::GroundTruth& gt) {
  bwk::Decomposition dec = bwk::regret_decomposition(trace, inst, gt);
  rows[slot] = SweepRow{dec.pseudo_regret, dec.suboptimal_term, dec.leftover_term, gt.opt_lp};
  bool ok = trace.tau <= trace.T;
  std::uint64_t total = 0;
  for (std::uint64_t p : trace.pulls) total += p;
  ok = ok && total == trace.tau;
  for (double b : trace.budget_remaining) ok = ok && b >= -1e-9;
  safety[slot] = ok ? 0 : 1;
}

Line c1_lp_equivalence() {
  Line out{"lp-exact-vs-enumeration", false, "", 0.0};
  int bad = 0;
  double max_gap = 0.0, max_viol = 0.0;
  for (int i = 0; i < 200; ++i) {
    bwk::Rng rng(bwk::mix_seed(101, static_cast<std::uint64_t>(i), 0, 0));
    bwk::LpProblem lp = random_lp(rng);
    bwk::LpSolution a = bwk::solve_exact(lp);
    bwk::LpSolution b = bwk::brute_force_vertices(lp);
    if (a.status != b.status) {
      ++bad;
      continue;
    }
    if (a.status != bwk::LpStatus::kOptimal) continue;
    double gap = std::fabs(a.value - b.value);
    double viol = bwk::max_violation(lp, a.x);
    max_gap = std::max(max_gap, gap);
    max_viol = std::max(max_viol, viol);
    if (gap > 1e-8 || viol > 1e-9) ++bad;
  }
  out.pass = bad == 0;
  out.detail = "200 instances, status mismatches+breaches=" + std::to_string(bad) +
               ", max value gap=" + num(max_gap) + ", max violation=" + num(max_viol);
  return out;
}

Line c2_canonical_ground_truth() {
  Line out{"canonical-ground-truth", false, "", 0.0};
  bwk::GroundTruth gt = bwk::compute_ground_truth(canonical_k());
  bool ok = std::fabs(gt.opt_lp - 65.0) <= 1e-7;
  ok = ok && gt.xi_star.size() == 2 && std::fabs(gt.xi_star[0] - 37.5) <= 1e-7 &&
       std::fabs(gt.xi_star[1] - 62.5) <= 1e-7;
  ok = ok && gt.opt_drop_arm.size() == 2 && std::fabs(gt.opt_drop_arm[0] - 50.0) <= 1e-7 &&
       std::fabs(gt.opt_drop_arm[1] - 45.0) <= 1e-7;
  ok = ok && std::fabs(gt.delta - 0.15) <= 1e-9;
  ok = ok && std::fabs(gt.chi - 0.375) <= 1e-9;
  ok = ok && std::fabs(gt.sigma - 0.3347) <= 1e-3;
  ok = ok && gt.support.arms_in.size() == 2 && gt.support.rows_binding.size() == 2;
  ok = ok && gt.nondegenerate;
  out.pass = ok;
  out.detail = "opt=" + num(gt.opt_lp) + " xi=(" + num(gt.xi_star[0]) + "," + num(gt.xi_star[1]) +
               ") drops=(" + num(gt.opt_drop_arm[0]) + "," + num(gt.opt_drop_arm[1]) +
               ") delta=" + num(gt.delta) + " chi=" + num(gt.chi) + " sigma=" + num(gt.sigma);
  return out;
}

Line c3_approx_contract() {
  Line out{"approx-lp-contract", false, "", 0.0};
  int bad = 0;
  double max_dev = 0.0, max_viol = 0.0;
  for (double eps : {0.05, 0.02}) {
    for (int i = 0; i < 100; ++i) {
      bwk::Rng rng(bwk::mix_seed(303, static_cast<std::uint64_t>(i), 0, 0));
      bwk::LpProblem lp = random_scaled_lp(rng);
      bwk::LpSolution ex = bwk::solve_exact(lp);
      if (ex.status != bwk::LpStatus::kOptimal) {
        ++bad;
        continue;
      }
      bwk::ApproxSolution ap = bwk::solve_approx(lp, eps);
      double dev = std::fabs(ap.value - ex.value);
      max_dev = std::max(max_dev, dev);
      max_viol = std::max(max_viol, ap.max_violation);
      if (ap.approx_failed || ap.status != bwk::LpStatus::kOptimal || dev > eps + 1e-12 ||
          ap.max_violation > eps + 1e-12) {
        ++bad;
      }
    }
  }
  out.pass = bad == 0;
  out.detail = "100 instances x eps {0.05,0.02}, breaches=" + std::to_string(bad) +
               ", max |value-exact|=" + num(max_dev) + ", max violation=" + num(max_viol);
  return out;
}

Line c4_game_solver() {
  Line out{"matrix-game-solver", false, "", 0.0};
  bwk::GameMatrix pennies;
  pennies.rows = 2;
  pennies.cols = 2;
  pennies.a = {1.0, -1.0, -1.0, 1.0};
  bwk::GameSolution ps = bwk::solve_zero_sum_mw(pennies, 0.01);
  bool ok = std::fabs(ps.value) <= 0.01 && ps.gap <= 0.01 + 1e-12;
  double max_dev = std::fabs(ps.value);
  int bad = ok ? 0 : 1;
  for (int i = 0; i < 50; ++i) {
    bwk::Rng rng(bwk::mix_seed(404, static_cast<std::uint64_t>(i), 0, 0));
    bwk::GameMatrix g;
    g.rows = 3;
    g.cols = 3;
    g.a.resize(9);
    for (double& v : g.a) v = draw_in(rng, -1.0, 1.0);
    bwk::GameSolution mw = bwk::solve_zero_sum_mw(g, 0.05);
    bwk::GameSolution ex = bwk::solve_zero_sum_exact(g);
    double dev = std::fabs(mw.value - ex.value);
    max_dev = std::max(max_dev, dev);
    if (dev > 0.05 + 1e-12) ++bad;
  }
  out.pass = bad == 0;
  out.detail = "pennies value=" + num(ps.value) + ", 50 random 3x3 max |mw-exact|=" +
               num(max_dev) + ", breaches=" + std::to_string(bad);
  return out;
}

Line c5_estimator_coverage() {
  Line out{"estimator-coverage", false, "", 0.0};
  const int trials = 10000;
  const double target = 1.0 - 0.1 - 0.02;

  bwk::Rng rng(515151);
  int hoeff_hits = 0;
  const std::uint64_t n = 500;
  const double horizon = 1000.0;
  double rad_h = bwk::hoeffding_radius(n, horizon);
  for (int t = 0; t < trials; ++t) {
    double sum = 0.0;
    for (std::uint64_t k = 0; k < n; ++k) sum += bwk::uniform01(rng) < 0.37 ? 1.0 : 0.0;
    if (std::fabs(sum / static_cast<double>(n) - 0.37) <= rad_h) ++hoeff_hits;
  }
  double cov_h = hoeff_hits / static_cast<double>(trials);

  int uni_hits = 0;
  bool queries_ok = true;
  std::uint64_t uq = bwk::univariate_query_count(0.05, 0.1, 1.0);
  std::uint64_t uq_formula =
      static_cast<std::uint64_t>(std::ceil((1.0 / 0.05) * std::log(1.0 / 0.1)));
  queries_ok = queries_ok && uq == uq_formula;
  queries_ok = queries_ok && bwk::univariate_query_count(0.1, 0.01, 2.0) == 93;
  for (int t = 0; t < trials; ++t) {
    bwk::QmcScalar s =
        bwk::qmc_mean_univariate(0.37, 0.05, 0.1, bwk::QmcBackend::kIdealized, rng);
    if (std::fabs(s.estimate - 0.37) <= 0.05) ++uni_hits;
    queries_ok = queries_ok && s.queries == uq;
  }
  double cov_u = uni_hits / static_cast<double>(trials);

  int multi_hits = 0;
  std::vector<double> truth = {0.2, 0.55, 0.8};
  std::uint64_t mq = bwk::multivariate_query_count(0.1, 0.1, 3, 1.0);
  double g = std::sqrt(3.0) * std::log(3.0 / 0.1) / 0.1;
  std::uint64_t mq_formula = static_cast<std::uint64_t>(
      std::ceil(g * std::sqrt(std::log(std::max(g, std::exp(1.0))))));
  queries_ok = queries_ok && mq == mq_formula;
  queries_ok = queries_ok && bwk::multivariate_query_count(0.1, 0.1, 1, 1.0) == 41;
  for (int t = 0; t < trials; ++t) {
    bwk::QmcVector v = bwk::qmc_mean_multivariate(truth, 0.1, 0.1, rng);
    double dev = 0.0;
    for (std::size_t j = 0; j < truth.size(); ++j)
      dev = std::max(dev, std::fabs(v.estimate[j] - truth[j]));
    if (dev <= 0.1) ++multi_hits;
    queries_ok = queries_ok && v.queries == mq;
  }
  double cov_m = multi_hits / static_cast<double>(trials);

  out.pass = cov_h >= target && cov_u >= target && cov_m >= target && queries_ok;
  out.detail = "coverage hoeffding=" + num(cov_h) + " univariate=" + num(cov_u) +
               " multivariate=" + num(cov_m) + " (floor " + num(target) +
               "), query counts exact=" + (queries_ok ? "yes" : "no");
  return out;
}

Line c6_amplitude_law() {
  Line out{"amplitude-readout-law", false, "", 0.0};
  const double a = 0.25;
  const std::uint32_t M = 64;
  const double band = 2.0 * M_PI * std::sqrt(a * (1.0 - a)) / M + M_PI * M_PI / (double(M) * M);
  bwk::Rng rng(606060);
  int hits = 0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    std::uint32_t y = bwk::sample_amplitude_phase(a, M, rng);
    if (std::fabs(bwk::amplitude_from_phase(y, M) - a) <= band) ++hits;
  }
  double frac = hits / static_cast<double>(trials);
  std::vector<double> law0 = bwk::amplitude_law(0.0, M);
  std::vector<double> law1 = bwk::amplitude_law(1.0, M);
  bool exact0 = law0[0] == 1.0 && bwk::amplitude_from_phase(0, M) == 0.0;
  bool exact1 = law1[M / 2] == 1.0 && bwk::amplitude_from_phase(M / 2, M) == 1.0;
  for (int t = 0; t < 200; ++t) {
    exact0 = exact0 && bwk::amplitude_from_phase(bwk::sample_amplitude_phase(0.0, M, rng), M) == 0.0;
    exact1 = exact1 && bwk::amplitude_from_phase(bwk::sample_amplitude_phase(1.0, M, rng), M) == 1.0;
  }
  out.pass = frac >= 0.78 && exact0 && exact1;
  out.detail = "in-band fraction=" + num(frac) + " (band " + num(band) +
               ", floor 0.78), endpoints exact=" + ((exact0 && exact1) ? "yes" : "no");
  return out;
}

void c7_c8_alg1_sweep(Line& l7, Line& l8) {
  l7 = Line{"alg1-call-budget-invariants", false, "", 0.0};
  l8 = Line{"alg1-regret-scaling", false, "", 0.0};

  bwk::PlantedSpec spec;
  spec.m = 3;
  spec.d_user = 1;
  spec.T = 4096;
  spec.budget_rate = 0.25;
  spec.margin = 0.05;
  spec.seed = 1;
  bwk::Instance base = bwk::generate_planted(spec);

  const std::vector<std::uint64_t> t_grid = {4096, 8192, 16384, 32768, 65536};
  const std::uint64_t reps = 20;
  std::vector<bwk::Instance> insts;
  std::vector<bwk::GroundTruth> gts;
  for (std::uint64_t T : t_grid) {
    insts.push_back(bwk::with_horizon(base, T));
    gts.push_back(bwk::compute_ground_truth(insts.back()));
  }

  const std::size_t total = 2 * t_grid.size() * reps;
  std::vector<SweepRow> rows(total);
  std::vector<int> safety(total, 0);
  std::vector<int> call_ok(total, 1);
  parallel_for(total, [&](std::size_t idx) {
    std::size_t algo = idx / (t_grid.size() * reps);
    std::size_t rest = idx % (t_grid.size() * reps);
    std::size_t ti = rest / reps;
    std::uint64_t rep = rest % reps;
    bwk::RunConfig cfg;
    cfg.seed = bwk::mix_seed(2024, algo, t_grid[ti], rep);
    bwk::RunTrace trace = algo == 0 ? bwk::run_alg1_quantum(insts[ti], cfg)
                                    : bwk::run_alg1_classical(insts[ti], cfg);
    record_run(rows, safety, idx, trace, insts[ti], gts[ti]);
    if (algo == 0) {
      double T = static_cast<double>(t_grid[ti]);
      double lnT = std::log(T);
      double bound = 3.0 * std::log2(T / (2.0 * 3.0 * lnT) + 1.0) + 3.0;
      call_ok[idx] = static_cast<double>(trace.qmc_calls) <= bound ? 1 : 0;
    }
  });

  int safety_bad = 0, call_bad = 0;
  for (std::size_t i = 0; i < total; ++i) {
    safety_bad += safety[i];
    call_bad += 1 - call_ok[i];
  }
  g_budget_violations += safety_bad;
  for (const SweepRow& r : rows) g_rows.push_back(r);

  bwk::RunConfig det;
  det.seed = bwk::mix_seed(2024, 0, 16384, 7);
  det.record_rounds = true;
  std::string t1 = bwk::trace_to_json(bwk::run_alg1_quantum(insts[2], det)).dump();
  std::string t2 = bwk::trace_to_json(bwk::run_alg1_quantum(insts[2], det)).dump();
  bool deterministic = t1 == t2;

  std::string cli_note = "cli-replay=skipped";
  bool cli_ok = true;
  const char* cli = std::getenv("BWK_CLI");
  const char* data = std::getenv("BWK_DATA_DIR");
  if (cli && data) {
    namespace fs = std::filesystem;
    fs::path root = fs::temp_directory_path() / "bwk_acceptance_cli";
    fs::remove_all(root);
    fs::path d1 = root / "a", d2 = root / "b";
    fs::create_directories(d1);
    fs::create_directories(d2);
    auto run_once = [&](const fs::path& dir) {
      std::string cmd = std::string("\"") + cli + "\" simulate --config \"" + data +
                        "/config_k.json\" --algo alg1-quantum --t 4096 --seed 5 --out \"" +
                        dir.string() + "\" > \"" + (dir / "stdout.txt").string() + "\" 2>&1";
      return std::system(cmd.c_str());
    };
    int rc1 = run_once(d1);
    int rc2 = run_once(d2);
    std::string f1 = slurp((d1 / "trace-alg1-quantum-5.json").string());
    std::string f2 = slurp((d2 / "trace-alg1-quantum-5.json").string());
    cli_ok = rc1 == 0 && rc2 == 0 && !f1.empty() && f1 == f2;
    cli_note = cli_ok ? "cli-replay=identical" : "cli-replay=mismatch";
  }

  l7.pass = call_bad == 0 && safety_bad == 0 && deterministic && cli_ok;
  l7.detail = std::to_string(total) + " runs: call-budget breaches=" + std::to_string(call_bad) +
              ", budget-safety breaches=" + std::to_string(safety_bad) +
              ", repeat-run bytes=" + (deterministic ? "identical" : "mismatch") + ", " + cli_note;

  std::vector<double> ts, q_means, c_means;
  for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
    double qm = 0.0, cm = 0.0;
    for (std::uint64_t rep = 0; rep < reps; ++rep) {
      qm += rows[ti * reps + rep].pseudo;
      cm += rows[(t_grid.size() + ti) * reps + rep].pseudo;
    }
    ts.push_back(static_cast<double>(t_grid[ti]));
    q_means.push_back(qm / reps);
    c_means.push_back(cm / reps);
  }
  double slope = bwk::fit_loglog_slope(ts, q_means);
  bool head_to_head = q_means.back() <= c_means.back();
  l8.pass = slope <= 0.75 && head_to_head;
  l8.detail = "quantum slope=" + num(slope) + " (cap 0.75), at T=65536 quantum mean=" +
              num(q_means.back()) + " vs classical mean=" + num(c_means.back());
}

Line c9_identification() {
  Line out{"alg2-identification", false, "", 0.0};
  bwk::Instance inst = extended_k();
  bwk::GroundTruth gt = bwk::compute_ground_truth(inst);
  const int runs = 100;
  const double bound = 10.0 * (2.0 + 1.0 / inst.b()) * std::sqrt(3.0) *
                       std::log(static_cast<double>(inst.T)) / gt.delta;
  std::vector<int> correct(runs, 0);
  std::vector<double> per_arm(runs, 0.0);
  parallel_for(runs, [&](std::size_t i) {
    bwk::RunConfig cfg;
    cfg.seed = bwk::mix_seed(707, 0, inst.T, i);
    bwk::RunTrace tr = bwk::run_algorithm(inst, bwk::AlgoKind::kAlg2Quantum, cfg);
    bool ok = tr.identification_done && tr.support_arms == gt.support.arms_in &&
              tr.slack_rows == gt.support.rows_slack;
    correct[i] = ok ? 1 : 0;
    per_arm[i] = tr.phase1_rounds / 3.0;
  });
  int hits = 0;
  double max_pulls = 0.0;
  for (int i = 0; i < runs; ++i) {
    hits += correct[i];
    if (correct[i]) max_pulls = std::max(max_pulls, per_arm[i]);
  }
  out.pass = hits >= 95 && max_pulls <= bound;
  out.detail = "correct=" + std::to_string(hits) + "/100 (floor 95), max per-arm exploration pulls=" +
               num(max_pulls) + " vs bound " + num(bound);
  return out;
}

Line c10_growth() {
  Line out{"alg2-regret-growth", false, "", 0.0};
  bwk::Instance base = extended_k();
  const std::vector<std::uint64_t> t_grid = {8192, 32768, 131072};
  const std::uint64_t reps = 20;
  std::vector<bwk::Instance> insts;
  std::vector<bwk::GroundTruth> gts;
  for (std::uint64_t T : t_grid) {
    insts.push_back(bwk::with_horizon(base, T));
    gts.push_back(bwk::compute_ground_truth(insts.back()));
  }
  const std::size_t total = t_grid.size() * reps;
  std::vector<SweepRow> rows(total);
  std::vector<int> safety(total, 0);
  parallel_for(total, [&](std::size_t idx) {
    std::size_t ti = idx / reps;
    std::uint64_t rep = idx % reps;
    bwk::RunConfig cfg;
    cfg.seed = bwk::mix_seed(909, 0, t_grid[ti], rep);
    bwk::RunTrace tr = bwk::run_algorithm(insts[ti], bwk::AlgoKind::kAlg2Quantum, cfg);
    record_run(rows, safety, idx, tr, insts[ti], gts[ti]);
  });
  for (int s : safety) g_budget_violations += s;
  for (const SweepRow& r : rows) g_rows.push_back(r);
  std::vector<double> means;
  for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
    double s = 0.0;
    for (std::uint64_t rep = 0; rep < reps; ++rep) s += rows[ti * reps + rep].pseudo;
    means.push_back(s / reps);
  }
  double r1 = means[1] / means[0];
  double r2 = means[2] / means[1];
  out.pass = r1 <= 2.5 && r2 <= 2.5;
  out.detail = "mean regret (" + num(means[0]) + ", " + num(means[1]) + ", " + num(means[2]) +
               "), consecutive ratios (" + num(r1) + ", " + num(r2) + ") vs cap 2.5";
  return out;
}

Line c11_approx_parity() {
  Line out{"approx-vs-exact-planning", false, "", 0.0};
  bwk::Instance inst = bwk::with_horizon(extended_k(), 32768);
  bwk::GroundTruth gt = bwk::compute_ground_truth(inst);
  const std::uint64_t reps = 20;
  std::vector<SweepRow> rows(2 * reps);
  std::vector<int> safety(2 * reps, 0);
  parallel_for(2 * reps, [&](std::size_t idx) {
    bool approx = idx >= reps;
    std::uint64_t rep = idx % reps;
    bwk::RunConfig cfg;
    cfg.approx_lp = approx;
    cfg.seed = bwk::mix_seed(911, 0, inst.T, rep);
    bwk::RunTrace tr = bwk::run_algorithm(inst, bwk::AlgoKind::kAlg2Quantum, cfg);
    record_run(rows, safety, idx, tr, inst, gt);
  });
  for (int s : safety) g_budget_violations += s;
  for (const SweepRow& r : rows) g_rows.push_back(r);
  double exact_mean = 0.0, approx_mean = 0.0;
  for (std::uint64_t rep = 0; rep < reps; ++rep) {
    exact_mean += rows[rep].pseudo;
    approx_mean += rows[reps + rep].pseudo;
  }
  exact_mean /= reps;
  approx_mean /= reps;
  double ratio = approx_mean / exact_mean;
  out.pass = ratio <= 2.0;
  out.detail = "exact mean=" + num(exact_mean) + ", approx mean=" + num(approx_mean) +
               ", ratio=" + num(ratio) + " (cap 2)";
  return out;
}

Line c12_square_plan() {
  Line out{"balanced-square-plan", false, "", 0.0};
  std::vector<double> r_up = {0.5, 0.5};
  std::vector<std::vector<double>> c_lo = {{0.5, 0.25}, {0.25, 0.5}};
  std::vector<std::size_t> support = {0, 1};
  std::vector<std::size_t> binding = {0, 1};
  std::vector<double> budget = {0.375, 0.375};
  bwk::LpRoundOptions opt;
  bwk::Phase2Solve ps =
      bwk::phase2_distribution(r_up, c_lo, support, binding, budget, 1.0, true, opt);
  bool ok = ps.used_balanced && ps.xi.size() == 2 && std::fabs(ps.xi[0] - 0.5) <= 1e-9 &&
            std::fabs(ps.xi[1] - 0.5) <= 1e-9;
  out.pass = ok;
  out.detail = "zero-radius balanced plan=(" + num(ps.xi.empty() ? -1.0 : ps.xi[0]) + "," +
               num(ps.xi.size() < 2 ? -1.0 : ps.xi[1]) + ") vs (0.5,0.5), tol 1e-9";
  return out;
}

Line c13_decomposition() {
  Line out{"regret-decomposition-bound", false, "", 0.0};
  int bad = 0;
  double worst = -1e300;
  for (const SweepRow& r : g_rows) {
    double slack = r.pseudo - (r.sub + r.left + 1e-6 * r.opt);
    worst = std::max(worst, slack);
    if (slack > 0.0) ++bad;
  }
  out.pass = bad == 0 && !g_rows.empty();
  out.detail = std::to_string(g_rows.size()) + " recorded runs, bound breaches=" +
               std::to_string(bad) + ", worst margin=" + num(worst);
  return out;
}

}  // namespace

int main() {
  std::vector<Line> lines(13);
  auto timed = [](Line& slot, const std::function<Line()>& fn) {
    auto start = Clock::now();
    try {
      slot = fn();
    } catch (const std::exception& e) {
      slot.pass = false;
      slot.detail = std::string("exception: ") + e.what();
      if (slot.name.empty()) slot.name = "unnamed";
    }
    slot.secs = std::chrono::duration<double>(Clock::now() - start).count();
  };

  timed(lines[0], c1_lp_equivalence);
  timed(lines[1], c2_canonical_ground_truth);
  timed(lines[2], c3_approx_contract);
  timed(lines[3], c4_game_solver);
  timed(lines[4], c5_estimator_coverage);
  timed(lines[5], c6_amplitude_law);
  {
    auto start = Clock::now();
    try {
      c7_c8_alg1_sweep(lines[6], lines[7]);
    } catch (const std::exception& e) {
      lines[6] = Line{"alg1-call-budget-invariants", false, std::string("exception: ") + e.what(), 0.0};
      lines[7] = Line{"alg1-regret-scaling", false, std::string("exception: ") + e.what(), 0.0};
    }
    double secs = std::chrono::duration<double>(Clock::now() - start).count();
    lines[6].secs = secs;
    lines[7].secs = secs;
  }
  timed(lines[8], c9_identification);
  timed(lines[9], c10_growth);
  timed(lines[10], c11_approx_parity);
  timed(lines[11], c12_square_plan);
  timed(lines[12], c13_decomposition);

  int failures = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const Line& l = lines[i];
    if (!l.pass) ++failures;
    std::printf("%s criterion-%zu %s: %s (%.1fs)\n", l.pass ? "PASS" : "FAIL", i + 1,
                l.name.c_str(), l.detail.c_str(), l.secs);
  }
  std::printf("acceptance: %zu/13 criteria passed\n", lines.size() - failures);
  return failures > 125 ? 125 : failures;
}
