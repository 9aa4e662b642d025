#pragma once
#include <cstdint>
#include <vector>

#include "bwk/rng.hpp"

namespace bwk {

struct Interval {
  double lo = 0;
  double hi = 0;
};

// radius sqrt(3 ln T / n); bounds are NOT projected
double hoeffding_radius(std::uint64_t n, double horizon_T);
Interval hoeffding_bounds(double sum, std::uint64_t n, double horizon_T);

// query budgets of the two mean-estimation routines
std::uint64_t univariate_query_count(double eps, double delta, double c1);
std::uint64_t multivariate_query_count(double eps, double delta, std::size_t d, double c2);

// inverse of N = c2 * n * sqrt(ln n) on n in [2, N]; monotone bisection
double multivariate_inverse_samples(double N, double c2);

enum class QmcBackend { kIdealized, kAePhase };

struct QmcScalar {
  double estimate = 0;
  std::uint64_t queries = 0;
};

struct QmcVector {
  std::vector<double> estimate;
  std::uint64_t queries = 0;
};

// univariate mean estimate: |estimate - true_mean| <= eps with prob >= 1-delta
QmcScalar qmc_mean_univariate(double true_mean, double eps, double delta,
                              QmcBackend backend, Rng& rng, double c1 = 1.0);

// multivariate: sup-norm accuracy eps with prob >= 1-delta (idealized only)
QmcVector qmc_mean_multivariate(const std::vector<double>& true_mean, double eps,
                                double delta, Rng& rng, double c2 = 1.0);

// outcome law of phase-estimation amplitude readout on an M-point grid
std::vector<double> amplitude_law(double a, std::uint32_t M);
std::uint32_t sample_amplitude_phase(double a, std::uint32_t M, Rng& rng);
double amplitude_from_phase(std::uint32_t y, std::uint32_t M);
double median_amplify(std::vector<double> values);

struct AeSchedule {
  std::uint32_t M = 0;        // grid size, power of two
  std::uint32_t repeats = 0;  // odd median count
};
AeSchedule ae_schedule(double eps, double delta);

}  // namespace bwk
