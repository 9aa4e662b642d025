#include "bwk/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bwk {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double hoeffding_radius(std::uint64_t n, double horizon_T) {
  if (n == 0) throw std::invalid_argument("no samples");
  return std::sqrt(3.0 * std::log(horizon_T) / static_cast<double>(n));
}

Interval hoeffding_bounds(double sum, std::uint64_t n, double horizon_T) {
  double mean = sum / static_cast<double>(n == 0 ? 1 : n);
  double rad = hoeffding_radius(n, horizon_T);
  return Interval{mean - rad, mean + rad};
}

std::uint64_t univariate_query_count(double eps, double delta, double c1) {
  if (eps <= 0) throw std::invalid_argument("eps must be positive");
  if (delta <= 0 || delta >= 1) throw std::invalid_argument("delta outside (0,1)");
  return static_cast<std::uint64_t>(std::ceil(c1 / eps * std::log(1.0 / delta)));
}

std::uint64_t multivariate_query_count(double eps, double delta, std::size_t d, double c2) {
  if (eps <= 0) throw std::invalid_argument("eps must be positive");
  if (delta <= 0 || delta >= 1) throw std::invalid_argument("delta outside (0,1)");
  if (d == 0) throw std::invalid_argument("d must be positive");
  double g = std::sqrt(static_cast<double>(d)) * std::log(static_cast<double>(d) / delta) / eps;
  double inner = std::max(g, std::exp(1.0));
  return static_cast<std::uint64_t>(std::ceil(c2 * g * std::sqrt(std::log(inner))));
}

double multivariate_inverse_samples(double N, double c2) {
  auto f = [c2](double n) { return c2 * n * std::sqrt(std::log(n)); };
  if (N <= f(2.0)) return 2.0;
  double lo = 2.0, hi = std::max(2.0, N);
  for (int it = 0; it < 64; ++it) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) < N) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

AeSchedule ae_schedule(double eps, double delta) {
  AeSchedule s;
  std::uint32_t M = 2;
  while (kPi / M + kPi * kPi / (static_cast<double>(M) * M) > eps) {
    if (M >= (1u << 26)) throw std::invalid_argument("eps too small for phase grid");
    M *= 2;
  }
  s.M = M;
  // per-sample success prob is 8/pi^2; a median of k samples fails with
  // prob <= exp(-2 k (8/pi^2 - 1/2)^2) by Hoeffding
  double margin = 8.0 / (kPi * kPi) - 0.5;
  double kappa = 2.0 * margin * margin;
  std::uint64_t k = static_cast<std::uint64_t>(std::ceil(std::log(1.0 / delta) / kappa));
  if (k < 1) k = 1;
  if (k % 2 == 0) k += 1;
  s.repeats = static_cast<std::uint32_t>(k);
  return s;
}

std::vector<double> amplitude_law(double a, std::uint32_t M) {
  if (M < 2 || (M & (M - 1)) != 0) throw std::invalid_argument("M must be a power of two >= 2");
  if (a < 0 || a > 1) throw std::invalid_argument("amplitude outside [0,1]");
  double theta = std::asin(std::sqrt(a)) / kPi;
  std::vector<double> law(M);
  for (std::uint32_t y = 0; y < M; ++y) {
    double delta = theta - static_cast<double>(y) / M;
    double wrapped = delta - std::round(delta);
    if (std::fabs(wrapped) < 1e-15) {
      law[y] = 1.0;
      continue;
    }
    double num = std::sin(static_cast<double>(M) * kPi * wrapped);
    double den = static_cast<double>(M) * std::sin(kPi * wrapped);
    law[y] = num * num / (den * den);
  }
  return law;
}

namespace {
std::uint32_t sample_from_law(const std::vector<double>& law, Rng& rng) {
  double u = uniform01(rng);
  double acc = 0;
  for (std::uint32_t y = 0; y < law.size(); ++y) {
    acc += law[y];
    if (u <= acc) return y;
  }
  return static_cast<std::uint32_t>(law.size() - 1);
}
}  // namespace

std::uint32_t sample_amplitude_phase(double a, std::uint32_t M, Rng& rng) {
  return sample_from_law(amplitude_law(a, M), rng);
}

double amplitude_from_phase(std::uint32_t y, std::uint32_t M) {
  double s = std::sin(kPi * static_cast<double>(y) / M);
  return s * s;
}

double median_amplify(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("empty list");
  if (values.size() % 2 == 0) throw std::invalid_argument("median requires odd count");
  auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

QmcScalar qmc_mean_univariate(double true_mean, double eps, double delta,
                              QmcBackend backend, Rng& rng, double c1) {
  if (eps <= 0 || eps > 1) throw std::invalid_argument("eps outside (0,1]");
  if (delta <= 0 || delta >= 1) throw std::invalid_argument("delta outside (0,1)");
  QmcScalar out;
  out.queries = univariate_query_count(eps, delta, c1);
  if (backend == QmcBackend::kIdealized) {
    double u_fail = uniform01(rng);
    double u_val = uniform01(rng);
    if (u_fail < delta) {
      out.estimate = u_val;
    } else {
      double lo = std::max(0.0, true_mean - eps);
      double hi = std::min(1.0, true_mean + eps);
      out.estimate = lo + u_val * (hi - lo);
    }
    return out;
  }
  AeSchedule sched = ae_schedule(eps, delta);
  std::vector<double> law = amplitude_law(true_mean, sched.M);
  std::vector<double> samples(sched.repeats);
  for (std::uint32_t s = 0; s < sched.repeats; ++s)
    samples[s] = amplitude_from_phase(sample_from_law(law, rng), sched.M);
  out.estimate = median_amplify(std::move(samples));
  return out;
}

QmcVector qmc_mean_multivariate(const std::vector<double>& true_mean, double eps,
                                double delta, Rng& rng, double c2) {
  if (eps <= 0) throw std::invalid_argument("eps must be positive");
  if (delta <= 0 || delta >= 1) throw std::invalid_argument("delta outside (0,1)");
  if (true_mean.empty()) throw std::invalid_argument("empty mean vector");
  QmcVector out;
  out.queries = multivariate_query_count(eps, delta, true_mean.size(), c2);
  out.estimate.resize(true_mean.size());
  double u_fail = uniform01(rng);
  bool ok = u_fail >= delta;
  for (std::size_t k = 0; k < true_mean.size(); ++k) {
    double u = uniform01(rng);
    if (ok) {
      double lo = std::max(0.0, true_mean[k] - eps);
      double hi = std::min(1.0, true_mean[k] + eps);
      out.estimate[k] = lo + u * (hi - lo);
    } else {
      out.estimate[k] = u;
    }
  }
  return out;
}

}  // namespace bwk
