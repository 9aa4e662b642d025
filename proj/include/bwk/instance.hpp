#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "bwk/rng.hpp"

namespace bwk {

struct Atom {
  double p = 0;
  double reward = 0;
  std::vector<double> cost;  // one entry per resource
};

struct Arm {
  std::vector<Atom> atoms;
};

// Knapsack bandit instance. Resource 0 is the time resource: every atom of
// every arm consumes exactly B/T of it, so "t > T" and "budget exhausted"
// collapse into one stopping rule on the budget vector.
struct Instance {
  std::size_t m = 0;       // arms
  std::size_t d = 0;       // resources including the time row
  std::uint64_t T = 0;
  std::vector<double> B;   // length d; uniform in every shipped config
  std::vector<Arm> arms;

  double b() const { return B.empty() || T == 0 ? 0.0 : B[0] / static_cast<double>(T); }
  std::vector<double> reward_means() const;
  std::vector<std::vector<double>> cost_means() const;  // d x m
  void validate() const;
};

struct Draw {
  double reward = 0;
  std::vector<double> cost;
};

// one uniform variate per call
Draw sample_arm(const Instance& inst, std::size_t arm, Rng& rng);

// builds the internal instance from user-level parts: arm atoms carry d_user
// cost entries; the time row (cost B/T for every atom) is inserted at index 0
Instance augment_time_resource(std::size_t m, std::size_t d_user, std::uint64_t T,
                               double B, std::vector<Arm> raw_arms);

// same rates at a different horizon: B scales so that B/T is preserved
Instance with_horizon(const Instance& inst, std::uint64_t T);

Instance load_instance_json(const std::string& text);
Instance load_instance_file(const std::string& path);
std::string instance_to_json(const Instance& inst);  // user-level form

}  // namespace bwk
