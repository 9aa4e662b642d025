#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "bwk/bench.hpp"
#include "bwk/instance.hpp"
#include "bwk/json_io.hpp"

namespace bwk {

struct CliConfig {
  std::string name;
  std::uint64_t seed = 0;
  std::uint64_t replications = 1;
  Instance instance;
  std::vector<AlgoSpec> algos;
  std::vector<std::uint64_t> t_grid;
  std::string output_dir;
};

// strict schema: unknown keys are rejected with their dotted path
CliConfig parse_cli_config(const Json& j, const std::string& base_dir);
CliConfig load_cli_config(const std::string& path);

AlgoSpec parse_algo_entry(const Json& j, const std::string& path);

}  // namespace bwk
