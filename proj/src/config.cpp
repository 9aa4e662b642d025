#include "bwk/config.hpp"

#include <stdexcept>

namespace bwk {

namespace {

std::string dirname_of(const std::string& path) {
  std::size_t pos = path.find_last_of('/');
  if (pos == std::string::npos) return "";
  return path.substr(0, pos);
}

std::string resolve_path(const std::string& base, const std::string& p) {
  if (p.empty() || p.front() == '/' || base.empty()) return p;
  return base + "/" + p;
}

Instance parse_instance_block(const Json& j, const std::string& base_dir) {
  if (!j.is_object()) throw SchemaError("instance must be an object");
  if (j.contains("file")) {
    check_keys(j, "instance", {"file"});
    return load_instance_file(resolve_path(base_dir, get_string(j, "instance", "file")));
  }
  if (j.contains("kind")) {
    check_keys(j, "instance",
               {"kind", "m", "d_user", "T", "budget_rate", "margin", "seed", "max_attempts"});
    std::string kind = get_string(j, "instance", "kind");
    if (kind != "planted") {
      throw SchemaError("instance.kind must be \"planted\", got \"" + kind + "\"");
    }
    PlantedSpec spec;
    spec.m = static_cast<std::size_t>(get_uint(j, "instance", "m"));
    spec.d_user = static_cast<std::size_t>(get_uint(j, "instance", "d_user"));
    spec.T = get_uint(j, "instance", "T");
    spec.budget_rate = get_number_or(j, "instance", "budget_rate", 0.5);
    spec.margin = get_number_or(j, "instance", "margin", 0.05);
    spec.seed = get_uint_or(j, "instance", "seed", 0);
    spec.max_attempts = static_cast<int>(get_uint_or(j, "instance", "max_attempts", 50));
    try {
      return generate_planted(spec);
    } catch (const std::invalid_argument& e) {
      throw SchemaError(std::string("instance: ") + e.what());
    }
  }
  return load_instance_json(j.dump());
}

}  // namespace

AlgoSpec parse_algo_entry(const Json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path + " must be an object");
  check_keys(j, path,
             {"algo", "estimator_backend", "lp_mode", "eps_lp", "c1", "c2", "mw_eps_override",
              "record_rounds", "inject_exact_bounds", "supply_ground_truth_params", "label"});
  AlgoSpec spec;
  std::string algo = get_string(j, path, "algo");
  try {
    spec.algo = algo_from_string(algo);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(path + ".algo: " + e.what());
  }
  std::string backend = get_string_or(j, path, "estimator_backend", "idealized");
  try {
    spec.cfg.backend = backend_from_string(backend);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(path + ".estimator_backend: " + e.what());
  }
  std::string mode = get_string_or(j, path, "lp_mode", "exact");
  if (mode == "exact") {
    spec.cfg.approx_lp = false;
  } else if (mode == "approx") {
    spec.cfg.approx_lp = true;
  } else {
    throw SchemaError(path + ".lp_mode must be \"exact\" or \"approx\", got \"" + mode + "\"");
  }
  if (j.contains("eps_lp")) {
    const Json& e = j.at("eps_lp");
    if (e.is_string()) {
      if (e.get<std::string>() != "auto") {
        throw SchemaError(path + ".eps_lp must be a positive number or \"auto\"");
      }
      spec.cfg.eps_lp = 0.0;
    } else if (e.is_number()) {
      double v = e.get<double>();
      if (!(v > 0.0)) throw SchemaError(path + ".eps_lp must be a positive number or \"auto\"");
      spec.cfg.eps_lp = v;
    } else {
      throw SchemaError(path + ".eps_lp must be a positive number or \"auto\"");
    }
  }
  spec.cfg.c1 = get_number_or(j, path, "c1", 1.0);
  spec.cfg.c2 = get_number_or(j, path, "c2", 1.0);
  if (!(spec.cfg.c1 > 0.0)) throw SchemaError(path + ".c1 must be positive");
  if (!(spec.cfg.c2 > 0.0)) throw SchemaError(path + ".c2 must be positive");
  spec.cfg.mw_eps_override = get_number_or(j, path, "mw_eps_override", -1.0);
  if (j.contains("mw_eps_override") && !(spec.cfg.mw_eps_override > 0.0)) {
    throw SchemaError(path + ".mw_eps_override must be positive when given");
  }
  spec.cfg.record_rounds = get_bool_or(j, path, "record_rounds", false);
  spec.cfg.inject_exact_bounds = get_bool_or(j, path, "inject_exact_bounds", false);
  spec.cfg.supply_ground_truth_params = get_bool_or(j, path, "supply_ground_truth_params", true);
  spec.label = get_string_or(j, path, "label", "");
  return spec;
}

CliConfig parse_cli_config(const Json& j, const std::string& base_dir) {
  if (!j.is_object()) throw SchemaError("config must be an object");
  check_keys(j, "config", {"experiment", "instance", "algorithms", "t_grid", "output_dir"});
  CliConfig out;
  if (j.contains("experiment")) {
    const Json& e = j.at("experiment");
    if (!e.is_object()) throw SchemaError("experiment must be an object");
    check_keys(e, "experiment", {"name", "seed", "replications"});
    out.name = get_string_or(e, "experiment", "name", "");
    out.seed = get_uint_or(e, "experiment", "seed", 0);
    out.replications = get_uint_or(e, "experiment", "replications", 1);
    if (out.replications == 0) throw SchemaError("experiment.replications must be positive");
  }
  require_field(j, "config", "instance");
  out.instance = parse_instance_block(j.at("instance"), base_dir);
  require_field(j, "config", "algorithms");
  const Json& algos = j.at("algorithms");
  if (!algos.is_array() || algos.empty()) {
    throw SchemaError("algorithms must be a non-empty array");
  }
  for (std::size_t i = 0; i < algos.size(); ++i) {
    out.algos.push_back(parse_algo_entry(algos.at(i), "algorithms[" + std::to_string(i) + "]"));
  }
  require_field(j, "config", "t_grid");
  const Json& grid = j.at("t_grid");
  if (!grid.is_array() || grid.empty()) throw SchemaError("t_grid must be a non-empty array");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Json& v = grid.at(i);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() > 0)) {
      throw SchemaError("t_grid[" + std::to_string(i) + "] must be a positive integer");
    }
    std::uint64_t t = v.get<std::uint64_t>();
    if (t < 2) throw SchemaError("t_grid[" + std::to_string(i) + "] must be at least 2");
    out.t_grid.push_back(t);
  }
  out.output_dir = get_string(j, "config", "output_dir");
  if (out.output_dir.empty()) throw SchemaError("output_dir must be a non-empty string");
  return out;
}

CliConfig load_cli_config(const std::string& path) {
  Json j = load_json_file(path);
  return parse_cli_config(j, dirname_of(path));
}

}  // namespace bwk
