#include "bwk/instance.hpp"

#include <cmath>
#include <stdexcept>

#include "bwk/json_io.hpp"

namespace bwk {

std::vector<double> Instance::reward_means() const {
  std::vector<double> r(m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (const Atom& a : arms[i].atoms) r[i] += a.p * a.reward;
  return r;
}

std::vector<std::vector<double>> Instance::cost_means() const {
  std::vector<std::vector<double>> C(d, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i)
    for (const Atom& a : arms[i].atoms)
      for (std::size_t j = 0; j < d; ++j) C[j][i] += a.p * a.cost[j];
  return C;
}

void Instance::validate() const {
  if (m == 0 || d == 0) throw std::invalid_argument("instance: m and d must be positive");
  if (T == 0) throw std::invalid_argument("instance: T must be positive");
  if (B.size() != d) throw std::invalid_argument("instance: B size mismatch");
  for (double bj : B)
    if (!(bj > 0)) throw std::invalid_argument("instance: budgets must be positive");
  if (arms.size() != m) throw std::invalid_argument("instance: arm count mismatch");
  for (std::size_t i = 0; i < m; ++i) {
    const Arm& arm = arms[i];
    if (arm.atoms.empty()) throw std::invalid_argument("instance: arm without atoms");
    double psum = 0;
    for (const Atom& a : arm.atoms) {
      if (a.p < 0) throw std::invalid_argument("instance: negative atom probability");
      psum += a.p;
      if (a.reward < 0 || a.reward > 1)
        throw std::invalid_argument("instance: reward outside [0,1]");
      if (a.cost.size() != d) throw std::invalid_argument("instance: atom cost size mismatch");
      for (double c : a.cost)
        if (c < 0 || c > 1) throw std::invalid_argument("instance: cost outside [0,1]");
    }
    if (std::fabs(psum - 1.0) > 1e-9)
      throw std::invalid_argument("instance: atom probabilities must sum to 1");
  }
}

Draw sample_arm(const Instance& inst, std::size_t arm, Rng& rng) {
  double u = uniform01(rng);
  const auto& atoms = inst.arms[arm].atoms;
  double acc = 0;
  for (const Atom& a : atoms) {
    acc += a.p;
    if (u <= acc) return Draw{a.reward, a.cost};
  }
  const Atom& last = atoms.back();
  return Draw{last.reward, last.cost};
}

Instance augment_time_resource(std::size_t m, std::size_t d_user, std::uint64_t T,
                               double B, std::vector<Arm> raw_arms) {
  Instance inst;
  inst.m = m;
  inst.d = d_user + 1;
  inst.T = T;
  inst.B.assign(inst.d, B);
  if (T == 0) throw std::invalid_argument("instance: T must be positive");
  double b = B / static_cast<double>(T);
  inst.arms.resize(m);
  if (raw_arms.size() != m) throw std::invalid_argument("instance: arm count mismatch");
  for (std::size_t i = 0; i < m; ++i) {
    for (Atom& a : raw_arms[i].atoms) {
      if (a.cost.size() != d_user)
        throw std::invalid_argument("instance: atom cost must have d_user entries");
      a.cost.insert(a.cost.begin(), b);
    }
    inst.arms[i] = std::move(raw_arms[i]);
  }
  inst.validate();
  return inst;
}

Instance with_horizon(const Instance& inst, std::uint64_t T) {
  Instance out = inst;
  out.T = T;
  double b = inst.b();
  for (std::size_t j = 0; j < out.d; ++j)
    out.B[j] = inst.B[j] / static_cast<double>(inst.T) * static_cast<double>(T);
  for (Arm& arm : out.arms)
    for (Atom& a : arm.atoms) a.cost[0] = b;
  return out;
}

Instance load_instance_json(const std::string& text) {
  Json j = parse_json_text(text, "instance");
  const std::string path = "instance";
  check_keys(j, path, {"m", "d_user", "T", "B", "arms"});
  std::size_t m = static_cast<std::size_t>(get_uint(j, path, "m"));
  std::size_t d_user = static_cast<std::size_t>(get_uint(j, path, "d_user"));
  std::uint64_t T = get_uint(j, path, "T");
  double B = get_number(j, path, "B");
  const Json& arms_j = require_field(j, path, "arms");
  if (!arms_j.is_array()) throw SchemaError("expected array at instance.arms");
  std::vector<Arm> raw;
  for (std::size_t i = 0; i < arms_j.size(); ++i) {
    std::string apath = path + ".arms[" + std::to_string(i) + "]";
    check_keys(arms_j[i], apath, {"atoms"});
    const Json& atoms_j = require_field(arms_j[i], apath, "atoms");
    if (!atoms_j.is_array()) throw SchemaError("expected array at " + apath + ".atoms");
    Arm arm;
    for (std::size_t k = 0; k < atoms_j.size(); ++k) {
      std::string tpath = apath + ".atoms[" + std::to_string(k) + "]";
      check_keys(atoms_j[k], tpath, {"p", "reward", "cost"});
      Atom a;
      a.p = get_number(atoms_j[k], tpath, "p");
      a.reward = get_number(atoms_j[k], tpath, "reward");
      a.cost = get_number_array(atoms_j[k], tpath, "cost");
      arm.atoms.push_back(std::move(a));
    }
    raw.push_back(std::move(arm));
  }
  return augment_time_resource(m, d_user, T, B, std::move(raw));
}

Instance load_instance_file(const std::string& path) {
  return load_instance_json(load_json_file(path).dump());
}

std::string instance_to_json(const Instance& inst) {
  Json j;
  j["m"] = inst.m;
  j["d_user"] = inst.d - 1;
  j["T"] = inst.T;
  j["B"] = inst.B[0];
  Json arms = Json::array();
  for (const Arm& arm : inst.arms) {
    Json atoms = Json::array();
    for (const Atom& a : arm.atoms) {
      Json aj;
      aj["p"] = a.p;
      aj["reward"] = a.reward;
      aj["cost"] = std::vector<double>(a.cost.begin() + 1, a.cost.end());
      atoms.push_back(aj);
    }
    Json armj;
    armj["atoms"] = atoms;
    arms.push_back(armj);
  }
  j["arms"] = arms;
  return j.dump(2);
}

}  // namespace bwk
