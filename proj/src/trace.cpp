#include "bwk/algos.hpp"

namespace bwk {

Json trace_to_json(const RunTrace& trace) {
  Json j;
  j["algo"] = trace.algo;
  j["T"] = trace.T;
  j["seed"] = trace.seed;
  j["tau"] = trace.tau;
  j["phase1_rounds"] = trace.phase1_rounds;
  j["stop_reason"] = trace.stop_reason;
  j["pseudo_reward"] = trace.pseudo_reward;
  j["realized_reward"] = trace.realized_reward;
  j["budget_remaining"] = trace.budget_remaining;
  j["pulls"] = trace.pulls;
  j["qmc_calls"] = trace.qmc_calls;
  j["qmc_queries"] = trace.qmc_queries;
  j["lp_solves"] = trace.lp_solves;
  j["modeled_quantum_cost"] = trace.modeled_quantum_cost;
  j["modeled_classical_cost"] = trace.modeled_classical_cost;
  j["support_arms"] = trace.support_arms;
  j["slack_rows"] = trace.slack_rows;
  j["identification_done"] = trace.identification_done;
  j["identification_round"] = trace.identification_round;
  Json events = Json::array();
  for (const auto& e : trace.events) {
    Json je;
    je["t"] = e.t;
    je["kind"] = e.kind;
    je["detail"] = e.detail;
    events.push_back(je);
  }
  j["events"] = events;
  if (!trace.rounds.empty()) {
    Json rounds = Json::array();
    for (const auto& r : trace.rounds) {
      Json jr;
      jr["arm"] = r.arm;
      jr["reward"] = r.reward;
      jr["cost"] = r.cost;
      rounds.push_back(jr);
    }
    j["rounds"] = rounds;
  }
  return j;
}

}  // namespace bwk
