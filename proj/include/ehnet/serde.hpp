#pragma once

#include <string>

#include <json.hpp>

#include "ehnet/policy.hpp"
#include "ehnet/scenario.hpp"
#include "ehnet/simulator.hpp"
#include "ehnet/solver.hpp"
#include "ehnet/utility_model.hpp"

namespace ehnet::serde {

using nlohmann::json;

// Model: {"kind":"exponential_perfect","rho":0.0} or
// {"kind":"tabulated","grid":[{"y":..,"tail":..,"vbar":..},...],"rho":..}.
UtilityModel model_from_json(const json& j);
json model_to_json(const UtilityModel& model);

// Chain: {"transition":[[..]],"beta":[..]} or the single-scenario shorthand
// {"beta":0.1}.
ScenarioChain chain_from_json(const json& j);
json chain_to_json(const ScenarioChain& chain);

// Policy: {"e_max":N,"eta":[[row per scenario]]}.
Policy policy_from_json(const json& j);
json policy_to_json(const Policy& policy);

SolverTolerances tolerances_from_json(const json& j);  // missing fields keep defaults
json tolerances_to_json(const SolverTolerances& tol);

SimConfig sim_config_from_json(const json& j);
json sim_config_to_json(const SimConfig& config);
json sim_result_to_json(const SimResult& result);

json solve_report_to_json(const SolveReport& report);
json heuristic_report_to_json(const HeuristicReport& report);
json chain_summary_to_json(const ChainSummary& summary);

// Line/column diagnostic for a byte offset inside a JSON document.
std::string locate(const std::string& text, std::size_t byte_offset);

}  // namespace ehnet::serde
