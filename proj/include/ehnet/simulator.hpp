#pragma once

#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>

#include "ehnet/chain.hpp"
#include "ehnet/policy.hpp"
#include "ehnet/scenario.hpp"
#include "ehnet/utility_model.hpp"

namespace ehnet {

struct SimConfig {
  std::size_t u_count = 1;
  std::size_t e_max = 1;
  std::size_t horizon = 100000;   // K slots
  std::size_t burn_in = 10000;    // slots discarded before averaging
  std::uint64_t seed = 1;
  std::size_t batch_count = 20;   // batch-means confidence interval
  std::size_t initial_energy = 0;
  std::size_t initial_scenario = 0;
  std::string trace_path;         // per-slot CSV trace when non-empty (small K only)

  void validate() const;
};

struct SimResult {
  double R_hat = 0.0;                       // estimated network utility per slot
  std::vector<double> per_node;             // per-node utility rates
  double ci_half_width = 0.0;               // 95% batch-means half width on R_hat
  std::vector<std::vector<double>> pi_hat;  // [scenario][energy level] occupancy
  std::vector<double> p_hat;                // empirical P(transmit | s)
  std::vector<std::size_t> scenario_slots;  // counted slots per scenario
  double collision_rate = 0.0;              // slots with >= 2 transmitters
  double overflow_rate = 0.0;               // node-slots losing a harvested quantum
  std::size_t counted_slots = 0;
};

// Slot-level simulation of the U-node network. `policies` holds either one
// shared policy or one per node. Deterministic in the seed: every node and
// the scenario process run on their own sub-stream.
SimResult simulate(const std::vector<Policy>& policies, const UtilityModel& model,
                   const ScenarioChain& chain, const SimConfig& config);

// Comparison of empirical occupancy/transmission statistics from a
// static-scenario run against the exact chain quantities, with 3-sigma
// binomial bands per energy level.
struct ChainCheckRow {
  std::size_t e = 0;
  double pi_hat = 0.0;
  double pi = 0.0;
  double residual = 0.0;
  double band = 0.0;
  bool pass = false;
};

struct ChainCheckReport {
  std::vector<ChainCheckRow> levels;
  double p_hat = 0.0;
  double p = 0.0;
  double p_residual = 0.0;
  double p_band = 0.0;
  bool p_pass = false;
  bool all_pass = false;
};

ChainCheckReport empirical_chain_check(const SimResult& result, const ChainSummary& summary,
                                       std::size_t scenario = 0);

}  // namespace ehnet
