#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ehnet/scenario.hpp"
#include "ehnet/utility_model.hpp"

namespace ehnet {

// Transmission-probability table eta(e, s) for e in {0, ..., e_max}.
// Admissible tables satisfy eta(0,s) = 0, interior levels in (0, 1), top
// level in (0, 1]. Plain value type.
struct Policy {
  std::size_t e_max = 0;
  std::vector<std::vector<double>> eta;  // [scenario][energy level]

  Policy() = default;
  Policy(std::size_t e_max_, std::size_t n_scenarios);

  std::size_t n_scenarios() const { return eta.size(); }
  double at(std::size_t e, std::size_t s) const { return eta.at(s).at(e); }
};

struct PolicyViolation {
  std::size_t e = 0;
  std::size_t s = 0;
  std::string reason;
};

// Checks admissibility clause by clause; never throws.
std::vector<PolicyViolation> validate(const Policy& policy);
bool is_admissible(const Policy& policy);

// Censoring thresholds y_th(e, s) matching a policy under a given model.
// Levels with eta = 0 map to +infinity (never transmit).
struct ThresholdTable {
  std::vector<std::vector<double>> y_th;  // [scenario][energy level]
};

ThresholdTable to_thresholds(const Policy& policy, const UtilityModel& model);

// CSV dump of (scenario, e, eta, y_th) rows.
std::string thresholds_csv(const Policy& policy, const UtilityModel& model);

// Energy-balanced baseline: eta(e, s) = beta(s) for all e > 0, clipped into
// the admissible open set. A zero-rate scenario is floored at a tiny
// probability and reported through `warnings` when provided.
Policy ebp(std::size_t e_max, const ScenarioChain& chain,
           std::vector<std::string>* warnings = nullptr);

// Network-balanced baseline: eta(e, s) = 1/U for all e > 0.
Policy nbp(std::size_t e_max, std::size_t n_scenarios, std::size_t u_count);

// Clips a probability into the open interval used for interior levels.
double clip_interior(double x);

}  // namespace ehnet
