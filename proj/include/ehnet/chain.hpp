#pragma once

#include <cstddef>
#include <vector>

#include "ehnet/policy.hpp"
#include "ehnet/scenario.hpp"
#include "ehnet/utility_model.hpp"

namespace ehnet {

// Exact single-node, single-scenario quantities for one policy row.
struct ChainSummary {
  std::vector<double> pi;  // steady state over energy levels 0..e_max
  double G = 0.0;          // expected no-collision utility
  double P = 0.0;          // average transmission probability
  double Z_lambda = 0.0;   // G - lambda * P
  double Lambda = 0.0;     // (U - 1) G / (1 - P)
  std::vector<double> D;   // relative-value differences, D[0] = 0
};

// z_lambda(x) = g(x) - lambda * x.
double z_lambda(const UtilityModel& model, double lambda, double x);

// Steady state of the battery birth-death chain for an admissible policy row
// eta (length e_max + 1, eta[0] = 0) and harvest rate beta in (0, 1).
// Evaluated in log space, normalized at the end.
std::vector<double> steady_state(const std::vector<double>& eta, double beta);

// Relative-value differences D(e) of the lambda-penalized average-reward
// problem: D(0) = 0 and for e < e_max
//   D(e+1) = [Z - z_lambda(eta(e))] / [beta (1 - eta(e))]
//          + [(1 - beta) eta(e) / (beta (1 - eta(e)))] D(e).
std::vector<double> relative_values(const std::vector<double>& eta, const UtilityModel& model,
                                    double beta, double lambda, double Z);

// Full per-scenario summary; U enters only through Lambda.
ChainSummary functionals(const std::vector<double>& eta, const UtilityModel& model, double beta,
                         double lambda, std::size_t u_count);

// Network utility of a symmetric policy: R[s] = U G(eta|s) (1 - P(eta|s))^(U-1),
// R = sum_s pi_S(s) R[s]. Scenarios with an all-zero row contribute 0.
struct NetworkUtility {
  double total = 0.0;
  std::vector<double> per_scenario;
};

NetworkUtility network_utility(const Policy& policy, const UtilityModel& model,
                               const ScenarioChain& chain, std::size_t u_count);

// Debugging dump: per-scenario CSV of (e, pi, eta, D) at a given lambda.
std::string chain_csv(const Policy& policy, const UtilityModel& model, const ScenarioChain& chain,
                      double lambda, std::size_t u_count);

}  // namespace ehnet
