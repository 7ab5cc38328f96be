#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ehnet/chain.hpp"
#include "ehnet/policy.hpp"
#include "ehnet/scenario.hpp"
#include "ehnet/utility_model.hpp"

namespace ehnet {

// Maximizer of F(x) = U g(x) (1 - x)^(U-1): the unique root of
// g'(x)(1 - x) = (U - 1) g(x) in (0, 1/U). By convention x* = 1 for U = 1.
double x_star(const UtilityModel& model, std::size_t u_count,
              const SolverTolerances& tol = {});

// Network-utility upper bound R_up = sum_s pi_S(s) U g(m_s) (1 - m_s)^(U-1)
// with m_s = min{x*, beta(s)}.
double upper_bound(const UtilityModel& model, const ScenarioChain& chain, std::size_t u_count,
                   const SolverTolerances& tol = {});

// Envelope (eta_lo, eta_hi) confining every level of the optimal
// lambda-penalized policy; eta_lo < eta(e) < eta_hi for all e > 0.
struct StructuralBounds {
  double eta_lo = 0.0;
  double eta_hi = 0.0;
  double x_star_lambda = 0.0;  // argmax of g(x) - lambda x
  bool degenerate = false;     // multiplier so large that both bounds collapsed
};

StructuralBounds structural_bounds(const UtilityModel& model, double lambda, double beta,
                                   const SolverTolerances& tol = {});

// Policy iteration for the lambda-penalized single-node problem in one
// scenario. Returns the converged row (index 0 holds eta(0) = 0).
struct PiaResult {
  std::vector<double> row;
  double Z = 0.0;
  std::size_t sweeps = 0;
  std::vector<double> z_trace;      // Z after each evaluation
  std::vector<double> d_eta_trace;  // max |eta change| per sweep (diagnostic only)
  StructuralBounds bounds;
};

PiaResult pia(const UtilityModel& model, double lambda, double beta, std::size_t e_max,
              const SolverTolerances& tol = {});

// Result of a full solve (SNE, and also reused by the e_max = 1 exhaustive
// optimum, where the multiplier fields are absent).
struct SolveReport {
  Policy policy;
  std::vector<double> lambda_star;            // per scenario; empty for gop
  double R = 0.0;
  std::vector<double> R_per_scenario;
  double upper_bound = 0.0;
  double gap = 0.0;                           // 1 - R / upper_bound
  std::vector<double> P_bar;                  // P(eta|s) per scenario
  std::vector<std::size_t> bisection_steps;   // per scenario
  std::vector<std::vector<std::size_t>> pia_sweeps;  // per scenario, per bisection call
  std::vector<std::pair<double, double>> bound_pair;  // (eta_lo, eta_hi) at lambda*
  std::string method;
};

// Symmetric Nash equilibrium via bisection on h(lambda) = Lambda(eta) - lambda,
// solved independently per scenario.
SolveReport sne(const UtilityModel& model, const ScenarioChain& chain, std::size_t u_count,
                std::size_t e_max, const SolverTolerances& tol = {});

// Exhaustive globally optimal policy for e_max = 1 (coarse grid plus
// golden-section refinement of the single free probability).
SolveReport gop_emax1(const UtilityModel& model, const ScenarioChain& chain, std::size_t u_count,
                      const SolverTolerances& tol = {});

// Constant heuristic policy eta(e, s) = min{x*, beta(s)} for e > 0,
// with regime classification and the battery-capacity sandwich on R.
struct HeuristicReport {
  double x_star = 0.0;
  std::vector<double> eta;            // per scenario
  std::vector<bool> network_limited;  // regime per scenario (false = energy-limited)
  std::vector<double> alpha;          // decay exponent, network-limited scenarios only (else 0)
  std::vector<bool> inactive;         // beta = 0 scenarios
  double R = 0.0;
  std::vector<double> R_per_scenario;
  double lower_bound = 0.0;  // sandwich: lower_bound < R < upper_bound
  double upper_bound = 0.0;
};

std::pair<Policy, HeuristicReport> heuristic(const UtilityModel& model,
                                             const ScenarioChain& chain, std::size_t u_count,
                                             std::size_t e_max, const SolverTolerances& tol = {});

}  // namespace ehnet
