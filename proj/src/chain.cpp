#include "ehnet/chain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ehnet {

double z_lambda(const UtilityModel& model, double lambda, double x) {
  return model.g(x) - lambda * x;
}

std::vector<double> steady_state(const std::vector<double>& eta, double beta) {
  if (!(beta > 0.0) || !(beta < 1.0)) {
    throw std::domain_error("steady_state: beta in {0, 1} gives a degenerate battery chain");
  }
  if (eta.empty() || eta[0] != 0.0) {
    throw std::domain_error("steady_state: policy row must start with eta(0) = 0");
  }
  const std::size_t e_max = eta.size() - 1;
  for (std::size_t e = 1; e <= e_max; ++e) {
    if (!(eta[e] > 0.0) || eta[e] > 1.0 || (e < e_max && eta[e] >= 1.0)) {
      throw std::domain_error("steady_state: policy row is not admissible");
    }
  }
  // Balance equations pi(e) beta (1 - eta(e)) = pi(e+1) (1 - beta) eta(e+1),
  // accumulated as log weights to avoid under/overflow for large e_max.
  std::vector<double> logw(e_max + 1, 0.0);
  const double lb = std::log(beta);
  const double lnb = std::log(1.0 - beta);
  for (std::size_t e = 0; e < e_max; ++e) {
    logw[e + 1] = logw[e] + lb + std::log1p(-eta[e]) - lnb - std::log(eta[e + 1]);
  }
  const double m = *std::max_element(logw.begin(), logw.end());
  std::vector<double> pi(e_max + 1);
  double sum = 0.0;
  for (std::size_t e = 0; e <= e_max; ++e) {
    pi[e] = std::exp(logw[e] - m);
    sum += pi[e];
  }
  for (double& v : pi) v /= sum;
  return pi;
}

std::vector<double> relative_values(const std::vector<double>& eta, const UtilityModel& model,
                                    double beta, double lambda, double Z) {
  if (!(beta > 0.0) || !(beta < 1.0)) {
    throw std::domain_error("relative_values: beta must lie in (0, 1)");
  }
  const std::size_t e_max = eta.size() - 1;
  std::vector<double> d(e_max + 1, 0.0);
  for (std::size_t e = 0; e < e_max; ++e) {
    if (eta[e] >= 1.0) {
      throw std::domain_error("relative_values: eta = 1 below the top level is inadmissible");
    }
    const double denom = beta * (1.0 - eta[e]);
    d[e + 1] = (Z - z_lambda(model, lambda, eta[e])) / denom +
               (1.0 - beta) * eta[e] / denom * d[e];
  }
  return d;
}

ChainSummary functionals(const std::vector<double>& eta, const UtilityModel& model, double beta,
                         double lambda, std::size_t u_count) {
  ChainSummary cs;
  cs.pi = steady_state(eta, beta);
  const std::size_t e_max = eta.size() - 1;
  // Fixed ascending summation order for reproducibility.
  for (std::size_t e = 1; e <= e_max; ++e) {
    cs.G += cs.pi[e] * model.g(eta[e]);
    cs.P += cs.pi[e] * eta[e];
  }
  cs.Z_lambda = cs.G - lambda * cs.P;
  if (cs.P >= 1.0) {
    throw std::domain_error("functionals: P = 1 leaves Lambda undefined");
  }
  cs.Lambda = (static_cast<double>(u_count) - 1.0) * cs.G / (1.0 - cs.P);
  cs.D = relative_values(eta, model, beta, lambda, cs.Z_lambda);
  return cs;
}

NetworkUtility network_utility(const Policy& policy, const UtilityModel& model,
                               const ScenarioChain& chain, std::size_t u_count) {
  if (policy.n_scenarios() != chain.n_states()) {
    throw std::invalid_argument("network_utility: policy/chain scenario counts disagree");
  }
  NetworkUtility out;
  out.per_scenario.resize(chain.n_states(), 0.0);
  const auto& pi_s = chain.stationary_distribution();
  for (std::size_t s = 0; s < chain.n_states(); ++s) {
    const auto& row = policy.eta[s];
    const bool inactive =
        std::all_of(row.begin(), row.end(), [](double v) { return v == 0.0; });
    if (inactive) continue;  // scenario never transmits
    const ChainSummary cs = functionals(row, model, chain.beta(s), 0.0, u_count);
    out.per_scenario[s] = static_cast<double>(u_count) * cs.G *
                          std::pow(1.0 - cs.P, static_cast<double>(u_count) - 1.0);
    out.total += pi_s[s] * out.per_scenario[s];
  }
  return out;
}

std::string chain_csv(const Policy& policy, const UtilityModel& model, const ScenarioChain& chain,
                      double lambda, std::size_t u_count) {
  std::ostringstream os;
  os.precision(12);
  os << "scenario,e,pi,eta,D\n";
  for (std::size_t s = 0; s < policy.n_scenarios(); ++s) {
    const ChainSummary cs = functionals(policy.eta[s], model, chain.beta(s), lambda, u_count);
    for (std::size_t e = 0; e < policy.eta[s].size(); ++e) {
      os << s << ',' << e << ',' << cs.pi[e] << ',' << policy.eta[s][e] << ',' << cs.D[e] << '\n';
    }
  }
  return os.str();
}

}  // namespace ehnet
