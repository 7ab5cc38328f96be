#pragma once

#include <cstddef>
#include <vector>

namespace ehnet {

// Common scenario Markov chain {S_k}: each state carries the Bernoulli energy
// arrival rate beta(s). Immutable after construction.
class ScenarioChain {
 public:
  // transition: row-stochastic n x n matrix, rows summing to 1 within 1e-12;
  // the chain must be irreducible. beta entries lie in [0, 1].
  ScenarioChain(std::vector<std::vector<double>> transition, std::vector<double> beta);

  // Single-scenario shorthand.
  static ScenarioChain single(double beta);

  std::size_t n_states() const { return beta_.size(); }
  const std::vector<std::vector<double>>& transition() const { return transition_; }
  double beta(std::size_t s) const { return beta_.at(s); }
  const std::vector<double>& beta() const { return beta_; }

  // Stationary distribution pi_S, components >= 0 summing to 1 within 1e-12.
  const std::vector<double>& stationary_distribution() const { return stationary_; }

  // Mean EH rate sum_s pi_S(s) beta(s).
  double average_eh_rate() const;

  // One transition from state s driven by a uniform draw u in [0, 1).
  std::size_t step(std::size_t s, double u) const;

 private:
  std::vector<std::vector<double>> transition_;
  std::vector<double> beta_;
  std::vector<double> stationary_;
};

}  // namespace ehnet
