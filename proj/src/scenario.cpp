#include "ehnet/scenario.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace ehnet {

namespace {

// Forward/backward reachability from state 0; for irreducibility both sets
// must cover every state.
std::vector<std::size_t> unreachable_states(const std::vector<std::vector<double>>& p) {
  const std::size_t n = p.size();
  auto bfs = [&](bool forward) {
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const std::size_t s = stack.back();
      stack.pop_back();
      for (std::size_t t = 0; t < n; ++t) {
        const double w = forward ? p[s][t] : p[t][s];
        if (w > 0.0 && !seen[t]) {
          seen[t] = 1;
          stack.push_back(t);
        }
      }
    }
    return seen;
  };
  const auto fwd = bfs(true);
  const auto bwd = bfs(false);
  std::vector<std::size_t> bad;
  for (std::size_t s = 0; s < n; ++s) {
    if (!fwd[s] || !bwd[s]) bad.push_back(s);
  }
  return bad;
}

std::vector<double> solve_stationary(const std::vector<std::vector<double>>& p) {
  const auto n = static_cast<Eigen::Index>(p.size());
  if (n <= 64) {
    // (P^T - I) pi = 0 with the last equation replaced by normalization.
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) a(j, i) = p[i][j];
      a(i, i) -= 1.0;
    }
    a.row(n - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(n - 1) = 1.0;
    Eigen::VectorXd pi = a.partialPivLu().solve(b);
    std::vector<double> out(pi.data(), pi.data() + n);
    double sum = 0.0;
    for (double& v : out) {
      if (v < 0.0 && v > -1e-12) v = 0.0;
      sum += v;
    }
    for (double& v : out) v /= sum;
    return out;
  }
  // Power iteration fallback for large chains.
  std::vector<double> pi(p.size(), 1.0 / static_cast<double>(p.size()));
  std::vector<double> next(p.size(), 0.0);
  for (int it = 0; it < 100000; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t s = 0; s < p.size(); ++s) {
      for (std::size_t t = 0; t < p.size(); ++t) next[t] += pi[s] * p[s][t];
    }
    double diff = 0.0;
    for (std::size_t s = 0; s < p.size(); ++s) diff = std::max(diff, std::fabs(next[s] - pi[s]));
    pi.swap(next);
    if (diff < 1e-15) break;
  }
  return pi;
}

}  // namespace

ScenarioChain::ScenarioChain(std::vector<std::vector<double>> transition,
                             std::vector<double> beta)
    : transition_(std::move(transition)), beta_(std::move(beta)) {
  const std::size_t n = beta_.size();
  if (n == 0) throw std::invalid_argument("ScenarioChain: at least one state required");
  if (transition_.size() != n) {
    throw std::invalid_argument("ScenarioChain: transition and beta sizes disagree");
  }
  for (std::size_t s = 0; s < n; ++s) {
    if (transition_[s].size() != n) {
      throw std::invalid_argument("ScenarioChain: transition matrix must be square");
    }
    double sum = 0.0;
    for (double w : transition_[s]) {
      if (w < 0.0) throw std::invalid_argument("ScenarioChain: negative transition probability");
      sum += w;
    }
    if (std::fabs(sum - 1.0) > 1e-12) {
      throw std::invalid_argument("ScenarioChain: row " + std::to_string(s) +
                                  " does not sum to 1");
    }
    if (beta_[s] < 0.0 || beta_[s] > 1.0) {
      throw std::invalid_argument("ScenarioChain: beta must lie in [0, 1]");
    }
  }
  const auto bad = unreachable_states(transition_);
  if (!bad.empty()) {
    std::string msg = "ScenarioChain: chain is reducible; states not strongly connected:";
    for (std::size_t s : bad) msg += " " + std::to_string(s);
    throw std::invalid_argument(msg);
  }
  stationary_ = solve_stationary(transition_);
}

ScenarioChain ScenarioChain::single(double beta) {
  return ScenarioChain({{1.0}}, {beta});
}

double ScenarioChain::average_eh_rate() const {
  double out = 0.0;
  for (std::size_t s = 0; s < beta_.size(); ++s) out += stationary_[s] * beta_[s];
  return out;
}

std::size_t ScenarioChain::step(std::size_t s, double u) const {
  const auto& row = transition_.at(s);
  double acc = 0.0;
  for (std::size_t t = 0; t < row.size(); ++t) {
    acc += row[t];
    if (u < acc) return t;
  }
  return row.size() - 1;
}

}  // namespace ehnet
