#include "ehnet/simulator.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <cassert>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>

namespace ehnet {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Uniform double in [0, 1) straight from the engine bits; keeps runs
// bit-reproducible regardless of the standard library's distribution code.
double rand01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

}  // namespace

void SimConfig::validate() const {
  if (u_count == 0) throw std::invalid_argument("SimConfig: U must be at least 1");
  if (e_max == 0) throw std::invalid_argument("SimConfig: e_max must be at least 1");
  if (horizon <= burn_in) throw std::invalid_argument("SimConfig: horizon must exceed burn_in");
  if (batch_count < 2) throw std::invalid_argument("SimConfig: batch_count must be at least 2");
  if (initial_energy > e_max) {
    throw std::invalid_argument("SimConfig: initial energy exceeds battery capacity");
  }
}

SimResult simulate(const std::vector<Policy>& policies, const UtilityModel& model,
                   const ScenarioChain& chain, const SimConfig& config) {
  config.validate();
  if (policies.empty()) throw std::invalid_argument("simulate: no policy given");
  if (policies.size() != 1 && policies.size() != config.u_count) {
    throw std::invalid_argument("simulate: need one shared policy or one per node");
  }
  if (config.initial_scenario >= chain.n_states()) {
    throw std::invalid_argument("simulate: initial scenario out of range");
  }
  std::vector<ThresholdTable> thresholds;
  thresholds.reserve(policies.size());
  for (const auto& p : policies) {
    if (p.e_max != config.e_max || p.n_scenarios() != chain.n_states()) {
      throw std::invalid_argument("simulate: policy shape does not match config/chain");
    }
    const auto violations = validate(p);
    if (!violations.empty()) {
      throw std::invalid_argument("simulate: policy is not admissible (" +
                                  violations.front().reason + ")");
    }
    thresholds.push_back(to_thresholds(p, model));
  }
  auto threshold_of = [&](std::size_t node, std::size_t e, std::size_t s) {
    const auto& t = thresholds[policies.size() == 1 ? 0 : node];
    return t.y_th[s][e];
  };

  const std::size_t u_count = config.u_count;
  std::mt19937_64 scen_rng(splitmix64(config.seed));
  std::vector<std::mt19937_64> node_rng;
  node_rng.reserve(u_count);
  for (std::size_t i = 0; i < u_count; ++i) {
    node_rng.emplace_back(splitmix64(config.seed + 0x9E3779B97F4A7C15ull * (i + 1)));
  }

  std::vector<std::size_t> energy(u_count, config.initial_energy);
  std::size_t scenario = config.initial_scenario;

  const std::size_t counted = config.horizon - config.burn_in;
  std::vector<double> batch_sum(config.batch_count, 0.0);
  std::vector<double> node_total(u_count, 0.0);
  std::vector<std::vector<double>> occupancy(chain.n_states(),
                                             std::vector<double>(config.e_max + 1, 0.0));
  std::vector<std::size_t> scen_slots(chain.n_states(), 0);
  std::vector<std::size_t> scen_tx(chain.n_states(), 0);
  std::size_t collision_slots = 0;
  std::size_t overflow_events = 0;

  std::ofstream trace;
  const bool tracing = !config.trace_path.empty();
  if (tracing) {
    if (config.horizon > 100000) {
      throw std::invalid_argument("simulate: trace output is limited to horizons <= 1e5 slots");
    }
    trace.open(config.trace_path);
    if (!trace) throw std::runtime_error("simulate: cannot open trace file");
    trace << "slot,scenario";
    for (std::size_t n = 0; n < u_count; ++n) trace << ",e" << n << ",tx" << n;
    trace << ",winner,reward\n";
  }

  std::vector<double> obs(u_count, 0.0);
  std::vector<char> tx(u_count, 0);
  for (std::size_t k = 0; k < config.horizon; ++k) {
    // Slot order: scenario advance, observation draws, transmit decisions,
    // channel resolution, harvest draws, battery update. Harvested quanta
    // become usable only from the next slot.
    if (k > 0) scenario = chain.step(scenario, rand01(scen_rng));
    const bool count = k >= config.burn_in;
    if (count) {
      ++scen_slots[scenario];
      for (std::size_t n = 0; n < u_count; ++n) occupancy[scenario][energy[n]] += 1.0;
    }

    std::size_t n_tx = 0;
    std::size_t last_tx = 0;
    for (std::size_t n = 0; n < u_count; ++n) {
      obs[n] = model.sample_observation(1.0 - rand01(node_rng[n]));
      tx[n] = energy[n] > 0 && obs[n] >= threshold_of(n, energy[n], scenario);
      if (tx[n]) {
        ++n_tx;
        last_tx = n;
      }
    }

    double slot_reward = 0.0;
    if (n_tx == 1) {
      const double y = obs[last_tx];
      const double rho = model.outage(y);
      const bool success = rho <= 0.0 || rand01(node_rng[last_tx]) >= rho;
      if (success) slot_reward = model.conditional_mean_utility(y);
    } else if (n_tx >= 2 && count) {
      ++collision_slots;
    }
    if (count && slot_reward > 0.0) {
      node_total[last_tx] += slot_reward;
      const std::size_t b = (k - config.burn_in) * config.batch_count / counted;
      batch_sum[b] += slot_reward;
    }
    if (count) {
      for (std::size_t n = 0; n < u_count; ++n) {
        if (tx[n]) ++scen_tx[scenario];
      }
    }

    if (tracing) {
      trace << k << ',' << scenario;
      for (std::size_t n = 0; n < u_count; ++n) {
        trace << ',' << energy[n] << ',' << static_cast<int>(tx[n]);
      }
      trace << ',' << (n_tx == 1 ? static_cast<long>(last_tx) : -1) << ',' << slot_reward
            << '\n';
    }

    const double beta = chain.beta(scenario);
    for (std::size_t n = 0; n < u_count; ++n) {
      const std::size_t q = tx[n] ? 1 : 0;
      assert(energy[n] <= config.e_max && (energy[n] > 0 || q == 0));
      const std::size_t harvested = rand01(node_rng[n]) < beta ? 1 : 0;
      const std::size_t next = energy[n] - q + harvested;
      if (next > config.e_max) {
        if (count) ++overflow_events;
        energy[n] = config.e_max;
      } else {
        energy[n] = next;
      }
    }
  }

  SimResult res;
  res.counted_slots = counted;
  res.per_node.resize(u_count, 0.0);
  for (std::size_t n = 0; n < u_count; ++n) {
    res.per_node[n] = node_total[n] / static_cast<double>(counted);
    res.R_hat += res.per_node[n];
  }
  // Batch-means confidence interval on the per-slot network reward.
  const std::size_t b_count = config.batch_count;
  std::vector<double> batch_mean(b_count, 0.0);
  double mean = 0.0;
  for (std::size_t b = 0; b < b_count; ++b) {
    // Batch b holds the slots j with j * b_count / counted == b.
    const std::size_t lo = (b * counted + b_count - 1) / b_count;
    const std::size_t hi = ((b + 1) * counted + b_count - 1) / b_count;
    batch_mean[b] = batch_sum[b] / static_cast<double>(hi - lo);
    mean += batch_mean[b];
  }
  mean /= static_cast<double>(b_count);
  double var = 0.0;
  for (double bm : batch_mean) var += (bm - mean) * (bm - mean);
  var /= static_cast<double>(b_count - 1);
  const boost::math::students_t tdist(static_cast<double>(b_count - 1));
  const double tq = boost::math::quantile(tdist, 0.975);
  res.ci_half_width = tq * std::sqrt(var / static_cast<double>(b_count));

  res.pi_hat.assign(chain.n_states(), std::vector<double>(config.e_max + 1, 0.0));
  res.p_hat.assign(chain.n_states(), 0.0);
  res.scenario_slots = scen_slots;
  for (std::size_t s = 0; s < chain.n_states(); ++s) {
    const double node_slots = static_cast<double>(scen_slots[s]) * static_cast<double>(u_count);
    if (node_slots == 0.0) continue;
    for (std::size_t e = 0; e <= config.e_max; ++e) {
      res.pi_hat[s][e] = occupancy[s][e] / node_slots;
    }
    res.p_hat[s] = static_cast<double>(scen_tx[s]) / node_slots;
  }
  res.collision_rate = static_cast<double>(collision_slots) / static_cast<double>(counted);
  res.overflow_rate = static_cast<double>(overflow_events) /
                      (static_cast<double>(counted) * static_cast<double>(u_count));
  return res;
}

ChainCheckReport empirical_chain_check(const SimResult& result, const ChainSummary& summary,
                                       std::size_t scenario) {
  if (scenario >= result.scenario_slots.size()) {
    throw std::domain_error("empirical_chain_check: scenario index out of range");
  }
  const double node_slots = static_cast<double>(result.scenario_slots[scenario]) *
                            static_cast<double>(result.per_node.size());
  if (node_slots <= 0.0) {
    throw std::domain_error("empirical_chain_check: no counted slots after burn-in");
  }
  ChainCheckReport rep;
  rep.all_pass = true;
  for (std::size_t e = 0; e < summary.pi.size(); ++e) {
    ChainCheckRow row;
    row.e = e;
    row.pi = summary.pi[e];
    row.pi_hat = result.pi_hat[scenario][e];
    row.residual = std::fabs(row.pi_hat - row.pi);
    row.band = 3.0 * std::sqrt(std::max(row.pi * (1.0 - row.pi), 1e-300) / node_slots);
    row.pass = row.residual <= row.band;
    rep.all_pass = rep.all_pass && row.pass;
    rep.levels.push_back(row);
  }
  rep.p = summary.P;
  rep.p_hat = result.p_hat[scenario];
  rep.p_residual = std::fabs(rep.p_hat - rep.p);
  rep.p_band = 3.0 * std::sqrt(std::max(rep.p * (1.0 - rep.p), 1e-300) / node_slots);
  rep.p_pass = rep.p_residual <= rep.p_band;
  rep.all_pass = rep.all_pass && rep.p_pass;
  return rep;
}

}  // namespace ehnet
