#include "ehnet/policy.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ehnet {

namespace {
constexpr double kClip = 1e-12;
}

Policy::Policy(std::size_t e_max_, std::size_t n_scenarios)
    : e_max(e_max_), eta(n_scenarios, std::vector<double>(e_max_ + 1, 0.0)) {}

double clip_interior(double x) {
  if (x < kClip) return kClip;
  if (x > 1.0 - kClip) return 1.0 - kClip;
  return x;
}

std::vector<PolicyViolation> validate(const Policy& policy) {
  std::vector<PolicyViolation> out;
  if (policy.eta.empty()) {
    out.push_back({0, 0, "policy has no scenario rows"});
    return out;
  }
  for (std::size_t s = 0; s < policy.eta.size(); ++s) {
    const auto& row = policy.eta[s];
    if (row.size() != policy.e_max + 1) {
      out.push_back({0, s, "row length does not match e_max + 1"});
      continue;
    }
    if (row[0] != 0.0) {
      out.push_back({0, s, "eta(0) must be 0 (cannot transmit on empty battery)"});
    }
    for (std::size_t e = 1; e < policy.e_max; ++e) {
      if (!(row[e] > 0.0) || !(row[e] < 1.0)) {
        out.push_back({e, s, "interior level must lie strictly inside (0, 1)"});
      }
    }
    if (policy.e_max >= 1) {
      const double top = row[policy.e_max];
      if (!(top > 0.0) || top > 1.0) {
        out.push_back({policy.e_max, s, "top level must lie in (0, 1]"});
      }
    }
  }
  return out;
}

bool is_admissible(const Policy& policy) { return validate(policy).empty(); }

ThresholdTable to_thresholds(const Policy& policy, const UtilityModel& model) {
  ThresholdTable table;
  table.y_th.resize(policy.eta.size());
  for (std::size_t s = 0; s < policy.eta.size(); ++s) {
    table.y_th[s].resize(policy.eta[s].size());
    for (std::size_t e = 0; e < policy.eta[s].size(); ++e) {
      const double x = policy.eta[s][e];
      table.y_th[s][e] = (x <= 0.0) ? std::numeric_limits<double>::infinity()
                                    : model.threshold_of_probability(x);
    }
  }
  return table;
}

std::string thresholds_csv(const Policy& policy, const UtilityModel& model) {
  const ThresholdTable table = to_thresholds(policy, model);
  std::ostringstream os;
  os << "scenario,e,eta,y_th\n";
  os.precision(12);
  for (std::size_t s = 0; s < policy.eta.size(); ++s) {
    for (std::size_t e = 0; e < policy.eta[s].size(); ++e) {
      os << s << ',' << e << ',' << policy.eta[s][e] << ',';
      if (std::isinf(table.y_th[s][e])) {
        os << "inf";
      } else {
        os << table.y_th[s][e];
      }
      os << '\n';
    }
  }
  return os.str();
}

Policy ebp(std::size_t e_max, const ScenarioChain& chain, std::vector<std::string>* warnings) {
  Policy p(e_max, chain.n_states());
  for (std::size_t s = 0; s < chain.n_states(); ++s) {
    double b = chain.beta(s);
    if (b <= 0.0) {
      b = kClip;
      if (warnings) {
        warnings->push_back("scenario " + std::to_string(s) +
                            ": beta = 0, transmission probability floored at 1e-12");
      }
    }
    for (std::size_t e = 1; e <= e_max; ++e) {
      p.eta[s][e] = (e == e_max) ? std::min(b, 1.0) : clip_interior(b);
    }
  }
  return p;
}

Policy nbp(std::size_t e_max, std::size_t n_scenarios, std::size_t u_count) {
  if (u_count == 0) throw std::domain_error("nbp: U must be at least 1");
  const double x = 1.0 / static_cast<double>(u_count);
  Policy p(e_max, n_scenarios);
  for (std::size_t s = 0; s < n_scenarios; ++s) {
    for (std::size_t e = 1; e <= e_max; ++e) {
      p.eta[s][e] = (e == e_max) ? x : clip_interior(x);
    }
  }
  return p;
}

}  // namespace ehnet
