#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ehnet {

// Thrown when an iterative solver exhausts its iteration budget. Carries the
// last iterate and the objective trace so callers can inspect what happened.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> last_iterate,
                   std::vector<double> objective_trace)
      : std::runtime_error(what),
        last_iterate_(std::move(last_iterate)),
        objective_trace_(std::move(objective_trace)) {}

  const std::vector<double>& last_iterate() const { return last_iterate_; }
  const std::vector<double>& objective_trace() const { return objective_trace_; }

 private:
  std::vector<double> last_iterate_;
  std::vector<double> objective_trace_;
};

}  // namespace ehnet
