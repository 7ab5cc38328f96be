#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace ehnet {

// Accuracy knobs shared by the solver stack.
struct SolverTolerances {
  double eps_u = 1e-12;            // scalar root finding (probabilities / thresholds)
  double eps_pia = 1e-10;          // policy iteration stop on |dZ| between sweeps
  double eps_bm = 1e-9;            // multiplier bisection stop on bracket width
  std::size_t max_iterations = 200;  // iteration cap per loop

  void validate() const;  // throws std::invalid_argument on non-positive entries
};

// Packet-utility / observation / outage statistics reduced to the four maps
// everything else consumes: y_th(x), V_bar(y), g(x), g'(x).
//
// Two concrete models:
//  - ExponentialPerfect: V ~ Exp(1) observed perfectly (Y = V), optional
//    constant outage probability rho.
//  - Tabulated: monotone grid of (y, P(Y >= y), V_bar(y)) points, interpolated
//    piecewise-linearly in the tail-probability coordinate.
class UtilityModel {
 public:
  enum class Kind { ExponentialPerfect, Tabulated };

  struct GridPoint {
    double y = 0.0;     // observation value
    double tail = 0.0;  // P(Y >= y)
    double vbar = 0.0;  // V_bar(y), outage included
  };

  static UtilityModel exponential_perfect(double rho = 0.0, double eps_u = 1e-12);
  static UtilityModel tabulated(std::vector<GridPoint> grid, double rho = 0.0,
                                double eps_u = 1e-12);

  Kind kind() const { return kind_; }
  double eps_u() const { return eps_u_; }
  double outage(double y) const { return outage_fn_(y); }
  bool outage_is_constant() const { return outage_is_constant_; }
  double outage_constant() const { return rho_const_; }
  const std::vector<GridPoint>& grid() const { return grid_; }

  // P(Y >= y). Tabulated models clamp beyond the last grid point.
  double tail(double y) const;

  // V_bar(y): expected delivered utility of a transmission at observation y.
  // Strictly increasing with V_bar(0) = 0. Throws std::domain_error for y < 0.
  double expected_utility(double y) const;

  // y_th(x): smallest observation kept when transmitting the top-x fraction,
  // i.e. P(Y >= y_th(x)) = x within eps_u. Requires x in (0, 1].
  double threshold_of_probability(double x) const;

  // Expected per-slot utility when censoring at transmit probability x,
  // no collisions. g(0) = 0, strictly increasing and strictly concave.
  double g(double x) const;

  // g'(x) = V_bar(y_th(x)); strictly decreasing on (0, 1).
  double g_prime(double x) const;

  // Maximizer of g(x) - lambda*x over [0, 1]: the unique root of
  // g'(x) = lambda, with x = 1 for lambda = 0.
  double x_star_lambda(double lambda) const;

  // Quantile draw: for u ~ Uniform(0, 1], the returned y satisfies
  // tail(y) = u, so Y inherits the model's observation law.
  double sample_observation(double u) const;

  // E[V | Y = y] net of the outage factor: V_bar(y) / (1 - rho(y)).
  // This is the amount scored by the simulator on a successful delivery.
  double conditional_mean_utility(double y) const;

 private:
  UtilityModel() = default;

  Kind kind_ = Kind::ExponentialPerfect;
  double eps_u_ = 1e-12;
  std::function<double(double)> outage_fn_;
  bool outage_is_constant_ = true;
  double rho_const_ = 0.0;

  // Tabulated state: grid sorted by ascending y (descending tail) plus the
  // cumulative integral of vbar over the tail coordinate at each knot.
  std::vector<GridPoint> grid_;
  std::vector<double> g_at_knot_;
};

}  // namespace ehnet
