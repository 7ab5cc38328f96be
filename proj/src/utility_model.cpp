#include "ehnet/utility_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ehnet/numerics.hpp"

namespace ehnet {

namespace {

constexpr double kProbFloor = 1e-15;  // clamp for root searches in probability space

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

void SolverTolerances::validate() const {
  if (!(eps_u > 0.0) || !(eps_pia > 0.0) || !(eps_bm > 0.0) || max_iterations == 0) {
    throw std::invalid_argument("SolverTolerances: all entries must be strictly positive");
  }
}

UtilityModel UtilityModel::exponential_perfect(double rho, double eps_u) {
  require(rho >= 0.0 && rho < 1.0, "exponential_perfect: rho must lie in [0, 1)");
  require(eps_u > 0.0, "exponential_perfect: eps_u must be positive");
  UtilityModel m;
  m.kind_ = Kind::ExponentialPerfect;
  m.eps_u_ = eps_u;
  m.rho_const_ = rho;
  m.outage_is_constant_ = true;
  m.outage_fn_ = [rho](double) { return rho; };
  return m;
}

UtilityModel UtilityModel::tabulated(std::vector<GridPoint> grid, double rho, double eps_u) {
  require(rho >= 0.0 && rho <= 1.0, "tabulated: rho must lie in [0, 1]");
  require(eps_u > 0.0, "tabulated: eps_u must be positive");
  require(grid.size() >= 2, "tabulated: grid needs at least two points");
  std::sort(grid.begin(), grid.end(),
            [](const GridPoint& a, const GridPoint& b) { return a.y < b.y; });
  require(std::fabs(grid.front().y) <= 1e-12, "tabulated: grid must start at y = 0");
  require(std::fabs(grid.front().tail - 1.0) <= 1e-12, "tabulated: tail at y = 0 must be 1");
  require(std::fabs(grid.front().vbar) <= 1e-12, "tabulated: vbar at y = 0 must be 0");
  grid.front().y = 0.0;
  grid.front().tail = 1.0;
  grid.front().vbar = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    require(grid[i].y > grid[i - 1].y, "tabulated: y grid must be strictly increasing");
    require(grid[i].tail < grid[i - 1].tail, "tabulated: tail must be strictly decreasing");
    require(grid[i].tail > 0.0, "tabulated: tail values must stay positive");
    require(grid[i].vbar > grid[i - 1].vbar, "tabulated: vbar must be strictly increasing");
  }

  UtilityModel m;
  m.kind_ = Kind::Tabulated;
  m.eps_u_ = eps_u;
  m.rho_const_ = rho;
  m.outage_is_constant_ = true;
  m.outage_fn_ = [rho](double) { return rho; };
  m.grid_ = std::move(grid);

  // Cumulative integral of vbar over the tail coordinate, evaluated at each
  // knot. Below the smallest tabulated tail the integrand is clamped at the
  // last vbar value, so the integral closes at t = 0.
  const std::size_t n = m.grid_.size();
  m.g_at_knot_.assign(n, 0.0);
  m.g_at_knot_[n - 1] = m.grid_[n - 1].vbar * m.grid_[n - 1].tail;
  for (std::size_t i = n - 1; i-- > 0;) {
    const double dt = m.grid_[i].tail - m.grid_[i + 1].tail;
    m.g_at_knot_[i] = m.g_at_knot_[i + 1] + 0.5 * dt * (m.grid_[i].vbar + m.grid_[i + 1].vbar);
  }
  return m;
}

double UtilityModel::tail(double y) const {
  if (y < 0.0) return 1.0;
  if (kind_ == Kind::ExponentialPerfect) return std::exp(-y);
  if (y <= grid_.front().y) return 1.0;
  if (y >= grid_.back().y) return grid_.back().tail;
  auto it = std::upper_bound(grid_.begin(), grid_.end(), y,
                             [](double v, const GridPoint& p) { return v < p.y; });
  const GridPoint& hi = *it;
  const GridPoint& lo = *(it - 1);
  const double w = (y - lo.y) / (hi.y - lo.y);
  return lo.tail + w * (hi.tail - lo.tail);
}

double UtilityModel::expected_utility(double y) const {
  if (y < 0.0) throw std::domain_error("expected_utility: y must be non-negative");
  if (kind_ == Kind::ExponentialPerfect) return (1.0 - outage_fn_(y)) * y;
  if (y <= grid_.front().y) return 0.0;
  if (y >= grid_.back().y) return grid_.back().vbar;
  auto it = std::upper_bound(grid_.begin(), grid_.end(), y,
                             [](double v, const GridPoint& p) { return v < p.y; });
  const GridPoint& hi = *it;
  const GridPoint& lo = *(it - 1);
  const double w = (y - lo.y) / (hi.y - lo.y);
  return lo.vbar + w * (hi.vbar - lo.vbar);
}

double UtilityModel::threshold_of_probability(double x) const {
  if (!(x > 0.0) || x > 1.0) {
    throw std::domain_error("threshold_of_probability: x must lie in (0, 1]");
  }
  if (x == 1.0) return 0.0;
  if (kind_ == Kind::Tabulated) {
    // Piecewise-linear inversion in the tail coordinate; exact per segment.
    if (x <= grid_.back().tail) return grid_.back().y;
    auto it = std::lower_bound(grid_.begin(), grid_.end(), x,
                               [](const GridPoint& p, double v) { return p.tail > v; });
    const GridPoint& lo = *(it - 1);  // larger tail
    const GridPoint& hi = *it;        // smaller tail
    const double w = (lo.tail - x) / (lo.tail - hi.tail);
    return lo.y + w * (hi.y - lo.y);
  }
  // Bracket the threshold on the observation axis, then bisect on the tail
  // residual down to eps_u.
  const double hi =
      expand_bracket_up([this, x](double y) { return tail(y) < x; }, 1.0);
  return bisect_root([this, x](double y) { return tail(y) - x; }, 0.0, hi,
                     1e-13, eps_u_);
}

double UtilityModel::g(double x) const {
  if (x < 0.0 || x > 1.0) throw std::domain_error("g: x must lie in [0, 1]");
  if (x == 0.0) return 0.0;
  if (kind_ == Kind::ExponentialPerfect) {
    return (1.0 - rho_const_) * x * (1.0 - std::log(x));
  }
  const std::size_t n = grid_.size();
  if (x <= grid_[n - 1].tail) return grid_[n - 1].vbar * x;
  auto it = std::lower_bound(grid_.begin(), grid_.end(), x,
                             [](const GridPoint& p, double v) { return p.tail > v; });
  const std::size_t i = static_cast<std::size_t>(it - grid_.begin());  // grid_[i].tail <= x
  const GridPoint& lo = grid_[i - 1];
  const GridPoint& hi = grid_[i];
  const double w = (lo.tail - x) / (lo.tail - hi.tail);
  const double vbar_x = lo.vbar + w * (hi.vbar - lo.vbar);
  return g_at_knot_[i] + 0.5 * (x - hi.tail) * (vbar_x + hi.vbar);
}

double UtilityModel::g_prime(double x) const {
  if (!(x > 0.0) || !(x < 1.0)) throw std::domain_error("g_prime: x must lie in (0, 1)");
  return expected_utility(threshold_of_probability(x));
}

double UtilityModel::x_star_lambda(double lambda) const {
  if (lambda < 0.0) throw std::domain_error("x_star_lambda: lambda must be non-negative");
  if (lambda == 0.0) return 1.0;
  if (g_prime(kProbFloor) <= lambda) return kProbFloor;  // g' below lambda everywhere
  if (g_prime(1.0 - kProbFloor) >= lambda) return 1.0;   // g' above lambda everywhere
  return bisect_root([this, lambda](double x) { return g_prime(x) - lambda; }, kProbFloor,
                     1.0 - kProbFloor, eps_u_);
}

double UtilityModel::sample_observation(double u) const {
  if (!(u > 0.0) || u > 1.0) throw std::domain_error("sample_observation: u must lie in (0, 1]");
  if (kind_ == Kind::ExponentialPerfect) return -std::log(u);
  return threshold_of_probability(u);
}

double UtilityModel::conditional_mean_utility(double y) const {
  const double rho = outage_fn_(y);
  if (rho >= 1.0) return 0.0;
  return expected_utility(y) / (1.0 - rho);
}

}  // namespace ehnet
