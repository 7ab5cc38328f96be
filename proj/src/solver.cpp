#include "ehnet/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ehnet/errors.hpp"
#include "ehnet/numerics.hpp"

namespace ehnet {

namespace {

constexpr double kProbFloor = 1e-15;
constexpr double kNudge = 1e-12;  // keeps clipped levels strictly inside the envelope

double clampp(double x) { return std::min(std::max(x, kProbFloor), 1.0 - kProbFloor); }

// g' with the argument clamped into the open unit interval, so envelope
// functions can be evaluated at interval endpoints.
double gp(const UtilityModel& model, double x) { return model.g_prime(clampp(x)); }

double collision_factor(double p, std::size_t u_count) {
  return std::pow(1.0 - p, static_cast<double>(u_count) - 1.0);
}

}  // namespace

double x_star(const UtilityModel& model, std::size_t u_count, const SolverTolerances& tol) {
  tol.validate();
  if (u_count == 0) throw std::domain_error("x_star: U must be at least 1");
  if (u_count == 1) return 1.0;  // no collision term, F = g is increasing
  const double um1 = static_cast<double>(u_count) - 1.0;
  auto f = [&](double x) { return gp(model, x) * (1.0 - x) - um1 * model.g(x); };
  const double hi = 1.0 / static_cast<double>(u_count);
  if (f(kProbFloor) <= 0.0) return kProbFloor;  // tabulated models with bounded g'
  return bisect_root(f, kProbFloor, hi, tol.eps_u);
}

double upper_bound(const UtilityModel& model, const ScenarioChain& chain, std::size_t u_count,
                   const SolverTolerances& tol) {
  const double xs = x_star(model, u_count, tol);
  const auto& pi_s = chain.stationary_distribution();
  double out = 0.0;
  for (std::size_t s = 0; s < chain.n_states(); ++s) {
    const double m = std::min(xs, chain.beta(s));
    out += pi_s[s] * static_cast<double>(u_count) * model.g(m) * collision_factor(m, u_count);
  }
  return out;
}

StructuralBounds structural_bounds(const UtilityModel& model, double lambda, double beta,
                                   const SolverTolerances& tol) {
  tol.validate();
  if (lambda < 0.0) throw std::domain_error("structural_bounds: lambda must be non-negative");
  if (!(beta > 0.0) || !(beta < 1.0)) {
    throw std::domain_error("structural_bounds: beta must lie in (0, 1)");
  }
  StructuralBounds b;
  b.x_star_lambda = model.x_star_lambda(lambda);
  if (b.x_star_lambda <= 2.0 * kProbFloor) {
    // Multiplier so large that the unconstrained maximizer underflows; both
    // envelope roots collapse toward 0.
    b.eta_lo = kProbFloor;
    b.eta_hi = 2.0 * kProbFloor;
    b.degenerate = true;
    return b;
  }
  const double m = std::min(b.x_star_lambda, beta);
  const double zm = model.g(m) - lambda * m;

  // Lower envelope: g(x) + (1 - x) g'(x) - lambda - z_lambda(m)/beta, strictly
  // decreasing from +inf at 0+ to a negative value at m.
  auto lower_fn = [&](double x) {
    return model.g(x) + (1.0 - x) * gp(model, x) - lambda - zm / beta;
  };
  if (lower_fn(kProbFloor) <= 0.0) {
    b.eta_lo = kProbFloor;
  } else if (lower_fn(m) >= 0.0) {
    b.eta_lo = m * (1.0 - 1e-9);
  } else {
    b.eta_lo = bisect_root(lower_fn, kProbFloor, m, tol.eps_u);
  }

  // Upper envelope: root of g(x) - x g'(x) = z_lambda(m) in [m, x_star_lambda];
  // when beta >= x_star_lambda the root sits exactly at x_star_lambda.
  if (beta >= b.x_star_lambda) {
    b.eta_hi = b.x_star_lambda;
  } else {
    auto upper_fn = [&](double x) { return model.g(x) - x * gp(model, x) - zm; };
    if (upper_fn(b.x_star_lambda) <= 0.0) {
      b.eta_hi = b.x_star_lambda;
    } else if (upper_fn(beta) >= 0.0) {
      b.eta_hi = beta;
    } else {
      b.eta_hi = bisect_root(upper_fn, beta, b.x_star_lambda, tol.eps_u);
    }
  }
  if (b.eta_hi <= b.eta_lo) b.degenerate = true;
  return b;
}

PiaResult pia(const UtilityModel& model, double lambda, double beta, std::size_t e_max,
              const SolverTolerances& tol) {
  tol.validate();
  if (e_max == 0) throw std::domain_error("pia: e_max must be at least 1");
  PiaResult res;
  res.bounds = structural_bounds(model, lambda, beta, tol);
  if (res.bounds.degenerate) {
    throw std::domain_error("pia: structural bounds degenerate at this lambda");
  }
  const double lo = res.bounds.eta_lo;
  const double hi = res.bounds.eta_hi;

  // Feasible start: geometric ramp strictly inside (lo, hi), increasing in e.
  res.row.assign(e_max + 1, 0.0);
  const double ratio = std::pow(hi / lo, 1.0 / static_cast<double>(e_max + 1));
  for (std::size_t e = 1; e <= e_max; ++e) {
    res.row[e] = lo * std::pow(ratio, static_cast<double>(e));
  }

  auto clip = [&](double u) {
    if (hi - lo < 3.0 * kNudge) return 0.5 * (lo + hi);
    if (u <= lo) return lo + kNudge;
    if (u >= hi) return hi - kNudge;
    return u;
  };

  double z_prev = 0.0;
  for (std::size_t sweep = 0; sweep < tol.max_iterations; ++sweep) {
    const ChainSummary cs = functionals(res.row, model, beta, lambda, 1);
    res.z_trace.push_back(cs.Z_lambda);
    if (sweep > 0 && std::fabs(cs.Z_lambda - z_prev) < tol.eps_pia) {
      res.Z = cs.Z_lambda;
      res.sweeps = sweep;
      return res;
    }
    z_prev = cs.Z_lambda;

    // Improvement: eta(e) solves g'(eta) = lambda + beta D(e+1) + (1-beta) D(e)
    // (top level drops the D(e+1) term), clipped into the envelope.
    double d_eta = 0.0;
    for (std::size_t e = 1; e <= e_max; ++e) {
      const double target = (e < e_max)
                                ? lambda + beta * cs.D[e + 1] + (1.0 - beta) * cs.D[e]
                                : lambda + (1.0 - beta) * cs.D[e_max];
      const double u = (target <= 0.0) ? 1.0 : model.x_star_lambda(target);
      const double next = clip(u);
      d_eta = std::max(d_eta, std::fabs(next - res.row[e]));
      res.row[e] = next;
    }
    res.d_eta_trace.push_back(d_eta);
  }
  throw ConvergenceError("pia: no convergence within max_iterations", res.row, res.z_trace);
}

SolveReport sne(const UtilityModel& model, const ScenarioChain& chain, std::size_t u_count,
                std::size_t e_max, const SolverTolerances& tol) {
  tol.validate();
  if (u_count == 0) throw std::domain_error("sne: U must be at least 1");
  const std::size_t n = chain.n_states();
  SolveReport rep;
  rep.method = "sne";
  rep.policy = Policy(e_max, n);
  rep.lambda_star.resize(n, 0.0);
  rep.R_per_scenario.resize(n, 0.0);
  rep.P_bar.resize(n, 0.0);
  rep.bisection_steps.resize(n, 0);
  rep.pia_sweeps.resize(n);
  rep.bound_pair.resize(n);

  const double u = static_cast<double>(u_count);
  for (std::size_t s = 0; s < n; ++s) {
    const double beta = chain.beta(s);
    if (!(beta > 0.0) || !(beta < 1.0)) {
      throw std::domain_error("sne: beta(s) must lie in (0, 1) for a non-degenerate chain");
    }
    double lambda_star = 0.0;
    PiaResult pr;
    ChainSummary cs;
    if (u_count == 1) {
      // Lambda is identically zero, so h(0) = 0 and the multiplier search
      // short-circuits; the policy simply maximizes G.
      pr = pia(model, 0.0, beta, e_max, tol);
      cs = functionals(pr.row, model, beta, 0.0, u_count);
      rep.pia_sweeps[s].push_back(pr.sweeps);
    } else {
      double lo = 0.0;
      double hi = u * model.g(1.0 / u);
      hi = std::min(hi, (u - 1.0) * model.g(beta) / (1.0 - beta));
      bool converged = false;
      for (std::size_t it = 0; it < tol.max_iterations; ++it) {
        const double mid = 0.5 * (lo + hi);
        pr = pia(model, mid, beta, e_max, tol);
        cs = functionals(pr.row, model, beta, mid, u_count);
        rep.pia_sweeps[s].push_back(pr.sweeps);
        ++rep.bisection_steps[s];
        const double h = cs.Lambda - mid;
        // Both ends tighten because Lambda(eta^(lambda)) is non-increasing
        // and brackets the fixed point from the side h points to.
        if (h >= 0.0) {
          lo = mid;
          hi = std::min(hi, cs.Lambda);
        } else {
          lo = std::max(lo, cs.Lambda);
          hi = mid;
        }
        lambda_star = mid;
        if (hi - lo < tol.eps_bm) {
          converged = true;
          break;
        }
      }
      if (!converged) {
        throw ConvergenceError("sne: multiplier bisection exceeded max_iterations", pr.row,
                               {lo, hi});
      }
    }
    rep.policy.eta[s] = pr.row;
    rep.lambda_star[s] = lambda_star;
    rep.P_bar[s] = cs.P;
    rep.R_per_scenario[s] = u * cs.G * collision_factor(cs.P, u_count);
    rep.bound_pair[s] = {pr.bounds.eta_lo, pr.bounds.eta_hi};
  }

  const auto& pi_s = chain.stationary_distribution();
  for (std::size_t s = 0; s < n; ++s) rep.R += pi_s[s] * rep.R_per_scenario[s];
  rep.upper_bound = upper_bound(model, chain, u_count, tol);
  rep.gap = 1.0 - rep.R / rep.upper_bound;
  return rep;
}

SolveReport gop_emax1(const UtilityModel& model, const ScenarioChain& chain, std::size_t u_count,
                      const SolverTolerances& tol) {
  tol.validate();
  if (u_count == 0) throw std::domain_error("gop_emax1: U must be at least 1");
  const std::size_t n = chain.n_states();
  SolveReport rep;
  rep.method = "gop";
  rep.policy = Policy(1, n);
  rep.R_per_scenario.resize(n, 0.0);
  rep.P_bar.resize(n, 0.0);

  const double u = static_cast<double>(u_count);
  for (std::size_t s = 0; s < n; ++s) {
    const double beta = chain.beta(s);
    if (!(beta > 0.0) || !(beta < 1.0)) {
      throw std::domain_error("gop_emax1: beta(s) must lie in (0, 1)");
    }
    auto value = [&](double t) {
      const double pi1 = beta / (beta + (1.0 - beta) * t);
      const double g1 = pi1 * model.g(t);
      const double p1 = pi1 * t;
      return u * g1 * collision_factor(p1, u_count);
    };
    // Coarse scan over the closed interval (the t = 1 endpoint is a genuine
    // candidate), then golden-section refinement around the best cell.
    const std::size_t grid = 10000;
    double best_t = 1.0;
    double best_v = value(1.0);
    for (std::size_t i = 1; i <= grid; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(grid);
      const double v = value(t);
      if (v > best_v) {
        best_v = v;
        best_t = t;
      }
    }
    const double step = 1.0 / static_cast<double>(grid);
    const double lo = std::max(best_t - step, kProbFloor);
    const double hi = std::min(best_t + step, 1.0);
    double t_ref = golden_section_max(value, lo, hi, tol.eps_u);
    if (value(t_ref) < best_v) t_ref = best_t;

    rep.policy.eta[s][1] = t_ref;
    const ChainSummary cs = functionals(rep.policy.eta[s], model, beta, 0.0, u_count);
    rep.P_bar[s] = cs.P;
    rep.R_per_scenario[s] = u * cs.G * collision_factor(cs.P, u_count);
  }

  const auto& pi_s = chain.stationary_distribution();
  for (std::size_t s = 0; s < n; ++s) rep.R += pi_s[s] * rep.R_per_scenario[s];
  rep.upper_bound = upper_bound(model, chain, u_count, tol);
  rep.gap = 1.0 - rep.R / rep.upper_bound;
  return rep;
}

std::pair<Policy, HeuristicReport> heuristic(const UtilityModel& model,
                                             const ScenarioChain& chain, std::size_t u_count,
                                             std::size_t e_max, const SolverTolerances& tol) {
  tol.validate();
  if (e_max == 0) throw std::domain_error("heuristic: e_max must be at least 1");
  const std::size_t n = chain.n_states();
  HeuristicReport rep;
  rep.x_star = x_star(model, u_count, tol);
  rep.eta.resize(n, 0.0);
  rep.network_limited.resize(n, false);
  rep.alpha.resize(n, 0.0);
  rep.inactive.resize(n, false);
  rep.R_per_scenario.resize(n, 0.0);

  Policy policy(e_max, n);
  double slack = 0.0;  // battery-capacity gap terms, weighted by pi_S
  const auto& pi_s = chain.stationary_distribution();
  for (std::size_t s = 0; s < n; ++s) {
    const double beta = chain.beta(s);
    if (beta <= 0.0) {
      rep.inactive[s] = true;
      slack += pi_s[s] / static_cast<double>(e_max);
      continue;
    }
    const double v = std::min(rep.x_star, beta);
    rep.eta[s] = v;
    for (std::size_t e = 1; e <= e_max; ++e) {
      policy.eta[s][e] = (e == e_max) ? v : clip_interior(v);
    }
    if (rep.x_star < beta) {
      rep.network_limited[s] = true;
      rep.alpha[s] =
          std::log(beta * (1.0 - rep.x_star) / ((1.0 - beta) * rep.x_star));
      slack += pi_s[s] * std::exp(-rep.alpha[s] * static_cast<double>(e_max));
    } else {
      slack += pi_s[s] / static_cast<double>(e_max);
    }
  }

  const NetworkUtility nu = network_utility(policy, model, chain, u_count);
  rep.R = nu.total;
  rep.R_per_scenario = nu.per_scenario;
  rep.upper_bound = upper_bound(model, chain, u_count, tol);
  rep.lower_bound = (1.0 - slack) * rep.upper_bound;
  return {policy, rep};
}

}  // namespace ehnet
