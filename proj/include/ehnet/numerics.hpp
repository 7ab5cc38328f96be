#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <utility>

namespace ehnet {

// Shared bracketing-bisection primitive. All scalar root searches in the
// library go through here so they share one tolerance convention.
//
// Requires f(lo) and f(hi) of opposite (or zero) sign. Stops when either the
// bracket width falls below width_tol or |f(mid)| falls below residual_tol
// (pass 0 to disable the residual test). Returns the bracket midpoint.
inline double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                          double width_tol, double residual_tol = 0.0,
                          std::size_t max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::isnan(flo) || std::isnan(fhi) || flo * fhi > 0.0) {
    throw std::invalid_argument("bisect_root: endpoints do not bracket a sign change");
  }
  for (std::size_t i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (residual_tol > 0.0 && std::fabs(fm) < residual_tol) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo < width_tol) break;
  }
  return 0.5 * (lo + hi);
}

// Expands hi geometrically until pred(hi) holds (or the cap is reached).
// Used to bracket thresholds on the unbounded observation axis.
inline double expand_bracket_up(const std::function<bool(double)>& pred, double hi,
                                double factor = 2.0, std::size_t max_steps = 1200) {
  for (std::size_t i = 0; i < max_steps && !pred(hi); ++i) hi *= factor;
  return hi;
}

// Golden-section maximization of a unimodal function on [lo, hi].
inline double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                                 double width_tol, std::size_t max_iter = 300) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (std::size_t i = 0; i < max_iter && (b - a) > width_tol; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace ehnet
