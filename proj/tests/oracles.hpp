#pragma once

// Independent reference computations used by the unit and acceptance tests.
// They deliberately avoid the library's solvers: brute-force grids, golden
// section searches and plain gradient descent.

#include <cmath>
#include <functional>

#include "lps/types.hpp"

namespace lps::oracle {

/// Minimizes a unimodal f on [lo, hi] by golden-section search.
inline double golden_min(const std::function<double(double)>& f, double lo, double hi,
                         double tol = 1e-12) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - phi * (hi - lo);
  double d = lo + phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  while (hi - lo > tol * (1.0 + std::abs(lo) + std::abs(hi))) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + phi * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

/// Uniform grid search on [lo, hi]; returns the minimizing abscissa.
inline double grid_min(const std::function<double(double)>& f, double lo, double hi,
                       double step) {
  double best_x = lo;
  double best_f = f(lo);
  const auto n = static_cast<long>(std::ceil((hi - lo) / step));
  for (long k = 1; k <= n; ++k) {
    const double x = std::min(hi, lo + step * static_cast<double>(k));
    const double v = f(x);
    if (v < best_f) {
      best_f = v;
      best_x = x;
    }
  }
  return best_x;
}

/// Grid search refined by golden section around the best grid cell.
inline double refined_min(const std::function<double(double)>& f, double lo, double hi,
                          int cells = 20000) {
  const double step = (hi - lo) / cells;
  const double x = grid_min(f, lo, hi, step);
  return golden_min(f, std::max(lo, x - step), std::min(hi, x + step));
}

/// |t|^a without the library's helper.
inline double powa(double t, double a) { return t == 0.0 ? 0.0 : std::pow(std::abs(t), a); }

inline double lp_pow(const Vector& x, double p) {
  double s = 0.0;
  for (Index i = 0; i < x.size(); ++i) s += powa(x[i], p);
  return s;
}

/// Plain fixed-step gradient descent with backtracking on a smooth function.
inline Vector descend(const std::function<double(const Vector&)>& f,
                      const std::function<Vector(const Vector&)>& grad, Vector x, int iters) {
  double step = 1.0;
  double fx = f(x);
  for (int k = 0; k < iters; ++k) {
    const Vector g = grad(x);
    if (g.norm() < 1e-15) break;
    while (true) {
      const Vector cand = x - step * g;
      const double fc = f(cand);
      if (fc <= fx - 0.5 * step * g.squaredNorm()) {
        x = cand;
        fx = fc;
        step *= 1.5;
        break;
      }
      step *= 0.5;
      if (step < 1e-30) return x;
    }
  }
  return x;
}

}  // namespace lps::oracle
