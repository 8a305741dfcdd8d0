#include <algorithm>
#include <cmath>

#include "detail.hpp"
#include "lps/pnorm.hpp"

namespace lps::solvers {
namespace {

using detail::inf_norm;

double smoothed_objective(const DenseMatrix& a, const Vector& y, const Vector& x, double p,
                          double lambda, double eps) {
  double pen = 0.0;
  for (Index i = 0; i < x.size(); ++i) pen += pnorm::pow_abs(x[i] * x[i] + eps, p / 2.0);
  return 0.5 * (a * x - y).squaredNorm() + lambda * pen;
}

double smoothed_stationarity(const DenseMatrix& a, const Vector& y, const Vector& x, double p,
                             double lambda, double eps) {
  Vector g = a.transpose() * (a * x - y);
  for (Index i = 0; i < x.size(); ++i) {
    g[i] += lambda * p * x[i] * pnorm::pow_abs(x[i] * x[i] + eps, p / 2.0 - 1.0);
  }
  return inf_norm(g);
}

double objective(const DenseMatrix& a, const Vector& y, const Vector& x, double p, double lambda) {
  return smoothed_objective(a, y, x, p, lambda, 0.0);
}

}  // namespace

// Majorize-minimize on 1/2 ||Ax - y||^2 + lambda sum_i (x_i^2 + eps)^(p/2):
// each step solves (A^T A + diag(lambda p w)) x = A^T y with
// w_i = (x_i^2 + eps)^(p/2 - 1), in the m x m form x = D A^T (I + A D A^T)^{-1} y
// with D = diag(1 / (lambda p w)). eps is shrunk geometrically once the
// iteration settles at the current level.
SolveResult solve_rr_irls(const DenseMatrix& a, const Vector& y, Exponent p, double lambda,
                          const SolverConfig& cfg) {
  ProblemInstance inst{a, y, Family::rr_irls, p.value(), {}};
  inst.params.lambda = lambda;
  inst.validate();
  cfg.validate();

  SolveResult res;
  res.algorithm = Algorithm::fixed_point;
  if (y.isZero(0.0)) {
    res.x = Vector::Zero(a.cols());
    res.smoothing = cfg.irls_eps_min;
    detail::finalize(inst, res, cfg);
    return res;
  }

  const double scale = 1.0 + inf_norm(a.transpose() * y);
  Vector x = cfg.initial_x ? *cfg.initial_x : detail::ridge_start(a, y, lambda);
  if (x.size() != a.cols()) throw Error(ErrorKind::invalid_input, "initial_x has wrong dimension");
  double eps = cfg.irls_eps_start;
  double obj = smoothed_objective(a, y, x, p, lambda, eps);
  if (cfg.record_trace) res.trace.push_back(obj);

  bool converged = false;
  int it = 0;
  for (; it < cfg.first_order_max_iter; ++it) {
    Vector d(x.size());
    for (Index i = 0; i < x.size(); ++i) {
      const double w = pnorm::pow_abs(x[i] * x[i] + eps, p / 2.0 - 1.0);
      d[i] = 1.0 / (lambda * p * w);
    }
    DenseMatrix k = a * d.asDiagonal() * a.transpose();
    k.diagonal().array() += 1.0;
    const Vector x_new = d.asDiagonal() * (a.transpose() * k.llt().solve(y));
    const double change = inf_norm(x_new - x) / (1.0 + inf_norm(x_new));
    x = x_new;
    obj = smoothed_objective(a, y, x, p, lambda, eps);
    if (cfg.record_trace) res.trace.push_back(obj);

    const bool stationary = smoothed_stationarity(a, y, x, p, lambda, eps) <= cfg.kkt_tol * scale;
    if (stationary || change <= 1e-14) {
      if (eps <= cfg.irls_eps_min) {
        converged = stationary;
        ++it;
        break;
      }
      eps = std::max(eps * cfg.irls_eps_shrink, cfg.irls_eps_min);
      obj = smoothed_objective(a, y, x, p, lambda, eps);
      if (cfg.record_trace) res.trace.push_back(obj);
    }
  }
  // Coordinates at or below the smoothing scale sqrt(eps) are artifacts of the
  // smoothing: nonzero entries of a local minimizer with p < 1 are bounded
  // away from 0. Zero them when that does not raise the unsmoothed objective.
  Vector pruned = x;
  const double floor = std::sqrt(eps);
  for (Index i = 0; i < pruned.size(); ++i) {
    if (std::abs(pruned[i]) <= floor) pruned[i] = 0.0;
  }
  if (objective(a, y, pruned, p, lambda) <= objective(a, y, x, p, lambda)) x = pruned;

  res.x = x;
  res.smoothing = eps;
  res.iterations = it;
  res.status = converged ? Status::converged : Status::max_iter;
  detail::finalize(inst, res, cfg);
  return res;
}

}  // namespace lps::solvers
