#include <algorithm>
#include <cmath>

#include "detail.hpp"
#include "lps/pnorm.hpp"

namespace lps::solvers {
namespace {

using detail::inf_norm;

struct RrContext {
  const DenseMatrix& a;
  const Vector& y;
  Exponent p;
  double lambda;
  const SolverConfig& cfg;
  double scale;  // 1 + ||A^T y||_inf

  double stationarity(const Vector& x) const {
    return inf_norm(a.transpose() * (a * x - y) + lambda * pnorm::grad(x, p));
  }
  bool kkt_ok(const Vector& x) const { return stationarity(x) <= cfg.kkt_tol * scale; }
  double value(const Vector& x) const {
    return 0.5 * (a * x - y).squaredNorm() + lambda * pnorm::norm_pow(x, p);
  }
  Vector gradient(const Vector& x) const {
    return a.transpose() * (a * x - y) + lambda * pnorm::grad(x, p);
  }
};

// x(u) = -h(A^T u / lambda): the fixed-point map evaluated at residual u.
Vector x_from_residual(const RrContext& c, const Vector& u) {
  const Vector z = c.a.transpose() * u / c.lambda;
  Vector x(z.size());
  for (Index i = 0; i < z.size(); ++i) x[i] = -pnorm::h(z[i], c.p);
  return x;
}

// Newton on the residual variable u = Ax - y. The stationary points of
//   psi(u) = 1/2 ||u||^2 + y^T u + lambda sum_i H(a_i^T u / lambda)
// satisfy u = A x(u) - y, i.e. x(u) solves x = -h(A^T (Ax - y) / lambda).
// Hessian I + A Gamma A^T / lambda is positive definite for 1 < p <= 2.
SolveResult rr_residual_newton(const RrContext& c, const Vector& x0) {
  const auto& a = c.a;
  detail::SmoothObjective psi;
  psi.value = [&](const Vector& u) {
    const Vector z = a.transpose() * u / c.lambda;
    double s = 0.0;
    for (Index i = 0; i < z.size(); ++i) s += pnorm::h_antiderivative(z[i], c.p);
    return 0.5 * u.squaredNorm() + c.y.dot(u) + c.lambda * s;
  };
  psi.derivatives = [&](const Vector& u, Vector& grad, DenseMatrix& hess) {
    const Vector z = a.transpose() * u / c.lambda;
    Vector x(z.size()), hp(z.size());
    for (Index i = 0; i < z.size(); ++i) {
      x[i] = -pnorm::h(z[i], c.p);
      hp[i] = pnorm::h_prime(z[i], c.p);
    }
    grad = u + c.y - a * x;
    hess = a * hp.asDiagonal() * a.transpose() / c.lambda;
    hess.diagonal().array() += 1.0;
  };
  auto done = [&](const Vector& u) { return c.kkt_ok(x_from_residual(c, u)); };
  auto out = detail::damped_newton(psi, a * x0 - c.y, detail::newton_options(c.cfg), done);
  SolveResult res;
  res.algorithm = Algorithm::dual_newton;
  res.x = x_from_residual(c, out.z);
  res.iterations = out.iterations;
  res.status = out.converged ? Status::converged : Status::max_iter;
  return res;
}

SolveResult rr_primal_newton(const RrContext& c, const Vector& x0) {
  const auto& a = c.a;
  const DenseMatrix ata = a.transpose() * a;
  detail::SmoothObjective f;
  f.value = [&](const Vector& x) { return c.value(x); };
  f.derivatives = [&](const Vector& x, Vector& grad, DenseMatrix& hess) {
    grad = c.gradient(x);
    hess = ata;
    for (Index i = 0; i < x.size(); ++i) {
      // For p < 2 the curvature is unbounded at 0; clamp to keep it finite.
      const double xi = c.p < 2.0 ? std::max(std::abs(x[i]), 1e-150) : x[i];
      hess(i, i) += c.lambda * c.p * (c.p - 1.0) * pnorm::pow_abs(xi, c.p - 2.0);
    }
  };
  auto done = [&](const Vector& x) { return c.kkt_ok(x); };
  auto out = detail::damped_newton(f, x0, detail::newton_options(c.cfg), done);
  SolveResult res;
  res.algorithm = Algorithm::primal_dual_newton;
  res.x = out.z;
  res.iterations = out.iterations;
  res.status = out.converged ? Status::converged : Status::max_iter;
  return res;
}

SolveResult rr_gradient(const RrContext& c, const Vector& x0, int prior) {
  auto out = detail::gradient_descent([&](const Vector& x) { return c.value(x); },
                                      [&](const Vector& x) { return c.gradient(x); }, {}, x0,
                                      c.cfg.first_order_max_iter,
                                      [&](const Vector& x) { return c.kkt_ok(x); });
  SolveResult res;
  res.algorithm = Algorithm::projected_gradient;
  res.x = out.z;
  res.iterations = prior + out.iterations;
  res.status = out.converged ? Status::converged : Status::max_iter;
  return res;
}

// Damped iteration of x <- -h(A^T (Ax - y) / lambda), accepting a step only
// when the objective decreases; falls back to a gradient step otherwise.
SolveResult rr_fixed_point(const RrContext& c, Vector x) {
  double v = c.value(x);
  int it = 0;
  bool converged = false;
  for (; it < c.cfg.first_order_max_iter; ++it) {
    if (c.kkt_ok(x)) {
      converged = true;
      break;
    }
    const Vector target = x_from_residual(c, c.a * x - c.y);
    const Vector dir = target - x;
    bool moved = false;
    for (double theta = 1.0; theta > 1e-12; theta *= 0.5) {
      const Vector cand = x + theta * dir;
      const double vc = c.value(cand);
      if (vc < v) {
        x = cand;
        v = vc;
        moved = true;
        break;
      }
    }
    if (!moved) {
      const Vector g = c.gradient(x);
      for (double t = 1.0; t > 1e-20; t *= 0.5) {
        const Vector cand = x - t * g;
        const double vc = c.value(cand);
        if (vc < v - 0.5 * t * c.cfg.ls_decrease * g.squaredNorm()) {
          x = cand;
          v = vc;
          moved = true;
          break;
        }
      }
    }
    if (!moved) break;
  }
  SolveResult res;
  res.algorithm = Algorithm::fixed_point;
  res.x = x;
  res.iterations = it;
  res.status = converged || c.kkt_ok(x) ? Status::converged : Status::max_iter;
  return res;
}

}  // namespace

namespace detail {

SolveResult solve_rr_from(const DenseMatrix& a, const Vector& y, Exponent p, double lambda,
                          const SolverConfig& cfg, const std::optional<Vector>& start) {
  ProblemInstance inst{a, y, Family::rr, p.value(), {}};
  inst.params.lambda = lambda;
  inst.validate();

  SolveResult res;
  if (y.isZero(0.0)) {
    res.x = Vector::Zero(a.cols());
    finalize(inst, res, cfg);
    return res;
  }
  const RrContext ctx{a, y, p, lambda, cfg, 1.0 + inf_norm(a.transpose() * y)};
  Vector x0;
  if (start) {
    if (start->size() != a.cols()) throw Error(ErrorKind::invalid_input, "initial_x has wrong dimension");
    x0 = *start;
  } else {
    x0 = ridge_start(a, y, lambda);
  }

  Algorithm algo = cfg.algorithm;
  if (algo == Algorithm::automatic) algo = p < 2.0 ? Algorithm::dual_newton : Algorithm::primal_dual_newton;
  switch (algo) {
    case Algorithm::dual_newton:
      if (p > 2.0) throw Error(ErrorKind::unsupported_exponent, "residual Newton for RR requires 1 < p <= 2");
      res = rr_residual_newton(ctx, x0);
      break;
    case Algorithm::primal_dual_newton:
      res = rr_primal_newton(ctx, x0);
      break;
    case Algorithm::projected_gradient:
      res = rr_gradient(ctx, x0, 0);
      break;
    case Algorithm::fixed_point:
      res = rr_fixed_point(ctx, x0);
      break;
    case Algorithm::automatic:
      break;
  }
  if (!res.converged() && cfg.algorithm == Algorithm::automatic) {
    res = rr_gradient(ctx, res.x, res.iterations);
  }
  finalize(inst, res, cfg);
  return res;
}

}  // namespace detail

SolveResult solve_rr(const DenseMatrix& a, const Vector& y, Exponent p, double lambda,
                     const SolverConfig& cfg) {
  cfg.validate();
  return detail::solve_rr_from(a, y, p, lambda, cfg, cfg.initial_x);
}

}  // namespace lps::solvers
