#include <algorithm>
#include <cmath>

#include "detail.hpp"
#include "lps/linalg.hpp"
#include "lps/pnorm.hpp"

namespace lps::solvers {
namespace {

using detail::inf_norm;

struct BpContext {
  const DenseMatrix& a;
  const Vector& y;
  Exponent p;
  const SolverConfig& cfg;

  bool kkt_ok(const Vector& x, const Vector& nu) const {
    const Vector g = pnorm::grad(x, p);
    const double stat = inf_norm(g - a.transpose() * nu);
    const double feas = (a * x - y).norm();
    return stat <= cfg.kkt_tol * (1.0 + inf_norm(g)) && feas <= cfg.kkt_tol * (1.0 + y.norm());
  }
};

Vector x_from_dual(const DenseMatrix& a, const Vector& nu, Exponent p) {
  const Vector z = a.transpose() * nu;
  Vector x(z.size());
  for (Index i = 0; i < z.size(); ++i) x[i] = pnorm::h(z[i], p);
  return x;
}

Vector start_point(const BpContext& c) {
  if (c.cfg.initial_x) {
    if (c.cfg.initial_x->size() != c.a.cols()) {
      throw Error(ErrorKind::invalid_input, "initial_x has wrong dimension");
    }
    return linalg::affine_project(c.a, c.y, *c.cfg.initial_x);
  }
  return linalg::least_norm_solution(c.a, c.y);
}

// Minimizes sum_i H(a_i^T nu) - y^T nu, whose gradient A h(A^T nu) - y is the
// dual residual and whose Hessian is Q = A diag(h'(A^T nu)) A^T.
SolveResult bp_dual_newton(const BpContext& c) {
  const auto& a = c.a;
  const Exponent p = c.p;
  const Vector x0 = start_point(c);
  Vector nu0 = linalg::multiplier_fit(a, pnorm::grad(x0, p));

  detail::SmoothObjective phi;
  phi.value = [&](const Vector& nu) {
    const Vector z = a.transpose() * nu;
    double s = 0.0;
    for (Index i = 0; i < z.size(); ++i) s += pnorm::h_antiderivative(z[i], p);
    return s - c.y.dot(nu);
  };
  phi.derivatives = [&](const Vector& nu, Vector& grad, DenseMatrix& hess) {
    const Vector z = a.transpose() * nu;
    Vector hz(z.size()), hpz(z.size());
    for (Index i = 0; i < z.size(); ++i) {
      hz[i] = pnorm::h(z[i], p);
      hpz[i] = pnorm::h_prime(z[i], p);
    }
    grad = a * hz - c.y;
    hess = a * hpz.asDiagonal() * a.transpose();
  };
  auto done = [&](const Vector& nu) { return c.kkt_ok(x_from_dual(a, nu, p), nu); };

  auto out = detail::damped_newton(phi, nu0, detail::newton_options(c.cfg), done);
  SolveResult res;
  res.algorithm = Algorithm::dual_newton;
  res.x = x_from_dual(a, out.z, p);
  res.nu = out.z;
  res.iterations = out.iterations;
  res.status = out.converged ? Status::converged : Status::max_iter;
  return res;
}

SolveResult bp_projected_gradient(const BpContext& c, Vector x0, int prior_iterations) {
  const auto& a = c.a;
  const Exponent p = c.p;
  auto value = [&](const Vector& x) { return pnorm::norm_pow(x, p); };
  auto gradient = [&](const Vector& x) { return pnorm::grad(x, p); };
  auto project = [&](const Vector& x) { return linalg::affine_project(a, c.y, x); };
  auto done = [&](const Vector& x) {
    return c.kkt_ok(x, linalg::multiplier_fit(a, pnorm::grad(x, p)));
  };
  auto out = detail::gradient_descent(value, gradient, project, std::move(x0),
                                      c.cfg.first_order_max_iter, done);
  SolveResult res;
  res.algorithm = Algorithm::projected_gradient;
  res.x = out.z;
  res.nu = linalg::multiplier_fit(a, pnorm::grad(out.z, p));
  res.iterations = prior_iterations + out.iterations;
  res.status = out.converged ? Status::converged : Status::max_iter;
  return res;
}

// Newton on the KKT system  grad f(x) - A^T nu = 0, Ax = y  with Jacobian
// [[Lambda(x), A^T], [A, 0]] (sign of nu folded into the second block),
// damped by a line search on f from a feasible start.
SolveResult bp_primal_dual_newton(const BpContext& c) {
  const auto& a = c.a;
  const Exponent p = c.p;
  const Index n = a.cols();
  const Index m = a.rows();

  detail::SmoothObjective f;
  f.value = [&](const Vector& x) { return pnorm::norm_pow(x, p); };
  f.derivatives = [&](const Vector& x, Vector& grad, DenseMatrix&) { grad = pnorm::grad(x, p); };
  f.direction = [&](const Vector& x, const Vector& g) {
    Vector lam(n);
    for (Index i = 0; i < n; ++i) lam[i] = pnorm::g_prime(x[i], p);
    // Tikhonov shift when coordinates sit at zero (g'(0) = 0 for p > 2).
    const double lmax = std::max(1.0, lam.maxCoeff());
    if (lam.minCoeff() < 1e-12 * lmax) lam.array() += 1e-12 * lmax;
    DenseMatrix kkt = DenseMatrix::Zero(n + m, n + m);
    kkt.topLeftCorner(n, n).diagonal() = lam;
    kkt.topRightCorner(n, m) = a.transpose();
    kkt.bottomLeftCorner(m, n) = a;
    Vector rhs(n + m);
    rhs.head(n) = -g;
    rhs.tail(m) = -(a * x - c.y);
    return Vector(kkt.partialPivLu().solve(rhs).head(n));
  };
  f.stationarity = [&](const Vector& x, const Vector& g) {
    return inf_norm(g - a.transpose() * linalg::multiplier_fit(a, g)) + inf_norm(a * x - c.y);
  };
  auto done = [&](const Vector& x) {
    return c.kkt_ok(x, linalg::multiplier_fit(a, pnorm::grad(x, p)));
  };

  auto out = detail::damped_newton(f, start_point(c), detail::newton_options(c.cfg), done);
  if (!out.converged && c.cfg.algorithm == Algorithm::automatic) {
    return bp_projected_gradient(c, out.z, out.iterations);
  }
  SolveResult res;
  res.algorithm = Algorithm::primal_dual_newton;
  res.x = out.z;
  res.nu = linalg::multiplier_fit(a, pnorm::grad(out.z, p));
  res.iterations = out.iterations;
  res.status = out.converged ? Status::converged : Status::max_iter;
  return res;
}

}  // namespace

SolveResult solve_bp(const DenseMatrix& a, const Vector& y, Exponent p, const SolverConfig& cfg) {
  ProblemInstance inst{a, y, Family::bp, p.value(), {}};
  inst.validate();
  cfg.validate();

  SolveResult res;
  if (y.isZero(0.0)) {
    res.x = Vector::Zero(a.cols());
    res.nu = Vector::Zero(a.rows());
    detail::finalize(inst, res, cfg);
    return res;
  }

  // Rank-deficient A: keep an independent row subset if y is consistent.
  Eigen::ColPivHouseholderQR<DenseMatrix> rowqr(a.transpose());
  rowqr.setThreshold(1e-12);
  const Index rank = rowqr.rank();
  if (rank < a.rows()) {
    Eigen::CompleteOrthogonalDecomposition<DenseMatrix> cod(a);
    const Vector xls = cod.solve(y);
    if ((a * xls - y).norm() > 1e-9 * (1.0 + y.norm())) {
      res.x = xls;
      res.nu = Vector::Zero(a.rows());
      res.status = Status::infeasible;
      detail::finalize(inst, res, cfg);
      return res;
    }
    DenseMatrix ar(rank, a.cols());
    Vector yr(rank);
    for (Index k = 0; k < rank; ++k) {
      const Index row = rowqr.colsPermutation().indices()[k];
      ar.row(k) = a.row(row);
      yr[k] = y[row];
    }
    SolveResult sub = solve_bp(ar, yr, p, cfg);
    Vector nu = Vector::Zero(a.rows());
    for (Index k = 0; k < rank; ++k) nu[rowqr.colsPermutation().indices()[k]] = (*sub.nu)[k];
    sub.nu = nu;
    detail::finalize(inst, sub, cfg);
    return sub;
  }

  BpContext ctx{a, y, p, cfg};
  Algorithm algo = cfg.algorithm;
  if (algo == Algorithm::automatic) {
    algo = p < 2.0 ? Algorithm::dual_newton : Algorithm::primal_dual_newton;
  }
  switch (algo) {
    case Algorithm::dual_newton:
      if (p > 2.0) {
        throw Error(ErrorKind::unsupported_exponent, "dual Newton for BP requires 1 < p <= 2");
      }
      res = bp_dual_newton(ctx);
      if (!res.converged() && cfg.algorithm == Algorithm::automatic) {
        res = bp_projected_gradient(ctx, res.x, res.iterations);
      }
      break;
    case Algorithm::primal_dual_newton:
      if (p < 2.0) {
        throw Error(ErrorKind::unsupported_exponent, "primal-dual Newton for BP requires p >= 2");
      }
      res = bp_primal_dual_newton(ctx);
      break;
    case Algorithm::projected_gradient:
      res = bp_projected_gradient(ctx, start_point(ctx), 0);
      break;
    default:
      throw Error(ErrorKind::invalid_input, "algorithm not available for bp");
  }
  detail::finalize(inst, res, cfg);
  return res;
}

}  // namespace lps::solvers
