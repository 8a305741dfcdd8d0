#include <algorithm>
#include <cmath>

#include "detail.hpp"
#include "lps/pnorm.hpp"

namespace lps::solvers {
namespace {

using detail::inf_norm;

struct EnContext {
  const DenseMatrix& a;
  const Vector& y;
  Exponent p;
  double r;
  double lambda1;
  double lambda2;
  const SolverConfig& cfg;
  double scale;

  double value(const Vector& x) const {
    const double np = pnorm::norm(x, p);
    return 0.5 * (a * x - y).squaredNorm() + lambda1 * pnorm::pow_abs(np, r) +
           lambda2 * x.squaredNorm();
  }
  Vector gradient(const Vector& x) const {
    Vector g = a.transpose() * (a * x - y) + 2.0 * lambda2 * x;
    if (!x.isZero(0.0)) g += lambda1 * pnorm::norm_r_grad(x, p, r);
    return g;
  }
  bool kkt_ok(const Vector& x) const {
    return !x.isZero(0.0) && inf_norm(gradient(x)) <= cfg.kkt_tol * scale;
  }
};

bool zero_is_optimal(const EnContext& c) {
  const Vector aty = c.a.transpose() * c.y;
  if (c.r > 1.0) return aty.isZero(0.0);
  // r = 1: 0 is optimal iff ||A^T y||_q <= lambda1, q the dual exponent.
  const double q = c.p / (c.p - 1.0);
  double s = 0.0;
  for (Index i = 0; i < aty.size(); ++i) s += pnorm::pow_abs(aty[i], q);
  return pnorm::pow_abs(s, 1.0 / q) <= c.lambda1;
}

SolveResult en_gradient(const EnContext& c, const Vector& x0, int prior) {
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

// Newton in w = g(x), i.e. x = h(w), for 1 < p < 2. With D = diag(h'(w)) the
// Jacobian of grad F(h(w)) is H(x) D, whose penalty part is
// c (I + k grad f grad f^T D) since g'(x_i) h'(w_i) = 1; it stays bounded as
// coordinates approach 0, where H(x) itself blows up.
SolveResult en_reparam_newton(const EnContext& c, const Vector& x0) {
  const auto& a = c.a;
  const Exponent p = c.p;
  const DenseMatrix ata = a.transpose() * a;
  auto x_of = [&](const Vector& w) {
    Vector x(w.size());
    for (Index i = 0; i < w.size(); ++i) x[i] = pnorm::h(w[i], p);
    return x;
  };
  auto d_of = [&](const Vector& w) {
    Vector d(w.size());
    for (Index i = 0; i < w.size(); ++i) d[i] = pnorm::h_prime(w[i], p);
    return d;
  };

  detail::SmoothObjective f;
  f.value = [&](const Vector& w) { return c.value(x_of(w)); };
  f.derivatives = [&](const Vector& w, Vector& grad, DenseMatrix&) {
    grad = d_of(w).cwiseProduct(c.gradient(x_of(w)));
  };
  f.direction = [&](const Vector& w, const Vector&) {
    const Vector x = x_of(w);
    const Vector d = d_of(w);
    const double fp = pnorm::norm_pow(x, p);
    const double scale = (c.r / p) * pnorm::pow_abs(fp, (c.r - p) / p);
    const Vector gf = pnorm::grad(x, p);
    DenseMatrix jac = ata * d.asDiagonal();
    jac.diagonal() += 2.0 * c.lambda2 * d;
    jac.diagonal().array() += c.lambda1 * scale;
    jac += (c.lambda1 * scale * (c.r - p) / (p * fp)) * gf * gf.cwiseProduct(d).transpose();
    return Vector(jac.partialPivLu().solve(-c.gradient(x)));
  };
  f.stationarity = [&](const Vector& w, const Vector&) { return inf_norm(c.gradient(x_of(w))); };
  auto done = [&](const Vector& w) { return c.kkt_ok(x_of(w)); };

  Vector w0 = pnorm::grad(x0, p);
  auto out = detail::damped_newton(f, w0, detail::newton_options(c.cfg), done);
  SolveResult res;
  res.algorithm = Algorithm::primal_dual_newton;
  res.x = x_of(out.z);
  res.iterations = out.iterations;
  res.status = out.converged ? Status::converged : Status::max_iter;
  return res;
}

}  // namespace

SolveResult solve_en(const DenseMatrix& a, const Vector& y, Exponent p, double r, double lambda1,
                     double lambda2, const SolverConfig& cfg) {
  ProblemInstance inst{a, y, Family::en, p.value(), {}};
  inst.params.r = r;
  inst.params.lambda1 = lambda1;
  inst.params.lambda2 = lambda2;
  inst.validate();
  cfg.validate();

  const EnContext ctx{a, y, p, r, lambda1, lambda2, cfg, 1.0 + inf_norm(a.transpose() * y)};
  SolveResult res;
  if (y.isZero(0.0) || zero_is_optimal(ctx)) {
    res.x = Vector::Zero(a.cols());
    detail::finalize(inst, res, cfg);
    return res;
  }

  Vector x0 = cfg.initial_x ? *cfg.initial_x : detail::ridge_start(a, y, lambda1 + lambda2);
  if (x0.size() != a.cols()) throw Error(ErrorKind::invalid_input, "initial_x has wrong dimension");
  if (x0.isZero(0.0)) x0 = a.transpose() * y;

  Algorithm algo = cfg.algorithm;
  if (algo == Algorithm::automatic || algo == Algorithm::dual_newton) algo = Algorithm::primal_dual_newton;
  if (algo == Algorithm::primal_dual_newton && p < 2.0) {
    res = en_reparam_newton(ctx, x0);
    if (!res.converged() && cfg.algorithm == Algorithm::automatic) {
      res = en_gradient(ctx, res.x, res.iterations);
    }
  } else if (algo == Algorithm::primal_dual_newton) {
    const DenseMatrix ata = a.transpose() * a;
    detail::SmoothObjective f;
    f.value = [&](const Vector& x) { return ctx.value(x); };
    f.derivatives = [&](const Vector& x, Vector& grad, DenseMatrix& hess) {
      grad = ctx.gradient(x);
      hess = ata + lambda1 * pnorm::norm_r_hessian(x, p, r);
      hess.diagonal().array() += 2.0 * lambda2;
    };
    auto out = detail::damped_newton(f, x0, detail::newton_options(cfg),
                                     [&](const Vector& x) { return ctx.kkt_ok(x); });
    res.algorithm = Algorithm::primal_dual_newton;
    res.x = out.z;
    res.iterations = out.iterations;
    res.status = out.converged ? Status::converged : Status::max_iter;
    if (!res.converged() && cfg.algorithm == Algorithm::automatic) {
      res = en_gradient(ctx, res.x, res.iterations);
    }
  } else if (algo == Algorithm::projected_gradient) {
    res = en_gradient(ctx, x0, 0);
  } else {
    throw Error(ErrorKind::invalid_input, "algorithm not available for en");
  }
  detail::finalize(inst, res, cfg);
  return res;
}

}  // namespace lps::solvers
