#include <cmath>
#include <functional>

#include "detail.hpp"
#include "lps/linalg.hpp"
#include "lps/pnorm.hpp"

namespace lps::solvers {
namespace {

using detail::inf_norm;

struct PathPoint {
  double lambda = 0.0;
  double value = 0.0;
  SolveResult rr;
};

struct PathSearch {
  PathPoint best;
  int rr_iterations = 0;
  bool bracketed = false;
  bool hit_target = false;
  bool inner_converged = true;
};

constexpr double kLambdaMin = 1e-12;
constexpr double kLambdaMax = 1e12;

// Finds lambda with value(lambda) = target along the RR path, where
// value(lambda) is monotone (increasing when `increasing`). Brackets by
// doubling/halving from lambda = 1 within [1e-12, 1e12], then runs Illinois
// regula falsi in log(lambda), falling back to bisection steps whenever the
// secant point leaves the bracket.
PathSearch path_root(const DenseMatrix& a, const Vector& y, Exponent p, const SolverConfig& cfg,
                     double target, bool increasing, double abs_tol,
                     const std::function<double(const SolveResult&)>& measure) {
  PathSearch out;
  std::optional<Vector> warm;
  auto eval = [&](double lambda) {
    SolverConfig inner = cfg;
    inner.initial_x.reset();
    PathPoint pt;
    pt.lambda = lambda;
    pt.rr = detail::solve_rr_from(a, y, p, lambda, inner, warm);
    pt.value = measure(pt.rr);
    out.rr_iterations += pt.rr.iterations;
    if (pt.rr.converged()) warm = pt.rr.x;
    return pt;
  };
  // below: value on the "small lambda" side of target (i.e. sign of F(lambda)).
  auto side = [&](const PathPoint& pt) {
    const double f = pt.value - target;
    return increasing ? f : -f;  // < 0 means lambda too small
  };

  PathPoint lo, hi;
  PathPoint cur = eval(1.0);
  out.best = cur;
  if (std::abs(cur.value - target) <= abs_tol) {
    out.bracketed = out.hit_target = true;
    out.inner_converged = cur.rr.converged();
    return out;
  }
  if (side(cur) < 0.0) {
    lo = cur;
    double lam = 1.0;
    for (;;) {
      lam *= 2.0;
      if (lam > kLambdaMax) return out;
      cur = eval(lam);
      if (side(cur) >= 0.0) {
        hi = cur;
        break;
      }
      lo = cur;
    }
  } else {
    hi = cur;
    double lam = 1.0;
    for (;;) {
      lam *= 0.5;
      if (lam < kLambdaMin) return out;
      cur = eval(lam);
      if (side(cur) <= 0.0) {
        lo = cur;
        break;
      }
      hi = cur;
    }
  }
  out.bracketed = true;

  double tlo = std::log(lo.lambda), thi = std::log(hi.lambda);
  double flo = side(lo), fhi = side(hi);
  out.best = std::abs(flo) < std::abs(fhi) ? lo : hi;
  int stuck = 0;  // Illinois: which end has been retained repeatedly
  for (int it = 0; it < 200; ++it) {
    if (std::abs(out.best.value - target) <= abs_tol) {
      out.hit_target = true;
      break;
    }
    double t = (fhi - flo) != 0.0 ? tlo - flo * (thi - tlo) / (fhi - flo) : 0.5 * (tlo + thi);
    const double width = thi - tlo;
    if (!(t > tlo + 1e-3 * width && t < thi - 1e-3 * width)) t = 0.5 * (tlo + thi);
    if (width < 1e-15) break;
    cur = eval(std::exp(t));
    const double fc = side(cur);
    if (std::abs(cur.value - target) < std::abs(out.best.value - target)) out.best = cur;
    if (fc < 0.0) {
      tlo = t;
      flo = fc;
      if (stuck == -1) fhi *= 0.5;
      stuck = -1;
    } else {
      thi = t;
      fhi = fc;
      if (stuck == 1) flo *= 0.5;
      stuck = 1;
    }
  }
  out.inner_converged = out.best.rr.converged();
  return out;
}

}  // namespace

SolveResult solve_bpdn_eps(const DenseMatrix& a, const Vector& y, Exponent p, double eps,
                           const SolverConfig& cfg) {
  ProblemInstance inst{a, y, Family::bpdn_eps, p.value(), {}};
  inst.params.eps = eps;
  inst.validate();
  cfg.validate();

  SolveResult res;
  const double ynorm = y.norm();
  if (eps >= ynorm) {
    res.x = Vector::Zero(a.cols());
    res.mu = 0.0;
    detail::finalize(inst, res, cfg);
    return res;
  }
  linalg::least_norm_solution(a, y);  // full row rank precondition

  auto residual = [&](const SolveResult& r) { return (a * r.x - y).norm(); };
  const PathSearch search =
      path_root(a, y, p, cfg, eps, /*increasing=*/true, cfg.bisection_tol * ynorm, residual);
  res = search.best.rr;
  res.mu = 1.0 / (2.0 * search.best.lambda);
  res.iterations = search.rr_iterations;
  res.algorithm = search.best.rr.algorithm;
  if (!search.bracketed) {
    res.status = Status::degenerate;
  } else {
    const Vector g = pnorm::grad(res.x, p);
    const double stat = inf_norm(g + 2.0 * *res.mu * (a.transpose() * (a * res.x - y)));
    const bool ok = search.hit_target && search.inner_converged &&
                    stat <= cfg.kkt_tol * (1.0 + inf_norm(g));
    res.status = ok ? Status::converged : Status::max_iter;
  }
  detail::finalize(inst, res, cfg);
  return res;
}

SolveResult solve_bpdn_eta(const DenseMatrix& a, const Vector& y, Exponent p, double eta,
                           const SolverConfig& cfg) {
  ProblemInstance inst{a, y, Family::bpdn_eta, p.value(), {}};
  inst.params.eta = eta;
  inst.validate();
  cfg.validate();

  SolveResult res;
  if (y.isZero(0.0)) {
    res.x = Vector::Zero(a.cols());
    res.mu = 0.0;
    detail::finalize(inst, res, cfg);
    return res;
  }
  SolverConfig bp_cfg = cfg;
  bp_cfg.initial_x.reset();
  SolveResult bp = solve_bp(a, y, p, bp_cfg);
  if (bp.status == Status::infeasible) {
    throw Error(ErrorKind::rank_deficient, "bpdn-eta requires A with full row rank");
  }
  const double threshold = pnorm::norm(bp.x, p);
  if (eta >= threshold) {
    res.x = bp.x;
    res.mu = 0.0;
    res.reduced = true;
    res.iterations = bp.iterations;
    res.algorithm = bp.algorithm;
    res.status = bp.status;
    detail::finalize(inst, res, cfg);
    return res;
  }

  auto pnorm_of = [&](const SolveResult& r) { return pnorm::norm(r.x, p); };
  const PathSearch search =
      path_root(a, y, p, cfg, eta, /*increasing=*/false, cfg.bisection_tol * eta, pnorm_of);
  res = search.best.rr;
  res.mu = search.best.lambda;
  res.iterations = bp.iterations + search.rr_iterations;
  if (!search.bracketed) {
    res.status = Status::degenerate;
  } else {
    const double stat = inf_norm(a.transpose() * (a * res.x - y) + *res.mu * pnorm::grad(res.x, p));
    const bool ok = search.hit_target && search.inner_converged &&
                    stat <= cfg.kkt_tol * (1.0 + inf_norm(a.transpose() * y));
    res.status = ok ? Status::converged : Status::max_iter;
  }
  detail::finalize(inst, res, cfg);
  return res;
}

}  // namespace lps::solvers
