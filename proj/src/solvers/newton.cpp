#include <algorithm>
#include <cmath>

#include "detail.hpp"

namespace lps::solvers::detail {

double inf_norm(const Vector& v) noexcept { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

NewtonOptions newton_options(const SolverConfig& cfg) {
  return NewtonOptions{cfg.max_iter, cfg.ls_shrink, cfg.ls_decrease, cfg.step_tol};
}

Vector regularized_newton_direction(const DenseMatrix& hess, const Vector& grad) {
  const double scale = std::max(1.0, hess.diagonal().cwiseAbs().maxCoeff());
  double shift = 0.0;
  for (int attempt = 0; attempt < 12; ++attempt) {
    DenseMatrix h = hess;
    if (shift > 0.0) h.diagonal().array() += shift;
    Eigen::LLT<DenseMatrix> llt(h);
    if (llt.info() == Eigen::Success) {
      const Vector d = llt.solve(-grad);
      if (d.allFinite()) return d;
    }
    shift = shift == 0.0 ? 1e-12 * scale : shift * 100.0;
  }
  return -grad;
}

NewtonOutcome damped_newton(const SmoothObjective& f, Vector z, const NewtonOptions& opt,
                            const std::function<bool(const Vector&)>& done) {
  NewtonOutcome out;
  auto measure = [&f](const Vector& at, const Vector& g) {
    return f.stationarity ? f.stationarity(at, g) : g.norm();
  };
  Vector grad(z.size());
  DenseMatrix hess(z.size(), z.size());
  double value = f.value(z);
  double last_step = HUGE_VAL;
  int done_streak = 0;

  for (int it = 0; it < opt.max_iter; ++it) {
    out.iterations = it;
    if (done(z)) {
      ++done_streak;
      if (last_step <= opt.step_tol || done_streak >= 3) {
        out.converged = true;
        break;
      }
    } else {
      done_streak = 0;
    }

    f.derivatives(z, grad, hess);
    Vector d = f.direction ? f.direction(z, grad) : regularized_newton_direction(hess, grad);
    double slope = grad.dot(d);
    // A custom direction may carry a constraint correction, so it is kept and
    // judged by the stationarity measure instead of replaced by -grad.
    if (!(slope < 0.0) && !f.direction) {
      d = -grad;
      slope = -grad.squaredNorm();
    }
    if (slope == 0.0 && !f.direction) {
      out.converged = done(z);
      break;
    }

    // Once the predicted decrease is below the resolution of the objective
    // value, Armijo comparisons are noise; judge the step by the gradient.
    const double resolution = 1e-14 * (1.0 + std::abs(value));
    double t = 1.0;
    double trial = HUGE_VAL;
    bool accepted = false;
    if (-slope > resolution) {
      trial = f.value(z + d);
      while (!(trial <= value + opt.decrease * t * slope)) {
        t *= opt.shrink;
        if (-opt.decrease * t * slope <= resolution) break;
        trial = f.value(z + t * d);
      }
      accepted = trial <= value + opt.decrease * t * slope;
    }
    if (!accepted) {
      Vector g2(z.size());
      DenseMatrix h2(z.size(), z.size());
      const Vector cand = z + d;
      f.derivatives(cand, g2, h2);
      if (cand.allFinite() && measure(cand, g2) < measure(z, grad)) {
        t = 1.0;
        trial = f.value(cand);
      } else {
        ++out.failed_steps;
        out.converged = done(z);
        break;
      }
    }
    z += t * d;
    value = trial;
    last_step = t * inf_norm(d) / (1.0 + inf_norm(z));
    out.iterations = it + 1;
  }
  if (!out.converged && out.iterations >= opt.max_iter) out.converged = done(z);
  out.z = std::move(z);
  return out;
}

NewtonOutcome gradient_descent(const std::function<double(const Vector&)>& value,
                               const std::function<Vector(const Vector&)>& gradient,
                               const std::function<Vector(const Vector&)>& project, Vector z,
                               int max_iter, const std::function<bool(const Vector&)>& done,
                               std::vector<double>* trace) {
  NewtonOutcome out;
  if (project) z = project(z);
  double v = value(z);
  double step = 1.0;
  for (int it = 0; it < max_iter; ++it) {
    out.iterations = it;
    if (done(z)) {
      out.converged = true;
      break;
    }
    const Vector grad = gradient(z);
    bool accepted = false;
    for (int k = 0; k < 80; ++k) {
      Vector cand = z - step * grad;
      if (project) cand = project(cand);
      const double vc = value(cand);
      const Vector moved = cand - z;
      // Sufficient decrease for (projected) gradient steps.
      if (vc <= v - 0.5 / step * moved.squaredNorm() + 1e-15 * std::abs(v)) {
        z = std::move(cand);
        v = vc;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (trace) trace->push_back(v);
    if (!accepted) {
      out.converged = done(z);
      break;
    }
    step *= 2.0;
    out.iterations = it + 1;
  }
  out.z = std::move(z);
  return out;
}

Vector ridge_start(const DenseMatrix& a, const Vector& y, double lambda) {
  DenseMatrix m = a.transpose() * a;
  m.diagonal().array() += 2.0 * lambda;
  return m.llt().solve(a.transpose() * y);
}

}  // namespace lps::solvers::detail
