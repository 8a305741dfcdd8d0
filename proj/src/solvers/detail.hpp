#pragma once

#include <functional>

#include "lps/solvers.hpp"

namespace lps::solvers::detail {

double inf_norm(const Vector& v) noexcept;

/// Smooth convex function with value, gradient and Hessian.
struct SmoothObjective {
  std::function<double(const Vector&)> value;
  std::function<void(const Vector&, Vector& grad, DenseMatrix& hess)> derivatives;
  /// Optional search direction given (z, grad), replacing the Hessian solve.
  std::function<Vector(const Vector&, const Vector&)> direction;
  /// Optional stationarity measure given (z, grad); defaults to ||grad||_2.
  /// Used to judge steps once the predicted decrease is at round-off level.
  std::function<double(const Vector&, const Vector&)> stationarity;
};

struct NewtonOptions {
  int max_iter = 500;
  double shrink = 0.5;
  double decrease = 1e-4;
  double step_tol = 1e-12;
};

struct NewtonOutcome {
  Vector z;
  int iterations = 0;
  bool converged = false;
  int failed_steps = 0;
};

/// Solves (H + shift I) d = -g with Cholesky, escalating the shift from zero
/// (then 1e-12 * scale, x100 per retry) until the factorization succeeds.
Vector regularized_newton_direction(const DenseMatrix& hess, const Vector& grad);

/// Damped Newton with Armijo backtracking. `done(z)` is the caller's relative
/// KKT test; convergence requires it together with a relative step below
/// step_tol (or three consecutive passes once steps hit the round-off floor).
NewtonOutcome damped_newton(const SmoothObjective& f, Vector z0, const NewtonOptions& opt,
                            const std::function<bool(const Vector&)>& done);

/// Gradient descent with backtracking, for the first-order fallbacks.
/// `project` (may be empty) maps iterates back onto a constraint set.
NewtonOutcome gradient_descent(const std::function<double(const Vector&)>& value,
                               const std::function<Vector(const Vector&)>& gradient,
                               const std::function<Vector(const Vector&)>& project, Vector z0,
                               int max_iter, const std::function<bool(const Vector&)>& done,
                               std::vector<double>* trace = nullptr);

NewtonOptions newton_options(const SolverConfig& cfg);

/// Ridge (p = 2) solution (A^T A + 2 lambda I)^{-1} A^T y, used as a start.
Vector ridge_start(const DenseMatrix& a, const Vector& y, double lambda);

/// Internal RR entry that accepts a warm start (used by the BPDN root-finds).
SolveResult solve_rr_from(const DenseMatrix& a, const Vector& y, Exponent p, double lambda,
                          const SolverConfig& cfg, const std::optional<Vector>& start);

void finalize(const ProblemInstance& inst, SolveResult& res, const SolverConfig& cfg);

}  // namespace lps::solvers::detail
