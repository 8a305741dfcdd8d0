#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lps/types.hpp"

// Solvers for the p-norm problem families
//
//   BP        min ||x||_p                  s.t. Ax = y
//   BPDN_EPS  min ||x||_p                  s.t. ||Ax - y||_2 <= eps
//   BPDN_ETA  min ||Ax - y||_2             s.t. ||x||_p <= eta
//   RR        min 1/2 ||Ax - y||^2 + lambda ||x||_p^p
//   EN        min 1/2 ||Ax - y||^2 + lambda1 ||x||_p^r + lambda2 ||x||_2^2
//
// for p > 1, plus two comparison solvers: BP with p = 1 (ADMM) and RR with
// 0 < p < 1 (smoothed IRLS).
namespace lps::solvers {

enum class Family { bp, bpdn_eps, bpdn_eta, rr, en, bp_l1, rr_irls };

enum class Status { converged, max_iter, infeasible, degenerate };

enum class Algorithm { automatic, dual_newton, primal_dual_newton, projected_gradient, fixed_point };

std::string_view to_string(Family f) noexcept;
std::string_view to_string(Status s) noexcept;
std::string_view to_string(Algorithm a) noexcept;
/// Accepts the CLI spellings: bp, bpdn-eps, bpdn-eta, rr, en, bp-l1, rr-irls.
Family parse_family(std::string_view name);
Algorithm parse_algorithm(std::string_view name);

struct FamilyParams {
  double lambda = 0.1;
  double lambda1 = 0.1;
  double lambda2 = 0.1;
  double r = 1.0;
  double eps = 0.0;
  double eta = 0.0;
};

struct ProblemInstance {
  DenseMatrix a;
  Vector y;
  Family family = Family::bp;
  double p = 2.0;
  FamilyParams params;

  /// Dimension and per-family parameter checks; throws invalid_input or
  /// unsupported_exponent naming the violated precondition.
  void validate() const;
};

struct SolverConfig {
  double kkt_tol = 1e-10;
  int max_iter = 500;                 // Newton-type iterations
  int first_order_max_iter = 50000;   // gradient / IRLS iterations
  double bisection_tol = 1e-10;       // relative, for BPDN scalar root-finds
  double ls_shrink = 0.5;
  double ls_decrease = 1e-4;
  double step_tol = 1e-12;            // relative step size for convergence
  Algorithm algorithm = Algorithm::automatic;

  // l1 comparison solver (ADMM)
  double l1_penalty = 1.0;
  int l1_max_iter = 5000;
  double l1_tol = 1e-9;

  // IRLS smoothing schedule (0 < p < 1)
  double irls_eps_start = 1.0;
  double irls_eps_min = 1e-14;
  double irls_eps_shrink = 0.1;

  /// Starting point for the iteration. Only used to probe that the returned
  /// minimizer does not depend on it; solvers pick their own start otherwise.
  std::optional<Vector> initial_x;
  /// Record the objective value after every iteration (IRLS, first-order).
  bool record_trace = false;

  void validate() const;
};

struct SolveResult {
  Vector x;
  std::optional<Vector> nu;     // equality multiplier (BP, BP_L1)
  std::optional<double> mu;     // scalar multiplier (BPDN forms)
  double objective = 0.0;
  double kkt_residual = 0.0;    // absolute, see kkt_residual()
  double kkt_scale = 1.0;       // converged => kkt_residual <= kkt_tol * kkt_scale
  int iterations = 0;
  Status status = Status::converged;
  Algorithm algorithm = Algorithm::automatic;
  bool reduced = false;         // BPDN_ETA: eta >= min ||x||_p, BP solution returned
  std::optional<double> smoothing;  // IRLS: final smoothing parameter
  std::vector<double> trace;

  bool converged() const noexcept { return status == Status::converged; }
};

SolveResult solve_bp(const DenseMatrix& a, const Vector& y, Exponent p,
                     const SolverConfig& cfg = {});
SolveResult solve_rr(const DenseMatrix& a, const Vector& y, Exponent p, double lambda,
                     const SolverConfig& cfg = {});
SolveResult solve_en(const DenseMatrix& a, const Vector& y, Exponent p, double r,
                     double lambda1, double lambda2, const SolverConfig& cfg = {});
SolveResult solve_bpdn_eps(const DenseMatrix& a, const Vector& y, Exponent p, double eps,
                           const SolverConfig& cfg = {});
SolveResult solve_bpdn_eta(const DenseMatrix& a, const Vector& y, Exponent p, double eta,
                           const SolverConfig& cfg = {});
SolveResult solve_bp_l1(const DenseMatrix& a, const Vector& y, const SolverConfig& cfg = {});
SolveResult solve_rr_irls(const DenseMatrix& a, const Vector& y, Exponent p, double lambda,
                          const SolverConfig& cfg = {});

/// Validates and dispatches on instance.family.
SolveResult solve(const ProblemInstance& instance, const SolverConfig& cfg = {});

/// Objective value of the family at x (for BPDN_EPS and BP: ||x||_p; for
/// BPDN_ETA: ||Ax - y||_2).
double objective(const ProblemInstance& instance, const Vector& x);

/// Max-norm of the family's stationarity residual plus its feasibility
/// violation, in absolute terms. Zero for an exact KKT pair.
double kkt_residual(const ProblemInstance& instance, const SolveResult& result);

/// Normalization used by the convergence test of each family.
double kkt_scale(const ProblemInstance& instance, const SolveResult& result);

}  // namespace lps::solvers
