#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lps/ensembles.hpp"
#include "lps/solvers.hpp"
#include "lps/types.hpp"

// Support measurement, invariant checks and Monte-Carlo experiments.
namespace lps::analysis {

struct SupportReport {
  std::vector<Index> indices;  // ascending, zero-based
  Index size = 0;
  double min_rel_magnitude = 0.0;  // min over the support of |x_i| / ||x||_inf
  double tol_used = 0.0;
};

/// Indices with |x_i| > tol * ||x||_inf. tol must lie in [0, 1).
SupportReport support(const Vector& x, double tol);

/// size >= N - m + 1.
bool check_lower_bound(const SupportReport& report, Index m, Index n);

struct ExperimentConfig {
  solvers::Family family = solvers::Family::bp;
  solvers::FamilyParams params;  // lambda, lambda1, lambda2, r (eps/eta come from the fractions)
  Index m = 8;
  Index n = 20;
  std::vector<double> p_grid{1.2, 1.5, 2.0, 3.0, 4.5};
  int trials = 200;
  std::uint64_t master_seed = 0;
  double support_tol = 1e-6;
  std::optional<Index> sparsity;
  ensembles::SignalMagnitudes magnitudes = ensembles::SignalMagnitudes::signs;
  std::optional<double> epsilon_fraction;  // eps = fraction * ||y||_2, default 0.1
  std::optional<double> eta_fraction;      // eta = fraction * min ||x||_p, default 0.5
  /// The exhaustive set-S check runs only when C(N, m) is at most this.
  std::uint64_t set_s_max_subsets = 5000;
  solvers::SolverConfig solver;

  /// Throws invalid_input listing every violated field.
  void validate() const;
  double eps_fraction() const { return epsilon_fraction.value_or(0.1); }
  double eta_frac() const { return eta_fraction.value_or(0.5); }
};

struct TrialRecord {
  int trial = 0;
  std::size_t p_index = 0;
  std::uint64_t seed = 0;
  Index m = 0;
  Index n = 0;
  double p = 0.0;
  solvers::Family family = solvers::Family::bp;
  Index support_size = 0;
  double min_rel_magnitude = 0.0;
  double kkt_residual = 0.0;
  int iterations = 0;
  std::string status;  // solver status, or "error" when the solve threw
  double wall_time_ms = 0.0;

  std::optional<bool> in_set_s;      // empty when the check was skipped
  bool lower_bound_ok = true;
  std::optional<double> constraint;  // BPDN: ||Ax - y||_2 (eps) or ||x||_p (eta)
  std::optional<double> target;      // BPDN: eps or eta
  std::optional<double> mu;
  bool reduced = false;
  std::optional<double> recovery_error;  // ||x - x0||_inf when a planted signal exists
  bool recovered = false;
  std::string error;

  bool converged() const { return status == "converged"; }
};

struct PStats {
  double p = 0.0;
  solvers::Family family = solvers::Family::bp;
  int trials_run = 0;
  int failures = 0;  // non-converged or thrown; excluded from the fractions
  int full_support_count = 0;
  Index min_support_seen = 0;
  Index max_support_seen = 0;
  double mean_min_rel_magnitude = 0.0;
  double kkt_residual_max = 0.0;
  int lower_bound_violations = 0;
  int not_in_set_s = 0;
  int recovered_count = 0;       // recovery experiments
  int support_le_m_count = 0;    // recovery experiments

  int counted() const { return trials_run - failures; }
  double full_support_fraction() const;
  double recovery_fraction() const;
  double support_le_m_fraction() const;
};

struct ExperimentStats {
  std::vector<PStats> rows;          // one per p in the grid
  std::vector<TrialRecord> trials;   // ordered by (p_index, trial)
};

/// Runs one trial: draws the instance from derive_seed(master, p_index,
/// trial), solves and measures. Never throws; failures are recorded.
TrialRecord run_trial(const ExperimentConfig& cfg, std::size_t p_index, int trial);

/// Monte-Carlo full-support experiment. Trials run across `workers` OpenMP
/// threads (<= 0: OpenMP default); the result does not depend on it.
ExperimentStats run_genericity_experiment(const ExperimentConfig& cfg, int workers = 0);
/// Serial reference for run_genericity_experiment.
ExperimentStats run_genericity_experiment_serial(const ExperimentConfig& cfg);

/// l1 exact recovery (family bp_l1) or the 0 < p < 1 support bound
/// (family rr_irls). Requires cfg.sparsity.
ExperimentStats run_recovery_comparison(const ExperimentConfig& cfg, int workers = 0);

/// Aggregates trial records into per-p rows.
std::vector<PStats> aggregate(const ExperimentConfig& cfg, const std::vector<TrialRecord>& trials);

struct PerturbationRow {
  double delta = 0.0;
  int trials = 0;
  int recovered = 0;
  int failures = 0;
  double fraction = 0.0;
};

/// For each delta, replaces A by A + delta * E (E Gaussian with unit spectral
/// norm, shared by all deltas) and reruns the l1 recovery trials on the same
/// planted s-sparse signals, measuring y = (A + delta E) x0.
std::vector<PerturbationRow> perturbation_robustness(const DenseMatrix& a, Index s, int trials,
                                                     const std::vector<double>& deltas,
                                                     std::uint64_t seed,
                                                     const solvers::SolverConfig& cfg = {},
                                                     int workers = 0);

/// Smallest eigenvalue of Q = A diag(h'(a_i^T nu)) A^T at a BP solution.
/// Throws invalid_input when the result has no multiplier.
double check_dual_jacobian_spd(const DenseMatrix& a, const Vector& y, Exponent p,
                               const solvers::SolveResult& result);

/// Exact recovery test shared by the recovery experiments.
bool is_exact_recovery(const Vector& x, const Vector& x0, Index s, double support_tol);

}  // namespace lps::analysis
