#include "lps/analysis.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "lps/combinations.hpp"
#include "lps/linalg.hpp"
#include "lps/pnorm.hpp"
#include "lps/rng.hpp"

namespace lps::analysis {
namespace {

using solvers::Family;

bool is_recovery_family(Family f) { return f == Family::bp_l1 || f == Family::rr_irls; }

double ratio(int num, int den) { return den > 0 ? static_cast<double>(num) / den : 0.0; }

int resolve_workers(int workers) { return workers > 0 ? workers : omp_get_max_threads(); }

}  // namespace

SupportReport support(const Vector& x, double tol) {
  if (!(tol >= 0.0 && tol < 1.0)) {
    throw Error(ErrorKind::invalid_input, "support tolerance must lie in [0, 1)");
  }
  SupportReport rep;
  rep.tol_used = tol;
  const double xmax = x.lpNorm<Eigen::Infinity>();
  if (xmax == 0.0) return rep;
  double min_rel = 1.0;
  for (Index i = 0; i < x.size(); ++i) {
    const double rel = std::abs(x[i]) / xmax;
    if (std::abs(x[i]) > tol * xmax) {
      rep.indices.push_back(i);
      min_rel = std::min(min_rel, rel);
    }
  }
  rep.size = static_cast<Index>(rep.indices.size());
  rep.min_rel_magnitude = min_rel;
  return rep;
}

bool check_lower_bound(const SupportReport& report, Index m, Index n) {
  return report.size >= n - m + 1;
}

bool is_exact_recovery(const Vector& x, const Vector& x0, Index s, double support_tol) {
  return (x - x0).lpNorm<Eigen::Infinity>() <= 1e-6 && support(x, support_tol).size == s;
}

void ExperimentConfig::validate() const {
  std::vector<std::string> bad;
  if (m < 1) bad.push_back("m >= 1");
  if (n < 1) bad.push_back("N >= 1");
  if (trials < 1) bad.push_back("trials >= 1");
  if (p_grid.empty()) bad.push_back("p_grid non-empty");
  if (!(support_tol >= 0.0 && support_tol < 1.0)) bad.push_back("support_tol in [0, 1)");
  if (sparsity && (*sparsity < 1 || *sparsity > n)) bad.push_back("1 <= sparsity <= N");
  if (epsilon_fraction && !(*epsilon_fraction > 0.0 && *epsilon_fraction < 1.0)) {
    bad.push_back("epsilon_fraction in (0, 1)");
  }
  if (eta_fraction && !(*eta_fraction > 0.0 && *eta_fraction < 1.0)) {
    bad.push_back("eta_fraction in (0, 1)");
  }
  for (double p : p_grid) {
    const bool ok = family == Family::rr_irls ? (p > 0.0 && p < 1.0)
                    : family == Family::bp_l1 ? p == 1.0
                                              : p > 1.0;
    if (!ok) {
      bad.push_back(std::string("p range for ") + std::string(solvers::to_string(family)) +
                    " (got " + std::to_string(p) + ")");
      break;
    }
  }
  if (family == Family::bp && n < 2 * m - 1) bad.push_back("N >= 2m - 1 for bp");
  if (!is_recovery_family(family) && family != Family::bp && n < m) bad.push_back("N >= m");
  if (family == Family::rr && !(params.lambda > 0.0)) bad.push_back("lambda > 0");
  if (family == Family::rr_irls && !(params.lambda > 0.0)) bad.push_back("lambda > 0");
  if (family == Family::en) {
    if (!(params.lambda1 > 0.0)) bad.push_back("lambda1 > 0");
    if (!(params.lambda2 > 0.0)) bad.push_back("lambda2 > 0");
    if (!(params.r >= 1.0)) bad.push_back("r >= 1");
  }
  if (is_recovery_family(family) && !sparsity) bad.push_back("sparsity is required for recovery");
  if (bad.empty()) return;
  std::string msg = "invalid experiment config:";
  for (const auto& b : bad) msg += " [" + b + "]";
  throw Error(ErrorKind::invalid_input, msg);
}

TrialRecord run_trial(const ExperimentConfig& cfg, std::size_t p_index, int trial) {
  TrialRecord rec;
  rec.trial = trial;
  rec.p_index = p_index;
  rec.seed = derive_seed(cfg.master_seed, p_index, static_cast<std::uint64_t>(trial));
  rec.m = cfg.m;
  rec.n = cfg.n;
  rec.p = cfg.p_grid[p_index];
  rec.family = cfg.family;
  const auto start = std::chrono::steady_clock::now();
  try {
    const ensembles::EnsembleSpec spec{cfg.m, cfg.n, rec.seed, cfg.sparsity, cfg.magnitudes};
    solvers::ProblemInstance inst;
    std::optional<Vector> x0;
    if (cfg.sparsity) {
      auto si = ensembles::gen_sparse_measured(spec);
      inst.a = std::move(si.a);
      inst.y = std::move(si.y);
      x0 = std::move(si.x0);
    } else {
      auto gi = ensembles::gen_gaussian_instance(spec);
      inst.a = std::move(gi.a);
      inst.y = std::move(gi.y);
    }
    inst.family = cfg.family;
    inst.p = rec.p;
    inst.params = cfg.params;

    const std::uint64_t minors = combinations::binomial(static_cast<std::uint64_t>(cfg.n),
                                                        static_cast<std::uint64_t>(cfg.m));
    if (cfg.n <= ensembles::kSetSMaxColumns && minors <= cfg.set_s_max_subsets) {
      rec.in_set_s = ensembles::is_in_set_s_serial(inst.a, inst.y);
    }

    if (cfg.family == Family::bpdn_eps) {
      inst.params.eps = cfg.eps_fraction() * inst.y.norm();
      rec.target = inst.params.eps;
    } else if (cfg.family == Family::bpdn_eta) {
      inst.params.eta =
          cfg.eta_frac() * ensembles::min_pnorm_over_affine(inst.a, inst.y, Exponent(rec.p),
                                                            cfg.solver);
      rec.target = inst.params.eta;
    }

    const solvers::SolveResult res = solvers::solve(inst, cfg.solver);
    rec.status = std::string(solvers::to_string(res.status));
    rec.kkt_residual = res.kkt_residual;
    rec.iterations = res.iterations;
    rec.mu = res.mu;
    rec.reduced = res.reduced;
    const SupportReport sup = support(res.x, cfg.support_tol);
    rec.support_size = sup.size;
    rec.min_rel_magnitude = sup.min_rel_magnitude;
    if (cfg.family == Family::bpdn_eps) rec.constraint = (inst.a * res.x - inst.y).norm();
    if (cfg.family == Family::bpdn_eta) rec.constraint = pnorm::norm(res.x, Exponent(rec.p));

    const bool applies = rec.p > 1.0 && res.converged() && rec.in_set_s.value_or(true) &&
                         !res.x.isZero(0.0);
    rec.lower_bound_ok = !applies || check_lower_bound(sup, cfg.m, cfg.n);
    if (x0) {
      rec.recovery_error = (res.x - *x0).lpNorm<Eigen::Infinity>();
      rec.recovered = is_exact_recovery(res.x, *x0, *cfg.sparsity, cfg.support_tol);
    }
  } catch (const std::exception& e) {
    rec.status = "error";
    rec.error = e.what();
  }
  rec.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::vector<PStats> aggregate(const ExperimentConfig& cfg, const std::vector<TrialRecord>& trials) {
  std::vector<PStats> rows(cfg.p_grid.size());
  std::vector<double> rel_sum(cfg.p_grid.size(), 0.0);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    rows[k].p = cfg.p_grid[k];
    rows[k].family = cfg.family;
    rows[k].min_support_seen = std::numeric_limits<Index>::max();
  }
  for (const TrialRecord& t : trials) {
    PStats& row = rows[t.p_index];
    ++row.trials_run;
    if (!t.converged()) {
      ++row.failures;
      continue;
    }
    row.full_support_count += t.support_size == cfg.n;
    row.min_support_seen = std::min(row.min_support_seen, t.support_size);
    row.max_support_seen = std::max(row.max_support_seen, t.support_size);
    rel_sum[t.p_index] += t.min_rel_magnitude;
    row.kkt_residual_max = std::max(row.kkt_residual_max, t.kkt_residual);
    row.lower_bound_violations += !t.lower_bound_ok;
    row.not_in_set_s += t.in_set_s.has_value() && !*t.in_set_s;
    row.recovered_count += t.recovered;
    row.support_le_m_count += t.support_size <= cfg.m;
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].counted() == 0) rows[k].min_support_seen = 0;
    rows[k].mean_min_rel_magnitude = rows[k].counted() > 0 ? rel_sum[k] / rows[k].counted() : 0.0;
  }
  return rows;
}

double PStats::full_support_fraction() const { return ratio(full_support_count, counted()); }
double PStats::recovery_fraction() const { return ratio(recovered_count, counted()); }
double PStats::support_le_m_fraction() const { return ratio(support_le_m_count, counted()); }

ExperimentStats run_genericity_experiment_serial(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentStats out;
  for (std::size_t k = 0; k < cfg.p_grid.size(); ++k) {
    for (int t = 0; t < cfg.trials; ++t) out.trials.push_back(run_trial(cfg, k, t));
  }
  out.rows = aggregate(cfg, out.trials);
  return out;
}

ExperimentStats run_genericity_experiment(const ExperimentConfig& cfg, int workers) {
  cfg.validate();
  const auto total = static_cast<std::int64_t>(cfg.p_grid.size()) * cfg.trials;
  ExperimentStats out;
  out.trials.resize(static_cast<std::size_t>(total));
#pragma omp parallel for schedule(dynamic, 1) num_threads(resolve_workers(workers))
  for (std::int64_t idx = 0; idx < total; ++idx) {
    const auto k = static_cast<std::size_t>(idx / cfg.trials);
    const auto t = static_cast<int>(idx % cfg.trials);
    out.trials[static_cast<std::size_t>(idx)] = run_trial(cfg, k, t);
  }
  out.rows = aggregate(cfg, out.trials);
  return out;
}

ExperimentStats run_recovery_comparison(const ExperimentConfig& cfg, int workers) {
  if (!is_recovery_family(cfg.family)) {
    throw Error(ErrorKind::invalid_input, "recovery comparison needs family bp-l1 or rr-irls");
  }
  return run_genericity_experiment(cfg, workers);
}

std::vector<PerturbationRow> perturbation_robustness(const DenseMatrix& a, Index s, int trials,
                                                     const std::vector<double>& deltas,
                                                     std::uint64_t seed,
                                                     const solvers::SolverConfig& cfg,
                                                     int workers) {
  if (s < 1 || s > a.cols() || trials < 1) {
    throw Error(ErrorKind::invalid_input, "perturbation needs 1 <= s <= N and trials >= 1");
  }
  CounterRng erng(derive_seed(seed, 0xE));
  DenseMatrix e(a.rows(), a.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) e(i, j) = erng.normal();
  }
  e /= linalg::spectral_norm(e);

  std::vector<ensembles::SparseSignal> signals;
  for (int t = 0; t < trials; ++t) {
    CounterRng rng(derive_seed(seed, 0x5, static_cast<std::uint64_t>(t)));
    signals.push_back(
        ensembles::draw_sparse_signal(a.cols(), s, ensembles::SignalMagnitudes::signs, rng));
  }

  std::vector<PerturbationRow> rows;
  for (double delta : deltas) {
    const DenseMatrix ad = a + delta * e;
    std::vector<int> ok(static_cast<std::size_t>(trials), 0);
    std::vector<int> failed(static_cast<std::size_t>(trials), 0);
#pragma omp parallel for schedule(dynamic, 1) num_threads(resolve_workers(workers))
    for (int t = 0; t < trials; ++t) {
      const auto& sig = signals[static_cast<std::size_t>(t)];
      try {
        const auto res = solvers::solve_bp_l1(ad, ad * sig.x0, cfg);
        failed[static_cast<std::size_t>(t)] = !res.converged();
        ok[static_cast<std::size_t>(t)] = is_exact_recovery(res.x, sig.x0, s, 1e-6);
      } catch (const std::exception&) {
        failed[static_cast<std::size_t>(t)] = 1;
      }
    }
    PerturbationRow row;
    row.delta = delta;
    row.trials = trials;
    for (int t = 0; t < trials; ++t) {
      row.recovered += ok[static_cast<std::size_t>(t)];
      row.failures += failed[static_cast<std::size_t>(t)];
    }
    row.fraction = ratio(row.recovered, trials);
    rows.push_back(row);
  }
  return rows;
}

double check_dual_jacobian_spd(const DenseMatrix& a, const Vector& y, Exponent p,
                               const solvers::SolveResult& result) {
  if (!result.nu) throw Error(ErrorKind::invalid_input, "result carries no multiplier nu");
  if (result.nu->size() != a.rows() || y.size() != a.rows()) {
    throw Error(ErrorKind::invalid_input, "multiplier dimension does not match A");
  }
  const Vector z = a.transpose() * *result.nu;
  Vector w(z.size());
  for (Index i = 0; i < z.size(); ++i) w[i] = pnorm::h_prime(z[i], p);
  const DenseMatrix q = a * w.asDiagonal() * a.transpose();
  return linalg::min_eigenvalue(q);
}

}  // namespace lps::analysis
