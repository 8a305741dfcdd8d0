#include "lps/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lps/combinations.hpp"
#include "lps/linalg.hpp"
#include "lps/pnorm.hpp"

namespace lps::ensembles {
namespace {

DenseMatrix gaussian_matrix(Index m, Index n, CounterRng& rng) {
  DenseMatrix a(m, n);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) a(i, j) = rng.normal();
  }
  return a;
}

// Largest C(N, m) over the cap throws; otherwise the number of subsets.
std::uint64_t checked_subset_count(Index n, Index k, std::uint64_t cap, const char* what) {
  const std::uint64_t count =
      combinations::binomial(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k));
  if (count > cap) {
    throw Error(ErrorKind::capacity, std::string(what) + ": C(" + std::to_string(n) + ", " +
                                         std::to_string(k) + ") = " + std::to_string(count) +
                                         " subsets exceeds the cap of " + std::to_string(cap));
  }
  return count;
}

void check_set_s_input(const DenseMatrix& a, const Vector& y, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::invalid_input, "tol > 0 required");
  if (y.size() != a.rows()) {
    throw Error(ErrorKind::invalid_input, "y has " + std::to_string(y.size()) +
                                              " entries but A has " + std::to_string(a.rows()) +
                                              " rows");
  }
  if (a.cols() > kSetSMaxColumns) {
    throw Error(ErrorKind::capacity, "set-S check is exhaustive and limited to N <= " +
                                         std::to_string(kSetSMaxColumns) + ", got N = " +
                                         std::to_string(a.cols()));
  }
}

// Visitor returning 1 for a singular minor, 0 otherwise.
combinations::SubsetVisitor singular_minor(const DenseMatrix& a, double tol) {
  return [&a, tol](const std::vector<Index>& cols) {
    return linalg::is_invertible(linalg::submatrix_cols(a, cols), tol) ? 0.0 : 1.0;
  };
}

combinations::SubsetVisitor rip_deviation(const DenseMatrix& a) {
  return [&a](const std::vector<Index>& cols) {
    const DenseMatrix as = linalg::submatrix_cols(a, cols);
    const auto [lo, hi] = linalg::eigen_range(as.transpose() * as);
    return std::max(hi - 1.0, 1.0 - lo);
  };
}

void check_rip_input(const DenseMatrix& a, Index k) {
  if (k < 1 || k > a.cols()) {
    throw Error(ErrorKind::invalid_input,
                "RIP order k must satisfy 1 <= k <= N, got k = " + std::to_string(k));
  }
  checked_subset_count(a.cols(), k, kRipMaxSubsets, "RIP enumeration");
}

}  // namespace

void EnsembleSpec::validate() const {
  if (m < 1 || n < 1) {
    throw Error(ErrorKind::invalid_input, "m >= 1 and N >= 1 required, got m = " +
                                              std::to_string(m) + ", N = " + std::to_string(n));
  }
  if (sparsity && (*sparsity < 1 || *sparsity > n)) {
    throw Error(ErrorKind::invalid_input, "sparsity s must satisfy 1 <= s <= N, got s = " +
                                              std::to_string(*sparsity));
  }
}

Instance gen_gaussian_instance(const EnsembleSpec& spec) {
  spec.validate();
  CounterRng rng(spec.seed);
  Instance out;
  out.a = gaussian_matrix(spec.m, spec.n, rng);
  out.y.resize(spec.m);
  for (Index i = 0; i < spec.m; ++i) out.y[i] = rng.normal();
  return out;
}

SparseSignal draw_sparse_signal(Index n, Index s, SignalMagnitudes mags, CounterRng& rng) {
  // Partial Fisher-Yates for a uniform s-subset.
  std::vector<Index> pool(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
  for (Index i = 0; i < s; ++i) {
    const auto j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  SparseSignal out;
  out.support.assign(pool.begin(), pool.begin() + s);
  std::sort(out.support.begin(), out.support.end());
  out.x0 = Vector::Zero(n);
  for (Index i : out.support) {
    out.x0[i] = mags == SignalMagnitudes::signs ? (rng.uniform() < 0.5 ? -1.0 : 1.0) : rng.normal();
  }
  return out;
}

SparseInstance gen_sparse_measured(const EnsembleSpec& spec, const DenseMatrix& a) {
  spec.validate();
  if (!spec.sparsity) throw Error(ErrorKind::invalid_input, "sparsity s is required");
  if (a.rows() != spec.m || a.cols() != spec.n) {
    throw Error(ErrorKind::invalid_input, "injected matrix does not match spec dimensions");
  }
  CounterRng rng(derive_seed(spec.seed, 1));
  SparseSignal sig = draw_sparse_signal(spec.n, *spec.sparsity, spec.magnitudes, rng);
  SparseInstance out;
  out.a = a;
  out.y = a * sig.x0;
  out.x0 = std::move(sig.x0);
  out.support = std::move(sig.support);
  return out;
}

SparseInstance gen_sparse_measured(const EnsembleSpec& spec) {
  spec.validate();
  CounterRng rng(spec.seed);
  return gen_sparse_measured(spec, gaussian_matrix(spec.m, spec.n, rng));
}

bool is_in_set_s_serial(const DenseMatrix& a, const Vector& y, double tol) {
  check_set_s_input(a, y, tol);
  if (y.isZero(0.0) || a.rows() > a.cols()) return false;
  return combinations::max_over_subsets_serial(a.cols(), a.rows(), singular_minor(a, tol), 1.0) <
         0.5;
}

bool is_in_set_s(const DenseMatrix& a, const Vector& y, double tol, int threads) {
  if (threads == 1) return is_in_set_s_serial(a, y, tol);
  check_set_s_input(a, y, tol);
  if (y.isZero(0.0) || a.rows() > a.cols()) return false;
  return combinations::max_over_subsets(a.cols(), a.rows(), singular_minor(a, tol), 1.0,
                                        threads) < 0.5;
}

double rip_constant_serial(const DenseMatrix& a, Index k) {
  check_rip_input(a, k);
  return combinations::max_over_subsets_serial(a.cols(), k, rip_deviation(a));
}

double rip_constant(const DenseMatrix& a, Index k, int threads) {
  if (threads == 1) return rip_constant_serial(a, k);
  check_rip_input(a, k);
  return combinations::max_over_subsets(a.cols(), k, rip_deviation(a), HUGE_VAL, threads);
}

double min_pnorm_over_affine(const DenseMatrix& a, const Vector& y, Exponent p,
                             const solvers::SolverConfig& cfg) {
  const solvers::SolveResult res = solvers::solve_bp(a, y, p, cfg);
  if (res.status == solvers::Status::infeasible) {
    throw Error(ErrorKind::rank_deficient, "y is not in the range of A");
  }
  return pnorm::norm(res.x, p);
}

}  // namespace lps::ensembles
