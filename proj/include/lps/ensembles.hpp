#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lps/rng.hpp"
#include "lps/solvers.hpp"
#include "lps/types.hpp"

namespace lps::ensembles {

/// Entry sampling for the s-sparse signal x0.
enum class SignalMagnitudes { signs, gaussian };

struct EnsembleSpec {
  Index m = 1;
  Index n = 1;
  std::uint64_t seed = 0;
  std::optional<Index> sparsity;
  SignalMagnitudes magnitudes = SignalMagnitudes::signs;

  void validate() const;
};

struct Instance {
  DenseMatrix a;
  Vector y;
};

struct SparseInstance {
  DenseMatrix a;
  Vector y;
  Vector x0;
  std::vector<Index> support;  // ascending, zero-based
};

/// Largest N for which is_in_set_s will enumerate all m x m minors.
inline constexpr Index kSetSMaxColumns = 25;
/// Largest number of k-subsets rip_constant will enumerate.
inline constexpr std::uint64_t kRipMaxSubsets = 200000;

/// i.i.d. N(0,1) entries: A row-major first, then y. Same spec gives
/// bit-identical output.
Instance gen_gaussian_instance(const EnsembleSpec& spec);

/// A Gaussian, support a uniform s-subset, x0 with +-1 (or Gaussian) entries
/// on the support, y = A x0.
SparseInstance gen_sparse_measured(const EnsembleSpec& spec);

/// Same as gen_sparse_measured but with a caller-supplied matrix.
SparseInstance gen_sparse_measured(const EnsembleSpec& spec, const DenseMatrix& a);

/// Draws a uniform s-subset and signal for a fixed matrix using `rng`.
struct SparseSignal {
  Vector x0;
  std::vector<Index> support;
};
SparseSignal draw_sparse_signal(Index n, Index s, SignalMagnitudes mags, CounterRng& rng);

/// (A, y) in S: y != 0 and every m x m column submatrix of A is invertible.
/// Throws capacity when N exceeds kSetSMaxColumns. `threads` == 1 runs the
/// serial reference enumeration.
bool is_in_set_s(const DenseMatrix& a, const Vector& y, double tol = 1e-12, int threads = 0);
bool is_in_set_s_serial(const DenseMatrix& a, const Vector& y, double tol = 1e-12);

/// Restricted isometry constant of order k by exhaustive enumeration.
double rip_constant(const DenseMatrix& a, Index k, int threads = 0);
double rip_constant_serial(const DenseMatrix& a, Index k);

/// min_{Ax=y} ||x||_p, via the BP_p solver.
double min_pnorm_over_affine(const DenseMatrix& a, const Vector& y, Exponent p,
                             const solvers::SolverConfig& cfg = {});

}  // namespace lps::ensembles
