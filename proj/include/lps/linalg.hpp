#pragma once

#include <span>
#include <vector>

#include "lps/types.hpp"

// Dense kernels used by the solvers. All routines are pure.
namespace lps::linalg {

/// Relative pivot threshold used by invertibility checks unless overridden.
inline constexpr double kDefaultPivotTol = 1e-12;

/// Cholesky solve of a symmetric positive-definite system.
/// Throws not_positive_definite when a pivot drops below 1e-14 of the
/// largest diagonal entry.
Vector solve_spd(const DenseMatrix& m, const Vector& b);

/// Minimum 2-norm solution of Ax = y, i.e. A^T (A A^T)^{-1} y, computed by a
/// QR factorization of A^T. Throws rank_deficient if A lacks full row rank.
Vector least_norm_solution(const DenseMatrix& a, const Vector& y);

/// Orthogonal projection of x onto the affine set {x : Ax = y}.
Vector affine_project(const DenseMatrix& a, const Vector& y, const Vector& x);

/// Least-squares solution of A^T nu ~= v (used to recover multipliers).
Vector multiplier_fit(const DenseMatrix& a, const Vector& v);

/// Columns of `a` listed in `cols`, taken in ascending index order.
/// Indices are zero-based; duplicates or out-of-range values throw invalid_index.
DenseMatrix submatrix_cols(const DenseMatrix& a, std::span<const Index> cols);

/// True iff the smallest pivot of a fully pivoted LU exceeds tol * max|m_ij|.
bool is_invertible(const DenseMatrix& m, double tol = kDefaultPivotTol);

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const DenseMatrix& sym);

/// Extreme eigenvalues (min, max) of a symmetric matrix.
std::pair<double, double> eigen_range(const DenseMatrix& sym);

/// Largest singular value.
double spectral_norm(const DenseMatrix& m);

}  // namespace lps::linalg
