#include "lps/linalg.hpp"

#include <algorithm>
#include <string>

namespace lps::linalg {
namespace {

void require_finite(const DenseMatrix& m, const char* what) {
  if (!m.allFinite()) {
    throw Error(ErrorKind::invalid_input, std::string(what) + " has non-finite entries");
  }
}

void require_rows(const DenseMatrix& a, const Vector& y) {
  if (a.rows() != y.size()) {
    throw Error(ErrorKind::invalid_input,
                "dimension mismatch: A has " + std::to_string(a.rows()) +
                    " rows but y has " + std::to_string(y.size()) + " entries");
  }
}

// QR of A^T with a rank check against the largest |R_ii|.
Eigen::HouseholderQR<DenseMatrix> factor_transpose(const DenseMatrix& a) {
  if (a.rows() > a.cols()) {
    throw Error(ErrorKind::rank_deficient, "A has more rows than columns");
  }
  Eigen::HouseholderQR<DenseMatrix> qr(a.transpose());
  const auto r = qr.matrixQR().topLeftCorner(a.rows(), a.rows()).diagonal().cwiseAbs();
  const double rmax = r.size() ? r.maxCoeff() : 0.0;
  if (r.size() == 0 || rmax == 0.0 || r.minCoeff() <= 1e-12 * rmax) {
    throw Error(ErrorKind::rank_deficient, "A does not have full row rank");
  }
  return qr;
}

}  // namespace

Vector solve_spd(const DenseMatrix& m, const Vector& b) {
  if (m.rows() != m.cols() || m.rows() != b.size()) {
    throw Error(ErrorKind::invalid_input, "solve_spd: dimension mismatch");
  }
  require_finite(m, "matrix");
  Eigen::LLT<DenseMatrix> llt(m);
  const double dmax = m.diagonal().cwiseAbs().maxCoeff();
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::not_positive_definite, "Cholesky factorization failed");
  }
  const Vector piv = llt.matrixLLT().diagonal();
  if ((piv.array().square() <= 1e-14 * dmax).any()) {
    throw Error(ErrorKind::not_positive_definite, "Cholesky pivot below 1e-14 scale");
  }
  return llt.solve(b);
}

Vector least_norm_solution(const DenseMatrix& a, const Vector& y) {
  require_rows(a, y);
  require_finite(a, "A");
  const Index m = a.rows();
  auto qr = factor_transpose(a);
  // A^T = Q R  =>  A = R^T Q^T, x = Q (R^T)^{-1} y.
  const auto r = qr.matrixQR().topLeftCorner(m, m).template triangularView<Eigen::Upper>();
  Vector z = r.transpose().solve(y);
  Vector full = Vector::Zero(a.cols());
  full.head(m) = z;
  return qr.householderQ() * full;
}

Vector affine_project(const DenseMatrix& a, const Vector& y, const Vector& x) {
  if (x.size() != a.cols()) {
    throw Error(ErrorKind::invalid_input, "affine_project: x has wrong dimension");
  }
  const Vector resid = a * x - y;
  return x - least_norm_solution(a, resid);
}

Vector multiplier_fit(const DenseMatrix& a, const Vector& v) {
  const Index m = a.rows();
  auto qr = factor_transpose(a);
  // min ||A^T nu - v||: Q^T v = [c; d], R nu = c.
  const Vector c = (qr.householderQ().transpose() * v).head(m);
  return qr.matrixQR().topLeftCorner(m, m).template triangularView<Eigen::Upper>().solve(c);
}

DenseMatrix submatrix_cols(const DenseMatrix& a, std::span<const Index> cols) {
  std::vector<Index> sorted(cols.begin(), cols.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (sorted[k] < 0 || sorted[k] >= a.cols()) {
      throw Error(ErrorKind::invalid_index,
                  "column index " + std::to_string(sorted[k]) + " out of range");
    }
    if (k > 0 && sorted[k] == sorted[k - 1]) {
      throw Error(ErrorKind::invalid_index,
                  "duplicate column index " + std::to_string(sorted[k]));
    }
  }
  DenseMatrix out(a.rows(), static_cast<Index>(sorted.size()));
  for (std::size_t k = 0; k < sorted.size(); ++k) out.col(static_cast<Index>(k)) = a.col(sorted[k]);
  return out;
}

bool is_invertible(const DenseMatrix& m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0) return false;
  if (!m.allFinite()) return false;
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return false;
  Eigen::FullPivLU<DenseMatrix> lu(m);
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  return min_pivot > tol * scale;
}

double min_eigenvalue(const DenseMatrix& sym) { return eigen_range(sym).first; }

std::pair<double, double> eigen_range(const DenseMatrix& sym) {
  if (sym.rows() != sym.cols() || sym.rows() == 0) {
    throw Error(ErrorKind::invalid_input, "eigenvalues need a non-empty square matrix");
  }
  if (sym.rows() == 1) return {sym(0, 0), sym(0, 0)};
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(sym, Eigen::EigenvaluesOnly);
  return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

double spectral_norm(const DenseMatrix& m) {
  Eigen::JacobiSVD<DenseMatrix> svd(m);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

}  // namespace lps::linalg
