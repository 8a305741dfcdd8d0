#include <cmath>
#include <vector>

#include "detail.hpp"
#include "lps/linalg.hpp"

namespace lps::solvers {
namespace {

using detail::inf_norm;

double sgn(double z) noexcept { return (z > 0.0) - (z < 0.0); }

// Projector onto {x : Ax = y} from a QR factorization of A^T = Q1 R:
// P(v) = v - Q1 R^{-T} (Av - y).
class AffineProjector {
 public:
  AffineProjector(const DenseMatrix& a, const Vector& y) : a_(a), y_(y), qr_(a.transpose()) {
    const Index m = a.rows();
    q1_ = qr_.householderQ() * DenseMatrix::Identity(a.cols(), m);
    r_ = qr_.matrixQR().topLeftCorner(m, m).template triangularView<Eigen::Upper>();
  }

  Vector operator()(const Vector& v) const {
    const Vector resid = a_ * v - y_;
    const Vector z = r_.transpose().template triangularView<Eigen::Lower>().solve(resid);
    return v - q1_ * z;
  }

 private:
  const DenseMatrix& a_;
  const Vector& y_;
  Eigen::HouseholderQR<DenseMatrix> qr_;
  DenseMatrix q1_;
  DenseMatrix r_;
};

Vector soft_threshold(const Vector& v, double k) {
  return v.unaryExpr([k](double t) { return sgn(t) * std::max(std::abs(t) - k, 0.0); });
}

// Replace x by the exact solution on its (small) support when that is
// feasible and no worse in l1.
Vector polish(const DenseMatrix& a, const Vector& y, const Vector& z, const Vector& x_feasible) {
  const double zmax = inf_norm(z);
  if (zmax == 0.0) return x_feasible;
  std::vector<Index> support;
  for (Index i = 0; i < z.size(); ++i) {
    if (std::abs(z[i]) > 1e-7 * zmax) support.push_back(i);
  }
  if (support.empty() || static_cast<Index>(support.size()) > a.rows()) return x_feasible;
  const DenseMatrix as = linalg::submatrix_cols(a, support);
  Eigen::ColPivHouseholderQR<DenseMatrix> qr(as);
  if (qr.rank() < as.cols()) return x_feasible;
  const Vector xs = qr.solve(y);
  Vector cand = Vector::Zero(a.cols());
  for (std::size_t k = 0; k < support.size(); ++k) cand[support[k]] = xs[static_cast<Index>(k)];
  const bool feasible = (a * cand - y).norm() <= 1e-10 * (1.0 + y.norm());
  const bool no_worse = cand.lpNorm<1>() <= x_feasible.lpNorm<1>() * (1.0 + 1e-9) + 1e-12;
  return feasible && no_worse ? cand : x_feasible;
}

// Adjust the ADMM dual estimate so that A_S^T nu = sgn(x_S) on the support.
Vector certify(const DenseMatrix& a, const Vector& x, Vector nu) {
  const double xmax = inf_norm(x);
  std::vector<Index> support;
  for (Index i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) > 1e-9 * xmax) support.push_back(i);
  }
  if (support.empty() || static_cast<Index>(support.size()) > a.rows()) return nu;
  const DenseMatrix as = linalg::submatrix_cols(a, support);
  Vector target(static_cast<Index>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k) target[static_cast<Index>(k)] = sgn(x[support[k]]);
  const Vector gap = target - as.transpose() * nu;
  // Minimum-norm delta with A_S^T delta = gap.
  Eigen::CompleteOrthogonalDecomposition<DenseMatrix> cod(as.transpose());
  const Vector delta = cod.solve(gap);
  const Vector cand = nu + delta;
  const double off = inf_norm(a.transpose() * cand);
  return off <= 1.0 + 1e-6 ? cand : nu;
}

}  // namespace

SolveResult solve_bp_l1(const DenseMatrix& a, const Vector& y, const SolverConfig& cfg) {
  ProblemInstance inst{a, y, Family::bp_l1, 1.0, {}};
  inst.validate();
  cfg.validate();

  SolveResult res;
  res.algorithm = Algorithm::projected_gradient;
  if (y.isZero(0.0)) {
    res.x = Vector::Zero(a.cols());
    res.nu = Vector::Zero(a.rows());
    detail::finalize(inst, res, cfg);
    return res;
  }
  linalg::least_norm_solution(a, y);  // full row rank precondition
  const AffineProjector project(a, y);
  const double rho = cfg.l1_penalty;

  Vector x = project(Vector::Zero(a.cols()));
  Vector z = x;
  Vector u = Vector::Zero(a.cols());
  int it = 0;
  for (; it < cfg.l1_max_iter; ++it) {
    x = project(z - u);
    const Vector z_old = z;
    z = soft_threshold(x + u, 1.0 / rho);
    u += x - z;
    const double primal = (x - z).norm();
    const double dual = rho * (z - z_old).norm();
    if (primal <= cfg.l1_tol * (1.0 + x.norm()) && dual <= cfg.l1_tol * (1.0 + rho * u.norm())) {
      ++it;
      break;
    }
  }

  const Vector x_feasible = project(z);
  res.x = polish(a, y, z, x_feasible);
  res.nu = certify(a, res.x, linalg::multiplier_fit(a, rho * u));
  res.iterations = it;
  detail::finalize(inst, res, cfg);
  res.status = res.kkt_residual <= cfg.kkt_tol * res.kkt_scale ? Status::converged : Status::max_iter;
  return res;
}

}  // namespace lps::solvers
