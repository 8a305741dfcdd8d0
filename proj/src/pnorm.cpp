#include "lps/pnorm.hpp"

#include <cmath>
#include <string>

namespace lps::pnorm {
namespace {

double sgn(double z) noexcept { return (z > 0.0) - (z < 0.0); }

void require_finite(const Vector& x) {
  if (!x.allFinite()) {
    throw Error(ErrorKind::invalid_input, "vector has non-finite entries");
  }
}

void require_gt_one(double p, const char* op) {
  if (!(p > 1.0)) {
    throw Error(ErrorKind::unsupported_exponent,
                std::string(op) + " requires p > 1, got " + std::to_string(p));
  }
}

}  // namespace

double pow_abs(double z, double a) noexcept {
  const double az = std::fabs(z);
  if (a == 0.0) return 1.0;
  if (az == 0.0) return a > 0.0 ? 0.0 : HUGE_VAL;
  return std::exp(a * std::log(az));
}

double norm_pow(const Vector& x, Exponent p) {
  require_finite(x);
  double s = 0.0;
  for (Index i = 0; i < x.size(); ++i) s += pow_abs(x[i], p);
  return s;
}

double norm(const Vector& x, Exponent p) {
  const double s = norm_pow(x, p);
  return s == 0.0 ? 0.0 : pow_abs(s, 1.0 / p);
}

double g(double z, Exponent p) {
  require_gt_one(p, "g");
  return p * sgn(z) * pow_abs(z, p - 1.0);
}

double h(double z, Exponent p) {
  require_gt_one(p, "h");
  return sgn(z) * pow_abs(z / p, 1.0 / (p - 1.0));
}

double g_prime(double z, Exponent p) {
  require_gt_one(p, "g'");
  if (p < 2.0 && z == 0.0) {
    throw Error(ErrorKind::undefined_derivative,
                "g'(0) is undefined for p < 2");
  }
  if (p == 2.0) return 2.0;
  return p * (p - 1.0) * pow_abs(z, p - 2.0);
}

double h_prime(double z, Exponent p) {
  if (!(p > 1.0 && p <= 2.0)) {
    throw Error(ErrorKind::unsupported_exponent,
                "h' requires 1 < p <= 2, got " + std::to_string(p.value()));
  }
  const double c = (p - 1.0) * pow_abs(p, 1.0 / (p - 1.0));
  if (p == 2.0) return 1.0 / c;
  return pow_abs(z, (2.0 - p) / (p - 1.0)) / c;
}

double h_antiderivative(double z, Exponent p) {
  require_gt_one(p, "H");
  const double q = p / (p - 1.0);
  return pow_abs(z, q) / (q * pow_abs(p, q - 1.0));
}

Vector grad(const Vector& x, Exponent p) {
  require_gt_one(p, "grad");
  require_finite(x);
  Vector out(x.size());
  for (Index i = 0; i < x.size(); ++i) out[i] = g(x[i], p);
  return out;
}

Vector norm_r_grad(const Vector& x, Exponent p, double r) {
  const double fp = norm_pow(x, p);
  if (fp == 0.0) {
    throw Error(ErrorKind::singular_point, "gradient of ||x||_p^r at x = 0");
  }
  const double scale = (r / p) * pow_abs(fp, (r - p) / p);
  return scale * grad(x, p);
}

DenseMatrix norm_r_hessian(const Vector& x, Exponent p, double r) {
  if (!(p >= 2.0)) {
    throw Error(ErrorKind::unsupported_exponent,
                "Hessian of ||x||_p^r requires p >= 2");
  }
  if (!(r >= 1.0)) {
    throw Error(ErrorKind::invalid_input, "Hessian of ||x||_p^r requires r >= 1");
  }
  const double fp = norm_pow(x, p);
  if (fp == 0.0) {
    throw Error(ErrorKind::singular_point, "Hessian of ||x||_p^r at x = 0");
  }
  const Index n = x.size();
  const Vector gf = grad(x, p);
  DenseMatrix hess = ((r - p) / (p * fp)) * (gf * gf.transpose());
  for (Index i = 0; i < n; ++i) hess(i, i) += g_prime(x[i], p);
  hess *= (r / p) * pow_abs(fp, (r - p) / p);
  return hess;
}

}  // namespace lps::pnorm
