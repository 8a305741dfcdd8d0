#pragma once

#include "lps/types.hpp"

// Scalar and vector calculus for f(x) = ||x||_p^p.
//
//   g(z)  = p sgn(z) |z|^(p-1)              derivative of |z|^p, p > 1
//   h(z)  = sgn(z) |z/p|^(1/(p-1))          inverse of g
//   g'(z) = p (p-1) |z|^(p-2)               globally defined for p >= 2
//   h'(z) = |z|^((2-p)/(p-1)) / ((p-1) p^(1/(p-1)))   globally defined for 1 < p <= 2
//
// All functions are pure and safe to call concurrently.
namespace lps::pnorm {

/// |z|^a computed as exp(a ln|z|), with |0|^a = 0 for a > 0 and 1 for a == 0.
double pow_abs(double z, double a) noexcept;

/// sum_i |x_i|^p. Throws invalid_input on non-finite entries.
double norm_pow(const Vector& x, Exponent p);

/// ||x||_p = (sum_i |x_i|^p)^(1/p).
double norm(const Vector& x, Exponent p);

double g(double z, Exponent p);
double h(double z, Exponent p);
double g_prime(double z, Exponent p);
double h_prime(double z, Exponent p);

/// Antiderivative of h with H(0) = 0: H(z) = |z|^q / (q p^(q-1)), q = p/(p-1).
/// This is the convex conjugate of |.|^p and drives the dual Newton solvers.
double h_antiderivative(double z, Exponent p);

/// Componentwise g; the gradient of ||x||_p^p.
Vector grad(const Vector& x, Exponent p);

/// Hessian of ||x||_p^r at x != 0 for p >= 2, r >= 1:
///   (r/p) ||x||_p^(r-p) [ diag(g'(x_i)) + (r-p)/(p ||x||_p^p) grad f grad f^T ].
DenseMatrix norm_r_hessian(const Vector& x, Exponent p, double r);

/// Gradient of ||x||_p^r at x != 0: (r/p) ||x||_p^(r-p) grad f(x).
Vector norm_r_grad(const Vector& x, Exponent p, double r);

}  // namespace lps::pnorm
