#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "lps/pnorm.hpp"
#include "lps/rng.hpp"

using namespace lps;
using lps::test::vec;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an lps::Error");
  return ErrorKind::invalid_input;
}

// ||x||_p^r written out directly with std::pow.
double norm_r_direct(const Vector& x, double p, double r) {
  double s = 0.0;
  for (Index i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i]), p);
  return std::pow(s, r / p);
}

}  // namespace

TEST_CASE("norm_pow on small vectors") {
  CHECK(pnorm::norm_pow(vec({0, 0, 0}), Exponent(1.5)) == 0.0);
  CHECK(pnorm::norm_pow(vec({1, -1}), Exponent(3)) == doctest::Approx(2.0));
  CHECK(pnorm::norm_pow(vec({2, 0}), Exponent(2)) == doctest::Approx(4.0));
  CHECK(pnorm::norm(vec({3, 4}), Exponent(2)) == doctest::Approx(5.0));
  // p below 1 is allowed for the quasi-norm.
  CHECK(pnorm::norm_pow(vec({4, 0}), Exponent(0.5)) == doctest::Approx(2.0));
}

TEST_CASE("norm_pow rejects non-finite entries") {
  CHECK(kind_of([] { pnorm::norm_pow(vec({1, NAN}), Exponent(2)); }) == ErrorKind::invalid_input);
  CHECK(kind_of([] { pnorm::norm_pow(vec({INFINITY}), Exponent(2)); }) == ErrorKind::invalid_input);
}

TEST_CASE("exponent must be finite and positive") {
  CHECK(kind_of([] { Exponent(0.0); }) == ErrorKind::invalid_input);
  CHECK(kind_of([] { Exponent(-1.0); }) == ErrorKind::invalid_input);
  CHECK(kind_of([] { Exponent(NAN); }) == ErrorKind::invalid_input);
}

TEST_CASE("pow_abs handles zero explicitly") {
  CHECK(pnorm::pow_abs(0.0, 0.5) == 0.0);
  CHECK(pnorm::pow_abs(0.0, 0.0) == 1.0);
  CHECK(pnorm::pow_abs(-8.0, 1.0 / 3.0) == doctest::Approx(2.0));
}

TEST_CASE("g and h values") {
  const Exponent p3(3);
  CHECK(pnorm::g(0.0, p3) == 0.0);
  CHECK(pnorm::g(2.0, p3) == doctest::Approx(12.0));
  CHECK(pnorm::g(-2.0, p3) == doctest::Approx(-12.0));
  CHECK(pnorm::h(0.0, Exponent(1.5)) == 0.0);
  CHECK(pnorm::h(12.0, p3) == doctest::Approx(2.0));
  const Exponent p17(1.7);
  CHECK(std::abs(pnorm::h(pnorm::g(0.37, p17), p17) - 0.37) <= 1e-12);
}

TEST_CASE("g and h require p > 1") {
  CHECK(kind_of([] { pnorm::g(1.0, Exponent(1.0)); }) == ErrorKind::unsupported_exponent);
  CHECK(kind_of([] { pnorm::h(1.0, Exponent(0.5)); }) == ErrorKind::unsupported_exponent);
  CHECK(kind_of([] { pnorm::grad(vec({1}), Exponent(1.0)); }) == ErrorKind::unsupported_exponent);
}

TEST_CASE("g_prime values and domain") {
  CHECK(pnorm::g_prime(-7.3, Exponent(2)) == doctest::Approx(2.0));
  CHECK(pnorm::g_prime(0.0, Exponent(2)) == doctest::Approx(2.0));
  CHECK(pnorm::g_prime(2.0, Exponent(3)) == doctest::Approx(12.0));
  CHECK(pnorm::g_prime(0.0, Exponent(3)) == 0.0);
  CHECK(kind_of([] { pnorm::g_prime(0.0, Exponent(1.5)); }) == ErrorKind::undefined_derivative);
  // Away from zero the formula is still defined for 1 < p < 2.
  CHECK(pnorm::g_prime(1.0, Exponent(1.5)) == doctest::Approx(0.75));
}

TEST_CASE("h_prime values and domain") {
  CHECK(pnorm::h_prime(5.0, Exponent(2)) == doctest::Approx(0.5));
  CHECK(pnorm::h_prime(0.0, Exponent(1.5)) == 0.0);
  CHECK(pnorm::h_prime(1.0, Exponent(1.5)) == doctest::Approx(8.0 / 9.0).epsilon(1e-12));
  const Exponent p15(1.5);
  const double fd = (pnorm::h(1.0 + 1e-6, p15) - pnorm::h(1.0 - 1e-6, p15)) / 2e-6;
  CHECK(fd == doctest::Approx(8.0 / 9.0).epsilon(1e-8));
  CHECK(kind_of([] { pnorm::h_prime(1.0, Exponent(2.5)); }) == ErrorKind::unsupported_exponent);
  CHECK(kind_of([] { pnorm::h_prime(1.0, Exponent(1.0)); }) == ErrorKind::unsupported_exponent);
}

TEST_CASE("h_antiderivative differentiates to h") {
  CounterRng rng(11);
  for (int k = 0; k < 200; ++k) {
    const Exponent p(1.1 + 4.0 * rng.uniform());
    const double z = 6.0 * rng.uniform() - 3.0;
    const double s = 1e-6;
    const double fd = (pnorm::h_antiderivative(z + s, p) - pnorm::h_antiderivative(z - s, p)) / (2 * s);
    CHECK(fd == doctest::Approx(pnorm::h(z, p)).epsilon(1e-6).scale(1e-6));
  }
  CHECK(pnorm::h_antiderivative(0.0, Exponent(1.5)) == 0.0);
}

TEST_CASE("grad is componentwise g") {
  CHECK(test::max_abs_diff(pnorm::grad(vec({0, 0}), Exponent(3)), vec({0, 0})) == 0.0);
  CHECK(test::max_abs_diff(pnorm::grad(vec({1, -1}), Exponent(2)), vec({2, -2})) < 1e-15);
  CHECK(test::max_abs_diff(pnorm::grad(vec({2, 1}), Exponent(3)), vec({12, 3})) < 1e-12);
}

TEST_CASE("g and h are mutual inverses on moderate ranges") {
  CounterRng rng(12);
  double worst = 0.0;
  for (int k = 0; k < 5000; ++k) {
    const Exponent p(1.05 + 4.95 * rng.uniform());
    const double z = 20.0 * rng.uniform() - 10.0;
    worst = std::max(worst, std::abs(pnorm::h(pnorm::g(z, p), p) - z) / std::abs(z));
    // g(h(w)) only stays in range while |w/p|^(1/(p-1)) is representable.
    const double w = 20.0 * rng.uniform() - 10.0;
    if (std::abs(std::log(std::abs(w / p))) / (p - 1.0) < 600.0) {
      worst = std::max(worst, std::abs(pnorm::g(pnorm::h(w, p), p) - w) / std::abs(w));
    }
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("g is odd and strictly increasing") {
  CounterRng rng(13);
  for (int k = 0; k < 2000; ++k) {
    const Exponent p(1.01 + 5.0 * rng.uniform());
    double z1 = 10.0 * rng.uniform() - 5.0;
    double z2 = 10.0 * rng.uniform() - 5.0;
    if (z1 > z2) std::swap(z1, z2);
    if (z1 == z2) continue;
    CHECK(pnorm::g(z1, p) < pnorm::g(z2, p));
    CHECK(pnorm::g(-z1, p) == -pnorm::g(z1, p));
  }
}

TEST_CASE("g_prime matches centered differences") {
  CounterRng rng(14);
  for (int k = 0; k < 1000; ++k) {
    const Exponent p(2.0 + 4.0 * rng.uniform());
    const double z = (rng.uniform() < 0.5 ? -1.0 : 1.0) * (0.05 + 5.0 * rng.uniform());
    const double s = 1e-6 * std::max(1.0, std::abs(z));
    const double fd = (pnorm::g(z + s, p) - pnorm::g(z - s, p)) / (2 * s);
    CHECK(std::abs(pnorm::g_prime(z, p) - fd) <= 1e-5 * std::abs(fd));
  }
}

TEST_CASE("grad matches centered differences of norm_pow") {
  CounterRng rng(15);
  for (int k = 0; k < 200; ++k) {
    const Exponent p(1.1 + 4.0 * rng.uniform());
    const Index n = 1 + static_cast<Index>(rng.below(6));
    Vector x(n);
    for (Index i = 0; i < n; ++i) x[i] = (rng.uniform() < 0.5 ? -1.0 : 1.0) * (0.1 + 2.0 * rng.uniform());
    const Vector gr = pnorm::grad(x, p);
    for (Index i = 0; i < n; ++i) {
      Vector up = x, dn = x;
      const double s = 1e-6 * std::max(1.0, std::abs(x[i]));
      up[i] += s;
      dn[i] -= s;
      const double fd = (pnorm::norm_pow(up, p) - pnorm::norm_pow(dn, p)) / (2 * s);
      CHECK(std::abs(gr[i] - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("strict convexity of norm_pow") {
  CounterRng rng(16);
  for (double pv : {1.3, 2.0, 3.7}) {
    const Exponent p(pv);
    for (int k = 0; k < 300; ++k) {
      Vector x(4), y(4);
      for (Index i = 0; i < 4; ++i) {
        x[i] = rng.normal();
        y[i] = rng.normal();
      }
      const double lam = rng.uniform();
      const double lhs = pnorm::norm_pow(lam * x + (1 - lam) * y, p);
      const double rhs = lam * pnorm::norm_pow(x, p) + (1 - lam) * pnorm::norm_pow(y, p);
      CHECK(lhs < rhs);
    }
  }
}

TEST_CASE("norm_r_hessian closed cases") {
  const DenseMatrix two_i = 2.0 * DenseMatrix::Identity(2, 2);
  CHECK(test::max_abs_diff(pnorm::norm_r_hessian(vec({1, 0}), Exponent(2), 2.0), two_i) < 1e-14);
  CHECK(test::max_abs_diff(pnorm::norm_r_hessian(vec({1, 1}), Exponent(2), 2.0), two_i) < 1e-14);
  CHECK(kind_of([] { pnorm::norm_r_hessian(vec({0, 0}), Exponent(3), 2.0); }) ==
        ErrorKind::singular_point);
  CHECK(kind_of([] { pnorm::norm_r_hessian(vec({1, 0}), Exponent(1.5), 2.0); }) ==
        ErrorKind::unsupported_exponent);
  CHECK(kind_of([] { pnorm::norm_r_hessian(vec({1, 0}), Exponent(3), 0.5); }) ==
        ErrorKind::invalid_input);
}

TEST_CASE("norm_r_hessian matches finite differences of ||x||_4^2") {
  const Vector x = vec({1, 2});
  const double s = 1e-4;
  DenseMatrix fd(2, 2);
  for (Index i = 0; i < 2; ++i) {
    for (Index j = 0; j < 2; ++j) {
      auto f = [&](double di, double dj) {
        Vector z = x;
        z[i] += di;
        z[j] += dj;
        return norm_r_direct(z, 4.0, 2.0);
      };
      fd(i, j) = (f(s, s) - f(s, -s) - f(-s, s) + f(-s, -s)) / (4 * s * s);
    }
  }
  const DenseMatrix hess = pnorm::norm_r_hessian(x, Exponent(4), 2.0);
  CHECK(test::max_abs_diff(hess, fd) <= 1e-5 * fd.cwiseAbs().maxCoeff());
  CHECK(test::max_abs_diff(hess, hess.transpose()) == 0.0);
}

TEST_CASE("norm_r_hessian is positive semi-definite for r >= 1") {
  CounterRng rng(17);
  for (int k = 0; k < 100; ++k) {
    const Exponent p(2.0 + 3.0 * rng.uniform());
    const double r = 1.0 + 3.0 * rng.uniform();
    Vector x(3);
    for (Index i = 0; i < 3; ++i) x[i] = rng.normal();
    const DenseMatrix hess = pnorm::norm_r_hessian(x, p, r);
    Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(hess);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-10 * std::max(1.0, eig.eigenvalues().maxCoeff()));
  }
}

TEST_CASE("norm_r_grad matches finite differences") {
  const Vector x = vec({0.5, -1.5, 2.0});
  const Vector gr = pnorm::norm_r_grad(x, Exponent(3), 1.0);
  for (Index i = 0; i < 3; ++i) {
    Vector up = x, dn = x;
    up[i] += 1e-6;
    dn[i] -= 1e-6;
    const double fd = (norm_r_direct(up, 3.0, 1.0) - norm_r_direct(dn, 3.0, 1.0)) / 2e-6;
    CHECK(gr[i] == doctest::Approx(fd).epsilon(1e-7));
  }
}
