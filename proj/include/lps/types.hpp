#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>

#include "lps/error.hpp"

namespace lps {

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Exponent p of the (quasi-)norm. Any finite p > 0 is representable; each
/// operation enforces its own sub-range (p > 1, p >= 2, 1 < p <= 2, ...).
class Exponent {
 public:
  explicit Exponent(double p) : p_(p) {
    if (!std::isfinite(p) || p <= 0.0) {
      throw Error(ErrorKind::invalid_input,
                  "exponent p must be finite and > 0, got " + std::to_string(p));
    }
  }

  double value() const noexcept { return p_; }
  operator double() const noexcept { return p_; }  // NOLINT(google-explicit-constructor)

 private:
  double p_;
};

inline bool all_finite(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  return m.allFinite();
}

}  // namespace lps
