#pragma once

#include <initializer_list>

#include "lps/types.hpp"

namespace lps::test {

inline DenseMatrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  DenseMatrix a(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
  Index i = 0;
  for (const auto& r : rows) {
    Index j = 0;
    for (double v : r) a(i, j++) = v;
    ++i;
  }
  return a;
}

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

inline double max_abs_diff(const Eigen::Ref<const DenseMatrix>& a,
                           const Eigen::Ref<const DenseMatrix>& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace lps::test
