#pragma once

#include <cstdint>

#include <Eigen/Core>

namespace cgw {

/// Child counts by type: entry j-1 = number of type-j children.
using CountVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

/// Counting matrix: entry (i-1, j-1) = number of type-j children in class i.
using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Probability layer: entry (t-1, i-1) = class-i probability for root type t.
template <class Scalar>
using ProbLayer = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Column sums of a counting matrix: the underlying child-type counts.
inline CountVector column_totals(const CountMatrix& c) {
  CountVector w(c.cols());
  for (Eigen::Index j = 0; j < c.cols(); ++j) w[j] = c.col(j).sum();
  return w;
}

}  // namespace cgw
