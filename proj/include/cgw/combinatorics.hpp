#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "cgw/counts.hpp"
#include "cgw/errors.hpp"
#include "cgw/scalars.hpp"

namespace cgw {

/// Multinomial coefficient (sum x_i)! / prod x_i! over the entries of x.
/// Exact; the empty/zero vector gives 1.
inline BigInt multinomial_coefficient(const CountVector& x) {
  BigInt out = 1;
  std::int64_t partial = 0;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (x[j] < 0) throw DomainError("multinomial_coefficient: negative entry");
    // multiply by C(partial + x_j, x_j) incrementally: out stays integral
    for (std::int64_t r = 1; r <= x[j]; ++r) {
      ++partial;
      out = out * partial / r;
    }
  }
  return out;
}

/// Matrix version: the matrix is flattened to one vector of entries.
inline BigInt multinomial_coefficient(const CountMatrix& x) {
  CountVector flat(x.size());
  Eigen::Index n = 0;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) flat[n++] = x(i, j);
  return multinomial_coefficient(flat);
}

/// log of the multinomial coefficient, via lgamma (for log-space scalars).
inline double log_multinomial(const CountVector& x) {
  std::int64_t total = 0;
  double log_denom = 0;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    total += x[j];
    log_denom += std::lgamma(static_cast<double>(x[j]) + 1);
  }
  return std::lgamma(static_cast<double>(total) + 1) - log_denom;
}

/// Multinomial coefficient converted into the scalar type.
template <class Scalar>
inline Scalar multinomial_as(const CountVector& x) {
  return scalar_ratio<Scalar>(multinomial_coefficient(x), 1);
}
template <>
inline LogDouble multinomial_as<LogDouble>(const CountVector& x) {
  return LogDouble::from_log(log_multinomial(x));
}

/// Invoke fn(parts) for every way to write n as an ordered sum of
/// `num_parts` nonnegative integers, in lexicographic order.
template <class Fn>
void for_each_composition(std::int64_t n, int num_parts, Fn&& fn) {
  if (num_parts <= 0) {
    if (n == 0) {
      CountVector empty(0);
      fn(empty);
    }
    return;
  }
  CountVector parts = CountVector::Zero(num_parts);
  // recursive descent over positions; last position absorbs the remainder
  auto rec = [&](auto&& self, int pos, std::int64_t left) -> void {
    if (pos == num_parts - 1) {
      parts[pos] = left;
      fn(const_cast<const CountVector&>(parts));
      return;
    }
    for (std::int64_t v = 0; v <= left; ++v) {
      parts[pos] = v;
      self(self, pos + 1, left - v);
    }
  };
  rec(rec, 0, n);
}

/// All distinct orderings of the multiset with x_j copies of label j+1.
/// The number of sequences equals multinomial_coefficient(x).
inline std::vector<std::vector<int>> distinct_label_sequences(
    const CountVector& x) {
  std::vector<int> labels;
  for (Eigen::Index j = 0; j < x.size(); ++j)
    labels.insert(labels.end(), static_cast<std::size_t>(x[j]),
                  static_cast<int>(j + 1));
  std::vector<std::vector<int>> out;
  if (labels.empty()) {
    out.push_back({});
    return out;
  }
  std::sort(labels.begin(), labels.end());
  do {
    out.push_back(labels);
  } while (std::next_permutation(labels.begin(), labels.end()));
  return out;
}

}  // namespace cgw
