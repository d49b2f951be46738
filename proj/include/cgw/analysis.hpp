#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "cgw/class_probs.hpp"
#include "cgw/offspring.hpp"
#include "cgw/scalars.hpp"

namespace cgw {

/// Flat index of the (class, type) pair in mean vectors and matrices:
/// type-major, classes consecutive within a type.
inline int flat_index(int cls, int type, int num_classes) {
  return (type - 1) * num_classes + (cls - 1);
}

/// Per-level expected-offspring matrices for the conditioned process.
/// Column flat_index(i, t) of level[l] is the expected counting vector
/// E[X | parent type t, class i] at tree level l; columns for classes of
/// probability zero are zero and flagged unused.
struct MeanMatrices {
  int num_classes = 0;
  int num_types = 0;
  std::vector<Eigen::MatrixXd> level;
  std::vector<std::vector<char>> column_used;
};

/// E[X | parent (type t, class i) at tree level l], flattened with
/// flat_index; generic over any event and finite/truncated model.
Eigen::VectorXd conditional_offspring_mean(const ClassTables<double>& tables,
                                           int t, int l, int i);

/// One matrix per tree level 0 .. k - base_height - 1, from the generic
/// conditional tables.
MeanMatrices build_mean_matrices(const ClassTables<double>& tables);

/// Closed-form fast path for the mutant event under Poisson thinning: the
/// counting-matrix entries are independent Poissons, so the class-1 row is a
/// plain rate over the class-1 probability and every other entry keeps its
/// unconditioned rate.
MeanMatrices poisson_mutant_mean_matrices(const PoissonThinningParams& params,
                                          int k);

/// Expected (class, type) counts by level for one starting pair: e[0] is the
/// unit vector, e[l+1] = level[l] * e[l].  Scalar can be LogDouble when the
/// counts under- or overflow double.
template <class Scalar>
std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> expected_counts(
    const MeanMatrices& matrices, int start_class, int start_type) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const int dim = matrices.num_classes * matrices.num_types;
  if (start_class < 1 || start_class > matrices.num_classes || start_type < 1 ||
      start_type > matrices.num_types)
    throw DomainError("expected_counts: start pair out of range");
  std::vector<Vec> out;
  Vec e = Vec::Constant(dim, Scalar(0));
  e[flat_index(start_class, start_type, matrices.num_classes)] = Scalar(1);
  out.push_back(e);
  for (const auto& m : matrices.level) {
    Vec next = Vec::Constant(dim, Scalar(0));
    for (int col = 0; col < dim; ++col) {
      if (is_zero(e[col])) continue;
      for (int row = 0; row < dim; ++row) {
        const double entry = m(row, col);
        if (entry == 0) continue;
        next[row] = next[row] + e[col] * Scalar(entry);
      }
    }
    e = std::move(next);
    out.push_back(e);
  }
  return out;
}

/// Sum of a flat count vector over all classes of one type.
template <class Scalar>
Scalar type_total(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& e, int type,
                  int num_classes) {
  Scalar out(0);
  for (int i = 1; i <= num_classes; ++i)
    out = out + e[flat_index(i, type, num_classes)];
  return out;
}

/// Sum over every (class, type) pair.
template <class Scalar>
Scalar grand_total(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& e) {
  Scalar out(0);
  for (Eigen::Index n = 0; n < e.size(); ++n) out = out + e[n];
  return out;
}

/// One rendered CSV, ready to be written under its file name.
struct FigureFile {
  std::string name;
  std::string csv;
};

/// Study outputs for the two-type mutation model:
///   figure 1: class-1 probabilities at the root vs k = 1..100, with the
///             non-extinction level of the type-2 process as reference;
///   figure 2: expected mutant counts by level at k = 60, from a mutant and
///             from a non-mutant root (both conditioned on class 1);
///   figure 3: expected generation sizes by level at k = 60 and k = 90 for a
///             non-mutant root conditioned on NO mutant in the bottom
///             generation.
/// figure_id is 1, 2, 3, or 0 for all files.
std::vector<FigureFile> figure_data(int figure_id,
                                    const PoissonThinningParams& params);

}  // namespace cgw
