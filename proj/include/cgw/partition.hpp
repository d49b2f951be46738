#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cgw/counts.hpp"
#include "cgw/errors.hpp"
#include "cgw/tree.hpp"

namespace cgw {

/// Linear comparison over counting-matrix entries:
///   sum_{i,j} weights(i,j) * c(i,j)  cmp  rhs.
struct LinearAtom {
  enum class Cmp { LE, EQ, GE };
  CountMatrix weights;
  Cmp cmp = Cmp::EQ;
  std::int64_t rhs = 0;

  bool evaluate(const CountMatrix& c) const;
  std::string to_string() const;
};

/// Boolean combination (and/or/not) of linear atoms over counting matrices.
class MatrixPredicate {
 public:
  static MatrixPredicate atom(LinearAtom a);
  static MatrixPredicate conjunction(std::vector<MatrixPredicate> terms);
  static MatrixPredicate disjunction(std::vector<MatrixPredicate> terms);
  static MatrixPredicate negation(MatrixPredicate inner);
  /// Convenience: single-entry atom  c(cls,type) cmp rhs.
  static MatrixPredicate entry(int num_classes, int num_types, int cls,
                               int type, LinearAtom::Cmp cmp, std::int64_t rhs);

  bool evaluate(const CountMatrix& c) const;
  std::string to_string() const;

 private:
  enum class Kind { Atom, And, Or, Not };
  Kind kind_ = Kind::And;
  std::optional<LinearAtom> atom_;
  std::vector<MatrixPredicate> children_;
};

/// Level-indexed partition of trees into classes 1..m: a base classifier on
/// trees of height <= base_height, and per-level predicate lists (entry i-1
/// recognizes class i) acting on counting matrices above the base.  The
/// predicate list for a level defaults to `predicates` unless overridden.
class RecursivePartition {
 public:
  RecursivePartition(int num_classes, int num_types, int base_height,
                     std::function<int(const TypedTree&)> base_classifier,
                     std::vector<MatrixPredicate> predicates,
                     std::map<int, std::vector<MatrixPredicate>> level_overrides = {});

  int num_classes() const { return num_classes_; }
  int num_types() const { return num_types_; }
  int base_height() const { return base_height_; }

  /// Predicate list in force at classification level (level > base_height).
  const std::vector<MatrixPredicate>& predicates_at(int level) const;

  /// Levels carrying an override list (empty when the default applies
  /// everywhere).
  std::vector<int> override_levels() const;

  /// Class of a base tree (height <= base_height); checks the result range.
  int classify_base(const TypedTree& tree) const;

  /// The unique class whose predicate holds; throws NotAPartitionError when
  /// zero or several predicates accept the matrix.
  int classify_matrix(int level, const CountMatrix& c) const;

 private:
  int num_classes_;
  int num_types_;
  int base_height_;
  std::function<int(const TypedTree&)> base_classifier_;
  std::vector<MatrixPredicate> predicates_;
  std::map<int, std::vector<MatrixPredicate>> level_overrides_;
};

/// Class of `tree` viewed with `level` generations available below the root
/// (requires height(tree) <= level).  Levels at or below the base height use
/// the base classifier; higher levels recurse through the children.
int classify(const TypedTree& tree, int level, const RecursivePartition& part);

/// Counting matrix of the root: entry (i-1, j-1) = number of type-j children
/// in class i, children classified at level-1.  Requires level > base_height.
CountMatrix count_matrix(const TypedTree& tree, int level,
                         const RecursivePartition& part);

struct PartitionCheck {
  bool ok = true;
  /// When !ok: a matrix accepted by `holds` predicates (0 or >= 2) at `level`.
  CountMatrix counterexample;
  int level = 0;
  int holds = 0;
};

/// Probe the exactly-one-predicate-holds property: exhaustively over all
/// matrices with entry sum <= max_entry_sum, then with `random_probes`
/// deterministic pseudo-random matrices with entries up to ~1000.
PartitionCheck validate_partition(const RecursivePartition& part,
                                  std::int64_t max_entry_sum = 6,
                                  int random_probes = 2000);

}  // namespace cgw
