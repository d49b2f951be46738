#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cgw/combinatorics.hpp"
#include "cgw/counts.hpp"
#include "cgw/errors.hpp"
#include "cgw/events.hpp"
#include "cgw/measure.hpp"
#include "cgw/offspring.hpp"
#include "cgw/partition.hpp"

namespace cgw {

/// Class probabilities p[t][l][i] = P(subtree of a type-t node at tree level
/// l falls in class i), for l = 0 .. k - base_height.
template <class Scalar>
struct ClassProbTable {
  int k = 0;
  int base_height = 0;
  int num_classes = 0;
  int num_types = 0;
  /// layers[l] has entry (t-1, i-1); l runs over 0 .. k - base_height.
  std::vector<ProbLayer<Scalar>> layers;
  double max_truncation_tail = 0.0;
  std::vector<std::string> warnings;

  const Scalar& prob(int t, int l, int i) const {
    if (t < 1 || t > num_types || i < 1 || i > num_classes || l < 0 ||
        l >= static_cast<int>(layers.size()))
      throw DomainError("ClassProbTable::prob: index out of range");
    return layers[static_cast<std::size_t>(l)](t - 1, i - 1);
  }
};

/// One support point of a conditional offspring draw: the counting matrix x
/// (children by class and type) with its probability given the class.
template <class Scalar>
struct CondAtom {
  CountMatrix x;
  Scalar mass;
};

/// Conditional offspring distributions by (tree level l, parent type t,
/// parent class i), for l = 0 .. k - base_height - 1.
template <class Scalar>
class ConditionalOffspringTable {
 public:
  ConditionalOffspringTable() = default;
  ConditionalOffspringTable(int levels, int num_types, int num_classes)
      : levels_(levels),
        num_types_(num_types),
        num_classes_(num_classes),
        cells_(static_cast<std::size_t>(levels) * num_types * num_classes) {}

  int levels() const { return levels_; }
  int num_types() const { return num_types_; }
  int num_classes() const { return num_classes_; }

  std::vector<CondAtom<Scalar>>& cell(int l, int t, int i) {
    return cells_[index(l, t, i)];
  }
  const std::vector<CondAtom<Scalar>>& cell(int l, int t, int i) const {
    return cells_[index(l, t, i)];
  }

 private:
  std::size_t index(int l, int t, int i) const {
    if (l < 0 || l >= levels_ || t < 1 || t > num_types_ || i < 1 ||
        i > num_classes_)
      throw DomainError("ConditionalOffspringTable: index out of range");
    return (static_cast<std::size_t>(l) * num_types_ + (t - 1)) * num_classes_ +
           (i - 1);
  }

  int levels_ = 0;
  int num_types_ = 0;
  int num_classes_ = 0;
  std::vector<std::vector<CondAtom<Scalar>>> cells_;
};

/// Base-layer tree tables: for each (type t, class i), the trees of height
/// <= base_height in that class with masses renormalized within the class.
template <class Scalar>
class BaseTreeTable {
 public:
  BaseTreeTable() = default;
  BaseTreeTable(int num_types, int num_classes)
      : num_types_(num_types),
        num_classes_(num_classes),
        cells_(static_cast<std::size_t>(num_types) * num_classes) {}

  std::vector<std::pair<TypedTree, Scalar>>& cell(int t, int i) {
    return cells_[index(t, i)];
  }
  const std::vector<std::pair<TypedTree, Scalar>>& cell(int t, int i) const {
    return cells_[index(t, i)];
  }

 private:
  std::size_t index(int t, int i) const {
    if (t < 1 || t > num_types_ || i < 1 || i > num_classes_)
      throw DomainError("BaseTreeTable: index out of range");
    return static_cast<std::size_t>(t - 1) * num_classes_ + (i - 1);
  }

  int num_types_ = 0;
  int num_classes_ = 0;
  std::vector<std::vector<std::pair<TypedTree, Scalar>>> cells_;
};

/// Everything the conditioned construction needs: class probabilities for
/// all levels, conditional offspring tables above the base, and the base
/// tree tables.
template <class Scalar>
struct ClassTables {
  ClassProbTable<Scalar> probs;
  ConditionalOffspringTable<Scalar> cond;
  BaseTreeTable<Scalar> base;
};

/// Base-layer class probabilities (tree level k - base_height) and the
/// per-class base tree table.  A positive base height requires a
/// finite-support model.
template <class Scalar>
std::pair<ProbLayer<Scalar>, BaseTreeTable<Scalar>> base_probs(
    const RecursivePartition& part, const GwParams<Scalar>& params,
    std::uint64_t enumeration_guard = 1'000'000) {
  const int m = part.num_classes();
  const int theta = part.num_types();
  if (theta != params.offspring.num_types())
    throw DomainError("base_probs: partition and model type counts differ");
  if (part.base_height() > params.height)
    throw DomainError("base_probs: base height exceeds the height bound");
  ProbLayer<Scalar> layer = ProbLayer<Scalar>::Constant(theta, m, Scalar(0));
  BaseTreeTable<Scalar> table(theta, m);
  if (part.base_height() == 0) {
    for (int t = 1; t <= theta; ++t) {
      const int cls = part.classify_base(TypedTree{t, {}});
      layer(t - 1, cls - 1) = Scalar(1);
      table.cell(t, cls).push_back({TypedTree{t, {}}, Scalar(1)});
    }
    return {std::move(layer), std::move(table)};
  }
  if (!params.offspring.finite_support())
    throw UnsupportedModelError(
        "base_probs: a positive base height requires a finite-support model");
  const int base_level = params.height - part.base_height();
  for (int t = 1; t <= theta; ++t) {
    auto trees = enumerate_trees(t, base_level, params, enumeration_guard);
    for (auto& [tree, mass] : trees) {
      const int cls = classify(tree, part.base_height(), part);
      layer(t - 1, cls - 1) = layer(t - 1, cls - 1) + mass;
      table.cell(t, cls).push_back({std::move(tree), mass});
    }
    for (int i = 1; i <= m; ++i) {
      const Scalar total = layer(t - 1, i - 1);
      if (is_zero(total)) continue;
      for (auto& [tree, mass] : table.cell(t, i)) mass = mass / total;
    }
  }
  return {std::move(layer), std::move(table)};
}

template <class Scalar>
struct StepResult {
  ProbLayer<Scalar> layer;
  /// cells[(t-1)*m + i-1]: conditional offspring atoms for (t, i).
  std::vector<std::vector<CondAtom<Scalar>>> cells;
};

/// One backward step: probabilities and conditional offspring tables at tree
/// level l from the layer at tree level l+1.  Children of a type-j parent
/// land in classes with probabilities next_layer(j-1, ·), independently, so
/// each column j of the counting matrix is multinomial; the step sums the
/// resulting mass by the class the matrix falls in at classification level
/// k - l.
template <class Scalar>
StepResult<Scalar> class_probs_step(const ProbLayer<Scalar>& next_layer,
                                    const RecursivePartition& part,
                                    const GwParams<Scalar>& params,
                                    int tree_level) {
  const int m = part.num_classes();
  const int theta = part.num_types();
  const int class_level = params.height - tree_level;
  if (class_level <= part.base_height())
    throw DomainError("class_probs_step: level at or below the base layer");
  StepResult<Scalar> out;
  out.layer = ProbLayer<Scalar>::Constant(theta, m, Scalar(0));
  out.cells.resize(static_cast<std::size_t>(theta) * m);
  for (int t = 1; t <= theta; ++t) {
    const FiniteLaw<Scalar>& law = params.offspring.law(t, tree_level);
    for (std::size_t a = 0; a < law.support.size(); ++a) {
      if (is_zero(law.prob[a])) continue;
      const CountVector& w = law.support[a];
      // Column options: ways to spread w_j type-j children over classes.
      std::vector<std::vector<std::pair<CountVector, Scalar>>> columns(
          static_cast<std::size_t>(theta));
      for (int j = 1; j <= theta; ++j) {
        auto& opts = columns[static_cast<std::size_t>(j - 1)];
        for_each_composition(w[j - 1], m, [&](const CountVector& col) {
          Scalar pmf = multinomial_as<Scalar>(col);
          for (int i = 1; i <= m; ++i) {
            if (col[i - 1] == 0) continue;
            const Scalar& q = next_layer(j - 1, i - 1);
            if (is_zero(q)) return;
            pmf = pmf * scalar_pow(q, col[i - 1]);
          }
          opts.push_back({col, pmf});
        });
      }
      // Cartesian product over columns, accumulating the matrix and factor.
      CountMatrix x(m, theta);
      auto rec = [&](auto&& self, int j, const Scalar& factor) -> void {
        if (j > theta) {
          const Scalar mass = law.prob[a] * factor;
          const int cls = part.classify_matrix(class_level, x);
          out.layer(t - 1, cls - 1) = out.layer(t - 1, cls - 1) + mass;
          out.cells[static_cast<std::size_t>(t - 1) * m + (cls - 1)].push_back(
              {x, mass});
          return;
        }
        for (const auto& [col, pmf] : columns[static_cast<std::size_t>(j - 1)]) {
          x.col(j - 1) = col;
          self(self, j + 1, factor * pmf);
        }
      };
      rec(rec, 1, Scalar(1));
    }
    // Turn joint masses into conditional ones.
    for (int i = 1; i <= m; ++i) {
      const Scalar total = out.layer(t - 1, i - 1);
      if (is_zero(total)) continue;
      for (auto& atom : out.cells[static_cast<std::size_t>(t - 1) * m + (i - 1)])
        atom.mass = atom.mass / total;
    }
  }
  return out;
}

/// Build the complete table set for an event on trees of height <= k.
template <class Scalar>
ClassTables<Scalar> build_class_tables(
    const Event& event, const GwParams<Scalar>& params,
    std::uint64_t enumeration_guard = 1'000'000) {
  const RecursivePartition& part = event.partition;
  const int k = params.height;
  const int k0 = part.base_height();
  if (event.tree_height != k)
    throw DomainError("build_class_tables: event is for height " +
                      std::to_string(event.tree_height) +
                      ", model has height " + std::to_string(k));
  if (k < k0)
    throw DomainError("build_class_tables: height bound below the base height");
  ClassTables<Scalar> tables;
  auto& probs = tables.probs;
  probs.k = k;
  probs.base_height = k0;
  probs.num_classes = part.num_classes();
  probs.num_types = part.num_types();
  probs.max_truncation_tail = params.offspring.max_truncation_tail();
  if (probs.max_truncation_tail > 1e-9)
    probs.warnings.push_back(
        "offspring truncation tail " +
        std::to_string(probs.max_truncation_tail) +
        " exceeds 1e-9; downstream probabilities lose that much accuracy");
  const int base_tree_level = k - k0;
  probs.layers.resize(static_cast<std::size_t>(base_tree_level) + 1);
  auto [base_layer, base_table] = base_probs(part, params, enumeration_guard);
  probs.layers[static_cast<std::size_t>(base_tree_level)] =
      std::move(base_layer);
  tables.base = std::move(base_table);
  tables.cond =
      ConditionalOffspringTable<Scalar>(base_tree_level, probs.num_types,
                                        probs.num_classes);
  for (int l = base_tree_level - 1; l >= 0; --l) {
    auto step = class_probs_step(
        probs.layers[static_cast<std::size_t>(l) + 1], part, params, l);
    probs.layers[static_cast<std::size_t>(l)] = std::move(step.layer);
    for (int t = 1; t <= probs.num_types; ++t)
      for (int i = 1; i <= probs.num_classes; ++i)
        tables.cond.cell(l, t, i) = std::move(
            step.cells[static_cast<std::size_t>(t - 1) * probs.num_classes +
                       (i - 1)]);
  }
  // Row sums must be 1: exactly for rational scalars, to 1e-9 otherwise.
  for (int l = 0; l <= base_tree_level; ++l)
    for (int t = 1; t <= probs.num_types; ++t) {
      Scalar row(0);
      for (int i = 1; i <= probs.num_classes; ++i)
        row = row + probs.prob(t, l, i);
      if constexpr (std::is_same_v<Scalar, BigRational>) {
        if (row != Scalar(1))
          throw Error("build_class_tables: row sum != 1 at level " +
                      std::to_string(l));
      } else {
        if (std::abs(to_double(row) - 1.0) > 1e-9)
          throw Error("build_class_tables: row sum " +
                      std::to_string(to_double(row)) + " at level " +
                      std::to_string(l));
      }
    }
  return tables;
}

}  // namespace cgw
