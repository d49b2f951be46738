#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "cgw/class_probs.hpp"
#include "cgw/events.hpp"
#include "cgw/measure.hpp"

namespace cgw {

/// Finite distribution over trees, keyed by the canonical text form.
template <class Scalar>
using TreeDistribution = std::map<std::string, Scalar>;

/// Multinomial coefficient of a counting matrix as a scalar.
template <class Scalar>
Scalar matrix_multinomial_as(const CountMatrix& x) {
  return scalar_ratio<Scalar>(multinomial_coefficient(x), 1);
}

/// Full unconditioned law by direct enumeration (finite-support models).
template <class Scalar>
TreeDistribution<Scalar> enumeration_distribution(
    const GwParams<Scalar>& params, int root_type,
    std::uint64_t enumeration_guard = 1'000'000) {
  TreeDistribution<Scalar> out;
  for (const auto& [tree, mass] :
       enumerate_trees(root_type, 0, params, enumeration_guard))
    out.emplace(format_tree(tree), mass);
  return out;
}

/// Conditioned law by brute force: enumerate every tree, classify it at the
/// root, keep the target class, renormalize.  Completely independent of the
/// class-probability recursion.
template <class Scalar>
TreeDistribution<Scalar> conditioned_bruteforce(
    const Event& event, const GwParams<Scalar>& params, int root_type,
    int target_class, std::uint64_t enumeration_guard = 1'000'000) {
  if (event.tree_height != params.height)
    throw DomainError("conditioned_bruteforce: event/model height mismatch");
  TreeDistribution<Scalar> kept;
  Scalar total(0);
  for (const auto& [tree, mass] :
       enumerate_trees(root_type, 0, params, enumeration_guard)) {
    if (classify(tree, params.height, event.partition) != target_class)
      continue;
    kept.emplace(format_tree(tree), mass);
    total = total + mass;
  }
  if (is_zero(total))
    throw ImpossibleEventError("conditioned_bruteforce: class " +
                               std::to_string(target_class) +
                               " has probability 0 for root type " +
                               std::to_string(root_type));
  for (auto& [key, mass] : kept) mass = mass / total;
  return kept;
}

/// Mass the conditioned construction assigns to one tree rooted at
/// (root_type, tree level `level`) given class `target_class`: the
/// conditional counting-matrix mass over its multinomial coefficient, times
/// the children's masses, recursively; base-layer trees are looked up in the
/// renormalized base table.  Trees outside the class get 0.
template <class Scalar>
Scalar tilde_mass(const TypedTree& tree, int root_type, int level,
                  int target_class, const ClassTables<Scalar>& tables,
                  const RecursivePartition& part,
                  const GwParams<Scalar>& params) {
  if (tree.type != root_type)
    throw DomainError("tilde_mass: root type mismatch");
  const int base_level = params.height - part.base_height();
  auto rec = [&](auto&& self, const TypedTree& node, int l, int cls) -> Scalar {
    if (l == base_level) {
      for (const auto& [candidate, mass] : tables.base.cell(node.type, cls))
        if (candidate == node) return mass;
      return Scalar(0);
    }
    CountMatrix x = CountMatrix::Zero(part.num_classes(), part.num_types());
    std::vector<int> child_classes;
    child_classes.reserve(node.children.size());
    for (const auto& child : node.children) {
      const int child_cls = classify(child, params.height - (l + 1), part);
      child_classes.push_back(child_cls);
      ++x(child_cls - 1, child.type - 1);
    }
    Scalar mass(0);
    for (const auto& atom : tables.cond.cell(l, node.type, cls))
      if (atom.x == x) {
        mass = atom.mass / matrix_multinomial_as<Scalar>(x);
        break;
      }
    if (is_zero(mass)) return Scalar(0);
    for (std::size_t c = 0; c < node.children.size(); ++c) {
      mass = mass * self(self, node.children[c], l + 1, child_classes[c]);
      if (is_zero(mass)) return Scalar(0);
    }
    return mass;
  };
  if (height(tree) > params.height - level)
    throw DomainError("tilde_mass: tree higher than k - level");
  return rec(rec, tree, level, target_class);
}

/// Conditioned law per the direct construction: class tables from the
/// backward recursion, then the per-tree mass product.  Mirrors what the
/// sampler draws from, without any randomness.
template <class Scalar>
TreeDistribution<Scalar> tilde_exact(
    const Event& event, const GwParams<Scalar>& params, int root_type,
    int target_class, std::uint64_t enumeration_guard = 1'000'000) {
  const ClassTables<Scalar> tables =
      build_class_tables(event, params, enumeration_guard);
  if (is_zero(tables.probs.prob(root_type, 0, target_class)))
    throw ImpossibleEventError("tilde_exact: class " +
                               std::to_string(target_class) +
                               " has probability 0 for root type " +
                               std::to_string(root_type));
  TreeDistribution<Scalar> out;
  for (const auto& [tree, mass] :
       enumerate_trees(root_type, 0, params, enumeration_guard)) {
    Scalar q = tilde_mass(tree, root_type, 0, target_class, tables,
                          event.partition, params);
    if (!is_zero(q)) out.emplace(format_tree(tree), std::move(q));
  }
  return out;
}

/// Total variation distance: half the sum of absolute mass differences over
/// the union of supports.  Exact for rational scalars.
template <class Scalar>
Scalar total_variation(const TreeDistribution<Scalar>& a,
                       const TreeDistribution<Scalar>& b) {
  Scalar sum(0);
  auto abs_diff = [](const Scalar& x, const Scalar& y) {
    return x < y ? y - x : x - y;
  };
  for (const auto& [key, mass] : a) {
    auto it = b.find(key);
    sum = sum + abs_diff(mass, it == b.end() ? Scalar(0) : it->second);
  }
  for (const auto& [key, mass] : b)
    if (a.find(key) == a.end()) sum = sum + abs_diff(mass, Scalar(0));
  return sum / Scalar(2);
}

}  // namespace cgw
