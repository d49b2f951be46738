#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cgw/combinatorics.hpp"
#include "cgw/counts.hpp"
#include "cgw/errors.hpp"
#include "cgw/offspring.hpp"
#include "cgw/tree.hpp"

namespace cgw {

/// A branching model together with the height bound k: the measure lives on
/// trees of height <= k, with offspring drawn from `offspring` by (type,
/// level) and every node at level k childless.
template <class Scalar>
struct GwParams {
  int height = 0;
  OffspringModel<Scalar> offspring;
};

/// Probability of the exact ordered tree under the measure rooted at
/// (root_type, level).  Each distinct child ordering carries mass
/// P(W = counts) / multinomial(counts) times the child subtree masses.
template <class Scalar>
Scalar gw_probability(const TypedTree& tree, int root_type, int level,
                      const GwParams<Scalar>& params) {
  if (level < 0 || level > params.height)
    throw DomainError("gw_probability: level outside 0..k");
  if (tree.type != root_type)
    throw DomainError("gw_probability: root type mismatch");
  if (height(tree) > params.height - level)
    throw DomainError("gw_probability: tree higher than k - level");
  auto rec = [&](auto&& self, const TypedTree& node, int l) -> Scalar {
    if (l == params.height) return Scalar(1);  // forced leaf
    const CountVector w = count_children(node, params.offspring.num_types());
    Scalar mass = params.offspring.point_mass(node.type, l, w) /
                  multinomial_as<Scalar>(w);
    for (const auto& child : node.children) {
      if (is_zero(mass)) return Scalar(0);
      mass = mass * self(self, child, l + 1);
    }
    return mass;
  };
  return rec(rec, tree, level);
}

/// Number of trees with positive mass rooted at (type, level); exact count
/// via dynamic programming over levels (no enumeration).
template <class Scalar>
BigInt count_trees(int type, int level, const GwParams<Scalar>& params) {
  if (type < 1 || type > params.offspring.num_types())
    throw DomainError("count_trees: bad type");
  if (level < 0 || level > params.height)
    throw DomainError("count_trees: level outside 0..k");
  const int theta = params.offspring.num_types();
  // counts[t-1] = number of trees rooted at type t at the current level,
  // computed bottom-up from level k.
  std::vector<BigInt> counts(static_cast<std::size_t>(theta), BigInt(1));
  for (int l = params.height - 1; l >= level; --l) {
    std::vector<BigInt> next(static_cast<std::size_t>(theta));
    for (int t = 1; t <= theta; ++t) {
      BigInt total = 0;
      const auto& fl = params.offspring.law(t, l);
      for (std::size_t a = 0; a < fl.support.size(); ++a) {
        if (is_zero(fl.prob[a])) continue;
        BigInt term = multinomial_coefficient(fl.support[a]);
        for (int j = 0; j < theta; ++j)
          term *= scalar_pow(counts[static_cast<std::size_t>(j)],
                             fl.support[a][j]);
        total += term;
      }
      next[static_cast<std::size_t>(t - 1)] = total;
    }
    counts = std::move(next);
  }
  return counts[static_cast<std::size_t>(type - 1)];
}

/// All trees rooted at (type, level) paired with their exact masses.
/// Requires a finite-support model; refuses (with the size estimate in the
/// message) if the count exceeds max_trees.
template <class Scalar>
std::vector<std::pair<TypedTree, Scalar>> enumerate_trees(
    int type, int level, const GwParams<Scalar>& params,
    std::uint64_t max_trees = 1'000'000) {
  if (!params.offspring.finite_support())
    throw UnsupportedModelError(
        "enumerate_trees: offspring law must have finite support");
  const BigInt total = count_trees(type, level, params);
  if (total > BigInt(max_trees))
    throw EnumerationLimitError("enumerate_trees: " + total.str() +
                                " trees exceed the guard of " +
                                std::to_string(max_trees));
  const int theta = params.offspring.num_types();
  using List = std::vector<std::pair<TypedTree, Scalar>>;
  // memo[l - level][t - 1] = enumeration for (t, l), built on demand
  std::map<std::pair<int, int>, List> memo;
  auto enumerate = [&](auto&& self, int t, int l) -> const List& {
    auto key = std::make_pair(t, l);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    List out;
    if (l == params.height) {
      out.push_back({TypedTree{t, {}}, Scalar(1)});
      return memo.emplace(key, std::move(out)).first->second;
    }
    const auto& fl = params.offspring.law(t, l);
    for (std::size_t a = 0; a < fl.support.size(); ++a) {
      if (is_zero(fl.prob[a])) continue;
      const CountVector& w = fl.support[a];
      const Scalar base = fl.prob[a] / multinomial_as<Scalar>(w);
      // resolve child lists first so the recursion below can't invalidate them
      std::vector<const List*> child_lists(static_cast<std::size_t>(theta));
      for (int j = 1; j <= theta; ++j)
        if (w[j - 1] > 0)
          child_lists[static_cast<std::size_t>(j - 1)] = &self(self, j, l + 1);
      for (const auto& order : distinct_label_sequences(w)) {
        // extend (tree, mass) partial products position by position
        std::vector<std::pair<TypedTree, Scalar>> partial;
        partial.push_back({TypedTree{t, {}}, base});
        for (int child_type : order) {
          std::vector<std::pair<TypedTree, Scalar>> grown;
          const List& opts =
              *child_lists[static_cast<std::size_t>(child_type - 1)];
          grown.reserve(partial.size() * opts.size());
          for (const auto& [stem, mass] : partial)
            for (const auto& [sub, sub_mass] : opts) {
              TypedTree next = stem;
              next.children.push_back(sub);
              grown.push_back({std::move(next), mass * sub_mass});
            }
          partial = std::move(grown);
        }
        for (auto& item : partial) out.push_back(std::move(item));
      }
    }
    return memo.emplace(key, std::move(out)).first->second;
  };
  return enumerate(enumerate, type, level);
}

}  // namespace cgw
