#pragma once

// Shared fixtures for the test binaries: small offspring models with exact
// rational masses, and a bounded random tree generator for property checks.

#include <cstdint>
#include <initializer_list>
#include <utility>
#include <vector>

#include "cgw/counts.hpp"
#include "cgw/offspring.hpp"
#include "cgw/rng.hpp"
#include "cgw/scalars.hpp"
#include "cgw/tree.hpp"

namespace testing_models {

inline cgw::CountVector cv(std::initializer_list<std::int64_t> entries) {
  cgw::CountVector out(static_cast<Eigen::Index>(entries.size()));
  Eigen::Index j = 0;
  for (const std::int64_t e : entries) out[j++] = e;
  return out;
}

struct Atom {
  std::vector<std::int64_t> counts;
  std::int64_t num;
  std::int64_t den;
};

template <class Scalar>
cgw::LawAtoms<Scalar> atoms(const std::vector<Atom>& spec) {
  cgw::LawAtoms<Scalar> out;
  for (const auto& a : spec)
    out.atoms.push_back({a.counts, cgw::scalar_ratio<Scalar>(a.num, a.den)});
  return out;
}

/// One type, W = 0 or 2 with probability 1/2 each (critical binary).
template <class Scalar>
cgw::OffspringModel<Scalar> single_half() {
  cgw::TypeOffspring<Scalar> t;
  t.law = atoms<Scalar>({{{0}, 1, 2}, {{2}, 1, 2}});
  return cgw::OffspringModel<Scalar>({t});
}

/// One type; default W in {0,1,3}, but level 1 uses the binary law.
template <class Scalar>
cgw::OffspringModel<Scalar> single_mixed_leveldep() {
  cgw::TypeOffspring<Scalar> t;
  t.law = atoms<Scalar>({{{0}, 1, 4}, {{1}, 1, 2}, {{3}, 1, 4}});
  t.overrides.push_back({1, 1, atoms<Scalar>({{{0}, 1, 2}, {{2}, 1, 2}})});
  return cgw::OffspringModel<Scalar>({t});
}

/// Two types, small supports, no level dependence.
template <class Scalar>
cgw::OffspringModel<Scalar> two_type_small() {
  cgw::TypeOffspring<Scalar> t1;
  t1.law = atoms<Scalar>({{{0, 0}, 1, 2}, {{1, 0}, 1, 4}, {{0, 1}, 1, 4}});
  cgw::TypeOffspring<Scalar> t2;
  t2.law = atoms<Scalar>({{{0, 0}, 1, 3}, {{1, 0}, 1, 3}, {{0, 1}, 1, 3}});
  return cgw::OffspringModel<Scalar>({t1, t2});
}

/// One type, always exactly one child: the tree is a bare chain, so dying
/// before the bottom is impossible.
template <class Scalar>
cgw::OffspringModel<Scalar> deterministic_chain() {
  cgw::TypeOffspring<Scalar> t;
  t.law = atoms<Scalar>({{{1}, 1, 1}});
  return cgw::OffspringModel<Scalar>({t});
}

/// Two types; type 1 switches law at level 0 only.
template <class Scalar>
cgw::OffspringModel<Scalar> two_type_leveldep() {
  cgw::TypeOffspring<Scalar> t1;
  t1.law = atoms<Scalar>(
      {{{0, 0}, 1, 3}, {{1, 1}, 1, 3}, {{2, 0}, 1, 6}, {{0, 1}, 1, 6}});
  t1.overrides.push_back(
      {0, 0, atoms<Scalar>({{{0, 0}, 1, 4}, {{1, 1}, 1, 2}, {{0, 2}, 1, 4}})});
  cgw::TypeOffspring<Scalar> t2;
  t2.law = atoms<Scalar>({{{0, 0}, 1, 2}, {{0, 2}, 1, 4}, {{1, 0}, 1, 4}});
  return cgw::OffspringModel<Scalar>({t1, t2});
}

/// Random tree of height <= max_depth with types in 1..num_types; branches
/// thin out quickly so trees stay small.
inline cgw::TypedTree random_tree(cgw::RngStream& rng, int num_types,
                                  int max_depth, int max_children = 3) {
  cgw::TypedTree node;
  node.type = 1 + static_cast<int>(
                      rng.next_below(static_cast<std::uint64_t>(num_types)));
  if (max_depth == 0 || rng.next_double() < 0.35) return node;
  const auto width =
      rng.next_below(static_cast<std::uint64_t>(max_children) + 1);
  for (std::uint64_t c = 0; c < width; ++c)
    node.children.push_back(
        random_tree(rng, num_types, max_depth - 1, max_children));
  return node;
}

}  // namespace testing_models
