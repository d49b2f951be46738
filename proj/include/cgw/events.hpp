#pragma once

#include <string>

#include "cgw/partition.hpp"

namespace cgw {

/// A conditioning event: a validated recursive partition, the class whose
/// trees realize the event, and the tree height bound K the event applies to
/// (the root is classified at level K).
struct Event {
  std::string name;
  RecursivePartition partition;
  int target_class = 1;
  int tree_height = 0;
};

/// Root still has descendants at generation k (class 1) or has died out
/// earlier (class 2).  Works for any number of types.
Event survival_event(int k, int num_types = 1);

/// Two-type model, type 1 = mutant: some generation-k descendant is a mutant
/// (class 1) vs none (class 2).
Event mutant_at_generation(int k);

/// Two-type model: an unbroken chain of type-1 nodes from the root down to
/// generation k (class 1) vs chain broken (class 2).
Event root_lineage_mutant(int k);

/// Two-type model, four classes tracking how mutants arise:
///   1 = root heads an unbroken mutant line to generation k,
///   2 = no mutants anywhere through generation k,
///   3 = a mutant appears spontaneously (type-2 parent, mutant line below),
///   4 = mutant ancestry present but every mutant line dies before k.
Event spontaneous_mutation_4class(int k);

/// Single-type model: exactly `target_size` nodes at generation k.
/// Classes 1..target_size+1 mean 0..target_size generation-k descendants;
/// class target_size+2 means at least target_size+1.
Event generation_size_event(int target_size, int k);

/// Single-type model on trees of height <= target_height + 1: the tree's
/// height is exactly target_height.  Requires target_height >= 2 (the base
/// classifier distinguishes heights 0, 1, 2 on trees of height <= 2).
Event exact_height_event(int target_height);

}  // namespace cgw
