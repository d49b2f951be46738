#include "cgw/events.hpp"

#include <utility>

#include "cgw/errors.hpp"

namespace cgw {

namespace {

using Cmp = LinearAtom::Cmp;

/// Atom: sum of row `cls` (all types) cmp rhs.
MatrixPredicate row_sum(int m, int theta, int cls, Cmp cmp, std::int64_t rhs) {
  LinearAtom a;
  a.weights = CountMatrix::Zero(m, theta);
  for (int j = 0; j < theta; ++j) a.weights(cls - 1, j) = 1;
  a.cmp = cmp;
  a.rhs = rhs;
  return MatrixPredicate::atom(std::move(a));
}

MatrixPredicate weighted(CountMatrix w, Cmp cmp, std::int64_t rhs) {
  LinearAtom a;
  a.weights = std::move(w);
  a.cmp = cmp;
  a.rhs = rhs;
  return MatrixPredicate::atom(std::move(a));
}

Event make_validated(std::string name, RecursivePartition part,
                     int target_class, int tree_height) {
  const PartitionCheck check = validate_partition(part);
  if (!check.ok)
    throw NotAPartitionError(name + ": " + std::to_string(check.holds) +
                             " predicates hold on a probe matrix");
  return Event{std::move(name), std::move(part), target_class, tree_height};
}

int leaf_type_class(const TypedTree& tree) { return tree.type; }

}  // namespace

Event survival_event(int k, int num_types) {
  if (k < 0) throw DomainError("survival_event: negative k");
  if (num_types < 1) throw DomainError("survival_event: need >= 1 type");
  const int m = 2;
  std::vector<MatrixPredicate> preds;
  preds.push_back(row_sum(m, num_types, 1, Cmp::GE, 1));  // a live child
  preds.push_back(row_sum(m, num_types, 1, Cmp::LE, 0));  // no live children
  RecursivePartition part(m, num_types, 0,
                          [](const TypedTree&) { return 1; },  // leaf reached k
                          std::move(preds));
  return make_validated("survival", std::move(part), 1, k);
}

Event mutant_at_generation(int k) {
  if (k < 0) throw DomainError("mutant_at_generation: negative k");
  const int m = 2, theta = 2;
  std::vector<MatrixPredicate> preds;
  preds.push_back(row_sum(m, theta, 1, Cmp::GE, 1));
  preds.push_back(row_sum(m, theta, 1, Cmp::LE, 0));
  RecursivePartition part(m, theta, 0, leaf_type_class, std::move(preds));
  return make_validated("mutant_at_generation", std::move(part), 1, k);
}

Event root_lineage_mutant(int k) {
  if (k < 0) throw DomainError("root_lineage_mutant: negative k");
  const int m = 2, theta = 2;
  std::vector<MatrixPredicate> preds;
  preds.push_back(MatrixPredicate::entry(m, theta, 1, 1, Cmp::GE, 1));
  preds.push_back(MatrixPredicate::entry(m, theta, 1, 1, Cmp::LE, 0));
  RecursivePartition part(m, theta, 0, leaf_type_class, std::move(preds));
  return make_validated("root_lineage_mutant", std::move(part), 1, k);
}

Event spontaneous_mutation_4class(int k) {
  if (k < 0) throw DomainError("spontaneous_mutation_4class: negative k");
  const int m = 4, theta = 2;
  // "Spontaneity evidence": a type-2 child continuing a mutant line (class 1)
  // or any child in the spontaneous class (3) or a type-2 child whose mutant
  // ancestry died out (class 4).
  CountMatrix spont = CountMatrix::Zero(m, theta);
  spont(0, 1) = 1;  // c[1][2]
  spont(2, 0) = 1;  // c[3][1]
  spont(2, 1) = 1;  // c[3][2]
  spont(3, 1) = 1;  // c[4][2]
  auto no_spont = [&] { return weighted(spont, Cmp::LE, 0); };

  std::vector<MatrixPredicate> preds;
  // 1: no spontaneity evidence, and a type-1 child carries the line on.
  preds.push_back(MatrixPredicate::conjunction(
      {no_spont(), MatrixPredicate::entry(m, theta, 1, 1, Cmp::GE, 1)}));
  // 2: only class-2 type-2 children (a mutant-free tree).
  {
    CountMatrix all_but = CountMatrix::Ones(m, theta);
    all_but(1, 1) = 0;  // c[2][2] free
    preds.push_back(weighted(std::move(all_but), Cmp::LE, 0));
  }
  // 3: spontaneity evidence somewhere below.
  preds.push_back(weighted(spont, Cmp::GE, 1));
  // 4: no evidence, no continuing line, but mutant ancestry among children.
  {
    CountMatrix dead = CountMatrix::Zero(m, theta);
    dead(1, 0) = 1;  // c[2][1]
    dead(3, 0) = 1;  // c[4][1]
    preds.push_back(MatrixPredicate::conjunction(
        {no_spont(), MatrixPredicate::entry(m, theta, 1, 1, Cmp::LE, 0),
         weighted(std::move(dead), Cmp::GE, 1)}));
  }
  RecursivePartition part(m, theta, 0, leaf_type_class, std::move(preds));
  return make_validated("spontaneous_mutation_4class", std::move(part), 1, k);
}

Event generation_size_event(int target_size, int k) {
  if (target_size < 0)
    throw DomainError("generation_size_event: negative target size");
  if (k < 0) throw DomainError("generation_size_event: negative k");
  const int G = target_size;
  const int m = G + 2;  // class i = i-1 generation-k descendants, last = > G
  std::vector<MatrixPredicate> preds;
  CountMatrix w(m, 1);
  for (int i = 0; i < m; ++i) w(i, 0) = i;  // class i+1 contributes i nodes
  for (int i = 1; i <= G + 1; ++i)
    preds.push_back(MatrixPredicate::conjunction(
        {MatrixPredicate::entry(m, 1, m, 1, Cmp::LE, 0),  // no saturated child
         weighted(w, Cmp::EQ, i - 1)}));
  CountMatrix w_cap = w;
  w_cap(m - 1, 0) = G + 1;  // saturated children already force saturation
  preds.push_back(weighted(std::move(w_cap), Cmp::GE, G + 1));
  RecursivePartition part(
      m, 1, 0, [](const TypedTree&) { return 2; },  // a leaf is 1 descendant
      std::move(preds));
  return make_validated("generation_size", std::move(part), G + 1, k);
}

Event exact_height_event(int target_height) {
  if (target_height < 2)
    throw DomainError("exact_height_event: target height must be >= 2");
  const int m = 3;
  // Classes at level l: 1 = height exactly l-1, 2 = height <= l-2,
  // 3 = height exactly l.  Base on trees of height <= 2 at level 2.
  std::vector<MatrixPredicate> preds;
  preds.push_back(MatrixPredicate::conjunction(
      {MatrixPredicate::entry(m, 1, 3, 1, Cmp::LE, 0),
       MatrixPredicate::entry(m, 1, 1, 1, Cmp::GE, 1)}));
  preds.push_back(MatrixPredicate::conjunction(
      {MatrixPredicate::entry(m, 1, 3, 1, Cmp::LE, 0),
       MatrixPredicate::entry(m, 1, 1, 1, Cmp::LE, 0)}));
  preds.push_back(MatrixPredicate::entry(m, 1, 3, 1, Cmp::GE, 1));
  RecursivePartition part(m, 1, 2,
                          [](const TypedTree& tree) {
                            switch (height(tree)) {
                              case 1: return 1;
                              case 0: return 2;
                              default: return 3;
                            }
                          },
                          std::move(preds));
  return make_validated("exact_height", std::move(part), 1, target_height + 1);
}

}  // namespace cgw
