#include "cgw/partition.hpp"

#include <utility>

#include "cgw/combinatorics.hpp"
#include "cgw/rng.hpp"

namespace cgw {

bool LinearAtom::evaluate(const CountMatrix& c) const {
  if (c.rows() != weights.rows() || c.cols() != weights.cols())
    throw DomainError("LinearAtom: matrix shape mismatch");
  std::int64_t lhs = 0;
  for (Eigen::Index i = 0; i < c.rows(); ++i)
    for (Eigen::Index j = 0; j < c.cols(); ++j) lhs += weights(i, j) * c(i, j);
  switch (cmp) {
    case Cmp::LE: return lhs <= rhs;
    case Cmp::EQ: return lhs == rhs;
    case Cmp::GE: return lhs >= rhs;
  }
  return false;
}

std::string LinearAtom::to_string() const {
  std::string out;
  for (Eigen::Index i = 0; i < weights.rows(); ++i)
    for (Eigen::Index j = 0; j < weights.cols(); ++j) {
      const std::int64_t w = weights(i, j);
      if (w == 0) continue;
      if (!out.empty()) out += w < 0 ? " - " : " + ";
      else if (w < 0) out += "-";
      const std::int64_t mag = w < 0 ? -w : w;
      if (mag != 1) out += std::to_string(mag) + "*";
      out += "c[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) + "]";
    }
  if (out.empty()) out = "0";
  switch (cmp) {
    case Cmp::LE: out += " <= "; break;
    case Cmp::EQ: out += " = "; break;
    case Cmp::GE: out += " >= "; break;
  }
  return out + std::to_string(rhs);
}

MatrixPredicate MatrixPredicate::atom(LinearAtom a) {
  MatrixPredicate p;
  p.kind_ = Kind::Atom;
  p.atom_ = std::move(a);
  return p;
}

MatrixPredicate MatrixPredicate::conjunction(std::vector<MatrixPredicate> terms) {
  MatrixPredicate p;
  p.kind_ = Kind::And;
  p.children_ = std::move(terms);
  return p;
}

MatrixPredicate MatrixPredicate::disjunction(std::vector<MatrixPredicate> terms) {
  MatrixPredicate p;
  p.kind_ = Kind::Or;
  p.children_ = std::move(terms);
  return p;
}

MatrixPredicate MatrixPredicate::negation(MatrixPredicate inner) {
  MatrixPredicate p;
  p.kind_ = Kind::Not;
  p.children_.push_back(std::move(inner));
  return p;
}

MatrixPredicate MatrixPredicate::entry(int num_classes, int num_types, int cls,
                                       int type, LinearAtom::Cmp cmp,
                                       std::int64_t rhs) {
  if (cls < 1 || cls > num_classes || type < 1 || type > num_types)
    throw DomainError("MatrixPredicate::entry: index out of range");
  LinearAtom a;
  a.weights = CountMatrix::Zero(num_classes, num_types);
  a.weights(cls - 1, type - 1) = 1;
  a.cmp = cmp;
  a.rhs = rhs;
  return atom(std::move(a));
}

bool MatrixPredicate::evaluate(const CountMatrix& c) const {
  switch (kind_) {
    case Kind::Atom:
      return atom_->evaluate(c);
    case Kind::And:
      for (const auto& child : children_)
        if (!child.evaluate(c)) return false;
      return true;
    case Kind::Or:
      for (const auto& child : children_)
        if (child.evaluate(c)) return true;
      return false;
    case Kind::Not:
      return !children_.front().evaluate(c);
  }
  return false;
}

std::string MatrixPredicate::to_string() const {
  auto wrap = [](const MatrixPredicate& p) {
    std::string s = p.to_string();
    if (p.kind_ == Kind::Atom || p.kind_ == Kind::Not) return s;
    return "(" + s + ")";
  };
  switch (kind_) {
    case Kind::Atom:
      return atom_->to_string();
    case Kind::And: {
      if (children_.empty()) return "0 <= 0";  // vacuous truth
      std::string out = wrap(children_.front());
      for (std::size_t c = 1; c < children_.size(); ++c)
        out += " and " + wrap(children_[c]);
      return out;
    }
    case Kind::Or: {
      if (children_.empty()) return "0 >= 1";  // vacuous falsity
      std::string out = wrap(children_.front());
      for (std::size_t c = 1; c < children_.size(); ++c)
        out += " or " + wrap(children_[c]);
      return out;
    }
    case Kind::Not:
      return "not " + wrap(children_.front());
  }
  return {};
}

RecursivePartition::RecursivePartition(
    int num_classes, int num_types, int base_height,
    std::function<int(const TypedTree&)> base_classifier,
    std::vector<MatrixPredicate> predicates,
    std::map<int, std::vector<MatrixPredicate>> level_overrides)
    : num_classes_(num_classes),
      num_types_(num_types),
      base_height_(base_height),
      base_classifier_(std::move(base_classifier)),
      predicates_(std::move(predicates)),
      level_overrides_(std::move(level_overrides)) {
  if (num_classes_ < 1) throw DomainError("RecursivePartition: need >= 1 class");
  if (num_types_ < 1) throw DomainError("RecursivePartition: need >= 1 type");
  if (base_height_ < 0)
    throw DomainError("RecursivePartition: negative base height");
  if (!base_classifier_)
    throw DomainError("RecursivePartition: missing base classifier");
  if (static_cast<int>(predicates_.size()) != num_classes_)
    throw DomainError("RecursivePartition: need one predicate per class");
  for (const auto& [level, preds] : level_overrides_) {
    if (level <= base_height_)
      throw DomainError("RecursivePartition: override at base level " +
                        std::to_string(level));
    if (static_cast<int>(preds.size()) != num_classes_)
      throw DomainError("RecursivePartition: override predicate count != m");
  }
}

const std::vector<MatrixPredicate>& RecursivePartition::predicates_at(
    int level) const {
  if (level <= base_height_)
    throw DomainError("predicates_at: level " + std::to_string(level) +
                      " not above the base height");
  if (auto it = level_overrides_.find(level); it != level_overrides_.end())
    return it->second;
  return predicates_;
}

std::vector<int> RecursivePartition::override_levels() const {
  std::vector<int> out;
  for (const auto& [level, preds] : level_overrides_) out.push_back(level);
  return out;
}

int RecursivePartition::classify_base(const TypedTree& tree) const {
  if (height(tree) > base_height_)
    throw DomainError("classify_base: tree higher than the base height");
  const int cls = base_classifier_(tree);
  if (cls < 1 || cls > num_classes_)
    throw DomainError("classify_base: classifier returned " +
                      std::to_string(cls) + ", outside 1.." +
                      std::to_string(num_classes_));
  return cls;
}

int RecursivePartition::classify_matrix(int level, const CountMatrix& c) const {
  const auto& preds = predicates_at(level);
  int found = 0;
  int count = 0;
  for (int i = 1; i <= num_classes_; ++i)
    if (preds[static_cast<std::size_t>(i - 1)].evaluate(c)) {
      found = i;
      ++count;
    }
  if (count != 1)
    throw NotAPartitionError("classify_matrix: " + std::to_string(count) +
                             " predicates hold at level " +
                             std::to_string(level));
  return found;
}

int classify(const TypedTree& tree, int level, const RecursivePartition& part) {
  if (level < 0) throw DomainError("classify: negative level");
  if (height(tree) > level)
    throw DomainError("classify: tree higher than the level allows");
  auto rec = [&part](auto&& self, const TypedTree& node, int l) -> int {
    if (l <= part.base_height()) return part.classify_base(node);
    CountMatrix c = CountMatrix::Zero(part.num_classes(), part.num_types());
    for (const auto& child : node.children) {
      if (child.type < 1 || child.type > part.num_types())
        throw DomainError("classify: child type outside 1..num_types");
      ++c(self(self, child, l - 1) - 1, child.type - 1);
    }
    return part.classify_matrix(l, c);
  };
  return rec(rec, tree, level);
}

CountMatrix count_matrix(const TypedTree& tree, int level,
                         const RecursivePartition& part) {
  if (level <= part.base_height())
    throw DomainError("count_matrix: level must exceed the base height");
  if (height(tree) > level)
    throw DomainError("count_matrix: tree higher than the level allows");
  CountMatrix c = CountMatrix::Zero(part.num_classes(), part.num_types());
  for (const auto& child : tree.children) {
    if (child.type < 1 || child.type > part.num_types())
      throw DomainError("count_matrix: child type outside 1..num_types");
    ++c(classify(child, level - 1, part) - 1, child.type - 1);
  }
  return c;
}

namespace {

/// Count how many predicates accept c; fill `check` and return false on the
/// first violation found.
bool probe(const RecursivePartition& part, int level, const CountMatrix& c,
           PartitionCheck& check) {
  int holds = 0;
  for (int i = 1; i <= part.num_classes(); ++i)
    if (part.predicates_at(level)[static_cast<std::size_t>(i - 1)].evaluate(c))
      ++holds;
  if (holds == 1) return true;
  check.ok = false;
  check.counterexample = c;
  check.level = level;
  check.holds = holds;
  return false;
}

}  // namespace

PartitionCheck validate_partition(const RecursivePartition& part,
                                  std::int64_t max_entry_sum,
                                  int random_probes) {
  PartitionCheck check;
  const int m = part.num_classes();
  const int theta = part.num_types();
  const int cells = m * theta;
  // Every distinct predicate list: each override level, plus one level where
  // the default list is in force.
  std::vector<int> levels = part.override_levels();
  int default_level = part.base_height() + 1;
  while (std::find(levels.begin(), levels.end(), default_level) != levels.end())
    ++default_level;
  levels.push_back(default_level);
  // Exhaustive small matrices: all entry vectors with sum <= max_entry_sum.
  for (int level : levels) {
    for (std::int64_t s = 0; s <= max_entry_sum; ++s) {
      bool bad = false;
      for_each_composition(s, cells, [&](const CountVector& flat) {
        if (bad) return;
        CountMatrix c(m, theta);
        int n = 0;
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < theta; ++j) c(i, j) = flat[n++];
        if (!probe(part, level, c, check)) bad = true;
      });
      if (bad) return check;
    }
    // Randomized probes with large, roughly log-uniform entries.
    RngStream rng(0x7a7e5);
    for (int r = 0; r < random_probes; ++r) {
      CountMatrix c(m, theta);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < theta; ++j) {
          const double u = rng.next_double();
          c(i, j) = static_cast<std::int64_t>(std::exp(u * 6.9)) - 1;  // 0..~990
        }
      if (!probe(part, level, c, check)) return check;
    }
  }
  return check;
}

}  // namespace cgw
