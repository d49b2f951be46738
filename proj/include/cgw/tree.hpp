#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cgw/counts.hpp"

namespace cgw {

/// Rooted ordered tree with a positive integer type at every node.
struct TypedTree {
  int type = 1;
  std::vector<TypedTree> children;

  bool operator==(const TypedTree&) const = default;
};

/// Length of the longest root-to-leaf path; 0 for a single node.
int height(const TypedTree& tree);

std::int64_t num_nodes(const TypedTree& tree);

/// Number of nodes at exactly `depth` generations below the root.
std::int64_t generation_count(const TypedTree& tree, int depth);

/// Child counts of the root by type (length num_types); throws DomainError if
/// a child type exceeds num_types.
CountVector count_children(const TypedTree& tree, int num_types);

/// Parse the canonical text form: a node is `type` or `type(child,child,...)`,
/// e.g. "2(1,2(1,1))".  Whitespace is not allowed; errors report the byte
/// offset of the problem.
TypedTree parse_tree(std::string_view text);

/// Inverse of parse_tree; byte-exact canonical form.
std::string format_tree(const TypedTree& tree);

}  // namespace cgw
