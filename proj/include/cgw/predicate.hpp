#pragma once

#include <string_view>

#include "cgw/partition.hpp"

namespace cgw {

/// Parse a counting-matrix predicate.  Grammar (whitespace-insensitive):
///
///   pred   := and-or expression over unary terms ("and" binds tighter)
///   unary  := "not" unary | "(" pred ")" | atom
///   atom   := linear OP integer
///   linear := signed terms joined by "+" / "-"
///   term   := integer | integer "*" cell | cell
///   cell   := "c[" class "][" type "]"          (1-based indices)
///   OP     := "<=" | ">=" | "=" | "==" | "<" | ">" | "!="
///
/// Strict forms desugar: a < b into a <= b-1, a > b into a >= b+1, and
/// a != b into not (a = b); constant terms fold into the right-hand side.
/// Throws DomainError with the byte offset of the problem.
MatrixPredicate parse_predicate(std::string_view text, int num_classes,
                                int num_types);

}  // namespace cgw
