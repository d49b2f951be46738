#include "cgw/tree.hpp"

#include <charconv>

#include "cgw/errors.hpp"

namespace cgw {

int height(const TypedTree& tree) {
  int h = 0;
  for (const auto& child : tree.children) h = std::max(h, 1 + height(child));
  return h;
}

std::int64_t num_nodes(const TypedTree& tree) {
  std::int64_t n = 1;
  for (const auto& child : tree.children) n += num_nodes(child);
  return n;
}

std::int64_t generation_count(const TypedTree& tree, int depth) {
  if (depth < 0) return 0;
  if (depth == 0) return 1;
  std::int64_t n = 0;
  for (const auto& child : tree.children) n += generation_count(child, depth - 1);
  return n;
}

CountVector count_children(const TypedTree& tree, int num_types) {
  CountVector w = CountVector::Zero(num_types);
  for (const auto& child : tree.children) {
    if (child.type < 1 || child.type > num_types)
      throw DomainError("count_children: child type " +
                        std::to_string(child.type) + " outside 1.." +
                        std::to_string(num_types));
    ++w[child.type - 1];
  }
  return w;
}

namespace {

class TreeParser {
 public:
  explicit TreeParser(std::string_view text) : text_(text) {}

  TypedTree run() {
    TypedTree tree = parse_node();
    if (pos_ != text_.size()) fail("trailing characters after tree");
    return tree;
  }

 private:
  TypedTree parse_node() {
    TypedTree node;
    node.type = parse_type();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      node.children.push_back(parse_node());
      while (pos_ < text_.size() && text_[pos_] == ',') {
        ++pos_;
        node.children.push_back(parse_node());
      }
      if (pos_ >= text_.size() || text_[pos_] != ')')
        fail("expected ',' or ')'");
      ++pos_;
    }
    return node;
  }

  int parse_type() {
    int value = 0;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr == begin) fail("expected node type");
    if (value < 1) fail("node type must be >= 1");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return value;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw DomainError("parse_tree: " + what + " at offset " +
                      std::to_string(pos_));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void format_into(const TypedTree& tree, std::string& out) {
  out += std::to_string(tree.type);
  if (tree.children.empty()) return;
  out += '(';
  for (std::size_t c = 0; c < tree.children.size(); ++c) {
    if (c > 0) out += ',';
    format_into(tree.children[c], out);
  }
  out += ')';
}

}  // namespace

TypedTree parse_tree(std::string_view text) {
  if (text.empty()) throw DomainError("parse_tree: empty input");
  return TreeParser(text).run();
}

std::string format_tree(const TypedTree& tree) {
  std::string out;
  out.reserve(static_cast<std::size_t>(num_nodes(tree)) * 2);
  format_into(tree, out);
  return out;
}

}  // namespace cgw
