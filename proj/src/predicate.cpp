#include "cgw/predicate.hpp"

#include <cctype>
#include <charconv>
#include <string>

#include "cgw/errors.hpp"

namespace cgw {

namespace {

class PredicateParser {
 public:
  PredicateParser(std::string_view text, int num_classes, int num_types)
      : text_(text), m_(num_classes), theta_(num_types) {}

  MatrixPredicate run() {
    MatrixPredicate p = parse_or();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return p;
  }

 private:
  MatrixPredicate parse_or() {
    std::vector<MatrixPredicate> terms;
    terms.push_back(parse_and());
    while (accept_word("or")) terms.push_back(parse_and());
    if (terms.size() == 1) return std::move(terms.front());
    return MatrixPredicate::disjunction(std::move(terms));
  }

  MatrixPredicate parse_and() {
    std::vector<MatrixPredicate> terms;
    terms.push_back(parse_unary());
    while (accept_word("and")) terms.push_back(parse_unary());
    if (terms.size() == 1) return std::move(terms.front());
    return MatrixPredicate::conjunction(std::move(terms));
  }

  MatrixPredicate parse_unary() {
    if (accept_word("not"))
      return MatrixPredicate::negation(parse_unary());
    skip_space();
    if (peek() == '(') {
      ++pos_;
      MatrixPredicate inner = parse_or();
      skip_space();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    return parse_atom();
  }

  MatrixPredicate parse_atom() {
    LinearAtom atom;
    atom.weights = CountMatrix::Zero(m_, theta_);
    std::int64_t constant = 0;
    parse_linear(atom.weights, constant);
    skip_space();
    std::string op;
    for (const char* candidate : {"<=", ">=", "==", "!=", "=", "<", ">"}) {
      std::string_view cand(candidate);
      if (text_.substr(pos_, cand.size()) == cand) {
        op = cand;
        pos_ += cand.size();
        break;
      }
    }
    if (op.empty()) fail("expected a comparison operator");
    skip_space();
    std::int64_t rhs = parse_int();
    rhs -= constant;  // fold left-side constants into the bound
    bool negate = false;
    if (op == "<=") {
      atom.cmp = LinearAtom::Cmp::LE;
    } else if (op == ">=") {
      atom.cmp = LinearAtom::Cmp::GE;
    } else if (op == "=" || op == "==") {
      atom.cmp = LinearAtom::Cmp::EQ;
    } else if (op == "<") {
      atom.cmp = LinearAtom::Cmp::LE;
      rhs -= 1;
    } else if (op == ">") {
      atom.cmp = LinearAtom::Cmp::GE;
      rhs += 1;
    } else {  // !=
      atom.cmp = LinearAtom::Cmp::EQ;
      negate = true;
    }
    atom.rhs = rhs;
    MatrixPredicate p = MatrixPredicate::atom(std::move(atom));
    return negate ? MatrixPredicate::negation(std::move(p)) : std::move(p);
  }

  void parse_linear(CountMatrix& weights, std::int64_t& constant) {
    std::int64_t sign = 1;
    skip_space();
    if (peek() == '-') {
      sign = -1;
      ++pos_;
    } else if (peek() == '+') {
      ++pos_;
    }
    parse_term(weights, constant, sign);
    while (true) {
      skip_space();
      if (peek() == '+')
        sign = 1;
      else if (peek() == '-')
        sign = -1;
      else
        break;
      ++pos_;
      parse_term(weights, constant, sign);
    }
  }

  void parse_term(CountMatrix& weights, std::int64_t& constant,
                  std::int64_t sign) {
    skip_space();
    if (peek() == 'c') {
      auto [cls, type] = parse_cell();
      weights(cls - 1, type - 1) += sign;
      return;
    }
    const std::int64_t coeff = parse_int();
    skip_space();
    if (peek() == '*') {
      ++pos_;
      skip_space();
      auto [cls, type] = parse_cell();
      weights(cls - 1, type - 1) += sign * coeff;
      return;
    }
    constant += sign * coeff;
  }

  std::pair<int, int> parse_cell() {
    if (peek() != 'c') fail("expected c[class][type]");
    ++pos_;
    const int cls = parse_bracketed_index(m_, "class");
    const int type = parse_bracketed_index(theta_, "type");
    return {cls, type};
  }

  int parse_bracketed_index(int bound, const char* what) {
    skip_space();
    if (peek() != '[') fail(std::string("expected '[' before ") + what);
    ++pos_;
    skip_space();
    const std::int64_t value = parse_int();
    if (value < 1 || value > bound)
      fail(std::string(what) + " index " + std::to_string(value) +
           " outside 1.." + std::to_string(bound));
    skip_space();
    if (peek() != ']') fail(std::string("expected ']' after ") + what);
    ++pos_;
    return static_cast<int>(value);
  }

  std::int64_t parse_int() {
    skip_space();
    std::int64_t value = 0;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr == begin) fail("expected an integer");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return value;
  }

  bool accept_word(std::string_view word) {
    skip_space();
    if (text_.substr(pos_, word.size()) != word) return false;
    const std::size_t after = pos_ + word.size();
    if (after < text_.size() &&
        (std::isalnum(static_cast<unsigned char>(text_[after])) ||
         text_[after] == '_'))
      return false;  // prefix of a longer identifier
    pos_ = after;
    return true;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw DomainError("predicate: " + what + " at offset " +
                      std::to_string(pos_) + " in \"" + std::string(text_) +
                      "\"");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int m_;
  int theta_;
};

}  // namespace

MatrixPredicate parse_predicate(std::string_view text, int num_classes,
                                int num_types) {
  if (num_classes < 1 || num_types < 1)
    throw DomainError("parse_predicate: need positive class and type counts");
  return PredicateParser(text, num_classes, num_types).run();
}

}  // namespace cgw
