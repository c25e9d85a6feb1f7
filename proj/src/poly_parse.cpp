#include <cctype>
#include <cstdlib>
#include <string>

#include "gtmp/errors.hpp"
#include "gtmp/poly.hpp"

namespace gtmp {
namespace {

// expr   := ['+'|'-'] term (('+'|'-') term)*
// term   := power ('*' power)*
// power  := atom ['^' integer]
// atom   := number | variable | '(' expr ')'
class Parser {
 public:
  Parser(std::string_view text, int num_vars, bool allow_x0)
      : text_(text), num_vars_(num_vars), allow_x0_(allow_x0) {}

  Polynomial parse() {
    skip_space();
    if (at_end()) throw ParseError("empty polynomial", pos_);
    Polynomial p = expr();
    skip_space();
    if (!at_end()) throw ParseError(std::string("unexpected character '") + text_[pos_] + "'", pos_);
    return p;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  Polynomial expr() {
    skip_space();
    bool negate = false;
    if (peek() == '+' || peek() == '-') {
      negate = peek() == '-';
      ++pos_;
    }
    Polynomial acc = term();
    if (negate) acc = -acc;
    for (;;) {
      skip_space();
      char c = peek();
      if (c != '+' && c != '-') break;
      ++pos_;
      Polynomial t = term();
      if (c == '+') {
        acc += t;
      } else {
        acc -= t;
      }
    }
    return acc;
  }

  Polynomial term() {
    Polynomial acc = power();
    for (;;) {
      skip_space();
      if (peek() != '*') break;
      ++pos_;
      if (peek() == '*') throw ParseError("'**' is not supported, use '^'", pos_);
      acc = acc * power();
    }
    skip_space();
    char c = peek();
    if (c == '/') throw ParseError("division is not polynomial syntax", pos_);
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '(' || c == '.') {
      throw ParseError("missing '*' between factors", pos_);
    }
    return acc;
  }

  Polynomial power() {
    Polynomial base = atom();
    skip_space();
    if (peek() != '^') return base;
    ++pos_;
    skip_space();
    std::size_t start = pos_;
    if (peek() == '-') throw ParseError("negative exponent is not polynomial syntax", pos_);
    if (!std::isdigit(static_cast<unsigned char>(peek()))) {
      throw ParseError("expected nonnegative integer exponent", pos_);
    }
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (peek() == '.') throw ParseError("fractional exponent is not polynomial syntax", pos_);
    int e = std::stoi(std::string(text_.substr(start, pos_ - start)));
    if (e > 64) throw ParseError("exponent too large", start);
    return base.pow(e);
  }

  Polynomial atom() {
    skip_space();
    if (at_end()) throw ParseError("unexpected end of input", pos_);
    char c = peek();
    if (c == '(') {
      std::size_t open = pos_;
      ++pos_;
      Polynomial inner = expr();
      skip_space();
      if (peek() != ')') throw ParseError("unclosed '(' opened at position " + std::to_string(open), pos_);
      ++pos_;
      return inner;
    }
    if (c == 'x' || c == 'X') {
      std::size_t start = pos_;
      ++pos_;
      if (!std::isdigit(static_cast<unsigned char>(peek()))) {
        throw ParseError("expected variable index after 'x'", pos_);
      }
      std::size_t digits = pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      int idx = std::stoi(std::string(text_.substr(digits, pos_ - digits)));
      int var = allow_x0_ ? idx : idx - 1;
      if (var < 0 || var >= num_vars_) {
        throw ParseError("variable x" + std::to_string(idx) + " out of range", start);
      }
      return Polynomial::variable(num_vars_, var);
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      if (c == '0' && pos_ + 1 < text_.size() && (text_[pos_ + 1] == 'x' || text_[pos_ + 1] == 'X')) {
        throw ParseError("missing '*' between factors", pos_ + 1);
      }
      char* end = nullptr;
      std::string buf(text_.substr(pos_));
      double v = std::strtod(buf.c_str(), &end);
      std::size_t used = static_cast<std::size_t>(end - buf.c_str());
      if (used == 0) throw ParseError("malformed number", pos_);
      pos_ += used;
      return Polynomial::constant(num_vars_, v);
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  std::string_view text_;
  int num_vars_;
  bool allow_x0_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, int num_vars, bool allow_x0) {
  return Parser(text, num_vars, allow_x0).parse();
}

}  // namespace gtmp
