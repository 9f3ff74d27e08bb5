#include "polydens/parser.hpp"

#include <cctype>
#include <limits>
#include <string>

#include "polydens/error.hpp"

namespace polydens {

namespace {

constexpr std::uint32_t kMaxExponent = 4096;

class Parser {
 public:
  Parser(std::string_view text, std::size_t n_vars) : text_(text), n_vars_(n_vars) {}

  MultiPoly parse() {
    skip_space();
    if (pos_ == text_.size()) throw ParseError("empty expression", pos_);
    MultiPoly out = expression();
    skip_space();
    if (pos_ != text_.size()) {
      throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    }
    return out;
  }

 private:
  // expression := term (('+' | '-') term)*
  MultiPoly expression() {
    MultiPoly acc = term();
    for (;;) {
      skip_space();
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  // term := unary ('*' unary)*
  MultiPoly term() {
    MultiPoly acc = unary();
    for (;;) {
      skip_space();
      if (!accept('*')) return acc;
      acc = acc * unary();
    }
  }

  // unary := ('-' | '+') unary | power
  MultiPoly unary() {
    skip_space();
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  // power := primary ('^' exponent)*
  MultiPoly power() {
    MultiPoly base = primary();
    for (;;) {
      skip_space();
      if (!accept('^')) return base;
      skip_space();
      const std::size_t at = pos_;
      if (peek() == '-') throw ParseError("negative exponent", at);
      if (peek() == '(') {
        // Allow a parenthesised literal such as x1^(2).
        ++pos_;
        skip_space();
        if (peek() == '-') throw ParseError("negative exponent", pos_);
        const auto e = exponent();
        skip_space();
        expect(')');
        base = base.pow(e);
      } else {
        base = base.pow(exponent());
      }
    }
  }

  std::uint32_t exponent() {
    const std::size_t start = pos_;
    if (!std::isdigit(static_cast<unsigned char>(peek()))) {
      throw ParseError("expected a non-negative integer exponent", start);
    }
    std::uint64_t value = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      value = value * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
      if (value > kMaxExponent) throw ParseError("exponent too large", start);
      ++pos_;
    }
    return static_cast<std::uint32_t>(value);
  }

  // primary := integer | variable | '(' expression ')'
  MultiPoly primary() {
    skip_space();
    const std::size_t start = pos_;
    const char c = peek();
    if (c == '(') {
      ++pos_;
      MultiPoly inner = expression();
      skip_space();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      return MultiPoly::constant(n_vars_, BigInt(std::string(text_.substr(start, pos_ - start))));
    }
    if (c == 'x') {
      ++pos_;
      const std::size_t digits = pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      if (digits == pos_) throw ParseError("variable name needs an index (x1, x2, ...)", start);
      const std::string index_text(text_.substr(digits, pos_ - digits));
      if (index_text.size() > 9) throw ParseError("unknown variable x" + index_text, start);
      const auto index = std::stoul(index_text);
      if (index == 0 || index > n_vars_) {
        throw ParseError("unknown variable x" + index_text, start);
      }
      return MultiPoly::variable(n_vars_, index - 1);
    }
    if (pos_ == text_.size()) throw ParseError("unexpected end of input", pos_);
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ == text_.size()) throw ParseError(std::string("expected '") + c + "'", pos_);
      throw ParseError(std::string("expected '") + c + "' but found '" + text_[pos_] + "'", pos_);
    }
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view text_;
  std::size_t n_vars_;
  std::size_t pos_ = 0;
};

}  // namespace

MultiPoly parse_polynomial(std::string_view text, std::size_t n_vars) {
  if (n_vars == 0) throw DomainError("parse_polynomial: n_vars must be positive");
  MultiPoly f = Parser(text, n_vars).parse();
  if (f.is_zero()) throw ParseError("expression is the zero polynomial", 0);
  return f;
}

nlohmann::json to_json(const MultiPoly& f) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [e, c] : f.terms()) {
    terms.push_back({{"e", e}, {"c", c.get_str()}});
  }
  return {{"n", f.n_vars()}, {"terms", terms}};
}

MultiPoly poly_from_json(const nlohmann::json& j) {
  try {
    const auto n = j.at("n").get<std::size_t>();
    MultiPoly::TermMap terms;
    for (const auto& t : j.at("terms")) {
      auto e = t.at("e").get<Exponents>();
      BigInt c(t.at("c").get<std::string>());
      if (sgn(c) == 0) throw DomainError("polynomial JSON stores a zero coefficient");
      if (!terms.emplace(std::move(e), std::move(c)).second) {
        throw DomainError("polynomial JSON repeats an exponent vector");
      }
    }
    return MultiPoly(n, std::move(terms));
  } catch (const nlohmann::json::exception& ex) {
    throw DomainError(std::string("malformed polynomial JSON: ") + ex.what());
  } catch (const std::invalid_argument&) {
    throw DomainError("malformed coefficient in polynomial JSON");
  }
}

}  // namespace polydens
