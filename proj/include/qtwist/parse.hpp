#pragma once

// Textual expression grammar shared by the CLI and test fixtures.
//
//   expr    := term (('+' | '-') term)*
//   term    := factor (factor | '*' factor)*          juxtaposition = product
//   factor  := atom '*'?                              postfix '*' = adjoint
//   atom    := generator | scalar | '(' expr ')'
//   scalar  := INT | REAL | REALi | 'q' ['^' INT] | 'h' ['^' INT]
//   generator := s<digits> | t<digits> | 'u'
//
// A '*' glued to the end of an atom is the adjoint; a free-standing '*' is
// multiplication.  print(parse(print(x))) == print(x) byte for byte.

#include <cctype>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qtwist/element.hpp"
#include "qtwist/params.hpp"

namespace qtwist {

struct parse_error : error {
  explicit parse_error(const std::string& what) : error("parse error: " + what) {}
};

namespace detail {

struct Token {
  enum Kind { End, Plus, Minus, StarMul, StarAdj, LParen, RParen, Caret, Int, Real, Imag, Gen, Q, H, U } kind;
  std::string text;
  std::int64_t ivalue = 0;
  double dvalue = 0.0;
  Family family = Family::S;
  int index = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    bool spaced = false;
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
      spaced = true;
    }
    if (pos_ >= src_.size()) {
      set({Token::End});
      return;
    }
    const char c = src_[pos_];
    switch (c) {
      case '+': ++pos_; set({Token::Plus}); return;
      case '-': ++pos_; set({Token::Minus}); return;
      case '(': ++pos_; set({Token::LParen}); return;
      case ')': ++pos_; set({Token::RParen}); return;
      case '^': ++pos_; set({Token::Caret}); return;
      case '*': {
        ++pos_;
        const bool adj = !spaced && prev_atom_end_;
        set({adj ? Token::StarAdj : Token::StarMul});
        return;
      }
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      bool real = false;
      if (pos_ < src_.size() && src_[pos_] == '.') {
        real = true;
        ++pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
      if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
        std::size_t e = pos_ + 1;
        if (e < src_.size() && (src_[e] == '+' || src_[e] == '-')) ++e;
        if (e < src_.size() && std::isdigit(static_cast<unsigned char>(src_[e]))) {
          real = true;
          pos_ = e;
          while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        }
      }
      Token t;
      t.text = src_.substr(start, pos_ - start);
      if (pos_ < src_.size() && src_[pos_] == 'i') {
        ++pos_;
        t.kind = Token::Imag;
        t.dvalue = std::stod(t.text);
      } else if (real) {
        t.kind = Token::Real;
        t.dvalue = std::stod(t.text);
      } else {
        t.kind = Token::Int;
        t.ivalue = std::stoll(t.text);
      }
      set(t);
      return;
    }
    if (c == 's' || c == 't') {
      std::size_t start = pos_++;
      if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
        throw parse_error(std::string("generator '") + c + "' needs an index");
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      Token t;
      t.kind = Token::Gen;
      t.family = c == 's' ? Family::S : Family::T;
      t.index = static_cast<int>(std::stoll(src_.substr(start + 1, pos_ - start - 1)));
      set(t);
      return;
    }
    if (c == 'u') { ++pos_; set({Token::U}); return; }
    if (c == 'q') { ++pos_; set({Token::Q}); return; }
    if (c == 'h') { ++pos_; set({Token::H}); return; }
    throw parse_error(std::string("unexpected character '") + c + "'");
  }

  void set(Token t) {
    tok_ = t;
    prev_atom_end_ = t.kind == Token::Gen || t.kind == Token::U || t.kind == Token::RParen ||
                     t.kind == Token::Q || t.kind == Token::H || t.kind == Token::Int ||
                     t.kind == Token::Real || t.kind == Token::Imag || t.kind == Token::StarAdj;
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  Token tok_{Token::End};
  bool prev_atom_end_ = false;
};

class Parser {
 public:
  Parser(const std::string& src, const Params& params) : lex_(src), params_(params) {}

  AlgebraElement parse() {
    AlgebraElement e = expr();
    if (lex_.peek().kind != Token::End) throw parse_error("trailing input");
    return e;
  }

 private:
  AlgebraElement expr() {
    bool neg = false;
    if (lex_.peek().kind == Token::Plus) lex_.next();
    else if (lex_.peek().kind == Token::Minus) { lex_.next(); neg = true; }
    AlgebraElement acc = term();
    if (neg) acc = -acc;
    while (lex_.peek().kind == Token::Plus || lex_.peek().kind == Token::Minus) {
      const bool minus = lex_.next().kind == Token::Minus;
      AlgebraElement t = term();
      acc = minus ? acc - t : acc + t;
    }
    return acc;
  }

  AlgebraElement term() {
    AlgebraElement acc = factor();
    while (true) {
      const Token::Kind k = lex_.peek().kind;
      if (k == Token::StarMul) {
        lex_.next();
        acc = acc * factor();
      } else if (starts_factor(k)) {
        acc = acc * factor();
      } else {
        return acc;
      }
    }
  }

  static bool starts_factor(Token::Kind k) {
    return k == Token::Gen || k == Token::U || k == Token::LParen || k == Token::Int ||
           k == Token::Real || k == Token::Imag || k == Token::Q || k == Token::H;
  }

  AlgebraElement factor() {
    AlgebraElement a = atom();
    while (lex_.peek().kind == Token::StarAdj) {
      lex_.next();
      a = a.adjoint();
    }
    return a;
  }

  AlgebraElement atom() {
    const Token t = lex_.next();
    switch (t.kind) {
      case Token::Gen: {
        const int limit = t.family == Family::S ? params_.n() : params_.m();
        if (t.index < 1 || t.index > limit)
          throw parse_error("generator index out of range: " +
                            Letter{t.family, t.index, false}.str());
        return AlgebraElement::term(Monomial{Letter{t.family, t.index, false}}, params_.one());
      }
      case Token::U:
        return AlgebraElement::term(Monomial{u_()}, params_.one());
      case Token::Int:
        return AlgebraElement::term(Monomial::unit(), params_.integer(t.ivalue));
      case Token::Real:
        return AlgebraElement::term(Monomial::unit(), params_.numeric(t.dvalue));
      case Token::Imag:
        return AlgebraElement::term(Monomial::unit(),
                                    params_.numeric(std::complex<double>(0.0, t.dvalue)));
      case Token::Q:
        return AlgebraElement::term(Monomial::unit(), scalar_power(false));
      case Token::H:
        return AlgebraElement::term(Monomial::unit(), scalar_power(true));
      case Token::LParen: {
        AlgebraElement e = expr();
        if (lex_.next().kind != Token::RParen) throw parse_error("expected ')'");
        return e;
      }
      default:
        throw parse_error("unexpected token");
    }
  }

  Scalar scalar_power(bool half) {
    std::int64_t k = 1;
    if (lex_.peek().kind == Token::Caret) {
      lex_.next();
      bool neg = false;
      if (lex_.peek().kind == Token::Minus) { lex_.next(); neg = true; }
      const Token e = lex_.next();
      if (e.kind != Token::Int) throw parse_error("expected an integer exponent");
      k = neg ? -e.ivalue : e.ivalue;
    }
    if (params_.exact())
      return half ? Scalar::h_power(k, params_.h_modulus()) : Scalar::q_power(k, params_.h_modulus());
    if (half) throw mode_error("half-angle literal h is exact-mode only");
    return Scalar::numeric(std::pow(params_.q_value(), static_cast<double>(k)));
  }

  Lexer lex_;
  const Params& params_;
};

}  // namespace detail

inline AlgebraElement parse_element(const std::string& src, const Params& params) {
  return detail::Parser(src, params).parse();
}

inline std::string print_element(const AlgebraElement& x) { return x.str(); }

}  // namespace qtwist
