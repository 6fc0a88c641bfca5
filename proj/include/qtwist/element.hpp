#pragma once

// Finite scalar-weighted sums of monomials with involution.  The product is
// the free concatenation product; normal ordering is a separate pass.

#include <map>
#include <sstream>
#include <string>
#include <utility>

#include "qtwist/scalar.hpp"
#include "qtwist/word.hpp"

namespace qtwist {

class AlgebraElement {
 public:
  using TermMap = std::map<Monomial, Scalar>;

  AlgebraElement() = default;

  static AlgebraElement zero() { return {}; }

  static AlgebraElement term(Monomial mono, Scalar coeff) {
    AlgebraElement e;
    e.add_term(std::move(mono), std::move(coeff));
    return e;
  }

  static AlgebraElement monomial(Monomial mono, const Scalar& one) {
    return term(std::move(mono), one);
  }

  const TermMap& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  void add_term(Monomial mono, Scalar coeff) {
    if (coeff.is_zero()) return;
    auto it = terms_.find(mono);
    if (it == terms_.end()) {
      terms_.emplace(std::move(mono), std::move(coeff));
      return;
    }
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }

  friend AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
    AlgebraElement r = a;
    for (const auto& [mono, c] : b.terms_) r.add_term(mono, c);
    return r;
  }

  friend AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
    AlgebraElement r = a;
    for (const auto& [mono, c] : b.terms_) r.add_term(mono, -c);
    return r;
  }

  AlgebraElement operator-() const {
    AlgebraElement r;
    for (const auto& [mono, c] : terms_) r.terms_.emplace(mono, -c);
    return r;
  }

  // Free product: bilinear extension of word concatenation.
  friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
    AlgebraElement r;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    return r;
  }

  friend AlgebraElement operator*(const Scalar& c, const AlgebraElement& a) {
    AlgebraElement r;
    for (const auto& [mono, ca] : a.terms_) r.add_term(mono, c * ca);
    return r;
  }

  AlgebraElement& operator+=(const AlgebraElement& o) { return *this = *this + o; }
  AlgebraElement& operator-=(const AlgebraElement& o) { return *this = *this - o; }
  AlgebraElement& operator*=(const AlgebraElement& o) { return *this = *this * o; }

  AlgebraElement adjoint() const {
    AlgebraElement r;
    for (const auto& [mono, c] : terms_) r.add_term(mono.adjoint(), c.conj());
    return r;
  }

  bool is_zero(double tol = 0.0) const {
    for (const auto& [mono, c] : terms_)
      if (!c.is_zero(tol)) return false;
    return true;
  }

  double max_abs_coeff(double phi0 = 0.0) const {
    double mx = 0.0;
    for (const auto& [mono, c] : terms_) mx = std::max(mx, std::abs(c.eval(phi0)));
    return mx;
  }

  std::size_t max_word_length() const {
    std::size_t mx = 0;
    for (const auto& [mono, c] : terms_) mx = std::max(mx, mono.size());
    return mx;
  }

  friend bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
    return a.terms_ == b.terms_;
  }

  // Canonical text form: terms in monomial order, "scalar * word" per term.
  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [mono, c] : terms_) {
      std::string cs = c.str();
      bool neg = false;
      if (cs.size() > 1 && cs[0] == '-') {  // single-term negative scalar
        neg = true;
        cs = cs.substr(1);
      }
      if (first) {
        if (neg) os << '-';
        first = false;
      } else {
        os << (neg ? " - " : " + ");
      }
      if (mono.empty()) {
        os << cs;
      } else if (cs == "1") {
        os << mono.str();
      } else {
        os << cs << " * " << mono.str();
      }
    }
    return os.str();
  }

 private:
  TermMap terms_;
};

inline AlgebraElement adjoint(const AlgebraElement& x) { return x.adjoint(); }

}  // namespace qtwist
