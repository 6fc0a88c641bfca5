#pragma once

// Coefficient scalars for the twisted isometry algebras.
//
// Two backends share one value type:
//   * Exact:   integer Laurent polynomials in the half-angle phase h, with
//              q = h^2.  For a rational angle q = exp(2*pi*i*a/b) the
//              exponents live modulo 2b, so equality is plain map equality.
//   * Numeric: complex<double>, used for the |q| < 1 regime.
//
// Exact values with modulus 0 keep unbounded exponents (irrational angle);
// equality stays decidable either way.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>

#include "qtwist/errors.hpp"

namespace qtwist {

class Scalar {
 public:
  using Exponent = std::int64_t;
  using Coeff = std::int64_t;

  Scalar() : exact_(true), modulus_(0) {}

  static Scalar exact_int(Coeff c, Exponent modulus = 0) {
    Scalar s;
    s.modulus_ = modulus;
    if (c != 0) s.coef_[0] = c;
    return s;
  }

  // h^k, optionally reduced mod `modulus`.
  static Scalar h_power(Exponent k, Exponent modulus) {
    Scalar s;
    s.modulus_ = modulus;
    s.coef_[reduce(k, modulus)] = 1;
    return s;
  }

  // q^k = h^(2k).
  static Scalar q_power(Exponent k, Exponent modulus) { return h_power(2 * k, modulus); }

  static Scalar numeric(std::complex<double> z) {
    Scalar s;
    s.exact_ = false;
    s.num_ = z;
    return s;
  }

  bool exact() const { return exact_; }
  Exponent modulus() const { return modulus_; }
  const std::map<Exponent, Coeff>& coefficients() const { return coef_; }
  std::complex<double> numeric_value() const {
    if (exact_) throw backend_mismatch("numeric_value() on an exact scalar");
    return num_;
  }

  bool is_zero(double tol = 0.0) const {
    if (exact_) return coef_.empty();
    return std::abs(num_) <= tol;
  }

  bool is_one() const {
    if (exact_) return coef_.size() == 1 && coef_.begin()->first == 0 && coef_.begin()->second == 1;
    return num_ == std::complex<double>(1.0, 0.0);
  }

  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    if (a.exact_ != b.exact_) throw backend_mismatch("adding exact and numeric scalars");
    if (!a.exact_) return numeric(a.num_ + b.num_);
    Scalar r;
    r.modulus_ = unify(a, b);
    r.coef_ = a.coef_;
    for (const auto& [k, c] : b.coef_) add_into(r.coef_, reduce(k, r.modulus_), c);
    if (r.modulus_ != a.modulus_) {
      // a carried modulus 0 with support {0}; re-reduce its entries (no-op).
      std::map<Exponent, Coeff> red;
      for (const auto& [k, c] : r.coef_) add_into(red, reduce(k, r.modulus_), c);
      r.coef_ = std::move(red);
    }
    return r;
  }

  friend Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }

  Scalar operator-() const {
    Scalar r = *this;
    if (!exact_) {
      r.num_ = -num_;
      return r;
    }
    for (auto& [k, c] : r.coef_) c = -c;
    return r;
  }

  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    if (a.exact_ != b.exact_) throw backend_mismatch("multiplying exact and numeric scalars");
    if (!a.exact_) return numeric(a.num_ * b.num_);
    Scalar r;
    r.modulus_ = unify(a, b);
    for (const auto& [ka, ca] : a.coef_)
      for (const auto& [kb, cb] : b.coef_) add_into(r.coef_, reduce(ka + kb, r.modulus_), ca * cb);
    return r;
  }

  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

  Scalar conj() const {
    Scalar r;
    if (!exact_) {
      r.exact_ = false;
      r.num_ = std::conj(num_);
      return r;
    }
    r.modulus_ = modulus_;
    for (const auto& [k, c] : coef_) add_into(r.coef_, reduce(-k, modulus_), c);
    return r;
  }

  // Numeric value; exact scalars evaluate at h = exp(i*pi*phi0).
  std::complex<double> eval(double phi0) const {
    if (!exact_) return num_;
    std::complex<double> z = 0.0;
    for (const auto& [k, c] : coef_) {
      const double ang = std::numbers::pi * phi0 * static_cast<double>(k);
      z += static_cast<double>(c) * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return z;
  }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    if (a.exact_ != b.exact_) return false;
    if (!a.exact_) return a.num_ == b.num_;
    if (a.modulus_ != b.modulus_ && !a.int_only() && !b.int_only()) return false;
    return a.coef_ == b.coef_;
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  // Canonical text form, parseable by the expression grammar.
  //   {}            -> "0"
  //   {0:c}         -> "c"
  //   {2j:1}        -> "q^j" ("q" for j = 1)
  //   {k:1}, k odd  -> "h^k" ("h" for k = 1)
  //   single term   -> "[c ]h^k"  (sign kept)
  //   several terms -> "(t1 + t2 - ...)" ordered by exponent
  std::string str() const {
    if (!exact_) return numeric_str();
    if (coef_.empty()) return "0";
    if (coef_.size() == 1) return term_str(coef_.begin()->first, coef_.begin()->second, /*lead=*/true);
    std::ostringstream os;
    os << '(';
    bool first = true;
    for (const auto& [k, c] : coef_) {
      if (first) {
        os << term_str(k, c, true);
        first = false;
      } else {
        os << (c < 0 ? " - " : " + ") << term_str(k, c < 0 ? -c : c, true);
      }
    }
    os << ')';
    return os.str();
  }

 private:
  bool int_only() const {
    return exact_ && (coef_.empty() || (coef_.size() == 1 && coef_.begin()->first == 0));
  }

  static Exponent unify(const Scalar& a, const Scalar& b) {
    if (a.modulus_ == b.modulus_) return a.modulus_;
    if (a.int_only()) return b.modulus_;
    if (b.int_only()) return a.modulus_;
    throw backend_mismatch("exact scalars over different phase rings");
  }

  static Exponent reduce(Exponent k, Exponent modulus) {
    if (modulus == 0) return k;
    Exponent r = k % modulus;
    return r < 0 ? r + modulus : r;
  }

  static void add_into(std::map<Exponent, Coeff>& m, Exponent k, Coeff c) {
    auto it = m.find(k);
    if (it == m.end()) {
      if (c != 0) m[k] = c;
      return;
    }
    it->second += c;
    if (it->second == 0) m.erase(it);
  }

  static std::string double_str(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  }

  std::string numeric_str() const {
    if (num_.imag() == 0.0) return double_str(num_.real());
    std::ostringstream os;
    os << '(' << double_str(num_.real()) << (num_.imag() < 0 ? " - " : " + ")
       << double_str(std::abs(num_.imag())) << "i)";
    return os.str();
  }

  static std::string term_str(Exponent k, Coeff c, bool lead) {
    std::ostringstream os;
    if (k == 0) {
      os << c;
      return os.str();
    }
    if (c == -1)
      os << '-';
    else if (c != 1)
      os << c << ' ';
    (void)lead;
    if (k % 2 == 0) {
      const Exponent j = k / 2;
      os << 'q';
      if (j != 1) os << '^' << j;
    } else {
      os << 'h';
      if (k != 1) os << '^' << k;
    }
    return os.str();
  }

  bool exact_;
  std::map<Exponent, Coeff> coef_;  // exponent of h -> integer coefficient
  Exponent modulus_ = 0;            // 0: unbounded exponents
  std::complex<double> num_{0.0, 0.0};
};

inline Scalar conj(const Scalar& s) { return s.conj(); }

}  // namespace qtwist
