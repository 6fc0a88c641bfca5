#pragma once

// Letters and words of the free *-monoid on {s_i, t_r, u} and adjoints.

#include <compare>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qtwist/errors.hpp"

namespace qtwist {

enum class Family : std::uint8_t { S = 0, T = 1, U = 2 };

struct Letter {
  Family family = Family::S;
  int index = 1;  // 1..n for S, 1..m for T; ignored for U
  bool starred = false;

  friend auto operator<=>(const Letter&, const Letter&) = default;

  Letter adjoint() const { return Letter{family, index, !starred}; }

  std::string str() const {
    std::ostringstream os;
    switch (family) {
      case Family::S: os << 's' << index; break;
      case Family::T: os << 't' << index; break;
      case Family::U: os << 'u'; break;
    }
    if (starred) os << '*';
    return os.str();
  }
};

inline Letter s_(int i, bool starred = false) { return Letter{Family::S, i, starred}; }
inline Letter t_(int r, bool starred = false) { return Letter{Family::T, r, starred}; }
inline Letter u_(bool starred = false) { return Letter{Family::U, 0, starred}; }

struct Monomial {
  std::vector<Letter> letters;

  Monomial() = default;
  Monomial(std::initializer_list<Letter> ls) : letters(ls) {}
  explicit Monomial(std::vector<Letter> ls) : letters(std::move(ls)) {}

  static Monomial unit() { return Monomial{}; }

  std::size_t size() const { return letters.size(); }
  bool empty() const { return letters.empty(); }

  Monomial operator*(const Monomial& o) const {
    Monomial r = *this;
    r.letters.insert(r.letters.end(), o.letters.begin(), o.letters.end());
    return r;
  }

  Monomial adjoint() const {
    Monomial r;
    r.letters.reserve(letters.size());
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) r.letters.push_back(it->adjoint());
    return r;
  }

  // Term order: length first, then letterwise (family S < T < U, index, star).
  friend bool operator<(const Monomial& a, const Monomial& b) {
    if (a.letters.size() != b.letters.size()) return a.letters.size() < b.letters.size();
    return a.letters < b.letters;
  }
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.letters == b.letters; }

  std::string str() const {
    if (letters.empty()) return "1";
    std::ostringstream os;
    for (std::size_t i = 0; i < letters.size(); ++i) {
      if (i) os << ' ';
      os << letters[i].str();
    }
    return os.str();
  }
};

// (#unstarred S - #starred S, #unstarred T - #starred T); rejects u-letters.
inline std::pair<int, int> bidegree(const Monomial& mono) {
  int ds = 0, dt = 0;
  for (const Letter& l : mono.letters) {
    switch (l.family) {
      case Family::S: ds += l.starred ? -1 : 1; break;
      case Family::T: dt += l.starred ? -1 : 1; break;
      case Family::U:
        throw unsupported_letter("bidegree is undefined for words containing u");
    }
  }
  return {ds, dt};
}

// Plain index words over one family, used for s_mu / t_nu constructions.
using IndexWord = std::vector<int>;

inline Monomial s_word(const IndexWord& mu, bool starred = false) {
  Monomial r;
  if (!starred) {
    for (int i : mu) r.letters.push_back(s_(i));
  } else {
    for (auto it = mu.rbegin(); it != mu.rend(); ++it) r.letters.push_back(s_(*it, true));
  }
  return r;
}

inline Monomial t_word(const IndexWord& nu, bool starred = false) {
  Monomial r;
  if (!starred) {
    for (int r_ : nu) r.letters.push_back(t_(r_));
  } else {
    for (auto it = nu.rbegin(); it != nu.rend(); ++it) r.letters.push_back(t_(*it, true));
  }
  return r;
}

// All index words of exactly length k over alphabet {1..n}, in radix order.
inline std::vector<IndexWord> words_of_length(int n, int k) {
  std::vector<IndexWord> out;
  IndexWord w(static_cast<std::size_t>(k), 1);
  if (k == 0) {
    out.push_back({});
    return out;
  }
  while (true) {
    out.push_back(w);
    int pos = k - 1;
    while (pos >= 0 && w[pos] == n) {
      w[pos] = 1;
      --pos;
    }
    if (pos < 0) break;
    ++w[pos];
  }
  return out;
}

// All index words of length <= kmax, shortest first.
inline std::vector<IndexWord> words_up_to(int n, int kmax) {
  std::vector<IndexWord> out;
  for (int k = 0; k <= kmax; ++k) {
    auto shell = words_of_length(n, k);
    out.insert(out.end(), shell.begin(), shell.end());
  }
  return out;
}

}  // namespace qtwist
