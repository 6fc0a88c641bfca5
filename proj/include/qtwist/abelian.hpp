#pragma once

// Finitely generated abelian groups in invariant-factor form, with the
// bilinear functor tables for tensor, Tor_1, Hom and Ext^1 over the integers.

#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "qtwist/snf.hpp"

namespace qtwist {

class FgAbelianGroup {
 public:
  FgAbelianGroup() = default;

  // Canonicalizes: drops 1s, sorts cyclic orders into a divisibility chain.
  FgAbelianGroup(std::int64_t free_rank, std::vector<std::int64_t> cyclic_orders)
      : rank_(free_rank) {
    if (free_rank < 0) throw mode_error("negative free rank");
    std::vector<std::int64_t> orders;
    for (std::int64_t d : cyclic_orders) {
      if (d < 1) throw mode_error("cyclic order must be >= 1");
      if (d > 1) orders.push_back(d);
    }
    // pairwise (gcd, lcm) sweeps until d1 | d2 | ... holds
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < orders.size(); ++i)
        for (std::size_t j = i + 1; j < orders.size(); ++j) {
          const std::int64_t g = std::gcd(orders[i], orders[j]);
          const std::int64_t l = orders[i] / g * orders[j];
          if (l != orders[j] || g != orders[i]) {
            orders[i] = g;
            orders[j] = l;
            changed = true;
          }
        }
      std::erase(orders, 1);
    }
    std::sort(orders.begin(), orders.end());
    inv_ = std::move(orders);
  }

  static FgAbelianGroup trivial() { return FgAbelianGroup(0, {}); }
  static FgAbelianGroup free(std::int64_t r) { return FgAbelianGroup(r, {}); }
  static FgAbelianGroup cyclic(std::int64_t d) { return FgAbelianGroup(0, {d}); }

  // Cokernel of the column lattice of an integer presentation matrix
  // (rows = generators, cols = relations).
  static FgAbelianGroup from_presentation(const IntMatrix& m) {
    const SnfResult snf = smith_normal_form(m);
    std::vector<std::int64_t> orders;
    std::int64_t rank = m.rows;
    for (std::int64_t d : snf.diagonal()) {
      if (d == 0) continue;
      --rank;
      if (d > 1) orders.push_back(d);
    }
    return FgAbelianGroup(rank, std::move(orders));
  }

  std::int64_t free_rank() const { return rank_; }
  const std::vector<std::int64_t>& invariant_factors() const { return inv_; }
  bool is_trivial() const { return rank_ == 0 && inv_.empty(); }

  // Order of the torsion subgroup.
  std::int64_t torsion_order() const {
    std::int64_t o = 1;
    for (std::int64_t d : inv_) o *= d;
    return o;
  }

  friend bool operator==(const FgAbelianGroup& a, const FgAbelianGroup& b) {
    return a.rank_ == b.rank_ && a.inv_ == b.inv_;
  }

  friend FgAbelianGroup operator+(const FgAbelianGroup& a, const FgAbelianGroup& b) {  // direct sum
    std::vector<std::int64_t> orders = a.inv_;
    orders.insert(orders.end(), b.inv_.begin(), b.inv_.end());
    return FgAbelianGroup(a.rank_ + b.rank_, std::move(orders));
  }

  std::string str() const {
    if (is_trivial()) return "0";
    std::ostringstream os;
    bool first = true;
    if (rank_ == 1) {
      os << "Z";
      first = false;
    } else if (rank_ > 1) {
      os << "Z^" << rank_;
      first = false;
    }
    for (std::int64_t d : inv_) {
      if (!first) os << " + ";
      os << "Z/" << d;
      first = false;
    }
    return os.str();
  }

 private:
  std::int64_t rank_ = 0;
  std::vector<std::int64_t> inv_;  // divisibility chain, each >= 2
};

// Bilinear extension over Z^r (+) sum of cyclics, using the standard tables:
//   Z (x) G = G            Z/a (x) Z/b = Z/gcd
//   Tor(Z, G) = 0          Tor(Z/a, Z/b) = Z/gcd
//   Hom(Z, G) = G          Hom(Z/a, Z) = 0       Hom(Z/a, Z/b) = Z/gcd
//   Ext(Z, G) = 0          Ext(Z/a, Z) = Z/a     Ext(Z/a, Z/b) = Z/gcd

inline FgAbelianGroup tensor(const FgAbelianGroup& a, const FgAbelianGroup& b) {
  std::vector<std::int64_t> orders;
  for (std::int64_t d : b.invariant_factors())
    for (std::int64_t i = 0; i < a.free_rank(); ++i) orders.push_back(d);
  for (std::int64_t d : a.invariant_factors()) {
    for (std::int64_t i = 0; i < b.free_rank(); ++i) orders.push_back(d);
    for (std::int64_t e : b.invariant_factors()) orders.push_back(std::gcd(d, e));
  }
  return FgAbelianGroup(a.free_rank() * b.free_rank(), std::move(orders));
}

inline FgAbelianGroup tor(const FgAbelianGroup& a, const FgAbelianGroup& b) {
  std::vector<std::int64_t> orders;
  for (std::int64_t d : a.invariant_factors())
    for (std::int64_t e : b.invariant_factors()) orders.push_back(std::gcd(d, e));
  return FgAbelianGroup(0, std::move(orders));
}

inline FgAbelianGroup hom(const FgAbelianGroup& a, const FgAbelianGroup& b) {
  std::vector<std::int64_t> orders;
  for (std::int64_t e : b.invariant_factors())
    for (std::int64_t i = 0; i < a.free_rank(); ++i) orders.push_back(e);
  for (std::int64_t d : a.invariant_factors())
    for (std::int64_t e : b.invariant_factors()) orders.push_back(std::gcd(d, e));
  return FgAbelianGroup(a.free_rank() * b.free_rank(), std::move(orders));
}

inline FgAbelianGroup ext1(const FgAbelianGroup& a, const FgAbelianGroup& b) {
  std::vector<std::int64_t> orders;
  for (std::int64_t d : a.invariant_factors()) {
    for (std::int64_t i = 0; i < b.free_rank(); ++i) orders.push_back(d);
    for (std::int64_t e : b.invariant_factors()) orders.push_back(std::gcd(d, e));
  }
  return FgAbelianGroup(0, std::move(orders));
}

}  // namespace qtwist
