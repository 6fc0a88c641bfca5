#pragma once

// Smith normal form over the integers with unimodular transforms:
// U * M * V = D, D diagonal with a divisibility chain d1 | d2 | ...

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <vector>

#include "qtwist/errors.hpp"

namespace qtwist {

struct IntMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::int64_t> a;

  IntMatrix() = default;
  IntMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0) {}

  std::int64_t& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  std::int64_t at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

  static IntMatrix identity(int k) {
    IntMatrix m(k, k);
    for (int i = 0; i < k; ++i) m.at(i, i) = 1;
    return m;
  }

  friend IntMatrix operator*(const IntMatrix& x, const IntMatrix& y) {
    IntMatrix r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
      for (int k = 0; k < x.cols; ++k) {
        const std::int64_t v = x.at(i, k);
        if (v == 0) continue;
        for (int j = 0; j < y.cols; ++j) r.at(i, j) += v * y.at(k, j);
      }
    return r;
  }

  friend bool operator==(const IntMatrix& x, const IntMatrix& y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
  }
};

struct SnfResult {
  IntMatrix d;  // diagonal with divisibility chain, nonnegative entries
  IntMatrix u;  // rows x rows, |det| = 1
  IntMatrix v;  // cols x cols, |det| = 1
  std::vector<std::int64_t> diagonal() const {
    std::vector<std::int64_t> out;
    const int k = std::min(d.rows, d.cols);
    for (int i = 0; i < k; ++i) out.push_back(d.at(i, i));
    return out;
  }
};

inline SnfResult smith_normal_form(IntMatrix m) {
  SnfResult res;
  res.u = IntMatrix::identity(m.rows);
  res.v = IntMatrix::identity(m.cols);

  auto swap_rows = [&](int i, int j) {
    if (i == j) return;
    for (int c = 0; c < m.cols; ++c) std::swap(m.at(i, c), m.at(j, c));
    for (int c = 0; c < res.u.cols; ++c) std::swap(res.u.at(i, c), res.u.at(j, c));
  };
  auto swap_cols = [&](int i, int j) {
    if (i == j) return;
    for (int r = 0; r < m.rows; ++r) std::swap(m.at(r, i), m.at(r, j));
    for (int r = 0; r < res.v.rows; ++r) std::swap(res.v.at(r, i), res.v.at(r, j));
  };
  auto addmul_row = [&](int dst, int src, std::int64_t f) {  // row_dst += f * row_src
    for (int c = 0; c < m.cols; ++c) m.at(dst, c) += f * m.at(src, c);
    for (int c = 0; c < res.u.cols; ++c) res.u.at(dst, c) += f * res.u.at(src, c);
  };
  auto addmul_col = [&](int dst, int src, std::int64_t f) {
    for (int r = 0; r < m.rows; ++r) m.at(r, dst) += f * m.at(r, src);
    for (int r = 0; r < res.v.rows; ++r) res.v.at(r, dst) += f * res.v.at(r, src);
  };
  auto negate_row = [&](int i) {
    for (int c = 0; c < m.cols; ++c) m.at(i, c) = -m.at(i, c);
    for (int c = 0; c < res.u.cols; ++c) res.u.at(i, c) = -res.u.at(i, c);
  };

  const int k = std::min(m.rows, m.cols);
  for (int s = 0; s < k; ++s) {
    // find the nonzero pivot of least magnitude in the trailing block
    int pi = -1, pj = -1;
    std::int64_t best = 0;
    for (int i = s; i < m.rows; ++i)
      for (int j = s; j < m.cols; ++j) {
        const std::int64_t v = std::abs(m.at(i, j));
        if (v != 0 && (pi < 0 || v < best)) {
          best = v;
          pi = i;
          pj = j;
        }
      }
    if (pi < 0) break;  // trailing block is zero
    swap_rows(s, pi);
    swap_cols(s, pj);

    bool dirty = true;
    while (dirty) {
      dirty = false;
      for (int i = s + 1; i < m.rows; ++i) {
        if (m.at(i, s) == 0) continue;
        const std::int64_t f = m.at(i, s) / m.at(s, s);
        addmul_row(i, s, -f);
        if (m.at(i, s) != 0) {  // remainder smaller than pivot: swap up and restart
          swap_rows(s, i);
          dirty = true;
        }
      }
      for (int j = s + 1; j < m.cols; ++j) {
        if (m.at(s, j) == 0) continue;
        const std::int64_t f = m.at(s, j) / m.at(s, s);
        addmul_col(j, s, -f);
        if (m.at(s, j) != 0) {
          swap_cols(s, j);
          dirty = true;
        }
      }
      if (dirty) continue;
      // pivot must divide everything below and to the right
      for (int i = s + 1; i < m.rows && !dirty; ++i)
        for (int j = s + 1; j < m.cols && !dirty; ++j)
          if (m.at(i, j) % m.at(s, s) != 0) {
            addmul_row(s, i, 1);
            dirty = true;
          }
    }
    if (m.at(s, s) < 0) negate_row(s);
  }
  res.d = std::move(m);
  return res;
}

// |det| for square integer matrices via fraction-free elimination (used to
// cross-check unimodularity of the transforms).
inline std::int64_t abs_det(const IntMatrix& m0) {
  if (m0.rows != m0.cols) throw mode_error("abs_det needs a square matrix");
  const int n = m0.rows;
  std::vector<long double> a(m0.a.begin(), m0.a.end());
  auto at = [&](int i, int j) -> long double& { return a[static_cast<std::size_t>(i) * n + j]; };
  long double det = 1.0L;
  for (int s = 0; s < n; ++s) {
    int p = s;
    while (p < n && at(p, s) == 0.0L) ++p;
    if (p == n) return 0;
    if (p != s) {
      for (int j = 0; j < n; ++j) std::swap(at(p, j), at(s, j));
      det = -det;
    }
    det *= at(s, s);
    for (int i = s + 1; i < n; ++i) {
      const long double f = at(i, s) / at(s, s);
      for (int j = s; j < n; ++j) at(i, j) -= f * at(s, j);
    }
  }
  return static_cast<std::int64_t>(std::llroundl(std::abs(det)));
}

}  // namespace qtwist
