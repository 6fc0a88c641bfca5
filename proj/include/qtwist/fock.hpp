#pragma once

// Truncated Fock-space simulation.  Two basis models:
//   * TensorModel: pairs (mu, nu) of index words, |mu| <= Ds, |nu| <= Dt,
//     carrying the braided representation s_j = S_j (x) 1, t_r = d(q) (x) T_r.
//   * FullModel: all words of length <= D over the combined alphabet of
//     n + m letters, carrying the free-isometry (q = 0) representation.
//
// Operators keep degree-shift intervals and an "exact below" watermark per
// side: the matrix action on basis vectors under the watermark agrees with
// the untruncated operator (no intermediate vector can cross the cut), which
// makes finite-dimensional relation residuals truthful.

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <random>
#include <vector>

#include "qtwist/element.hpp"
#include "qtwist/params.hpp"

namespace qtwist {

using Complex = std::complex<double>;
using SparseCMat = Eigen::SparseMatrix<Complex>;

class FockBasis {
 public:
  enum class Model { Tensor, Full };

  static std::shared_ptr<const FockBasis> tensor(const Params& p, int ds, int dt,
                                                 std::size_t dim_cap = 200000) {
    if (!p.exact()) throw mode_error("the tensor Fock model requires braided parameters");
    auto b = std::shared_ptr<FockBasis>(new FockBasis());
    b->model_ = Model::Tensor;
    b->n_ = p.n();
    b->m_ = p.m();
    b->ds_ = ds;
    b->dt_ = dt;
    b->s_offsets_ = offsets(p.n(), ds);
    b->t_offsets_ = offsets(p.m(), dt);
    b->ns_ = static_cast<std::size_t>(b->s_offsets_.back());
    b->nt_ = static_cast<std::size_t>(b->t_offsets_.back());
    b->check_cap(b->ns_ * b->nt_, dim_cap);
    b->dim_ = b->ns_ * b->nt_;
    b->fill_degrees();
    return b;
  }

  static std::shared_ptr<const FockBasis> full(const Params& p, int d,
                                               std::size_t dim_cap = 200000) {
    auto b = std::shared_ptr<FockBasis>(new FockBasis());
    b->model_ = Model::Full;
    b->n_ = p.n();
    b->m_ = p.m();
    b->ds_ = d;
    b->dt_ = 0;
    b->s_offsets_ = offsets(p.n() + p.m(), d);
    b->ns_ = static_cast<std::size_t>(b->s_offsets_.back());
    b->nt_ = 1;
    b->check_cap(b->ns_, dim_cap);
    b->dim_ = b->ns_;
    b->fill_degrees();
    return b;
  }

  Model model() const { return model_; }
  std::size_t dim() const { return dim_; }
  int n() const { return n_; }
  int m() const { return m_; }
  int ds() const { return ds_; }
  int dt() const { return dt_; }
  std::size_t vacuum() const { return 0; }

  int deg_s(std::size_t idx) const { return degs_[idx]; }
  int deg_t(std::size_t idx) const { return degt_[idx]; }

  // word component accessors (tensor model): idx = is * nt + it
  std::size_t s_part(std::size_t idx) const { return idx / nt_; }
  std::size_t t_part(std::size_t idx) const { return idx % nt_; }
  std::size_t combine(std::size_t is, std::size_t it) const { return is * nt_ + it; }

  struct WordRef {
    int len;
    std::int64_t val;  // radix value within its length shell
  };

  static WordRef decode(const std::vector<std::int64_t>& off, std::size_t idx) {
    int len = 0;
    while (static_cast<std::int64_t>(idx) >= off[static_cast<std::size_t>(len) + 1]) ++len;
    return {len, static_cast<std::int64_t>(idx) - off[static_cast<std::size_t>(len)]};
  }

  // -1 when the result would cross the cut
  static std::int64_t prepend(const std::vector<std::int64_t>& off, int alphabet, int letter0,
                              WordRef w) {
    if (w.len + 2 >= static_cast<int>(off.size())) return -1;  // already at the cut
    std::int64_t p = 1;
    for (int i = 0; i < w.len; ++i) p *= alphabet;
    return off[static_cast<std::size_t>(w.len) + 1] + letter0 * p + w.val;
  }

  // -1 when the first letter does not match
  static std::int64_t strip(const std::vector<std::int64_t>& off, int alphabet, int letter0,
                            WordRef w) {
    if (w.len == 0) return -1;
    std::int64_t p = 1;
    for (int i = 0; i < w.len - 1; ++i) p *= alphabet;
    if (w.val / p != letter0) return -1;
    return off[static_cast<std::size_t>(w.len) - 1] + w.val % p;
  }

  const std::vector<std::int64_t>& s_offsets() const { return s_offsets_; }
  const std::vector<std::int64_t>& t_offsets() const { return t_offsets_; }
  std::size_t ns() const { return ns_; }
  std::size_t nt() const { return nt_; }

  // Index of the tensor-model basis vector (mu, nu).
  std::size_t index_of(const IndexWord& mu, const IndexWord& nu) const {
    if (model_ != Model::Tensor) throw mode_error("index_of(mu, nu) needs the tensor model");
    return combine(static_cast<std::size_t>(word_index(s_offsets_, n_, mu)),
                   static_cast<std::size_t>(word_index(t_offsets_, m_, nu)));
  }

  static std::int64_t word_index(const std::vector<std::int64_t>& off, int alphabet,
                                 const IndexWord& w) {
    std::int64_t val = 0;
    for (int c : w) val = val * alphabet + (c - 1);
    return off[w.size()] + val;
  }

 private:
  FockBasis() = default;

  static std::vector<std::int64_t> offsets(int alphabet, int dmax) {
    std::vector<std::int64_t> off(static_cast<std::size_t>(dmax) + 2, 0);
    std::int64_t shell = 1;
    for (int k = 0; k <= dmax; ++k) {
      off[static_cast<std::size_t>(k) + 1] = off[static_cast<std::size_t>(k)] + shell;
      shell *= alphabet;
    }
    return off;
  }

  void check_cap(std::size_t dim, std::size_t cap) const {
    if (dim > cap)
      throw budget_exceeded("dimension-cap", "Fock basis dimension " + std::to_string(dim) +
                                                 " exceeds the cap " + std::to_string(cap));
  }

  void fill_degrees() {
    degs_.resize(dim_);
    degt_.resize(dim_);
    for (std::size_t idx = 0; idx < dim_; ++idx) {
      if (model_ == Model::Tensor) {
        degs_[idx] = decode(s_offsets_, s_part(idx)).len;
        degt_[idx] = decode(t_offsets_, t_part(idx)).len;
      } else {
        degs_[idx] = decode(s_offsets_, idx).len;
        degt_[idx] = 0;
      }
    }
  }

  Model model_;
  int n_ = 1, m_ = 1, ds_ = 0, dt_ = 0;
  std::vector<std::int64_t> s_offsets_, t_offsets_;
  std::size_t ns_ = 1, nt_ = 1, dim_ = 1;
  std::vector<int> degs_, degt_;
};

using FockBasisPtr = std::shared_ptr<const FockBasis>;

struct FockOperator {
  SparseCMat mat;
  FockBasisPtr basis;
  // degree-shift interval per side
  int shift_lo_s = 0, shift_hi_s = 0, shift_lo_t = 0, shift_hi_t = 0;
  // action is exact on columns with deg_s <= exact_s and deg_t <= exact_t
  int exact_s = 0, exact_t = 0;

  static FockOperator identity(const FockBasisPtr& b) {
    FockOperator op;
    op.basis = b;
    op.mat = SparseCMat(static_cast<Eigen::Index>(b->dim()), static_cast<Eigen::Index>(b->dim()));
    op.mat.setIdentity();
    op.exact_s = b->ds();
    op.exact_t = b->dt();
    return op;
  }

  static FockOperator zero(const FockBasisPtr& b) {
    FockOperator op;
    op.basis = b;
    op.mat = SparseCMat(static_cast<Eigen::Index>(b->dim()), static_cast<Eigen::Index>(b->dim()));
    op.exact_s = b->ds();
    op.exact_t = b->dt();
    return op;
  }
};

inline FockOperator compose(const FockOperator& a, const FockOperator& b) {
  if (a.basis != b.basis) throw mode_error("composing operators over different bases");
  FockOperator r;
  r.basis = a.basis;
  r.mat = a.mat * b.mat;
  r.shift_lo_s = a.shift_lo_s + b.shift_lo_s;
  r.shift_hi_s = a.shift_hi_s + b.shift_hi_s;
  r.shift_lo_t = a.shift_lo_t + b.shift_lo_t;
  r.shift_hi_t = a.shift_hi_t + b.shift_hi_t;
  r.exact_s = std::min(b.exact_s, a.exact_s - b.shift_hi_s);
  r.exact_t = std::min(b.exact_t, a.exact_t - b.shift_hi_t);
  return r;
}

inline FockOperator add(const FockOperator& a, const FockOperator& b) {
  if (a.basis != b.basis) throw mode_error("adding operators over different bases");
  FockOperator r;
  r.basis = a.basis;
  r.mat = a.mat + b.mat;
  r.shift_lo_s = std::min(a.shift_lo_s, b.shift_lo_s);
  r.shift_hi_s = std::max(a.shift_hi_s, b.shift_hi_s);
  r.shift_lo_t = std::min(a.shift_lo_t, b.shift_lo_t);
  r.shift_hi_t = std::max(a.shift_hi_t, b.shift_hi_t);
  r.exact_s = std::min(a.exact_s, b.exact_s);
  r.exact_t = std::min(a.exact_t, b.exact_t);
  return r;
}

inline FockOperator scale(Complex c, const FockOperator& a) {
  FockOperator r = a;
  r.mat = c * a.mat;
  return r;
}

// ---------------------------------------------------------------------------
// Generator matrices

inline FockOperator rep_generator(const Letter& letter, const FockBasisPtr& basis,
                                  const Params& params) {
  if (letter.family == Family::U)
    throw unsupported_letter("u has no Fock-model representation");
  const bool tensor = basis->model() == FockBasis::Model::Tensor;
  if (tensor && !params.exact())
    throw mode_error("the tensor model represents braided parameters only");
  if (letter.family == Family::S && (letter.index < 1 || letter.index > basis->n()))
    throw unsupported_letter("s-index out of range: " + letter.str());
  if (letter.family == Family::T && (letter.index < 1 || letter.index > basis->m()))
    throw unsupported_letter("t-index out of range: " + letter.str());

  const std::size_t dim = basis->dim();
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(dim);

  FockOperator op;
  op.basis = basis;

  if (!tensor) {
    // free creation/annihilation over the combined alphabet
    const int alpha = basis->n() + basis->m();
    const int code = letter.family == Family::S ? letter.index - 1 : basis->n() + letter.index - 1;
    for (std::size_t col = 0; col < dim; ++col) {
      const FockBasis::WordRef w = FockBasis::decode(basis->s_offsets(), col);
      const std::int64_t row = letter.starred
          ? FockBasis::strip(basis->s_offsets(), alpha, code, w)
          : FockBasis::prepend(basis->s_offsets(), alpha, code, w);
      if (row >= 0) trip.emplace_back(static_cast<Eigen::Index>(row),
                                      static_cast<Eigen::Index>(col), Complex(1.0, 0.0));
    }
    op.shift_lo_s = op.shift_hi_s = letter.starred ? -1 : 1;
    op.exact_s = letter.starred ? basis->ds() : basis->ds() - 1;
    op.exact_t = 0;
  } else {
    // q-power table along the s-degree
    const Complex q = params.q_value();
    std::vector<Complex> qpow(static_cast<std::size_t>(basis->ds()) + 1);
    qpow[0] = Complex(1.0, 0.0);
    for (std::size_t k = 1; k < qpow.size(); ++k) qpow[k] = qpow[k - 1] * q;

    for (std::size_t col = 0; col < dim; ++col) {
      const std::size_t is = basis->s_part(col);
      const std::size_t it = basis->t_part(col);
      if (letter.family == Family::S) {
        const FockBasis::WordRef w = FockBasis::decode(basis->s_offsets(), is);
        const std::int64_t is2 = letter.starred
            ? FockBasis::strip(basis->s_offsets(), basis->n(), letter.index - 1, w)
            : FockBasis::prepend(basis->s_offsets(), basis->n(), letter.index - 1, w);
        if (is2 >= 0)
          trip.emplace_back(static_cast<Eigen::Index>(basis->combine(static_cast<std::size_t>(is2), it)),
                            static_cast<Eigen::Index>(col), Complex(1.0, 0.0));
      } else {
        const FockBasis::WordRef w = FockBasis::decode(basis->t_offsets(), it);
        const std::int64_t it2 = letter.starred
            ? FockBasis::strip(basis->t_offsets(), basis->m(), letter.index - 1, w)
            : FockBasis::prepend(basis->t_offsets(), basis->m(), letter.index - 1, w);
        if (it2 >= 0) {
          const Complex phase = qpow[static_cast<std::size_t>(basis->deg_s(col))];
          trip.emplace_back(static_cast<Eigen::Index>(basis->combine(is, static_cast<std::size_t>(it2))),
                            static_cast<Eigen::Index>(col),
                            letter.starred ? std::conj(phase) : phase);
        }
      }
    }
    if (letter.family == Family::S) {
      op.shift_lo_s = op.shift_hi_s = letter.starred ? -1 : 1;
      op.exact_s = letter.starred ? basis->ds() : basis->ds() - 1;
      op.exact_t = basis->dt();
    } else {
      op.shift_lo_t = op.shift_hi_t = letter.starred ? -1 : 1;
      op.exact_t = letter.starred ? basis->dt() : basis->dt() - 1;
      op.exact_s = basis->ds();
    }
  }
  op.mat = SparseCMat(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  op.mat.setFromTriplets(trip.begin(), trip.end());
  return op;
}

// Half-power variant of the tensor-model representation:
//   s_j = S_j (x) d(q^{-1/2}),  t_r = d(q^{1/2}) (x) T_r.
inline FockOperator rep_generator_half(const Letter& letter, const FockBasisPtr& basis,
                                       const Params& params) {
  if (basis->model() != FockBasis::Model::Tensor)
    throw mode_error("the half-power form lives on the tensor model");
  FockOperator op = rep_generator(letter, basis, params);
  // rescale entries: multiply column by h^{+-deg of the other side}
  const double ang = std::numbers::pi * params.phi0();
  const Complex h(std::cos(ang), std::sin(ang));
  std::vector<Complex> hpow(static_cast<std::size_t>(std::max(basis->ds(), basis->dt())) + 1);
  hpow[0] = Complex(1.0, 0.0);
  for (std::size_t k = 1; k < hpow.size(); ++k) hpow[k] = hpow[k - 1] * h;

  for (int k = 0; k < op.mat.outerSize(); ++k)
    for (SparseCMat::InnerIterator it(op.mat, k); it; ++it) {
      const std::size_t col = static_cast<std::size_t>(it.col());
      if (letter.family == Family::S) {
        const Complex w = std::conj(hpow[static_cast<std::size_t>(basis->deg_t(col))]);
        it.valueRef() *= letter.starred ? std::conj(w) : w;
      } else {
        // the q^{|mu|} factor is already present; adjust d(q) -> d(q^{1/2})
        const Complex w = std::conj(hpow[static_cast<std::size_t>(basis->deg_s(col))]);
        it.valueRef() *= letter.starred ? std::conj(w) : w;
      }
    }
  return op;
}

// Diagonal unitary intertwining the canonical and half-power forms:
// W(mu, nu) = h^{-|mu| |nu|},  W pi W* = pi_half.
inline FockOperator diag_fock_unitary(const FockBasisPtr& basis, const Params& params) {
  if (basis->model() != FockBasis::Model::Tensor)
    throw mode_error("the intertwining unitary lives on the tensor model");
  const double ang = std::numbers::pi * params.phi0();
  FockOperator op;
  op.basis = basis;
  op.exact_s = basis->ds();
  op.exact_t = basis->dt();
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(basis->dim());
  for (std::size_t idx = 0; idx < basis->dim(); ++idx) {
    const int e = basis->deg_s(idx) * basis->deg_t(idx);
    trip.emplace_back(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(idx),
                      std::polar(1.0, -ang * static_cast<double>(e)));
  }
  op.mat = SparseCMat(static_cast<Eigen::Index>(basis->dim()),
                      static_cast<Eigen::Index>(basis->dim()));
  op.mat.setFromTriplets(trip.begin(), trip.end());
  return op;
}

// ---------------------------------------------------------------------------
// Linear extension along words, with a pluggable letter resolver (the |q| < 1
// embedding substitutes a series image for the t-generators).

using LetterResolver = std::function<const FockOperator&(const Letter&)>;

inline FockOperator rep_element_with(const AlgebraElement& x, const FockBasisPtr& basis,
                                     const Params& params, const LetterResolver& resolve) {
  FockOperator acc = FockOperator::zero(basis);
  bool any = false;
  const double phi0 = params.exact() ? params.phi0() : 0.0;
  for (const auto& [mono, c] : x.terms()) {
    FockOperator word = FockOperator::identity(basis);
    for (auto it = mono.letters.rbegin(); it != mono.letters.rend(); ++it)
      word = compose(resolve(*it), word);
    word = scale(c.eval(phi0), word);
    acc = any ? add(acc, word) : word;
    any = true;
  }
  return acc;
}

inline FockOperator rep_element(const AlgebraElement& x, const FockBasisPtr& basis,
                                const Params& params) {
  std::map<Letter, FockOperator> cache;
  LetterResolver resolve = [&](const Letter& l) -> const FockOperator& {
    auto it = cache.find(l);
    if (it == cache.end()) it = cache.emplace(l, rep_generator(l, basis, params)).first;
    return it->second;
  };
  return rep_element_with(x, basis, params, resolve);
}

// ---------------------------------------------------------------------------
// Residuals, norms, vacuum functional

inline double column_norm_residual(const FockOperator& op) {
  if (op.exact_s < 0 || op.exact_t < 0)
    throw degenerate_input("no safe subspace: the word budget exceeds the truncation depth");
  const FockBasis& b = *op.basis;
  std::vector<double> colsq(b.dim(), 0.0);
  for (int k = 0; k < op.mat.outerSize(); ++k)
    for (SparseCMat::InnerIterator it(op.mat, k); it; ++it)
      colsq[static_cast<std::size_t>(it.col())] += std::norm(it.value());
  double mx = 0.0;
  for (std::size_t col = 0; col < b.dim(); ++col)
    if (b.deg_s(col) <= op.exact_s && b.deg_t(col) <= op.exact_t)
      mx = std::max(mx, colsq[col]);
  return std::sqrt(mx);
}

// Max column norm of rep(x) over the safe subspace; exact zero is expected
// for defining relations.
inline double relation_residual(const AlgebraElement& x, const FockBasisPtr& basis,
                                const Params& params) {
  return column_norm_residual(rep_element(x, basis, params));
}

// Largest singular value via power iteration on A* A; stops at relative
// change < 1e-12 or 500 iterations.  A compression of the true operator, so
// the value is a lower bound of the C*-norm.
inline double operator_norm(const FockOperator& a, int max_iter = 500, double rel_tol = 1e-12) {
  if (a.mat.nonZeros() == 0) return 0.0;
  const Eigen::Index dim = a.mat.cols();
  Eigen::VectorXcd v(dim);
  std::mt19937_64 rng(0x51ab5eedULL);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = Complex(unif(rng), unif(rng));
  v.normalize();
  double lam = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXcd w = a.mat * v;
    Eigen::VectorXcd y = a.mat.adjoint() * w;
    const double next = std::real(v.dot(y));
    const double change = std::abs(next - lam);
    lam = next;
    const double ynorm = y.norm();
    if (ynorm == 0.0) return 0.0;
    v = y / ynorm;
    if (change <= rel_tol * std::max(1.0, lam)) break;
  }
  return std::sqrt(std::max(0.0, lam));
}

inline Complex vacuum_expectation(const AlgebraElement& x, const Params& params) {
  const int need = std::max<int>(1, static_cast<int>(x.max_word_length()));
  const FockBasisPtr basis = params.exact() ? FockBasis::tensor(params, need, need)
                                            : FockBasis::full(params, need);
  const FockOperator op = rep_element(x, basis, params);
  return op.mat.coeff(static_cast<Eigen::Index>(basis->vacuum()),
                      static_cast<Eigen::Index>(basis->vacuum()));
}

// ---------------------------------------------------------------------------
// Gram-matrix linear-independence evidence

struct GramReport {
  std::size_t count = 0;      // monomials tested
  std::size_t rank = 0;
  double min_singular = 0.0;  // smallest eigenvalue of the Gram matrix
  std::size_t dimension = 0;  // Fock dimension used
};

inline GramReport gram_of(const std::vector<Monomial>& monos, const FockBasisPtr& basis,
                          const Params& params) {
  const std::size_t count = monos.size();
  std::vector<FockOperator> ops;
  ops.reserve(count);
  for (const auto& mono : monos)
    ops.push_back(rep_element(AlgebraElement::term(mono, params.one()), basis, params));

  // trace pairing tr(A_i^* A_j) = Frobenius inner product, by merging the
  // sorted inner vectors column by column
  auto frobenius = [](const SparseCMat& a, const SparseCMat& b) {
    Complex acc = 0.0;
    for (int k = 0; k < a.outerSize(); ++k) {
      SparseCMat::InnerIterator ia(a, k), ib(b, k);
      while (ia && ib) {
        if (ia.row() < ib.row()) ++ia;
        else if (ib.row() < ia.row()) ++ib;
        else {
          acc += std::conj(ia.value()) * ib.value();
          ++ia;
          ++ib;
        }
      }
    }
    return acc;
  };

  Eigen::MatrixXcd gram(count, count);
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = i; j < count; ++j) {
      const Complex acc = frobenius(ops[i].mat, ops[j].mat);
      gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
      gram(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = std::conj(acc);
    }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
  GramReport rep;
  rep.count = count;
  rep.dimension = basis->dim();
  if (count == 0) return rep;
  const auto& ev = es.eigenvalues();
  rep.min_singular = ev.minCoeff();
  const double thresh = std::max(1e-12 * std::max(0.0, ev.maxCoeff()), 1e-14);
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev[i] > thresh) ++rep.rank;
  return rep;
}

// Normal-form monomials s_mu1 t_nu1 t_nu2* s_mu2* with all word lengths
// <= cap, tested for linear independence on the truncation.
inline GramReport gram_faithfulness(int cap, const FockBasisPtr& basis, const Params& params) {
  if (basis->model() != FockBasis::Model::Tensor)
    throw mode_error("faithfulness evidence runs on the tensor model");
  if (basis->ds() < 2 * cap + 1 || basis->dt() < 2 * cap + 1)
    throw degenerate_input("faithfulness evidence needs D >= 2*cap + 1");
  std::vector<Monomial> monos;
  const auto ws = words_up_to(params.n(), cap);
  const auto wt = words_up_to(params.m(), cap);
  for (const auto& mu1 : ws)
    for (const auto& nu1 : wt)
      for (const auto& nu2 : wt)
        for (const auto& mu2 : ws)
          monos.push_back(s_word(mu1) * t_word(nu1) * t_word(nu2, true) * s_word(mu2, true));
  return gram_of(monos, basis, params);
}

}  // namespace qtwist
