#pragma once

// The two deformation mechanisms.
//
// |q| < 1: the untwisting pair.  hat_t(r) = (1-Q) t_r (1-|q|^2 Q)^(-1/2)
// stays polynomial because Q is a projection, so f(Q) = (1-Q) f(0) + Q f(1);
// w_series is the inverse-direction series sum_k q^k v_mu wtilde v_mu* whose
// partial sums converge at rate |q|^(K+1).  roundtrip_check drives both
// directions through the truncated free-isometry Fock model.
//
// |q| = 1: the graded deformed product a ._T b = h^(p2 p1' - p1 p2') a b on
// the commuting base algebra, and the relation-level isomorphism check for
// the hatted generators s_j (x) 1, 1 (x) t_r.

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qtwist/fock.hpp"
#include "qtwist/rewrite.hpp"

namespace qtwist {

// Q = sum_i s_i s_i*
inline AlgebraElement projection_q_element(const Params& params) {
  AlgebraElement q;
  for (int i = 1; i <= params.n(); ++i) q.add_term(Monomial{s_(i), s_(i, true)}, params.one());
  return q;
}

// ---------------------------------------------------------------------------
// |q| < 1 untwisting

// (1-Q) t_r (1 + c Q) with c = (1-|q|^2)^(-1/2) - 1.  The projection
// functional calculus is gated on Q Q = Q, checked through the rewriter.
inline AlgebraElement hat_t(int r, const Params& params) {
  if (params.exact()) throw mode_error("hat_t needs a numeric parameter with |q| < 1");
  if (r < 1 || r > params.m()) throw unsupported_letter("t-index out of range in hat_t");
  const RuleSet rules = RuleSet::wick(params);
  const AlgebraElement q = projection_q_element(params);
  if (!check_identity(q * q, q, rules, 1e-14))
    throw invariant_violation("Q is not a projection under the ambient rules");
  const double qa2 = std::norm(params.q_value());
  const double c = 1.0 / std::sqrt(1.0 - qa2) - 1.0;
  const AlgebraElement unit = AlgebraElement::term(Monomial::unit(), params.one());
  const AlgebraElement tr = AlgebraElement::term(Monomial{t_(r)}, params.one());
  return normalize((unit - q) * tr * (unit + params.numeric(c) * q), rules);
}

// Series order reaching a target tail eps: the partial-sum tail decays like
// |q|^(K+1), so K = ceil(log eps / log |q|).
inline int series_order_for(double eps, const Params& params) {
  if (params.exact()) throw mode_error("series truncation applies to |q| < 1 only");
  const double qa = std::abs(params.q_value());
  if (qa == 0.0) return 0;
  return static_cast<int>(std::ceil(std::log(eps) / std::log(qa)));
}

// Partial sum over k <= K of q^k v_mu wtilde_r v_mu* with
// wtilde_r = v_{n+r} (1 + c' Q), c' = (1-|q|^2)^(1/2) - 1, in the free
// algebra on v_1..v_{n+m} (v_i = s_i, v_{n+r} = t_r).
inline AlgebraElement w_series(int r, int K, const Params& params,
                               std::size_t term_cap = 1'000'000) {
  if (params.exact()) throw mode_error("w_series needs a numeric parameter with |q| < 1");
  if (K < 0) throw mode_error("w_series needs K >= 0");
  if (r < 1 || r > params.m()) throw unsupported_letter("t-index out of range in w_series");
  const double qa2 = std::norm(params.q_value());
  const double cp = std::sqrt(1.0 - qa2) - 1.0;
  const AlgebraElement unit = AlgebraElement::term(Monomial::unit(), params.one());
  const AlgebraElement q = projection_q_element(params);
  const AlgebraElement wt =
      AlgebraElement::term(Monomial{t_(r)}, params.one()) * (unit + params.numeric(cp) * q);

  AlgebraElement acc;
  std::size_t budget = 0;
  std::complex<double> qk = 1.0;
  for (int k = 0; k <= K; ++k) {
    std::size_t shell = 1;
    for (int i = 0; i < k; ++i) shell *= static_cast<std::size_t>(params.n());
    budget += shell * (static_cast<std::size_t>(params.n()) + 1);
    if (budget > term_cap)
      throw budget_exceeded("term-cap", "w_series exceeds the term cap at K = " +
                                            std::to_string(k) + "; smallest failing K");
    for (const auto& mu : words_of_length(params.n(), k)) {
      const AlgebraElement smu = AlgebraElement::term(s_word(mu), params.one());
      acc += params.numeric(qk) * (smu * wt * smu.adjoint());
    }
    qk *= params.q_value();
  }
  // the series lives in the free algebra on v_1..v_{n+m}
  return normalize(acc, RuleSet::free_isometries(params));
}

struct RoundtripReport {
  int K = 0;
  int D = 0;
  double q_abs = 0.0;
  std::vector<double> residual_forward;   // psi(phi(v_{n+r})) - v_{n+r}
  std::vector<double> residual_backward;  // phi(psi(t_r)) - t_r via the embedding
  double certified_bound = 0.0;           // 5 |q|^(K+1), from the partial-sum tail
  bool pass = false;
  double max_residual() const {
    double mx = 0.0;
    for (double v : residual_forward) mx = std::max(mx, v);
    for (double v : residual_backward) mx = std::max(mx, v);
    return mx;
  }
};

// Substitute the untwisted images into a word element: s_i -> s_i,
// t_r -> hat_t(r), extended multiplicatively (the adjoint letter gets the
// adjoint image).
inline AlgebraElement untwist_substitute(const AlgebraElement& x, const Params& params) {
  std::vector<AlgebraElement> hat(static_cast<std::size_t>(params.m()) + 1);
  for (int r = 1; r <= params.m(); ++r) hat[static_cast<std::size_t>(r)] = hat_t(r, params);
  AlgebraElement out;
  for (const auto& [mono, c] : x.terms()) {
    AlgebraElement word = AlgebraElement::term(Monomial::unit(), params.one());
    for (const Letter& l : mono.letters) {
      if (l.family == Family::S) {
        word = word * AlgebraElement::term(Monomial{l}, params.one());
      } else if (l.family == Family::T) {
        const AlgebraElement& img = hat[static_cast<std::size_t>(l.index)];
        word = word * (l.starred ? img.adjoint() : img);
      } else {
        throw unsupported_letter("u has no untwisted image");
      }
    }
    out += c * word;
  }
  return normalize(out, RuleSet::wick(params));
}

// The |q| < 1 Fock simulation goes through the untwisted embedding into the
// free model: s_i acts as the free creation v_i, t_r as the truncated series
// image of w_series(r, K).
class UntwistEmbedding {
 public:
  UntwistEmbedding(const Params& params, int K, int D, std::size_t dim_cap = 200000)
      : params_(params), basis_(FockBasis::full(params, D, dim_cap)) {
    wop_.push_back(FockOperator::zero(basis_));
    wop_adj_.push_back(FockOperator::zero(basis_));
    for (int r = 1; r <= params.m(); ++r) {
      w_.push_back(w_series(r, K, params));
      wop_.push_back(rep_element(w_.back(), basis_, params));
      wop_adj_.push_back(rep_element(w_.back().adjoint(), basis_, params));
    }
  }

  const FockBasisPtr& basis() const { return basis_; }
  const AlgebraElement& series(int r) const { return w_.at(static_cast<std::size_t>(r) - 1); }

  FockOperator rep(const AlgebraElement& x) const {
    LetterResolver resolve = [&](const Letter& l) -> const FockOperator& {
      if (l.family == Family::T)
        return l.starred ? wop_adj_[static_cast<std::size_t>(l.index)]
                         : wop_[static_cast<std::size_t>(l.index)];
      auto it = cache_.find(l);
      if (it == cache_.end()) it = cache_.emplace(l, rep_generator(l, basis_, params_)).first;
      return it->second;
    };
    return rep_element_with(x, basis_, params_, resolve);
  }

  double residual(const AlgebraElement& x) const { return column_norm_residual(rep(x)); }

 private:
  Params params_;
  FockBasisPtr basis_;
  std::vector<AlgebraElement> w_;
  std::vector<FockOperator> wop_, wop_adj_;
  mutable std::map<Letter, FockOperator> cache_;
};

inline RoundtripReport roundtrip_check(int K, int D, const Params& params,
                                       std::size_t dim_cap = 200000) {
  if (params.exact()) throw mode_error("roundtrip_check needs a numeric parameter with |q| < 1");
  RoundtripReport rep;
  rep.K = K;
  rep.D = D;
  rep.q_abs = std::abs(params.q_value());
  rep.certified_bound = 5.0 * std::pow(rep.q_abs, K + 1);

  const UntwistEmbedding emb(params, K, D, dim_cap);
  const FockBasisPtr& basis = emb.basis();
  const AlgebraElement unit = AlgebraElement::term(Monomial::unit(), params.one());
  const AlgebraElement q = projection_q_element(params);
  const double qa2 = std::norm(params.q_value());
  const double c = 1.0 / std::sqrt(1.0 - qa2) - 1.0;

  for (int r = 1; r <= params.m(); ++r) {
    // forward: psi(phi(v_{n+r})) = (1-Q) w_r (1 + c Q) built from v-words
    const AlgebraElement forward =
        (unit - q) * emb.series(r) * (unit + params.numeric(c) * q) -
        AlgebraElement::term(Monomial{t_(r)}, params.one());
    rep.residual_forward.push_back(column_norm_residual(rep_element(forward, basis, params)));

    // backward: phi(psi(t_r)) - t_r, evaluated through the embedding
    const AlgebraElement backward = untwist_substitute(emb.series(r), params) -
                                    AlgebraElement::term(Monomial{t_(r)}, params.one());
    rep.residual_backward.push_back(emb.residual(backward));
  }
  rep.pass = rep.max_residual() <= rep.certified_bound;
  return rep;
}

// ---------------------------------------------------------------------------
// |q| = 1 graded deformed product

// Skew form ((0, phi0/2), (-phi0/2, 0)) for q = exp(2 pi i phi0).  Pairings
// against integer bidegrees produce integer powers of the half-angle h.
struct ThetaMatrix {
  std::int64_t a = 0;  // phi0 = a / b
  std::int64_t b = 1;

  static ThetaMatrix of(const Params& params) {
    if (!params.exact()) throw mode_error("the skew form needs a rational unit-circle angle");
    return ThetaMatrix{params.rational().a, params.rational().b};
  }

  // 2 <Theta(p), p'> / phi0 = p2 p1' - p1 p2'; the deformed-product phase is
  // h to this exponent.
  static std::int64_t pairing_h_exponent(std::pair<int, int> p, std::pair<int, int> pp) {
    return static_cast<std::int64_t>(p.second) * pp.first -
           static_cast<std::int64_t>(p.first) * pp.second;
  }

  double pairing(std::pair<int, int> p, std::pair<int, int> pp) const {
    return 0.5 * static_cast<double>(a) / static_cast<double>(b) *
           static_cast<double>(pairing_h_exponent(p, pp));
  }
};

// Finite sum of homogeneous components keyed by bidegree.
class GradedElement {
 public:
  using Components = std::map<std::pair<int, int>, AlgebraElement>;

  GradedElement() = default;

  static GradedElement from_element(const AlgebraElement& x, const RuleSet& base) {
    GradedElement g;
    const AlgebraElement n = normalize(x, base);
    for (const auto& [mono, c] : n.terms())
      g.comps_[bidegree(mono)].add_term(mono, c);
    return g;
  }

  void set_component(std::pair<int, int> p, AlgebraElement comp) {
    for (const auto& [mono, c] : comp.terms())
      if (bidegree(mono) != p)
        throw invariant_violation("component of bidegree (" + std::to_string(p.first) + "," +
                                  std::to_string(p.second) + ") contains " + mono.str());
    if (!comp.is_zero()) comps_[p] = std::move(comp);
  }

  const Components& components() const { return comps_; }
  bool is_zero() const { return comps_.empty(); }

  void add(std::pair<int, int> p, const AlgebraElement& inc) {
    AlgebraElement& slot = comps_[p];
    slot += inc;
    if (slot.is_zero()) comps_.erase(p);
  }

  friend bool operator==(const GradedElement& x, const GradedElement& y) {
    return x.comps_ == y.comps_;
  }

  friend GradedElement operator-(const GradedElement& x, const GradedElement& y) {
    GradedElement r = x;
    for (const auto& [p, comp] : y.comps_) r.add(p, -comp);
    return r;
  }

 private:
  Components comps_;
};

// a ._T b: multiply homogeneous components in the commuting base algebra and
// scale by h^(p2 p1' - p1 p2').
inline GradedElement rieffel_product(const GradedElement& a, const GradedElement& b,
                                     const ThetaMatrix& theta, const Params& params) {
  (void)theta;  // the phase exponent is intrinsic to the bidegrees
  const RuleSet base = RuleSet::commuting_base(params);
  GradedElement out;
  for (const auto& [p, xa] : a.components()) {
    for (const auto& [pp, xb] : b.components()) {
      const Scalar phase =
          Scalar::h_power(ThetaMatrix::pairing_h_exponent(p, pp), params.h_modulus());
      const AlgebraElement prod = normalize(xa * xb, base);
      if (prod.is_zero()) continue;
      out.add({p.first + pp.first, p.second + pp.second}, phase * prod);
    }
  }
  // re-validate homogeneity of what we stored
  GradedElement checked;
  for (const auto& [p, comp] : out.components()) checked.set_component(p, comp);
  return checked;
}

// The graded class of a single normal-form monomial under the relation-level
// isomorphism: accumulate the pairing phase letter by letter.
inline GradedElement phi_of_monomial(const Monomial& mono, const Scalar& coeff,
                                     const Params& params) {
  std::int64_t expo = 0;
  std::pair<int, int> g{0, 0};
  for (const Letter& l : mono.letters) {
    const std::pair<int, int> dl = bidegree(Monomial{l});
    expo += ThetaMatrix::pairing_h_exponent(g, dl);
    g.first += dl.first;
    g.second += dl.second;
  }
  const RuleSet base = RuleSet::commuting_base(params);
  const AlgebraElement img = normalize(
      AlgebraElement::term(mono, Scalar::h_power(expo, params.h_modulus()) * coeff), base);
  GradedElement out;
  if (!img.is_zero()) out.set_component(g, img);
  return out;
}

inline GradedElement phi_map(const AlgebraElement& x, const Params& params) {
  GradedElement out;
  for (const auto& [mono, c] : x.terms()) {
    const GradedElement piece = phi_of_monomial(mono, c, params);
    for (const auto& [p, comp] : piece.components()) out.add(p, comp);
  }
  return out;
}

struct RieffelReport {
  struct Identity {
    std::string name;
    bool ok;
  };
  std::vector<Identity> relation_checks;
  std::uint64_t hom_trials = 0, hom_defects = 0;
  std::uint64_t comm_trials = 0, comm_defects = 0;
  bool ok() const {
    if (hom_defects || comm_defects) return false;
    for (const auto& id : relation_checks)
      if (!id.ok) return false;
    return true;
  }
};

namespace detail {

inline Monomial random_normal_monomial(std::mt19937_64& rng, const Params& params, int max_block) {
  auto word = [&](int alphabet) {
    IndexWord w(static_cast<std::size_t>(
        std::uniform_int_distribution<int>(0, max_block)(rng)));
    for (auto& v : w) v = std::uniform_int_distribution<int>(1, alphabet)(rng);
    return w;
  };
  return s_word(word(params.n())) * t_word(word(params.m())) *
         t_word(word(params.m()), true) * s_word(word(params.n()), true);
}

}  // namespace detail

// Relation-level isomorphism evidence: the hatted generators satisfy the
// twisted relations under ._T, the map respects products on random
// homogeneous pairs, and pure-block elements reproduce the commutation
// factor q^(p1 p2).
inline RieffelReport phi_theta_check(const Params& params, std::uint64_t pairs = 1000,
                                     std::uint64_t seed = 1) {
  if (!params.exact()) throw mode_error("the deformed-product check needs a rational angle");
  const ThetaMatrix theta = ThetaMatrix::of(params);
  const RuleSet braided = RuleSet::braided(params);
  RieffelReport rep;

  auto graded_of = [&](const Monomial& mono) {
    GradedElement g;
    g.set_component(bidegree(mono), AlgebraElement::term(mono, params.one()));
    return g;
  };
  auto scaled = [&](const Scalar& c, const GradedElement& g) {
    GradedElement out;
    for (const auto& [p, comp] : g.components()) out.add(p, c * comp);
    return out;
  };
  auto prod = [&](const GradedElement& x, const GradedElement& y) {
    return rieffel_product(x, y, theta, params);
  };
  auto check = [&](std::string name, const GradedElement& lhs, const GradedElement& rhs) {
    rep.relation_checks.push_back({std::move(name), (lhs - rhs).is_zero()});
  };

  const GradedElement unit = graded_of(Monomial::unit());
  for (int j = 1; j <= params.n(); ++j)
    for (int i = 1; i <= params.n(); ++i)
      check("sh" + std::to_string(j) + "* sh" + std::to_string(i),
            prod(graded_of(Monomial{s_(j, true)}), graded_of(Monomial{s_(i)})),
            i == j ? unit : GradedElement());
  for (int r = 1; r <= params.m(); ++r)
    for (int l = 1; l <= params.m(); ++l)
      check("th" + std::to_string(r) + "* th" + std::to_string(l),
            prod(graded_of(Monomial{t_(r, true)}), graded_of(Monomial{t_(l)})),
            r == l ? unit : GradedElement());
  for (int j = 1; j <= params.n(); ++j)
    for (int r = 1; r <= params.m(); ++r) {
      const GradedElement sj = graded_of(Monomial{s_(j)});
      const GradedElement sjs = graded_of(Monomial{s_(j, true)});
      const GradedElement tr = graded_of(Monomial{t_(r)});
      const GradedElement trs = graded_of(Monomial{t_(r, true)});
      check("sh" + std::to_string(j) + "* th" + std::to_string(r) + " = q th sh*",
            prod(sjs, tr), scaled(params.q(), prod(tr, sjs)));
      check("th" + std::to_string(r) + "* sh" + std::to_string(j) + " = conj(q) sh th*",
            prod(trs, sj), scaled(params.qbar(), prod(sj, trs)));
      check("th" + std::to_string(r) + " sh" + std::to_string(j) + " = q sh th",
            prod(tr, sj), scaled(params.q(), prod(sj, tr)));
    }

  std::mt19937_64 rng(seed);
  for (std::uint64_t trial = 0; trial < pairs; ++trial) {
    const Monomial x = detail::random_normal_monomial(rng, params, 2);
    const Monomial y = detail::random_normal_monomial(rng, params, 2);
    // Phi(x y) computed through the braided normal form
    const AlgebraElement xy =
        normalize(AlgebraElement::term(x * y, params.one()), braided);
    const GradedElement lhs = phi_map(xy, params);
    const GradedElement rhs =
        prod(phi_map(AlgebraElement::term(x, params.one()), params),
             phi_map(AlgebraElement::term(y, params.one()), params));
    ++rep.hom_trials;
    if (!(lhs - rhs).is_zero()) ++rep.hom_defects;
  }

  for (std::uint64_t trial = 0; trial < pairs; ++trial) {
    const int p1 = std::uniform_int_distribution<int>(-3, 3)(rng);
    const int p2 = std::uniform_int_distribution<int>(-3, 3)(rng);
    IndexWord ws(static_cast<std::size_t>(std::abs(p1)), 1);
    IndexWord wt(static_cast<std::size_t>(std::abs(p2)), 1);
    const GradedElement a = graded_of(s_word(ws, p1 < 0));
    const GradedElement b = graded_of(t_word(wt, p2 < 0));
    // b ._T a = q^(p1 p2) a ._T b for a in block (p1, 0), b in block (0, p2)
    const GradedElement lhs = prod(b, a);
    const GradedElement rhs =
        scaled(Scalar::q_power(static_cast<std::int64_t>(p1) * p2, params.h_modulus()),
               prod(a, b));
    ++rep.comm_trials;
    if (!(lhs - rhs).is_zero()) ++rep.comm_defects;
  }
  return rep;
}

}  // namespace qtwist
