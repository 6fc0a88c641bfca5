#pragma once

// Fixed-point structure: the conditional expectation onto the bidegree-(0,0)
// subalgebra, the averaging isometries w_k, the ideal matrix units
// E_{mu nu} = s_mu (1 - Q) s_nu*, and the finite-dimensional layers they
// assemble into.
//
// The averaging identities live in the quotient where sum_i s_i s_i* = 1 and
// sum_r t_r t_r* = 1.  Equality there is decided by level expansion: within
// each bidegree, every normal-form monomial s_mu1 t_nu1 t_nu2* s_mu2* is
// expanded to a common level (|mu2|, |nu2|) via
//     s_mu1 X s_mu2*      = sum_omega q^((|nu1|-|nu2|) |omega|)
//                               s_{mu1 omega} X s_{mu2 omega}*,
//     t_nu1 t_nu2*        = sum_tau t_{nu1 tau} t_{nu2 tau}*,
// both instances of inserting a full shell sum, and the expansions cancel
// exactly iff the element vanishes in the quotient.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qtwist/rewrite.hpp"

namespace qtwist {

// normalize + keep the bidegree-(0,0) monomials
inline AlgebraElement conditional_expectation(const AlgebraElement& x, const Params& params) {
  if (!params.exact()) throw mode_error("the conditional expectation runs in braided mode");
  const AlgebraElement n = normalize(x, RuleSet::braided(params));
  AlgebraElement out;
  for (const auto& [mono, c] : n.terms())
    if (bidegree(mono) == std::pair<int, int>(0, 0)) out.add_term(mono, c);
  return out;
}

namespace detail {

struct NormalShape {
  IndexWord mu1, nu1, nu2, mu2;
};

// split a braided normal-form word s_mu1 t_nu1 t_nu2* s_mu2*
inline std::optional<NormalShape> decompose_normal(const Monomial& mono) {
  NormalShape s;
  int phase = 0;  // 0: S, 1: T, 2: T*, 3: S*
  for (const Letter& l : mono.letters) {
    int cls;
    if (l.family == Family::S && !l.starred) cls = 0;
    else if (l.family == Family::T && !l.starred) cls = 1;
    else if (l.family == Family::T) cls = 2;
    else if (l.family == Family::S) cls = 3;
    else return std::nullopt;  // u letter
    if (cls < phase) return std::nullopt;
    phase = cls;
    switch (cls) {
      case 0: s.mu1.push_back(l.index); break;
      case 1: s.nu1.push_back(l.index); break;
      case 2: s.nu2.push_back(l.index); break;
      default: s.mu2.push_back(l.index); break;
    }
  }
  // starred blocks carry their index words reversed
  std::reverse(s.nu2.begin(), s.nu2.end());
  std::reverse(s.mu2.begin(), s.mu2.end());
  return s;
}

inline Monomial compose_normal(const NormalShape& s) {
  return s_word(s.mu1) * t_word(s.nu1) * t_word(s.nu2, true) * s_word(s.mu2, true);
}

}  // namespace detail

// Reduce modulo the shell sums; the result is zero iff the input vanishes in
// the quotient (all inputs here are homogeneous sums of normal monomials).
inline AlgebraElement cuntz_reduce(const AlgebraElement& x, const Params& params,
                                   std::size_t term_cap = 1'000'000) {
  const RuleSet rules = RuleSet::braided(params);
  const AlgebraElement nx = normalize(x, rules);

  std::map<std::pair<int, int>, std::vector<std::pair<detail::NormalShape, Scalar>>> groups;
  for (const auto& [mono, c] : nx.terms()) {
    const auto shape = detail::decompose_normal(mono);
    if (!shape) throw unsupported_letter("quotient reduction needs s/t normal-form monomials");
    groups[bidegree(mono)].push_back({*shape, c});
  }

  AlgebraElement out;
  std::size_t produced = 0;
  for (const auto& [deg, shapes] : groups) {
    std::size_t ls = 0, lt = 0;
    for (const auto& [s, c] : shapes) {
      ls = std::max(ls, s.mu2.size());
      lt = std::max(lt, s.nu2.size());
    }
    for (const auto& [s, c] : shapes) {
      const int dt = static_cast<int>(lt - s.nu2.size());
      const int ds = static_cast<int>(ls - s.mu2.size());
      const int tdeg = static_cast<int>(s.nu1.size()) - static_cast<int>(s.nu2.size());
      const Scalar phase = Scalar::q_power(static_cast<std::int64_t>(tdeg) * ds, params.h_modulus());
      for (const auto& tau : words_of_length(params.m(), dt)) {
        for (const auto& omega : words_of_length(params.n(), ds)) {
          if (++produced > term_cap)
            throw budget_exceeded("term-cap", "quotient reduction exceeds the term cap");
          detail::NormalShape e = s;
          e.nu1.insert(e.nu1.end(), tau.begin(), tau.end());
          e.nu2.insert(e.nu2.end(), tau.begin(), tau.end());
          e.mu1.insert(e.mu1.end(), omega.begin(), omega.end());
          e.mu2.insert(e.mu2.end(), omega.begin(), omega.end());
          out.add_term(detail::compose_normal(e), c * phase);
        }
      }
    }
  }
  return out;
}

inline bool cuntz_check_identity(const AlgebraElement& lhs, const AlgebraElement& rhs,
                                 const Params& params) {
  return cuntz_reduce(lhs - rhs, params).is_zero();
}

// ---------------------------------------------------------------------------
// Averaging isometries

// w_k = w_{k,2} w_{k,1} with w_{k,1} = sum_{|delta|=k} s_delta s_gamma s_delta*,
// gamma = 1^{2k} 2 (and the t-side analogue); an isometry in the quotient.
inline AlgebraElement w_k_isometry(int k, const Params& params) {
  if (!params.exact()) throw mode_error("the averaging isometry needs braided mode");
  if (params.n() < 2 || params.m() < 2)
    throw mode_error("the averaging construction needs n >= 2 and m >= 2");
  if (k < 1) throw mode_error("the averaging construction needs k >= 1");
  const RuleSet rules = RuleSet::braided(params);

  IndexWord gs(static_cast<std::size_t>(2 * k), 1);
  gs.push_back(2);
  IndexWord gt = gs;

  AlgebraElement w1, w2;
  for (const auto& delta : words_of_length(params.n(), k))
    w1.add_term(s_word(delta) * s_word(gs) * s_word(delta, true), params.one());
  for (const auto& lambda : words_of_length(params.m(), k))
    w2.add_term(t_word(lambda) * t_word(gt) * t_word(lambda, true), params.one());

  const AlgebraElement w = normalize(w2 * w1, rules);
  const AlgebraElement unit = AlgebraElement::term(Monomial::unit(), params.one());
  if (!cuntz_check_identity(w.adjoint() * w, unit, params))
    throw invariant_violation("w_k* w_k = 1 failed in the quotient");
  return w;
}

struct ExpectationReport {
  int k = 0;
  std::size_t checked = 0;
  std::size_t failures = 0;
  bool sampled = false;
  std::vector<std::string> failing;
  bool ok() const { return failures == 0; }
};

// Verify E(x) = w_k* x w_k over the spanning monomials with
// max(|mu1|, |mu2|) + max(|nu1|, |nu2|) <= k.  Exhaustive for k <= 2;
// deterministic sampling beyond that, with a hard stop at k > 4.
inline ExpectationReport verify_expectation_identity(int k, const Params& params,
                                                     std::uint64_t seed = 1,
                                                     std::size_t sample_cap = 400) {
  if (k > 4)
    throw budget_exceeded("expectation-k", "exhaustive averaging suites are capped at small k");
  const AlgebraElement w = w_k_isometry(k, params);
  const AlgebraElement wstar = w.adjoint();

  ExpectationReport rep;
  rep.k = k;
  std::vector<Monomial> span;
  const auto ws = words_up_to(params.n(), k);
  const auto wt = words_up_to(params.m(), k);
  for (const auto& mu1 : ws)
    for (const auto& mu2 : ws) {
      const std::size_t a = std::max(mu1.size(), mu2.size());
      for (const auto& nu1 : wt)
        for (const auto& nu2 : wt) {
          if (a + std::max(nu1.size(), nu2.size()) > static_cast<std::size_t>(k)) continue;
          span.push_back(s_word(mu1) * s_word(mu2, true) * t_word(nu1) * t_word(nu2, true));
        }
    }

  if (k > 2 && span.size() > sample_cap) {
    rep.sampled = true;
    std::mt19937_64 rng(seed);
    std::shuffle(span.begin(), span.end(), rng);
    span.resize(sample_cap);
  }

  for (const Monomial& mono : span) {
    const AlgebraElement x = AlgebraElement::term(mono, params.one());
    const bool ok = cuntz_check_identity(wstar * x * w, conditional_expectation(x, params), params);
    ++rep.checked;
    if (!ok) {
      ++rep.failures;
      if (rep.failing.size() < 16) rep.failing.push_back(mono.str());
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Ideal matrix units

// E_{mu nu} = s_mu (1 - Q) s_nu*
inline AlgebraElement ideal_matrix_units(const IndexWord& mu, const IndexWord& nu,
                                         const Params& params) {
  if (!params.exact()) throw mode_error("matrix units live in braided mode");
  const AlgebraElement unit = AlgebraElement::term(Monomial::unit(), params.one());
  AlgebraElement q;
  for (int i = 1; i <= params.n(); ++i) q.add_term(Monomial{s_(i), s_(i, true)}, params.one());
  const AlgebraElement smu = AlgebraElement::term(s_word(mu), params.one());
  const AlgebraElement snu = AlgebraElement::term(s_word(nu), params.one());
  return normalize(smu * (unit - q) * snu.adjoint(), RuleSet::braided(params));
}

struct MatrixUnitReport {
  std::size_t unit_law_checked = 0, unit_law_failures = 0;
  std::size_t twist_checked = 0, twist_failures = 0;
  bool ok() const { return unit_law_failures == 0 && twist_failures == 0; }
};

// E_{mu1 nu1} E_{mu2 nu2} = delta_{mu2 nu1} E_{mu1 nu2} and the twisted
// commutation t_{mu2} t_{nu2}* E_{mu1 nu1}
//   = q^((|mu1|-|nu1|)(|mu2|-|nu2|)) E_{mu1 nu1} t_{mu2} t_{nu2}*,
// the orientation that follows from t_i s_a s_b* = q^(|a|-|b|) s_a s_b* t_i.
inline MatrixUnitReport verify_matrix_units(int max_len, const Params& params) {
  const RuleSet rules = RuleSet::braided(params);
  MatrixUnitReport rep;
  const auto ws = words_up_to(params.n(), max_len);
  const auto wt = words_up_to(params.m(), max_len);

  std::vector<AlgebraElement> units;
  units.reserve(ws.size() * ws.size());
  for (const auto& mu : ws)
    for (const auto& nu : ws) units.push_back(ideal_matrix_units(mu, nu, params));
  auto unit_at = [&](std::size_t i, std::size_t j) -> const AlgebraElement& {
    return units[i * ws.size() + j];
  };

  for (std::size_t a = 0; a < ws.size(); ++a)
    for (std::size_t b = 0; b < ws.size(); ++b)
      for (std::size_t c = 0; c < ws.size(); ++c)
        for (std::size_t d = 0; d < ws.size(); ++d) {
          const AlgebraElement want =
              ws[c] == ws[b] ? unit_at(a, d) : AlgebraElement::zero();
          ++rep.unit_law_checked;
          if (!check_identity(unit_at(a, b) * unit_at(c, d), want, rules))
            ++rep.unit_law_failures;
        }

  for (const auto& mu2 : wt)
    for (const auto& nu2 : wt) {
      const AlgebraElement tt =
          AlgebraElement::term(t_word(mu2) * t_word(nu2, true), params.one());
      const std::int64_t tpow = static_cast<std::int64_t>(mu2.size()) -
                                static_cast<std::int64_t>(nu2.size());
      for (std::size_t a = 0; a < ws.size(); ++a)
        for (std::size_t b = 0; b < ws.size(); ++b) {
          const std::int64_t spow = static_cast<std::int64_t>(ws[a].size()) -
                                    static_cast<std::int64_t>(ws[b].size());
          const Scalar phase = Scalar::q_power(spow * tpow, params.h_modulus());
          ++rep.twist_checked;
          if (!check_identity(tt * unit_at(a, b), phase * (unit_at(a, b) * tt), rules))
            ++rep.twist_failures;
        }
    }
  return rep;
}

// ---------------------------------------------------------------------------
// Finite-dimensional layers of the fixed-point algebra

struct AFLayer {
  struct Block {
    int k1 = 0, k2 = 0;
    std::int64_t dim = 0;         // block is a full matrix algebra of this size
    std::int64_t unit_count = 0;  // dim^2 matrix units
  };
  int k = 0;
  std::vector<Block> blocks;
  std::int64_t total_units() const {
    std::int64_t s = 0;
    for (const auto& b : blocks) s += b.unit_count;
    return s;
  }
};

inline AFLayer af_layer(int k, const Params& params) {
  if (k < 0) throw mode_error("layer index must be >= 0");
  if (k > 60) throw budget_exceeded("layer-k", "block dimensions overflow past k = 60");
  AFLayer layer;
  layer.k = k;
  for (int k1 = k; k1 >= 0; --k1) {
    const int k2 = k - k1;
    AFLayer::Block b;
    b.k1 = k1;
    b.k2 = k2;
    std::int64_t dim = 1;
    for (int i = 0; i < k1; ++i) dim *= params.n();
    for (int i = 0; i < k2; ++i) dim *= params.m();
    b.dim = dim;
    b.unit_count = dim * dim;
    layer.blocks.push_back(b);
  }
  return layer;
}

struct AFLayerReport {
  AFLayer layer;
  std::size_t checked = 0;
  std::size_t failures = 0;
  bool ok() const { return failures == 0; }
};

// Spot-check matrix-unit relations inside one random unit tuple per block,
// plus the cross-block commutation of the pure-s and pure-t parts.
inline AFLayerReport af_layer_check(int k, const Params& params, std::uint64_t seed = 1) {
  if (!params.exact()) throw mode_error("layer checks need braided mode");
  const RuleSet rules = RuleSet::braided(params);
  AFLayerReport rep;
  rep.layer = af_layer(k, params);
  std::mt19937_64 rng(seed);

  auto random_word = [&](int alphabet, int len) {
    IndexWord w(static_cast<std::size_t>(len));
    for (auto& v : w) v = std::uniform_int_distribution<int>(1, alphabet)(rng);
    return w;
  };
  auto unit = [&](const IndexWord& mu1, const IndexWord& nu1, const IndexWord& nu2,
                  const IndexWord& mu2) {
    return AlgebraElement::term(
        s_word(mu1) * t_word(nu1) * t_word(nu2, true) * s_word(mu2, true), params.one());
  };

  for (const auto& b : rep.layer.blocks) {
    // unit law u_{IJ} u_{KL} = delta_{JK} u_{IL} on random indices
    const IndexWord m1 = random_word(params.n(), b.k1), m2 = random_word(params.n(), b.k1);
    const IndexWord m3 = random_word(params.n(), b.k1), m4 = random_word(params.n(), b.k1);
    const IndexWord n1 = random_word(params.m(), b.k2), n2 = random_word(params.m(), b.k2);
    const IndexWord n3 = random_word(params.m(), b.k2), n4 = random_word(params.m(), b.k2);
    const AlgebraElement lhs = unit(m1, n1, n2, m2) * unit(m3, n3, n4, m4);
    const AlgebraElement want = (m3 == m2 && n3 == n2) ? unit(m1, n1, n4, m4)
                                                       : AlgebraElement::zero();
    ++rep.checked;
    if (!check_identity(lhs, want, rules)) ++rep.failures;

    // the s-part and t-part of a block commute
    const AlgebraElement x =
        AlgebraElement::term(s_word(m1) * s_word(m2, true), params.one());
    const AlgebraElement y =
        AlgebraElement::term(t_word(n1) * t_word(n2, true), params.one());
    ++rep.checked;
    if (!check_identity(x * y, y * x, rules)) ++rep.failures;
  }
  return rep;
}

}  // namespace qtwist
