#pragma once

// The acceptance battery.  Every criterion is pinned here, in code: the
// configuration, the tolerance, and the pass condition.  suite_all runs all
// ten and aggregates.

#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qtwist/deform.hpp"
#include "qtwist/fock.hpp"
#include "qtwist/ktheory.hpp"
#include "qtwist/report.hpp"
#include "qtwist/structure.hpp"

namespace qtwist {

struct SuiteOptions {
  double tol = 1e-10;          // numeric tolerance; 0 = strict
  std::uint64_t seed = 7;
  bool corrupt_phase = false;  // test hook: flips the braided phase in criterion 1
};

namespace detail {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// bound pinned by the criterion, never loosened; --tol 0 makes it strict
inline double pin(double pinned, const SuiteOptions& opts) { return std::min(pinned, opts.tol >= 0 && opts.tol < pinned ? opts.tol : pinned); }

}  // namespace detail

// 1. Rewriter exactness at q = i, n = m = 2, plus confluence fuzzing.
inline CheckResult criterion_rewriter(const SuiteOptions& opts) {
  detail::Stopwatch watch;
  const Params p(2, 2, UnitCircleRational{1, 4});
  RuleSet rules = RuleSet::braided(p);
  if (opts.corrupt_phase) rules = rules.corrupted();
  const Scalar one = p.one();

  std::size_t defects = 0;
  auto expect = [&](const AlgebraElement& x, const AlgebraElement& want) {
    if (!(normalize(x, rules) == normalize(want, rules))) ++defects;
  };
  const AlgebraElement unit = AlgebraElement::term(Monomial::unit(), one);
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j) {
      const AlgebraElement si = AlgebraElement::term(Monomial{s_(i)}, one);
      const AlgebraElement sj = AlgebraElement::term(Monomial{s_(j)}, one);
      const AlgebraElement ti = AlgebraElement::term(Monomial{t_(i)}, one);
      const AlgebraElement tj = AlgebraElement::term(Monomial{t_(j)}, one);
      expect(si.adjoint() * sj, i == j ? unit : AlgebraElement::zero());
      expect(ti.adjoint() * tj, i == j ? unit : AlgebraElement::zero());
      expect(sj.adjoint() * ti, p.q() * (ti * sj.adjoint()));
      expect(ti * sj, p.q() * (sj * ti));
      expect(ti.adjoint() * sj, p.qbar() * (sj * ti.adjoint()));
    }

  const FuzzReport fuzz = fuzz_confluence(p, rules, 10000, 10, opts.seed);
  defects += fuzz.disagreements.size();

  CheckResult c;
  c.name = "rewriter-exactness";
  c.paper_anchor = "defining-relations";
  c.metric = static_cast<double>(defects);
  c.bound = 0.0;
  c.seconds = watch.seconds();
  std::ostringstream os;
  os << "relation defects + fuzz disagreements over " << fuzz.trials << " trials; runtime limit 60 s";
  c.detail = os.str();
  c.status = (defects == 0 && c.seconds < 60.0) ? "pass" : "fail";
  return c;
}

// 2. Fock relation residuals at n = m = 2, D = 5, q = exp(2 pi i / 3).
inline CheckResult criterion_fock_residuals(const SuiteOptions& opts) {
  detail::Stopwatch watch;
  const Params p(2, 2, UnitCircleRational{1, 3});
  const FockBasisPtr basis = FockBasis::tensor(p, 5, 5);
  const Scalar one = p.one();

  double worst = 0.0;
  auto measure = [&](const AlgebraElement& x) {
    worst = std::max(worst, relation_residual(x, basis, p));
  };
  const AlgebraElement unit = AlgebraElement::term(Monomial::unit(), one);
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j) {
      const AlgebraElement si = AlgebraElement::term(Monomial{s_(i)}, one);
      const AlgebraElement sj = AlgebraElement::term(Monomial{s_(j)}, one);
      const AlgebraElement ti = AlgebraElement::term(Monomial{t_(i)}, one);
      const AlgebraElement tj = AlgebraElement::term(Monomial{t_(j)}, one);
      measure(si.adjoint() * sj - (i == j ? unit : AlgebraElement::zero()));
      measure(ti.adjoint() * tj - (i == j ? unit : AlgebraElement::zero()));
      measure(sj.adjoint() * ti - p.q() * (ti * sj.adjoint()));
      measure(ti * sj - p.q() * (sj * ti));
      measure(ti.adjoint() * sj - p.qbar() * (sj * ti.adjoint()));
    }

  CheckResult c;
  c.name = "fock-relation-residuals";
  c.paper_anchor = "fock-representation";
  c.metric = worst;
  c.bound = detail::pin(1e-12, opts);
  c.seconds = watch.seconds();
  c.detail = "max residual over 20 defining relations on the safe subspace; runtime limit 30 s";
  c.status = residual_status(worst, c.bound);
  if (c.seconds >= 30.0) c.status = "fail";
  return c;
}

// 3. Untwist roundtrip: q = 0.5, K = 12, D = 14 and q = 0.3, K = 10, D = 12.
inline CheckResult criterion_roundtrip(const SuiteOptions&) {
  detail::Stopwatch watch;
  const Params p_half(1, 1, NumericComplex{{0.5, 0.0}});
  const RoundtripReport a = roundtrip_check(12, 14, p_half);
  const Params p_third(1, 1, NumericComplex{{0.3, 0.0}});
  const RoundtripReport b = roundtrip_check(10, 12, p_third);

  CheckResult c;
  c.name = "untwist-roundtrip";
  c.paper_anchor = "untwist-isomorphism";
  c.metric = std::max(a.max_residual(), b.max_residual());
  c.bound = a.certified_bound;  // 5 * 0.5^13 ~ 6.1e-4
  c.seconds = watch.seconds();
  std::ostringstream os;
  os << "q=0.5,K=12,D=14: " << a.max_residual() << " <= " << a.certified_bound
     << " and <= 1e-3; q=0.3,K=10,D=12: " << b.max_residual() << " <= 1e-4 (certified "
     << b.certified_bound << ")";
  c.detail = os.str();
  const bool ok = a.pass && a.max_residual() <= 1e-3 && b.pass && b.max_residual() <= 1e-4;
  c.status = ok ? "pass" : "fail";
  return c;
}

// 4. Deformed-product homomorphism at q = exp(2 pi i / 3), 1000 pairs.
inline CheckResult criterion_rieffel(const SuiteOptions& opts) {
  detail::Stopwatch watch;
  const Params p(2, 2, UnitCircleRational{1, 3});
  const RieffelReport rep = phi_theta_check(p, 1000, opts.seed);
  std::size_t defects = rep.hom_defects + rep.comm_defects;
  for (const auto& id : rep.relation_checks)
    if (!id.ok) ++defects;

  CheckResult c;
  c.name = "deformed-product-homomorphism";
  c.paper_anchor = "deformed-product";
  c.metric = static_cast<double>(defects);
  c.bound = 0.0;
  c.seconds = watch.seconds();
  std::ostringstream os;
  os << rep.hom_trials << " product pairs, " << rep.comm_trials
     << " commutation bidegrees, exact phase equality";
  c.detail = os.str();
  c.status = defects == 0 ? "pass" : "fail";
  return c;
}

// 5. Averaging identity at q = i for k = 1 and k = 2.
inline CheckResult criterion_averaging(const SuiteOptions& opts) {
  detail::Stopwatch watch;
  const Params p(2, 2, UnitCircleRational{1, 4});
  const ExpectationReport r1 = verify_expectation_identity(1, p, opts.seed);
  const ExpectationReport r2 = verify_expectation_identity(2, p, opts.seed);

  CheckResult c;
  c.name = "averaging-identity";
  c.paper_anchor = "averaging-identity";
  c.metric = static_cast<double>(r1.failures + r2.failures);
  c.bound = 0.0;
  c.seconds = watch.seconds();
  std::ostringstream os;
  os << "k=1: " << r1.checked << " monomials, k=2: " << r2.checked
     << " monomials, exhaustive; isometry asserted; runtime limit 300 s";
  c.detail = os.str();
  c.status = (c.metric == 0.0 && c.seconds < 300.0) ? "pass" : "fail";
  return c;
}

// 6. Matrix-unit laws and the twisted commutation phase, |mu|, |nu| <= 2.
inline CheckResult criterion_matrix_units(const SuiteOptions&) {
  detail::Stopwatch watch;
  const Params p(2, 2, UnitCircleRational{1, 4});
  const MatrixUnitReport rep = verify_matrix_units(2, p);

  CheckResult c;
  c.name = "ideal-matrix-units";
  c.paper_anchor = "ideal-matrix-units";
  c.metric = static_cast<double>(rep.unit_law_failures + rep.twist_failures);
  c.bound = 0.0;
  c.seconds = watch.seconds();
  std::ostringstream os;
  os << rep.unit_law_checked << " unit-law products and " << rep.twist_checked
     << " twisted commutations, exact";
  c.detail = os.str();
  c.status = rep.ok() ? "pass" : "fail";
  return c;
}

// 7. K-theory closed forms for 2 <= n, m <= 12 and the Ext endpoints.
inline CheckResult criterion_ktheory(const SuiteOptions&) {
  detail::Stopwatch watch;
  std::size_t mismatches = 0;
  for (std::int64_t n = 2; n <= 12; ++n)
    for (std::int64_t m = 2; m <= 12; ++m) {
      const std::int64_t d = std::gcd(n - 1, m - 1);
      const FgAbelianGroup zd = d > 1 ? FgAbelianGroup::cyclic(d) : FgAbelianGroup::trivial();
      const PipelineReport pipe = k_pipeline(n, m);
      if (!pipe.ok() || !(pipe.quotient.k0 == zd) || !(pipe.quotient.k1 == zd)) ++mismatches;
      if (!(pipe.largest_ideal.k0 == FgAbelianGroup::free(1) + zd) ||
          !pipe.largest_ideal.k1.is_trivial())
        ++mismatches;
      const ExtReport ext = uct_ext(n, m);
      if (d == 1) {
        if (!ext.ext_zero) ++mismatches;
      } else {
        if (!(ext.left == FgAbelianGroup(0, {d, d})) || !(ext.right == FgAbelianGroup::cyclic(d)) ||
            ext.order_bound != d * d * d)
          ++mismatches;
      }
    }

  CheckResult c;
  c.name = "k-theory-table";
  c.paper_anchor = "k-theory-closed-forms";
  c.metric = static_cast<double>(mismatches);
  c.bound = 0.0;
  c.seconds = watch.seconds();
  c.detail = "121 (n, m) pairs: K-groups, largest-ideal K-groups, Ext endpoints; runtime limit 1 s";
  c.status = (mismatches == 0 && c.seconds < 1.0) ? "pass" : "fail";
  return c;
}

// 8. Crossed-product untwist with exact h at a/b = 1/8.
inline CheckResult criterion_crossed(const SuiteOptions&) {
  detail::Stopwatch watch;
  const Params p(2, 2, UnitCircleRational{1, 8});
  const CrossedReport rep = verify_crossed_untwist(p);
  std::size_t defects = 0;
  for (const auto& id : rep.identities)
    if (!id.ok) ++defects;

  CheckResult c;
  c.name = "crossed-product-untwist";
  c.paper_anchor = "crossed-product-untwist";
  c.metric = static_cast<double>(defects);
  c.bound = 0.0;
  c.seconds = watch.seconds();
  std::ostringstream os;
  os << rep.identities.size() << " identities, exact phases";
  c.detail = os.str();
  c.status = defects == 0 ? "pass" : "fail";
  return c;
}

// 9. Shell-averaging norm inequality evidence at n = m = 2, D = 6.
inline CheckResult criterion_norm_inequality(const SuiteOptions& opts) {
  detail::Stopwatch watch;
  const Params p(2, 2, UnitCircleRational{1, 3});
  const FockBasisPtr cut = FockBasis::tensor(p, 6, 6);
  std::mt19937_64 rng(opts.seed ^ 0xC0FFEE);
  std::size_t violations = 0;
  double worst_gap = -1.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 1 + (trial % 2);
    Monomial mono;
    const int len = std::uniform_int_distribution<int>(1, 2)(rng);
    int sdeg = 0, tdeg = 0;
    for (int j = 0; j < len; ++j) {
      const bool is_s = std::uniform_int_distribution<int>(0, 1)(rng) != 0;
      (is_s ? sdeg : tdeg) += 1;
      mono.letters.push_back(Letter{is_s ? Family::S : Family::T,
                                    std::uniform_int_distribution<int>(1, 2)(rng),
                                    std::uniform_int_distribution<int>(0, 1)(rng) != 0});
    }
    const AlgebraElement x = AlgebraElement::term(mono, p.one());
    AlgebraElement shell;
    for (const auto& mu : words_of_length(2, k)) {
      const AlgebraElement smu = AlgebraElement::term(s_word(mu), p.one());
      shell += smu * x * smu.adjoint();
    }
    const double lhs = operator_norm(rep_element(shell, cut, p));
    const FockBasisPtr padded = FockBasis::tensor(p, 6 + sdeg + k, 6 + tdeg, 600000);
    const double rhs = operator_norm(rep_element(x, padded, p));
    if (lhs > rhs + 1e-9) ++violations;
    worst_gap = std::max(worst_gap, lhs - rhs);
  }

  CheckResult c;
  c.name = "shell-norm-inequality";
  c.paper_anchor = "shell-norm-inequality";
  c.metric = static_cast<double>(violations);
  c.bound = 0.0;
  c.seconds = watch.seconds();
  std::ostringstream os;
  os << "50 random monomials, k in {1, 2}; worst lhs - rhs = " << worst_gap << " (allowed 1e-9)";
  c.detail = os.str();
  c.status = violations == 0 ? "pass" : "fail";
  return c;
}

// 10. Faithfulness evidence: full-rank Gram matrix at cap = 1, D = 4, q = i.
inline CheckResult criterion_faithfulness(const SuiteOptions&) {
  detail::Stopwatch watch;
  const Params p(2, 2, UnitCircleRational{1, 4});
  const FockBasisPtr basis = FockBasis::tensor(p, 4, 4);
  const GramReport rep = gram_faithfulness(1, basis, p);

  CheckResult c;
  c.name = "faithfulness-evidence";
  c.paper_anchor = "fock-faithfulness";
  c.metric = rep.min_singular;
  c.bound = 1e-8;  // required: min singular value above this
  c.seconds = watch.seconds();
  std::ostringstream os;
  os << "rank " << rep.rank << " of " << rep.count
     << " monomials on a " << rep.dimension << "-dimensional truncation; evidence only, not a proof";
  c.detail = os.str();
  c.status = (rep.rank == rep.count && rep.min_singular > 1e-8) ? "pass" : "fail";
  return c;
}

inline SuiteReport suite_all(const SuiteOptions& opts = {}) {
  detail::Stopwatch watch;
  SuiteReport rep;
  rep.checks.push_back(criterion_rewriter(opts));
  rep.checks.push_back(criterion_fock_residuals(opts));
  rep.checks.push_back(criterion_roundtrip(opts));
  rep.checks.push_back(criterion_rieffel(opts));
  rep.checks.push_back(criterion_averaging(opts));
  rep.checks.push_back(criterion_matrix_units(opts));
  rep.checks.push_back(criterion_ktheory(opts));
  rep.checks.push_back(criterion_crossed(opts));
  rep.checks.push_back(criterion_norm_inequality(opts));
  rep.checks.push_back(criterion_faithfulness(opts));
  rep.seconds = watch.seconds();
  return rep;
}

}  // namespace qtwist
