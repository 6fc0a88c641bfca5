#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qtwist/parse.hpp"
#include "qtwist/rewrite.hpp"

using namespace qtwist;

namespace {

const Params P(2, 2, UnitCircleRational{1, 4});  // q = i
const RuleSet R = RuleSet::braided(P);

AlgebraElement el(const std::string& s) { return parse_element(s, P); }

AlgebraElement nf(const std::string& s) { return normalize(el(s), R); }

// Q = sum_i s_i s_i*
AlgebraElement projection_q(const Params& p) {
  AlgebraElement q;
  for (int i = 1; i <= p.n(); ++i)
    q.add_term(Monomial{s_(i), s_(i, true)}, p.one());
  return q;
}

Monomial random_word(std::mt19937_64& rng, const Params& p, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len), fam(0, 1), star(0, 1);
  Monomial m;
  const int L = len(rng);
  for (int j = 0; j < L; ++j) {
    const bool is_s = fam(rng) == 0;
    const int idx = std::uniform_int_distribution<int>(1, is_s ? p.n() : p.m())(rng);
    m.letters.push_back(Letter{is_s ? Family::S : Family::T, idx, star(rng) != 0});
  }
  return m;
}

}  // namespace

TEST_CASE("defining relations normalize with exact phases") {
  CHECK(nf("t1 s1") == el("q * s1 t1"));
  CHECK(nf("s1* s2").is_zero());
  CHECK(nf("s1* s1") == el("1"));
  CHECK(nf("s1* t1") == el("q * t1 s1*"));
  CHECK(nf("t1* s2") == el("q^-1 * s2 t1*"));  // conj(q) = q^-1 on the circle
  CHECK(nf("s1* t2*") == el("q^-1 t2* s1*"));
  CHECK(nf("t2* t2") == el("1"));
  CHECK(nf("t1* t2").is_zero());
}

TEST_CASE("normal forms are ordered s t t* s*") {
  const AlgebraElement x = nf("t1* s1 t2 s2*");
  for (const auto& [mono, c] : x.terms()) CHECK(is_normal_form(mono, R));
  CHECK(nf("s1 t1 t2* s2*") == el("s1 t1 t2* s2*"));  // already normal
}

TEST_CASE("braided vs wick-only rule sets") {
  const Params PN(2, 2, NumericComplex{{0.5, 0.0}});
  const RuleSet W = RuleSet::wick(PN);
  // t s has no redex under Wick-only rules
  const AlgebraElement ts = AlgebraElement::term(Monomial{t_(1), s_(1)}, PN.one());
  CHECK(normalize(ts, W) == ts);
  // but s* t still moves
  const AlgebraElement st = AlgebraElement::term(Monomial{s_(1, true), t_(1)}, PN.one());
  CHECK(normalize(st, W) ==
        PN.q() * AlgebraElement::term(Monomial{t_(1), s_(1, true)}, PN.one()));
  CHECK_THROWS_AS(RuleSet::braided(PN), mode_error);
}

TEST_CASE("complex non-real q is supported numerically") {
  const Params PC(2, 2, NumericComplex{{0.3, 0.4}});
  const RuleSet W = RuleSet::wick(PC);
  const AlgebraElement st = AlgebraElement::term(Monomial{s_(1, true), t_(2)}, PC.one());
  CHECK(normalize(st, W) ==
        PC.q() * AlgebraElement::term(Monomial{t_(2), s_(1, true)}, PC.one()));
  // t* s picks up the honest complex conjugate
  const AlgebraElement tsb = AlgebraElement::term(Monomial{t_(2, true), s_(1)}, PC.one());
  CHECK(normalize(tsb, W) ==
        PC.qbar() * AlgebraElement::term(Monomial{s_(1), t_(2, true)}, PC.one()));
  // star-compatibility carries the conjugation
  CHECK(normalize(st.adjoint(), W) == normalize(st, W).adjoint());
}

TEST_CASE("u letters are rejected outside the crossed mode") {
  CHECK_THROWS_AS(normalize(el("u s1"), R), unsupported_letter);
}

TEST_CASE("check_identity decides equality") {
  // sum_{|mu|=k} s_mu Q s_mu* = sum_{|nu|=k+1} s_nu s_nu*   (n = 2)
  const AlgebraElement q = projection_q(P);
  for (int k = 1; k <= 3; ++k) {
    AlgebraElement lhs;
    for (const auto& mu : words_of_length(2, k)) {
      const AlgebraElement smu = AlgebraElement::term(s_word(mu), P.one());
      lhs += smu * q * smu.adjoint();
    }
    AlgebraElement rhs;
    for (const auto& nu : words_of_length(2, k + 1))
      rhs += AlgebraElement::term(s_word(nu) * s_word(nu, true), P.one());
    CHECK(check_identity(lhs, rhs, R));
  }

  CHECK(check_identity(q * q, q, R));  // Q is a projection
  CHECK(!check_identity(el("s1 t1"), el("t1 s1"), R));
}

TEST_CASE("single-generator families rewrite fine") {
  const Params p1(1, 3, UnitCircleRational{2, 5});
  const FuzzReport rep = fuzz_confluence(p1, RuleSet::braided(p1), 800, 8, 3);
  CHECK(rep.ok());
}

TEST_CASE("normalize is idempotent and star-compatible") {
  std::mt19937_64 rng(4242);
  for (int rep = 0; rep < 400; ++rep) {
    AlgebraElement x;
    const int terms = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int t = 0; t < terms; ++t)
      x.add_term(random_word(rng, P, 8),
                 t % 2 == 0 ? P.q() : P.one() + Scalar::h_power(3, 8));
    const AlgebraElement n1 = normalize(x, R);
    CHECK(normalize(n1, R) == n1);
    CHECK(normalize(x.adjoint(), R) == n1.adjoint());
  }
}

TEST_CASE("adjoint is an anti-homomorphism through normalization") {
  std::mt19937_64 rng(515151);
  for (int rep = 0; rep < 300; ++rep) {
    AlgebraElement x = AlgebraElement::term(random_word(rng, P, 6), P.one());
    AlgebraElement y = AlgebraElement::term(random_word(rng, P, 6), P.q());
    CHECK(normalize((x * y).adjoint() - y.adjoint() * x.adjoint(), R).is_zero());
  }
}

TEST_CASE("word-pair commutation phases match the closed form") {
  // s_j t_nu1 t_nu2* = conj(q)^{|nu1|-|nu2|} t_nu1 t_nu2* s_j
  std::mt19937_64 rng(808);
  for (int rep = 0; rep < 200; ++rep) {
    const int a = std::uniform_int_distribution<int>(0, 3)(rng);
    const int b = std::uniform_int_distribution<int>(0, 3)(rng);
    IndexWord nu1, nu2;
    for (int i = 0; i < a; ++i) nu1.push_back(std::uniform_int_distribution<int>(1, 2)(rng));
    for (int i = 0; i < b; ++i) nu2.push_back(std::uniform_int_distribution<int>(1, 2)(rng));
    const int j = std::uniform_int_distribution<int>(1, 2)(rng);
    const AlgebraElement tt = AlgebraElement::term(t_word(nu1) * t_word(nu2, true), P.one());
    const AlgebraElement sj = AlgebraElement::term(Monomial{s_(j)}, P.one());
    const Scalar phase = Scalar::q_power(-(a - b), P.h_modulus());  // conj(q)^(a-b)
    CHECK(check_identity(sj * tt, phase * (tt * sj), R));
  }
}

TEST_CASE("rewriting terminates within the len^2 bound") {
  std::mt19937_64 rng(33);
  for (int rep = 0; rep < 200; ++rep) {
    const Monomial w = random_word(rng, P, 12);
    std::vector<Letter> letters = w.letters;
    Scalar c = P.one();
    std::size_t steps = 0;
    detail::normalize_monomial(letters, c, R, &steps);  // throws if bound exceeded
    CHECK(steps <= std::max<std::size_t>(1, w.size() * w.size()));
  }
}

TEST_CASE("fuzz: two random strategies agree with the deterministic one") {
  const FuzzReport rep = fuzz_confluence(P, R, 2000, 10, 7);
  CHECK(rep.ok());
  CHECK(rep.trials == 2000);
}

TEST_CASE("fuzz covers the crossed mode too") {
  const Params P8(2, 2, UnitCircleRational{1, 8});
  const FuzzReport rep = fuzz_confluence(P8, RuleSet::crossed(P8), 1500, 9, 11);
  CHECK(rep.ok());
}

TEST_CASE("single letters and normal words are fixed points") {
  CHECK(nf("s1") == el("s1"));
  CHECK(nf("t2*") == el("t2*"));
  CHECK(nf("s1 s2 t1 t1* s2* s1*") == el("s1 s2 t1 t1* s2* s1*"));
}

TEST_CASE("crossed-product untwisting verifies the twisted relations") {
  const Params P8(2, 2, UnitCircleRational{1, 8});
  const CrossedReport rep = verify_crossed_untwist(P8);
  CHECK(rep.ok());
  CHECK(rep.identities.size() > 10);
  CHECK(!rep.note.empty());

  const Params PN(2, 2, NumericComplex{{0.5, 0.0}});
  CHECK_THROWS_AS(verify_crossed_untwist(PN), mode_error);
}

TEST_CASE("crossed mode: u-powers collapse to the right") {
  const Params P8(1, 1, UnitCircleRational{1, 8});
  const RuleSet C = RuleSet::crossed(P8);
  const AlgebraElement x = parse_element("u s1 u u* t1 u*", P8);
  const AlgebraElement n = normalize(x, C);
  REQUIRE(n.term_count() == 1);
  const Monomial& mono = n.terms().begin()->first;
  CHECK(mono.str() == "s1 t1");  // u u* cancels, phases move out
}

TEST_CASE("corrupted rule set breaks a braided identity") {
  const RuleSet bad = R.corrupted();
  CHECK(!check_identity(el("t1 s1"), el("q * s1 t1"), bad));
  CHECK(check_identity(el("t1 s1"), el("q * s1 t1"), R));
}

TEST_CASE("term cap guards runaway inputs") {
  AlgebraElement big;
  for (int i = 0; i < 64; ++i) {
    Monomial m;
    for (int j = 0; j < 6; ++j) m.letters.push_back(s_(1 + ((i >> j) & 1)));
    m.letters.push_back(t_(1 + (i & 1)));
    big.add_term(m, P.integer(i + 1));
  }
  NormalizeOptions opts;
  opts.term_cap = 10;
  CHECK_THROWS_AS(normalize(big, R, nullptr, opts), budget_exceeded);
}
