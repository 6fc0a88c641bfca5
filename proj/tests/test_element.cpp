#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qtwist/element.hpp"
#include "qtwist/parse.hpp"
#include "qtwist/params.hpp"

using namespace qtwist;

namespace {
const Params P(2, 2, UnitCircleRational{1, 4});  // q = i

AlgebraElement gen(const Letter& l) { return AlgebraElement::term(Monomial{l}, P.one()); }
}  // namespace

TEST_CASE("adjoint reverses words, stars letters, conjugates scalars") {
  const AlgebraElement x = gen(s_(1)) * gen(t_(2));
  CHECK(x.adjoint().str() == "t2* s1*");

  const AlgebraElement qx = P.q() * gen(s_(1));
  CHECK(qx.adjoint() == P.qbar() * gen(s_(1, true)));

  const AlgebraElement y = gen(s_(1)) * gen(t_(1, true)) * gen(s_(2));
  CHECK(y.adjoint().adjoint() == y);
}

TEST_CASE("free product is bilinear") {
  CHECK((gen(s_(1)) * gen(s_(1, true))).str() == "s1 s1*");
  const AlgebraElement two = AlgebraElement::term(Monomial::unit(), P.integer(2));
  const AlgebraElement three_t = P.integer(3) * gen(t_(1));
  CHECK((two * three_t).str() == "6 * t1");
  const AlgebraElement sum = (gen(s_(1)) + gen(t_(1))) * gen(s_(1));
  CHECK(sum == gen(s_(1)) * gen(s_(1)) + gen(t_(1)) * gen(s_(1)));
}

TEST_CASE("bidegree counts starred and unstarred letters per family") {
  CHECK(bidegree(Monomial{s_(1), s_(2, true), t_(1), t_(1, true)}) == std::pair<int, int>(0, 0));
  CHECK(bidegree(Monomial{s_(1), t_(1), t_(2)}) == std::pair<int, int>(1, 2));
  CHECK(bidegree(Monomial{t_(1, true)}) == std::pair<int, int>(0, -1));
  CHECK_THROWS_AS(bidegree(Monomial{u_()}), unsupported_letter);
}

TEST_CASE("term order sorts by length then letters") {
  const Monomial a{s_(1)};
  const Monomial b{t_(1)};
  const Monomial c{s_(1), s_(1)};
  CHECK(a < b);
  CHECK(b < c);
  CHECK(!(c < a));
  CHECK(Monomial{s_(1)} < Monomial{s_(1, true)});  // unstarred before starred
}

TEST_CASE("parser handles the full grammar") {
  CHECK(parse_element("t1 s1", P).str() == "t1 s1");
  CHECK(parse_element("q * s1 t1", P).str() == "q * s1 t1");
  CHECK(parse_element("s1*", P).str() == "s1*");
  CHECK(parse_element("s1 * s2", P) == gen(s_(1)) * gen(s_(2)));  // spaced star = product
  CHECK(parse_element("(s1 + t1) s1", P) == (gen(s_(1)) + gen(t_(1))) * gen(s_(1)));
  CHECK(parse_element("2 - 3", P).str() == "-1");
  CHECK(parse_element("-s1 + t1", P) == gen(t_(1)) - gen(s_(1)));
  CHECK(parse_element("h^3 t2*", P) == Scalar::h_power(3, 8) * gen(t_(2, true)));
  CHECK(parse_element("q^-1", P) == AlgebraElement::term(Monomial::unit(), Scalar::q_power(-1, 8)));
  CHECK(parse_element("(s1 s2)*", P) == (gen(s_(1)) * gen(s_(2))).adjoint());
  CHECK_THROWS_AS(parse_element("s3", P), parse_error);  // index out of range
  CHECK_THROWS_AS(parse_element("s1 +", P), parse_error);
  CHECK_THROWS_AS(parse_element("x1", P), parse_error);
}

TEST_CASE("numeric literals need the numeric backend") {
  const Params PN(2, 2, NumericComplex{{0.5, 0.0}});
  CHECK(parse_element("0.25 s1", PN).max_abs_coeff() == 0.25);
  CHECK(parse_element("0.5i", PN) ==
        AlgebraElement::term(Monomial::unit(), Scalar::numeric({0.0, 0.5})));
  CHECK_THROWS_AS(parse_element("0.25 s1", P), mode_error);
  CHECK_THROWS_AS(parse_element("h", PN), mode_error);
}

TEST_CASE("print/parse round trip is byte stable") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> len(0, 6), fam(0, 1), idx(1, 2), star(0, 1), nterm(1, 4),
      coefpick(0, 3);
  for (int rep = 0; rep < 300; ++rep) {
    AlgebraElement x;
    const int terms = nterm(rng);
    for (int ti = 0; ti < terms; ++ti) {
      Monomial m;
      const int L = len(rng);
      for (int j = 0; j < L; ++j)
        m.letters.push_back(Letter{fam(rng) == 0 ? Family::S : Family::T, idx(rng), star(rng) != 0});
      Scalar c = Scalar::exact_int(0, 8);
      switch (coefpick(rng)) {
        case 0: c = P.integer(1 + ti); break;
        case 1: c = -P.q(); break;
        case 2: c = Scalar::h_power(3, 8) + P.integer(2); break;
        default: c = Scalar::h_power(-1, 8); break;
      }
      x.add_term(std::move(m), c);
    }
    const std::string s1 = print_element(x);
    const AlgebraElement y = parse_element(s1, P);
    const std::string s2 = print_element(y);
    REQUIRE(s1 == s2);
    REQUIRE(x == y);
  }
}
