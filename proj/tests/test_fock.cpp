#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <map>
#include <random>
#include <vector>

#include "qtwist/fock.hpp"
#include "qtwist/parse.hpp"
#include "qtwist/rewrite.hpp"

using namespace qtwist;

namespace {

const Params P3(2, 2, UnitCircleRational{1, 3});  // q = exp(2 pi i / 3)
const RuleSet R3 = RuleSet::braided(P3);

AlgebraElement el(const std::string& s) { return parse_element(s, P3); }

// Independent dense oracle: explicit word enumeration with words stored as
// vectors, no shared index arithmetic with the library path.
struct DenseOracle {
  int n, m, ds, dt;
  Complex q;
  std::vector<std::pair<IndexWord, IndexWord>> basis;
  std::map<std::pair<IndexWord, IndexWord>, std::size_t> index;

  DenseOracle(int n_, int m_, int ds_, int dt_, Complex q_) : n(n_), m(m_), ds(ds_), dt(dt_), q(q_) {
    for (const auto& mu : words_up_to(n, ds))
      for (const auto& nu : words_up_to(m, dt)) {
        index[{mu, nu}] = basis.size();
        basis.push_back({mu, nu});
      }
  }

  Eigen::MatrixXcd generator(const Letter& l) const {
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(basis.size(), basis.size());
    for (std::size_t col = 0; col < basis.size(); ++col) {
      auto [mu, nu] = basis[col];
      Complex coeff = 1.0;
      if (l.family == Family::S && !l.starred) {
        mu.insert(mu.begin(), l.index);
        if (static_cast<int>(mu.size()) > ds) continue;
      } else if (l.family == Family::S && l.starred) {
        if (mu.empty() || mu.front() != l.index) continue;
        mu.erase(mu.begin());
      } else if (l.family == Family::T && !l.starred) {
        coeff = std::pow(q, static_cast<double>(mu.size()));
        nu.insert(nu.begin(), l.index);
        if (static_cast<int>(nu.size()) > dt) continue;
      } else {
        coeff = std::conj(std::pow(q, static_cast<double>(mu.size())));
        if (nu.empty() || nu.front() != l.index) continue;
        nu.erase(nu.begin());
      }
      g(static_cast<Eigen::Index>(index.at({mu, nu})), static_cast<Eigen::Index>(col)) = coeff;
    }
    return g;
  }
};

Monomial random_word(std::mt19937_64& rng, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len), fam(0, 1), idx(1, 2), star(0, 1);
  Monomial mono;
  const int L = len(rng);
  for (int j = 0; j < L; ++j)
    mono.letters.push_back(Letter{fam(rng) == 0 ? Family::S : Family::T, idx(rng), star(rng) != 0});
  return mono;
}

}  // namespace

TEST_CASE("tensor-model generators match the dense oracle") {
  const auto basis = FockBasis::tensor(P3, 3, 3);
  const DenseOracle oracle(2, 2, 3, 3, P3.q_value());
  REQUIRE(basis->dim() == oracle.basis.size());
  for (const Letter& l : {s_(1), s_(2, true), t_(1), t_(2, true)}) {
    const Eigen::MatrixXcd got = Eigen::MatrixXcd(rep_generator(l, basis, P3).mat);
    // the oracle enumerates (mu, nu) pairs in a different order; compare via
    // its own index map
    Eigen::MatrixXcd want = oracle.generator(l);
    // translate oracle indices into library indices
    std::vector<Eigen::Index> perm(oracle.basis.size());
    for (std::size_t k = 0; k < oracle.basis.size(); ++k)
      perm[k] = static_cast<Eigen::Index>(basis->index_of(oracle.basis[k].first, oracle.basis[k].second));
    Eigen::MatrixXcd want_p = Eigen::MatrixXcd::Zero(want.rows(), want.cols());
    for (Eigen::Index i = 0; i < want.rows(); ++i)
      for (Eigen::Index j = 0; j < want.cols(); ++j) want_p(perm[i], perm[j]) = want(i, j);
    REQUIRE((got - want_p).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("index maps are bijections over the full basis") {
  const auto tensor = FockBasis::tensor(P3, 3, 2);
  CHECK(tensor->dim() == 15u * 7u);  // (1+2+4+8) s-words times (1+2+4) t-words
  std::size_t idx = 0;
  for (const auto& mu : words_up_to(2, 3))
    for (const auto& nu : words_up_to(2, 2)) {
      REQUIRE(tensor->index_of(mu, nu) < tensor->dim());
      ++idx;
    }
  CHECK(idx == tensor->dim());
  // distinctness: index_of is injective over the enumeration
  std::vector<bool> seen(tensor->dim(), false);
  for (const auto& mu : words_up_to(2, 3))
    for (const auto& nu : words_up_to(2, 2)) {
      const std::size_t i = tensor->index_of(mu, nu);
      REQUIRE(!seen[i]);
      seen[i] = true;
    }
}

TEST_CASE("vacuum and creation actions") {
  const auto basis = FockBasis::tensor(P3, 3, 3);
  const std::size_t vac = basis->vacuum();

  // s1* kills the vacuum
  const FockOperator s1s = rep_generator(s_(1, true), basis, P3);
  CHECK(s1s.mat.col(static_cast<Eigen::Index>(vac)).nonZeros() == 0);

  // s1 vacuum -> e_{s1} (x) vacuum
  const FockOperator s1 = rep_generator(s_(1), basis, P3);
  const std::size_t target = basis->index_of({1}, {});
  CHECK(std::abs(s1.mat.coeff(static_cast<Eigen::Index>(target), static_cast<Eigen::Index>(vac)) -
                 Complex(1.0, 0.0)) < 1e-15);

  // t1 on e_{s2} (x) vacuum -> q e_{s2} (x) e_{t1}
  const FockOperator t1 = rep_generator(t_(1), basis, P3);
  const std::size_t from = basis->index_of({2}, {});
  const std::size_t to = basis->index_of({2}, {1});
  CHECK(std::abs(t1.mat.coeff(static_cast<Eigen::Index>(to), static_cast<Eigen::Index>(from)) -
                 P3.q_value()) < 1e-15);
}

TEST_CASE("rep_element of the unit and of isometry relations") {
  const auto basis = FockBasis::tensor(P3, 3, 3);
  const FockOperator one = rep_element(el("1"), basis, P3);
  CHECK(Eigen::MatrixXcd(one.mat).isIdentity(1e-15));
  CHECK(relation_residual(el("s1* s1 - 1"), basis, P3) < 1e-15);
  CHECK(relation_residual(el("t2* t2 - 1"), basis, P3) < 1e-15);
}

TEST_CASE("defining relations have zero residual on the safe subspace") {
  const auto basis = FockBasis::tensor(P3, 5, 5);
  CHECK(relation_residual(el("s1* s2"), basis, P3) == 0.0);
  CHECK(relation_residual(el("t1 s1 - q s1 t1"), basis, P3) < 1e-15);
  CHECK(relation_residual(el("s1* t1 - q t1 s1*"), basis, P3) < 1e-15);
  CHECK(relation_residual(el("t1* s2 - q^-1 s2 t1*"), basis, P3) < 1e-15);
}

TEST_CASE("sanity non-relation: s1 t1* has unit column norm") {
  const auto basis = FockBasis::tensor(P3, 3, 3);
  const double r = relation_residual(el("s1 t1*"), basis, P3);
  CHECK(r == 1.0);  // partial isometry: recorded on D = 3
}

TEST_CASE("degenerate input when the word budget exceeds the depth") {
  const auto basis = FockBasis::tensor(P3, 2, 2);
  CHECK_THROWS_AS(relation_residual(el("s1 s1 s1"), basis, P3), degenerate_input);
}

TEST_CASE("grading: entries follow the bidegree of the monomial") {
  const auto basis = FockBasis::tensor(P3, 4, 4);
  std::mt19937_64 rng(5150);
  for (int rep = 0; rep < 40; ++rep) {
    const Monomial mono = random_word(rng, 4);
    std::pair<int, int> deg;
    try {
      deg = bidegree(mono);
    } catch (const unsupported_letter&) {
      continue;
    }
    const FockOperator op =
        rep_element(AlgebraElement::term(mono, P3.one()), basis, P3);
    for (int k = 0; k < op.mat.outerSize(); ++k)
      for (SparseCMat::InnerIterator it(op.mat, k); it; ++it) {
        const auto row = static_cast<std::size_t>(it.row());
        const auto col = static_cast<std::size_t>(it.col());
        REQUIRE(basis->deg_s(row) - basis->deg_s(col) == deg.first);
        REQUIRE(basis->deg_t(row) - basis->deg_t(col) == deg.second);
      }
  }
}

TEST_CASE("equivariance: the representation factors through rewriting") {
  const auto basis = FockBasis::tensor(P3, 5, 5);
  std::mt19937_64 rng(99173);
  for (int rep = 0; rep < 30; ++rep) {
    AlgebraElement x;
    for (int t = 0; t < 2; ++t) x.add_term(random_word(rng, 4), t == 0 ? P3.one() : P3.q());
    const AlgebraElement diff = x - normalize(x, R3);
    if (diff.max_word_length() > 5) continue;
    CHECK(relation_residual(diff, basis, P3) < 1e-12);
  }
}

TEST_CASE("generators have orthonormal columns on the safe subspace") {
  const auto basis = FockBasis::tensor(P3, 4, 4);
  for (const Letter& l : {s_(1), s_(2), t_(1), t_(2)}) {
    const FockOperator g = rep_generator(l, basis, P3);
    const SparseCMat gram = SparseCMat(g.mat.adjoint()) * g.mat;
    for (std::size_t col = 0; col < basis->dim(); ++col) {
      if (basis->deg_s(col) > g.exact_s || basis->deg_t(col) > g.exact_t) continue;
      for (SparseCMat::InnerIterator it(gram, static_cast<int>(col)); it; ++it) {
        const Complex want = it.row() == it.col() ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
        REQUIRE(std::abs(it.value() - want) < 1e-12);
      }
    }
  }
}

TEST_CASE("operator norms") {
  const auto basis = FockBasis::tensor(P3, 4, 4);
  CHECK(operator_norm(FockOperator::identity(basis)) == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(operator_norm(FockOperator::zero(basis)) == 0.0);
  const double ns = operator_norm(rep_generator(s_(1), basis, P3));
  CHECK(ns <= 1.0 + 1e-12);
  CHECK(ns == Catch::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("shell averaging does not increase the norm") {
  // || sum_{|mu|=k} s_mu x s_mu* || <= || x ||, evaluated at matched cuts
  std::mt19937_64 rng(77112);
  for (int rep = 0; rep < 6; ++rep) {
    const int k = 1 + (rep % 2);
    const Monomial mono = random_word(rng, 2);
    const AlgebraElement x = AlgebraElement::term(mono, P3.one());
    int sdeg = 0, tdeg = 0;
    for (const Letter& l : mono.letters) (l.family == Family::S ? sdeg : tdeg) += 1;

    const auto cut = FockBasis::tensor(P3, 4, 4);
    AlgebraElement lhs;
    for (const auto& mu : words_of_length(2, k)) {
      const AlgebraElement smu = AlgebraElement::term(s_word(mu), P3.one());
      lhs += smu * x * smu.adjoint();
    }
    const double left = operator_norm(rep_element(lhs, cut, P3));
    const auto padded = FockBasis::tensor(P3, 4 + k + sdeg, 4 + tdeg, 600000);
    const double right = operator_norm(rep_element(x, padded, P3));
    CHECK(left <= right + 1e-9);
  }
}

TEST_CASE("vacuum expectation values") {
  CHECK(std::abs(vacuum_expectation(el("1"), P3) - Complex(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(vacuum_expectation(el("s1 s1*"), P3)) < 1e-15);
  CHECK(std::abs(vacuum_expectation(el("s1* s1"), P3) - Complex(1.0, 0.0)) < 1e-15);
}

TEST_CASE("full model: free isometries with orthogonal ranges") {
  const Params pn(1, 1, NumericComplex{{0.5, 0.0}});
  const auto basis = FockBasis::full(pn, 6);
  const FockOperator vs = rep_generator(s_(1), basis, pn);
  const FockOperator vt = rep_generator(t_(1), basis, pn);
  // v_s* v_t = 0 and v_i* v_i = 1 in the free model
  const FockOperator cross = compose(rep_generator(s_(1, true), basis, pn), vt);
  CHECK(cross.mat.nonZeros() == 0);
  const FockOperator isom = compose(rep_generator(t_(1, true), basis, pn), vt);
  CHECK(column_norm_residual(
            add(isom, scale(-1.0, FockOperator::identity(basis)))) < 1e-15);
  CHECK(operator_norm(vs) == Catch::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("half-power form is unitarily equivalent to the canonical form") {
  const auto basis = FockBasis::tensor(P3, 3, 3);
  const FockOperator w = diag_fock_unitary(basis, P3);
  for (const Letter& l : {s_(1), t_(1), s_(2, true), t_(2, true)}) {
    const FockOperator canon = rep_generator(l, basis, P3);
    const FockOperator half = rep_generator_half(l, basis, P3);
    const Eigen::MatrixXcd lhs = Eigen::MatrixXcd(w.mat) * Eigen::MatrixXcd(canon.mat) *
                                 Eigen::MatrixXcd(w.mat).adjoint();
    CHECK((lhs - Eigen::MatrixXcd(half.mat)).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("gram evidence: ranks and duplicates") {
  const auto tiny = FockBasis::tensor(P3, 1, 1);
  const GramReport r0 = gram_of({Monomial::unit()}, tiny, P3);
  CHECK(r0.rank == 1);

  // cap = 0 enumerates only the unit monomial
  const GramReport cap0 = gram_faithfulness(0, tiny, P3);
  CHECK(cap0.count == 1);
  CHECK(cap0.rank == 1);

  // duplicated rows are detected
  const GramReport dup = gram_of({Monomial{s_(1)}, Monomial{s_(1)}}, tiny, P3);
  CHECK(dup.count == 2);
  CHECK(dup.rank == 1);

  const Params pi(2, 2, UnitCircleRational{1, 4});  // q = i
  const auto basis = FockBasis::tensor(pi, 4, 4);
  const GramReport rep = gram_faithfulness(1, basis, pi);
  CHECK(rep.count == 81);
  CHECK(rep.rank == 81);
  CHECK(rep.min_singular > 1e-8);

  CHECK_THROWS_AS(gram_faithfulness(2, basis, pi), degenerate_input);  // needs D >= 5
}

TEST_CASE("dimension guard") {
  CHECK_THROWS_AS(FockBasis::tensor(P3, 10, 10, 1000), budget_exceeded);
  CHECK_THROWS_AS(FockBasis::full(P3, 12, 1000), budget_exceeded);
}
