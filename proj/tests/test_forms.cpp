#include "bvbfv/forms.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "testutil.hpp"

using namespace bvbfv;
namespace tu = bvbfv::testutil;

namespace {

const Point P1{1, 1};
const Point P2{1, 2};

Functional single(Word w, GaussQ c = GaussQ(1), Monomial z = {}) {
  Term t;
  t.zmono = std::move(z);
  t.word = std::move(w);
  return Functional::term(std::move(t), std::move(c));
}

// Reference Koszul sign of a word permutation: parity-weighted inversions.
int permutation_sign(const Word& w, const std::vector<std::size_t>& perm) {
  int sign = 1;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    for (std::size_t j = i + 1; j < perm.size(); ++j) {
      if (perm[i] > perm[j] && w[perm[i]].odd() && w[perm[j]].odd()) {
        sign = -sign;
      }
    }
  }
  return sign;
}

}  // namespace

TEST_CASE("canonicalize: relabeling symmetry") {
  // dt_1 dtheta_2 and its point-swapped copy agree up to the tracked sign.
  Functional a = single({dt(P1), dtheta(P2)});
  Functional b = single({dt(P2), dtheta(P1)});
  REQUIRE(a.size() == 1);
  REQUIRE(b.size() == 1);
  CHECK(a.terms().begin()->first.word.size() == 2);
  CHECK(a.terms().begin()->first == b.terms().begin()->first);
}

TEST_CASE("canonicalize: odd square vanishes") {
  CHECK(single({dt(P1), dt(P1)}).is_zero());
  CHECK(single({a_ins(P1, 1), a_ins(P1, 1)}).is_zero());
  CHECK(single({eta(P1, P2), eta(P1, P2)}).is_zero());
}

TEST_CASE("canonicalize: tadpole eta vanishes") {
  CHECK(single({eta(P1, P1)}).is_zero());
}

TEST_CASE("canonicalize: exhaustive shuffle oracle at n = 2") {
  Word w = {eta(P1, P2), a_ins(P1, 1), a_ins(P2, 2)};
  Functional base = single(w);
  REQUIRE(base.size() == 1);
  auto [bt, bc] = *base.terms().begin();

  std::vector<std::size_t> perm(w.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    Word shuffled;
    for (std::size_t i : perm) shuffled.push_back(w[i]);
    int ref_sign = permutation_sign(w, perm);
    Functional f = single(shuffled);
    REQUIRE(f.size() == 1);
    auto [t, c] = *f.terms().begin();
    CHECK(t == bt);
    CHECK(c == (ref_sign < 0 ? -bc : bc));
  } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST_CASE("canonicalize: idempotent under random shuffles") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    Word w = tu::random_word(rng, 2);
    Functional base = single(w);
    if (base.is_zero()) continue;
    std::vector<std::size_t> perm(w.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Word shuffled;
    for (std::size_t i : perm) shuffled.push_back(w[i]);
    Functional f = single(shuffled, GaussQ(rat(permutation_sign(w, perm))));
    CHECK(f == base);
  }
}

TEST_CASE("differential: closed forms and the eta rewrite") {
  CohomologyModel model = CohomologyModel::torus();
  // d(int dt A) = 0 (A insertions are handled only inside omega0).
  CHECK(differential(single({dt(P1), a_ins(P1, 1)}), model).is_zero());
  // d(eta_12), with insertions pinning the two points, expands over the
  // four torus basis pairs.
  Functional de =
      differential(single({eta(P1, P2), a_ins(P1, 1), a_ins(P2, 2)}), model);
  CHECK(de.size() == 4);
  // d(d(...)) = 0.
  CHECK(differential(de, model).is_zero());
  CHECK(differential(differential(single({eta(P1, P2)}), model), model)
            .is_zero());
}

TEST_CASE("differential: graded derivation on products") {
  std::mt19937_64 rng(37);
  CohomologyModel model = CohomologyModel::torus();
  for (int trial = 0; trial < 60; ++trial) {
    Word w1 = tu::random_word(rng, 2, 2, 3);
    Word w2 = tu::random_word(rng, 2, 2, 3);
    Functional f = single(w1);
    Functional g = single(w2);
    if (f.is_zero() || g.is_zero()) continue;
    int p = 0;
    for (const auto& s : w1) p ^= s.deg & 1;
    Functional lhs = differential(multiply(f, g), model);
    Functional rhs = multiply(differential(f, model), g);
    Functional fg = multiply(f, differential(g, model));
    if (p) {
      rhs.sub(fg);
    } else {
      rhs.add(fg);
    }
    CHECK(lhs == rhs);
  }
}

TEST_CASE("diagonal collapse") {
  Term t;
  t.word = {eta(P1, P2), a_ins(P1, 1), a_ins(P2, 2)};
  Functional c = diagonal_collapse(t, GaussQ(1), P1, P2);
  Functional expect = single({a_ins(P1, 1), a_ins(P1, 2)});
  CHECK(c == expect);

  // Orientation-reversed collapse flips the sign.
  Functional c2 = diagonal_collapse(t, GaussQ(1), P2, P1);
  CHECK(c2 == expect * GaussQ(rat(-1)));

  Term no_eta;
  no_eta.word = {a_ins(P1, 1), a_ins(P2, 2)};
  CHECK_THROWS_AS(diagonal_collapse(no_eta, GaussQ(1), P1, P2),
                  PreconditionError);
}

TEST_CASE("variational derivative") {
  Point marker{9, 1};
  // d/dA^1 of int A^1 -> empty word with coefficient 1.
  Functional f1 = variational_derivative(single({a_ins(P1, 1)}), 1, marker);
  REQUIRE(f1.size() == 1);
  CHECK(f1.terms().begin()->first.word.empty());
  CHECK(f1.terms().begin()->second == GaussQ(1));

  // d/dA^2 of int A^1 -> 0.
  CHECK(variational_derivative(single({a_ins(P1, 1)}), 2, marker).is_zero());

  // d/dA^1 of int_{C2} A^1 A^1: the expansion has two terms of relative
  // sign -1, so it cancels, matching the canonical vanishing of the input.
  CHECK(single({a_ins(P1, 1), a_ins(P2, 1)}).is_zero());
  Term raw;
  raw.word = {a_ins(P1, 1), a_ins(P2, 1)};
  Functional sum;
  sum.add(raw, GaussQ(1));
  CHECK(variational_derivative(sum, 1, marker).is_zero());

  // Koszul sign: removing the second insertion crosses the first.
  Functional g = single({a_ins(P1, 1), a_ins(P2, 2)});
  Functional d2 = variational_derivative(g, 2, marker);
  REQUIRE(d2.size() == 1);
  Functional d1 = variational_derivative(g, 1, marker);
  REQUIRE(d1.size() == 1);
  CHECK(d2.terms().begin()->second == -d1.terms().begin()->second);
}

TEST_CASE("variational derivative commutes with canonicalization") {
  std::mt19937_64 rng(41);
  Point marker{9, 1};
  for (int trial = 0; trial < 80; ++trial) {
    Word w = tu::random_word(rng, 2);
    Functional base = single(w);
    if (base.is_zero()) continue;
    std::vector<std::size_t> perm(w.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Word shuffled;
    for (std::size_t i : perm) shuffled.push_back(w[i]);
    Functional shuffled_f =
        single(shuffled, GaussQ(rat(permutation_sign(w, perm))));
    CHECK(variational_derivative(base, 1, marker) ==
          variational_derivative(shuffled_f, 1, marker));
  }
}

TEST_CASE("omega1 on an abelian triple vanishes") {
  StructureConstants ab = fixture("abelian_2");
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    Functional f = tu::random_functional(rng, 2);
    CHECK(omega1(f, ab).is_zero());
  }
}

TEST_CASE("omega2 regularization rejects single factors") {
  StructureConstants iw = fixture("iwasawa_su2");
  CHECK_THROWS_AS(omega2({Functional::zero()}, iw), RegularizationError);
}

TEST_CASE("omega0 squares to zero") {
  std::mt19937_64 rng(47);
  CohomologyModel model = CohomologyModel::torus();
  for (int trial = 0; trial < 50; ++trial) {
    Functional f = tu::random_functional(rng, 3);
    CHECK(omega0(omega0(f, model), model).is_zero());
  }
}

TEST_CASE("abelian BF calibration: mQME holds in the abstract model") {
  for (int d = 0; d <= 3; ++d) {
    CohomologyModel m = CohomologyModel::abstract3({d});
    Functional res = check_abelian_mqme(m);
    INFO("degree ", d, " residual:\n", res.str());
    CHECK(res.is_zero());
  }
  CohomologyModel m2 = CohomologyModel::abstract3({1, 2});
  CHECK(check_abelian_mqme(m2).is_zero());
  CohomologyModel m3 = CohomologyModel::abstract3({0, 3});
  CHECK(check_abelian_mqme(m3).is_zero());
}

TEST_CASE("abelian BF negative control: corrupted pairing sign") {
  CohomologyModel m = CohomologyModel::abstract3({1, 2});
  m.corrupt_pair(0);
  CHECK(!check_abelian_mqme(m).is_zero());
}

TEST_CASE("ghost numbers of terms") {
  Term t;
  t.zmono = Monomial{{z1plus(1)}};
  t.word = {eta(P1, P2), a_ins(P1, 1), a_ins(P2, 2)};
  CHECK(t.ghost_number() == 0);  // S3-type term

  Term z;
  z.zmono = Monomial{{z2plus(1)}};
  z.word = {FormSymbol{FormKind::Dt, Wrap::Iota, P1, {}, 0, 0}, a_ins(P1, 1)};
  CHECK(z.ghost_number() == -1);  // zeta-type term
}

TEST_CASE("renderings are stable") {
  Functional f = single({dt(P1), a_ins(P1, 2)}, GaussQ(rat(-1)),
                        Monomial{{z2plus(2)}});
  CHECK(f.str() == "(-1) z2+_2 [dt_1 A^2_1]");
  CHECK(functional_json(f).find("\"ghost\": 0") != std::string::npos);
}
