#include "bvbfv/effective.hpp"

#include <doctest.h>

#include "testutil.hpp"

using namespace bvbfv;
namespace tu = bvbfv::testutil;

TEST_CASE("build_terms on the abelian triple") {
  EffectiveAction ea = build_terms(fixture("abelian_2"));
  for (int i = 1; i <= 5; ++i) CHECK(ea.terms[i].is_zero());
  // S0 = -z+_{1k} int A^k - z+_{2k} int dt A^k, k = 1, 2.
  CHECK(ea.terms[0].size() == 4);
  CHECK(ea.terms[0].str() ==
        "(-1) z1+_1 [A^1_1]\n(-1) z1+_2 [A^2_1]\n(-1) z2+_1 [dt_1 A^1_1]\n"
        "(-1) z2+_2 [dt_1 A^2_1]");
}

TEST_CASE("build_terms on the 2d classical double") {
  EffectiveAction ea = build_terms(fixture("double_2d"));
  CHECK(ea.terms[1].is_zero());   // S1 is proportional to g
  CHECK(!ea.terms[2].is_zero());  // S2 carries f
  CHECK(!ea.terms[3].is_zero());
}

TEST_CASE("S1 monomial count against the index-expansion oracle") {
  // For the su(2)/sb(2) triple: g_1^{13} = g_2^{23} = 2. Expanding
  // (1/2) g_i^{jk} (z1_i z1+_j z1+_k) collapses each antisymmetric pair to
  // one monomial (2 total), and g_i^{jk} z2_i z1+_j z2+_k keeps both orders
  // (4 total).
  EffectiveAction ea = build_terms(fixture("iwasawa_su2"));
  CHECK(ea.terms[1].size() == 6);
}

TEST_CASE("every effective-action term has ghost number zero and hbar^0") {
  for (const auto& name : fixture_names()) {
    EffectiveAction ea = build_terms(fixture(name));
    for (const auto& S : ea.terms) {
      for (const auto& [t, c] : S.terms()) {
        CHECK(t.ghost_number() == 0);
        CHECK(t.hbar == 0);
      }
    }
  }
}

TEST_CASE("lemma 4.2 identities on the fixtures") {
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    EffectiveAction ea = build_terms(fixture(name));
    for (int item = 1; item <= 6; ++item) {
      CAPTURE(item);
      Functional res = lemma1_residual(ea, item);
      INFO("residual:\n", res.str());
      CHECK(res.is_zero());
    }
  }
}

TEST_CASE("lemma 4.2 identities on random classical doubles and duals") {
  std::mt19937_64 rng(20250809);
  for (int trial = 0; trial < 20; ++trial) {
    int dim = 1 + static_cast<int>(rng() % 3);
    StructureConstants sc = tu::random_classical_double(rng, dim);
    if (trial % 2) sc = sc.swapped();
    CAPTURE(trial);
    EffectiveAction ea = build_terms(sc);
    for (int item = 1; item <= 6; ++item) {
      CAPTURE(item);
      CHECK(lemma1_residual(ea, item).is_zero());
    }
  }
}

TEST_CASE("composite mQME residual vanishes at the truncation") {
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    EffectiveAction ea = build_terms(fixture(name));
    Functional res = mqme_residual(ea);
    INFO("residual:\n", res.str());
    CHECK(res.is_zero());
    CHECK(mqme_vanishing_list_ok(ea));
  }
}

TEST_CASE("Delta S_eff = 0") {
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    EffectiveAction ea = build_terms(fixture(name));
    CHECK(delta_seff(ea).is_zero());
  }
}

TEST_CASE("truncation monotonicity") {
  EffectiveAction ea = build_terms(fixture("iwasawa_su2"));
  Functional res2 = mqme_residual(ea);

  EffectiveAction ea3 = ea;
  ea3.truncation.max_boundary_fields = 3;
  Functional res3 = mqme_residual(ea3);

  // Restricting the wider residual to <= 2 boundary fields reproduces the
  // narrow one.
  Truncation tr2;
  CHECK(truncate(res3, tr2) == res2);
}
