#include "bvbfv/graded.hpp"

#include <doctest.h>

#include "testutil.hpp"

using namespace bvbfv;
namespace tu = bvbfv::testutil;

namespace {

GradedPolynomial var(const GradedVariable& v) {
  return GradedPolynomial::variable(v);
}

int sign_of(const GradedPolynomial& p) {
  REQUIRE(p.size() == 1);
  const auto& [k, c] = *p.terms().begin();
  CHECK(k.mono.empty());
  CHECK(c.im == 0);
  if (c.re == 1) return 1;
  if (c.re == -1) return -1;
  REQUIRE(false);
  return 0;
}

}  // namespace

TEST_CASE("graded multiplication signs") {
  auto p = var(z1plus(1));
  CHECK((p * p).is_zero());  // odd square

  auto q = var(z1plus(2));
  CHECK((p * q + q * p).is_zero());  // odd anticommute

  auto u = var(z1(1));
  auto w = var(z1(2));
  CHECK((u * w - w * u).is_zero());  // even commute

  auto v = var(z2(1));
  auto s = var(z2plus(1));
  CHECK((v * s - s * v).is_zero());  // even past odd
}

TEST_CASE("laplacian on generators") {
  BVPairing pairing = BVPairing::torus(2);
  CHECK(bv_laplacian(GradedPolynomial::unit(), pairing).is_zero());
  CHECK(bv_laplacian(var(z1(1)), pairing).is_zero());

  // Delta(z^{11} z+_{11}) is a unit scalar whose sign is tied to the
  // bracket table through (z, z+) = (-1)^{deg z} Delta(z z+).
  auto zz = var(z1(1)) * var(z1plus(1));
  int dsign = sign_of(bv_laplacian(zz, pairing));
  CHECK(dsign == -1);

  // (z^{1i}, z+_{1j}) with i == j must equal (-1)^{deg z^1} * Delta(...) = dsign.
  auto br = bv_bracket(var(z1(1)), var(z1plus(1)), pairing);
  CHECK(sign_of(br) == dsign);
}

TEST_CASE("bracket generator table") {
  BVPairing pairing = BVPairing::torus(2);
  // (z+_{1i}, z^{1j}) = delta_{ij} = -(z+_{2i}, z^{2j}); all others vanish.
  CHECK(sign_of(bv_bracket(var(z1plus(1)), var(z1(1)), pairing)) == 1);
  CHECK(sign_of(bv_bracket(var(z2plus(1)), var(z2(1)), pairing)) == -1);
  CHECK(bv_bracket(var(z1plus(1)), var(z1(2)), pairing).is_zero());
  CHECK(bv_bracket(var(z1(1)), var(z1(2)), pairing).is_zero());
  CHECK(bv_bracket(var(z1plus(1)), var(z2(1)), pairing).is_zero());
  CHECK(bv_bracket(var(z2plus(1)), var(z2plus(1)), pairing).is_zero());
}

TEST_CASE("ghost numbers") {
  CHECK(var(z1(1)).ghost_number() == -2);
  auto pp = var(z1plus(1)) * var(z1plus(2));
  CHECK(pp.ghost_number() == 2);
  auto mixed = GradedPolynomial::unit() + var(z1(1));
  CHECK(!mixed.ghost_number().has_value());
  CHECK(GradedPolynomial::zero().ghost_number() == 0);
}

TEST_CASE("laplacian squares to zero") {
  std::mt19937_64 rng(20240811);
  BVPairing pairing = BVPairing::torus(3);
  for (int trial = 0; trial < 100; ++trial) {
    auto p = tu::random_polynomial(rng, 3);
    CHECK(bv_laplacian(bv_laplacian(p, pairing), pairing).is_zero());
  }
}

TEST_CASE("bracket graded symmetry") {
  std::mt19937_64 rng(7);
  BVPairing pairing = BVPairing::torus(3);
  for (int trial = 0; trial < 100; ++trial) {
    int pa = trial % 2, pb = (trial / 2) % 2;
    auto x = tu::random_homogeneous(rng, 3, pa);
    auto y = tu::random_homogeneous(rng, 3, pb);
    // (x,y) = -(-1)^{(|x|+1)(|y|+1)} (y,x)
    int s = ((pa + 1) * (pb + 1)) % 2 ? -1 : 1;
    auto lhs = bv_bracket(x, y, pairing);
    auto rhs = bv_bracket(y, x, pairing) * GaussQ(rat(-s));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("bracket graded Leibniz") {
  std::mt19937_64 rng(11);
  BVPairing pairing = BVPairing::torus(2);
  for (int trial = 0; trial < 100; ++trial) {
    int pa = trial % 2, pb = (trial / 2) % 2;
    auto x = tu::random_homogeneous(rng, 2, pa, 4);
    auto y = tu::random_homogeneous(rng, 2, pb, 4);
    auto z = tu::random_polynomial(rng, 2, 4);
    // (x, yz) = (x,y) z + (-1)^{(|x|+1)|y|} y (x,z)
    int s = ((pa + 1) * pb) % 2 ? -1 : 1;
    auto lhs = bv_bracket(x, y * z, pairing);
    auto rhs = bv_bracket(x, y, pairing) * z +
               (y * bv_bracket(x, z, pairing)) * GaussQ(rat(s));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("bracket graded Jacobi") {
  std::mt19937_64 rng(13);
  BVPairing pairing = BVPairing::torus(2);
  for (int trial = 0; trial < 100; ++trial) {
    int pa = trial % 2, pb = (trial / 2) % 2;
    auto x = tu::random_homogeneous(rng, 2, pa, 3);
    auto y = tu::random_homogeneous(rng, 2, pb, 3);
    auto z = tu::random_polynomial(rng, 2, 3);
    // (x,(y,z)) = ((x,y),z) + (-1)^{(|x|+1)(|y|+1)} (y,(x,z))
    int s = ((pa + 1) * (pb + 1)) % 2 ? -1 : 1;
    auto lhs = bv_bracket(x, bv_bracket(y, z, pairing), pairing);
    auto rhs = bv_bracket(bv_bracket(x, y, pairing), z, pairing) +
               bv_bracket(y, bv_bracket(x, z, pairing), pairing) * GaussQ(rat(s));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("laplacian raises ghost by one") {
  std::mt19937_64 rng(17);
  BVPairing pairing = BVPairing::torus(3);
  int seen = 0;
  for (int trial = 0; trial < 2000 && seen < 100; ++trial) {
    // Ghost-homogeneous input: keep the monomials of one ghost degree.
    auto p0 = tu::random_polynomial(rng, 3, 6);
    if (p0.is_zero()) continue;
    int target = p0.terms().begin()->first.mono.ghost();
    GradedPolynomial p;
    for (const auto& [k, c] : p0.terms()) {
      if (k.mono.ghost() == target) p.add_term(k, c);
    }
    auto d = bv_laplacian(p, pairing);
    if (d.is_zero()) continue;
    auto gd = d.ghost_number();
    REQUIRE(gd.has_value());
    CHECK(*gd == target + 1);
    ++seen;
  }
  CHECK(seen == 100);
}

TEST_CASE("compatibility of laplacian and bracket") {
  std::mt19937_64 rng(19);
  BVPairing pairing = BVPairing::torus(2);
  for (int trial = 0; trial < 50; ++trial) {
    int pa = trial % 2;
    auto x = tu::random_homogeneous(rng, 2, pa, 4);
    auto y = tu::random_polynomial(rng, 2, 4);
    int s = pa ? -1 : 1;
    // Delta(xy) = Delta(x) y + (-1)^{|x|} x Delta(y) + (-1)^{|x|} (x,y)
    auto lhs = bv_laplacian(x * y, pairing);
    auto rhs = bv_laplacian(x, pairing) * y +
               (x * bv_laplacian(y, pairing)) * GaussQ(rat(s)) +
               bv_bracket(x, y, pairing) * GaussQ(rat(s));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("abstract pairing matches degree bookkeeping") {
  BVPairing pairing = BVPairing::abstract_model({0, 1, 2, 3});
  for (std::size_t i = 0; i < pairing.pairs.size(); ++i) {
    const auto& [z, zp] = pairing.pairs[i];
    CHECK(z.ghost + zp.ghost == -1);
  }
}
