#pragma once

#include <random>
#include <vector>

#include "bvbfv/forms.hpp"
#include "bvbfv/graded.hpp"
#include "bvbfv/lie.hpp"

namespace bvbfv::testutil {

inline Rational random_rational(std::mt19937_64& rng, int max_abs = 9) {
  std::uniform_int_distribution<int> num(-max_abs, max_abs);
  std::uniform_int_distribution<int> den(1, max_abs);
  return rat(num(rng), den(rng));
}

inline GaussQ random_gauss(std::mt19937_64& rng) {
  return GaussQ(random_rational(rng), random_rational(rng));
}

inline GradedVariable random_variable(std::mt19937_64& rng, int dim) {
  std::uniform_int_distribution<int> kind(0, 3);
  std::uniform_int_distribution<int> idx(1, dim);
  switch (kind(rng)) {
    case 0: return z1(idx(rng));
    case 1: return z2(idx(rng));
    case 2: return z1plus(idx(rng));
    default: return z2plus(idx(rng));
  }
}

inline GradedPolynomial random_polynomial(std::mt19937_64& rng, int dim,
                                          int max_terms = 20,
                                          int max_len = 4) {
  std::uniform_int_distribution<int> nterms(1, max_terms);
  std::uniform_int_distribution<int> len(0, max_len);
  GradedPolynomial p;
  int n = nterms(rng);
  for (int t = 0; t < n; ++t) {
    std::vector<GradedVariable> vars;
    int L = len(rng);
    for (int i = 0; i < L; ++i) vars.push_back(random_variable(rng, dim));
    auto [m, sign] = Monomial::from_sequence(std::move(vars));
    if (sign == 0) continue;
    GaussQ c = random_gauss(rng);
    if (sign < 0) c = -c;
    p += GradedPolynomial::monomial(m, c);
  }
  return p;
}

/// Parity-homogeneous random polynomial (needed by bracket symmetry tests).
inline GradedPolynomial random_homogeneous(std::mt19937_64& rng, int dim,
                                           int parity, int max_terms = 8) {
  GradedPolynomial p = random_polynomial(rng, dim, max_terms);
  GradedPolynomial out;
  for (const auto& [k, c] : p.terms()) {
    if ((k.mono.ghost() & 1) == parity) out.add_term(k, c);
  }
  return out;
}

/// Random solvable / Heisenberg-family constants with Jacobi holding by
/// construction; dims 1..3.
inline StructureConstants random_classical_double(std::mt19937_64& rng,
                                                  int dim) {
  StructureConstants sc(dim);
  if (dim == 2) {
    sc.set_f(1, 2, 1, random_rational(rng, 3));
    sc.set_f(1, 2, 2, random_rational(rng, 3));
  } else if (dim == 3) {
    std::uniform_int_distribution<int> family(0, 2);
    switch (family(rng)) {
      case 0:  // Heisenberg-type
        sc.set_f(1, 2, 3, random_rational(rng, 3));
        break;
      case 1:  // solvable: [x1,x2], [x1,x3] in span{x2,x3}
        sc.set_f(1, 2, 2, random_rational(rng, 3));
        sc.set_f(1, 2, 3, random_rational(rng, 3));
        sc.set_f(1, 3, 2, random_rational(rng, 3));
        sc.set_f(1, 3, 3, random_rational(rng, 3));
        break;
      default: {  // scaled su(2): [e_i, e_j] = c eps_{ijk} e_k
        Rational c = random_rational(rng, 2);
        sc.set_f(1, 2, 3, c);
        sc.set_f(2, 3, 1, c);
        sc.set_f(3, 1, 2, c);
        break;
      }
    }
  }
  return sc;
}

inline Word random_word(std::mt19937_64& rng, int dim, int max_points = 3,
                        int max_syms = 5) {
  std::uniform_int_distribution<int> npts(1, max_points);
  std::uniform_int_distribution<int> nsyms(0, max_syms);
  int pts = npts(rng);
  std::uniform_int_distribution<int> pt(1, pts);
  std::uniform_int_distribution<int> kind(0, 3);
  std::uniform_int_distribution<int> lie(1, dim);
  Word w;
  int n = nsyms(rng);
  for (int i = 0; i < n; ++i) {
    Point p{1, static_cast<int16_t>(pt(rng))};
    switch (kind(rng)) {
      case 0: w.push_back(dt(p)); break;
      case 1: w.push_back(dtheta(p)); break;
      case 2: {
        Point q{1, static_cast<int16_t>(pt(rng))};
        if (q.idx == p.idx) q.idx = static_cast<int16_t>(q.idx % pts + 1);
        if (q.idx != p.idx) w.push_back(eta(p, q));
        break;
      }
      default: w.push_back(a_ins(p, lie(rng))); break;
    }
  }
  return w;
}

inline Functional random_functional(std::mt19937_64& rng, int dim,
                                    int max_terms = 4) {
  std::uniform_int_distribution<int> nterms(1, max_terms);
  std::uniform_int_distribution<int> zlen(0, 2);
  Functional f;
  int n = nterms(rng);
  for (int t = 0; t < n; ++t) {
    Term term;
    std::vector<GradedVariable> vars;
    int L = zlen(rng);
    for (int i = 0; i < L; ++i) vars.push_back(random_variable(rng, dim));
    auto [m, sign] = Monomial::from_sequence(std::move(vars));
    if (sign == 0) continue;
    term.zmono = m;
    term.word = random_word(rng, dim);
    GaussQ c = random_gauss(rng);
    if (sign < 0) c = -c;
    f.add(std::move(term), c);
  }
  return f;
}

}  // namespace bvbfv::testutil
