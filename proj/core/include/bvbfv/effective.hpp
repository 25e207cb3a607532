#pragma once

#include <array>
#include <string>

#include "bvbfv/forms.hpp"
#include "bvbfv/graded.hpp"
#include "bvbfv/lie.hpp"

namespace bvbfv {

/// Truncation of the solid-torus computation: trees with at most two
/// boundary fields, at most second power in the structure constants, and
/// zeroth order in hbar.
struct Truncation {
  int max_boundary_fields{2};
  int max_sc_power{2};
  int hbar_order{0};

  bool keeps(const Term& t) const {
    return t.boundary_fields() <= max_boundary_fields &&
           t.sc_power <= max_sc_power && t.hbar == hbar_order;
  }
};

Functional truncate(const Functional& f, const Truncation& tr);

/// The effective action on the solid torus: the terms S0..S5 contracted
/// against a Manin triple, plus the model and truncation they live in.
struct EffectiveAction {
  std::array<Functional, 6> terms;  // S0..S5
  StructureConstants sc;
  CohomologyModel model;
  BVPairing pairing;
  Truncation truncation;

  Functional total() const;
};

/// Builds S0..S5 for a valid triple. Throws MalformedInput when the triple
/// fails validation.
EffectiveAction build_terms(const StructureConstants& sc);

/// Same construction without the validation gate; used by the negative
/// controls that deliberately feed broken constants through the identities.
EffectiveAction build_terms_unchecked(const StructureConstants& sc);

/// LHS - RHS of the six bracket/boundary-operator identities, with the
/// (i/hbar) powers absorbed into the operators:
///   i)   (S0,S1) - (1/2) Omega2(S0,S0)
///   ii)  (S1,S1)
///   iii) (S0,S2) - Omega0(S3) - Omega1(S0)
///   iv)  (S1,S2) - Omega2(S0,S2)
///   v)   (S1,S3) - Omega2(S0,S3)
///   vi)  (S2,S2) - Omega0(S4) - Omega0(S5) - Omega1(S2)
Functional lemma1_residual(const EffectiveAction& ea, int item);

/// Composite mQME residual at the truncation:
///   (1/2)(S,S) - [Omega0 + Omega1 + (1/2) Omega2(S,S)] applied to S,
/// all truncated. Also re-derives the bookkeeping of which brackets
/// contribute; see mqme_vanishing_list_ok.
Functional mqme_residual(const EffectiveAction& ea);

/// Verifies the stated vanishing list: (S0,S0), (S3,S3), (S0,S3) vanish
/// identically, and the truncated full bracket equals the six-term sum.
bool mqme_vanishing_list_ok(const EffectiveAction& ea);

/// Delta applied to the z-coefficients of every term of S^eff.
Functional delta_seff(const EffectiveAction& ea);

std::string effective_action_latex(const EffectiveAction& ea);

}  // namespace bvbfv
