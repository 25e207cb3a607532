#pragma once

#include "bvbfv/effective.hpp"
#include "bvbfv/forms.hpp"

namespace bvbfv {

/// zeta: every gauge form of every term of S^eff replaced by its contraction
/// with the deforming boundary vector field (odd-derivation expansion);
/// coefficients and A insertions untouched.
Functional build_zeta(const EffectiveAction& ea);

/// dS^eff/dt: every gauge form replaced by its Lie derivative.
Functional time_derivative(const EffectiveAction& ea);

/// LHS - RHS of the five change-of-data identities (prefactors absorbed):
///   1) Omega2(S0, iota S0) - (S1, iota S0)
///   2) Omega2(S0, iota S2) + Omega2(S2, iota S0) - (S1, iota S2)
///   3) Omega2(S0, iota S3) + Omega2(S3, iota S0) - (S1, iota S3)
///   4) (S2, iota S0) + (S0, iota S2) - iota d S3
///   5) (S2, iota S2) - iota d S4 - iota d S5
Functional lemma2_residual(const EffectiveAction& ea, int item);

/// Residual of (hbar^2 Delta + Omega)(psi zeta) = d psi / dt at the
/// truncation, reduced through the mQME to
///   (S, zeta) - Omega0(zeta) - Omega1(zeta) - Omega2(S, zeta) - L S.
Functional deformation_residual(const EffectiveAction& ea);

}  // namespace bvbfv
