#include "bvbfv/deform.hpp"

namespace bvbfv {

Functional build_zeta(const EffectiveAction& ea) {
  Functional zeta;
  for (const auto& St : ea.terms) {
    zeta.add(replace_forms(St, FormOp::Iota, ea.model));
  }
  return zeta;
}

Functional time_derivative(const EffectiveAction& ea) {
  Functional dot;
  for (const auto& St : ea.terms) {
    dot.add(replace_forms(St, FormOp::LieD, ea.model));
  }
  return dot;
}

Functional lemma2_residual(const EffectiveAction& ea, int item) {
  const auto& S = ea.terms;
  const auto& model = ea.model;
  const auto& pairing = ea.pairing;
  const auto& sc = ea.sc;
  auto iota = [&](const Functional& f) {
    return replace_forms(f, FormOp::Iota, model);
  };
  auto iota_d = [&](const Functional& f) {
    return replace_forms(f, FormOp::IotaD, model);
  };
  switch (item) {
    case 1: {
      Functional r = omega2({S[0], iota(S[0])}, sc);
      r.sub(bv_bracket_functional(S[1], iota(S[0]), pairing));
      return r;
    }
    case 2: {
      Functional r = omega2({S[0], iota(S[2])}, sc);
      r.add(omega2({S[2], iota(S[0])}, sc));
      r.sub(bv_bracket_functional(S[1], iota(S[2]), pairing));
      return r;
    }
    case 3: {
      Functional r = omega2({S[0], iota(S[3])}, sc);
      r.add(omega2({S[3], iota(S[0])}, sc));
      r.sub(bv_bracket_functional(S[1], iota(S[3]), pairing));
      return r;
    }
    case 4: {
      Functional r = bv_bracket_functional(S[2], iota(S[0]), pairing);
      r.add(bv_bracket_functional(S[0], iota(S[2]), pairing));
      r.sub(iota_d(S[3]));
      return r;
    }
    case 5: {
      Functional r = bv_bracket_functional(S[2], iota(S[2]), pairing);
      r.sub(iota_d(S[4]));
      r.sub(iota_d(S[5]));
      return r;
    }
    default:
      throw PreconditionError("lemma item must be 1..5");
  }
}

Functional deformation_residual(const EffectiveAction& ea) {
  Functional S = ea.total();
  Functional zeta = build_zeta(ea);
  Functional res = bv_bracket_functional(S, zeta, ea.pairing);
  res.sub(omega0(zeta, ea.model));
  res.sub(omega1(zeta, ea.sc));
  res.sub(omega2({S, zeta}, ea.sc));
  res.sub(time_derivative(ea));
  return truncate(res, ea.truncation);
}

}  // namespace bvbfv
