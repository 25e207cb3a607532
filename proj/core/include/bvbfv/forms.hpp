#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bvbfv/graded.hpp"
#include "bvbfv/lie.hpp"
#include "bvbfv/rational.hpp"

namespace bvbfv {

struct RegularizationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Integration point on a boundary component. The solid torus has a single
/// component (1); the abelian BF calibration model also uses component 2.
/// Points on distinct components never collide.
struct Point {
  std::int16_t comp{1};
  std::int16_t idx{1};
  auto operator<=>(const Point&) const = default;
};

enum class FormKind : std::uint8_t {
  Dt,       // coordinate 1-form dt at a point
  Dtheta,   // coordinate 1-form dtheta at a point
  Eta,      // oriented propagator between points a -> b
  Chi,      // abstract cohomology generator chi_i at a point
  ChiDual,  // abstract dual generator chi^i at a point
  AIns,     // boundary field insertion A^j, total degree 1
  BIns,     // boundary field insertion B_j on component 2, total degree 1
};

enum class Wrap : std::uint8_t {
  None,
  Iota,  // contraction with the gauge-deformation field; degree -1
  LieD,  // Lie derivative along it; degree 0
};

struct FormSymbol {
  FormKind kind{FormKind::Dt};
  Wrap wrap{Wrap::None};
  Point a{};
  Point b{};     // second endpoint, Eta only
  int16_t index{0};  // Lie index (insertions) or basis index (Chi/ChiDual)
  int16_t deg{1};    // total degree, wrapper applied

  bool odd() const { return (deg % 2) != 0; }
  bool is_insertion() const {
    return kind == FormKind::AIns || kind == FormKind::BIns;
  }
  bool is_gauge_form() const { return !is_insertion(); }

  auto operator<=>(const FormSymbol&) const = default;
  std::string str() const;
};

FormSymbol dt(Point p);
FormSymbol dtheta(Point p);
FormSymbol eta(Point a, Point b, int deg = 1);
FormSymbol chi(Point p, int index, int deg);
FormSymbol chi_dual(Point p, int index, int deg);
FormSymbol a_ins(Point p, int lie_index);
FormSymbol b_ins(Point p, int lie_index);

using Word = std::vector<FormSymbol>;

/// One configuration-space integral: scalar is kept in the Functional map;
/// the key is (hbar power, structure-constant power, z-monomial, word).
struct Term {
  int hbar{0};
  int sc_power{0};
  Monomial zmono;
  Word word;

  auto operator<=>(const Term&) const = default;
  int boundary_fields() const;
  int points() const;
  /// ghost(zmono) + sum of symbol degrees - 2 * (number of points).
  int ghost_number() const;
  std::string str() const;
};

/// Torus cohomology data and the d(eta) rewrite; also hosts the abstract
/// model of the abelian BF fixture. The rewrite encodes
///   d eta_{ab} = sum_i (-1)^{deg chi_i} chi_i(a) chi^i(b)
/// instantiated on the chosen basis, with the dual-pairing signs folded in.
class CohomologyModel {
 public:
  struct SymbolSpec {
    FormKind kind;
    int index;
    int deg;
  };
  struct RewriteEntry {
    std::vector<SymbolSpec> a_side;
    std::vector<SymbolSpec> b_side;
    GaussQ coeff;
  };

  /// Torus instance over {1, dt, dtheta, dt^dtheta}; orientation is the sign
  /// of int_{T^2} dt^dtheta.
  static CohomologyModel torus(int orientation = +1);

  /// Abstract 3-manifold model: one (chi_i, chi^i) pair per entry of
  /// `chi_degrees`, with deg chi^i = 3 - deg chi_i.
  static CohomologyModel abstract3(const std::vector<int>& chi_degrees);

  /// Negative control: flips the rewrite sign of one dual pair.
  void corrupt_pair(std::size_t entry);

  bool is_torus() const { return torus_; }
  int eta_deg() const { return eta_deg_; }
  const std::vector<RewriteEntry>& rewrite() const { return rewrite_; }
  const std::vector<int>& chi_degrees() const { return chi_degrees_; }

 private:
  bool torus_{true};
  int eta_deg_{1};
  std::vector<RewriteEntry> rewrite_;
  std::vector<int> chi_degrees_;
};

/// Finite formal sum of BoundaryTerms aggregated by canonical form.
class Functional {
 public:
  Functional() = default;

  static Functional zero() { return {}; }
  static Functional term(Term t, GaussQ coeff);

  /// Canonicalizes and merges.
  void add(Term t, GaussQ coeff);
  void add(const Functional& o);
  void sub(const Functional& o);

  Functional operator+(const Functional& o) const;
  Functional operator-(const Functional& o) const;
  Functional operator*(const GaussQ& c) const;
  bool operator==(const Functional& o) const { return terms_ == o.terms_; }

  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const std::map<Term, GaussQ>& terms() const { return terms_; }

  std::string str() const;

 private:
  std::map<Term, GaussQ> terms_;
};

/// Canonical form of a term: word sorted with Koszul signs, points relabeled
/// 1..n per component over all relabelings, smallest serialization chosen.
/// Returns the accumulated sign, 0 if the term vanishes (odd square, tadpole
/// eta, or a relabeling symmetry forcing cancellation).
int canonicalize_term(Term& t);

/// Graded product of two functionals (disjoint point relabeling, Koszul
/// crossing signs between coefficients and words).
Functional multiply(const Functional& f, const Functional& g);

/// BV bracket extended to functionals: brackets the z-coefficients and
/// concatenates the words,
///   (c1 w1, c2 w2) = (-1)^{|w1| (|c2|+1)} (c1, c2) w1 w2.
Functional bv_bracket_functional(const Functional& f, const Functional& g,
                                 const BVPairing& pairing);

/// De Rham differential as a graded derivation on gauge forms only:
/// d(dt) = d(dtheta) = d(chi) = 0, d(eta) rewritten through the model,
/// d(iota(s)) = Lie(s) - iota(d s) (Cartan), insertions untouched.
Functional differential(const Functional& f, const CohomologyModel& model);

/// Removes one eta between a and b (factor +1 for orientation a->b, -1 for
/// b->a), merges the points. Throws PreconditionError when no eta joins them.
Functional diagonal_collapse(const Term& t, GaussQ coeff, Point a, Point b);

/// delta/delta A^j: removes each A^j insertion with its Koszul sign and
/// relocates the insertion point to `new_point`.
Functional variational_derivative(const Functional& f, int lie_index,
                                  Point new_point);

/// Omega_0 with the (i/hbar) prefactor absorbed: configuration-space
/// boundary strata (diagonal collapses) minus the d(gamma) replacement.
Functional omega0(const Functional& f, const CohomologyModel& model);

/// Omega_1 with prefactor absorbed: (1/2) f^a_{bc} A^b A^c d/dA^a in place.
Functional omega1(const Functional& f, const StructureConstants& sc);

/// Omega_2 with (i/hbar)^2 absorbed: (1/2) g_a^{bc} A^a d/dA^b d/dA^c with
/// the two derivatives acting on distinct factors (point splitting). Throws
/// RegularizationError on fewer than two factors.
Functional omega2(const std::vector<Functional>& factors,
                  const StructureConstants& sc);

enum class FormOp {
  Iota,    // gamma -> iota(gamma)
  D,       // gamma -> d gamma
  IotaD,   // gamma -> iota(d gamma)
  LieD,    // gamma -> L gamma  (= d iota + iota d)
};

/// Replaces every gauge form of every word by the requested operation,
/// expanded as a derivation; insertions and z-coefficients untouched.
Functional replace_forms(const Functional& f, FormOp op,
                         const CohomologyModel& model);

/// Reproduces the abelian BF mQME in the abstract model: returns
/// (1/2)(S,S) + d-part of Omega applied to the free effective action.
/// Empty iff the model's pairing signs are coherent.
Functional check_abelian_mqme(const CohomologyModel& model);

/// Renderings.
std::string functional_json(const Functional& f);
std::string functional_latex(const Functional& f);

}  // namespace bvbfv
