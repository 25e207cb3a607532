#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bvbfv/rational.hpp"

namespace bvbfv {

/// Residual-field variables on the solid torus and their abstract analogues
/// used by the abelian BF calibration model.
///
/// Torus ghost numbers are forced by the form degrees of the cohomology
/// representatives (mu*dt, mu, 1, dt) together with total degree 1 of the
/// superfields: z1 -> -2, z2 -> -1, z1+ -> +1, z2+ -> 0.
enum class VarKind : std::uint8_t {
  Z1,        // z^{1i}, ghost -2
  Z2,        // z^{2i}, ghost -1
  Z1Plus,    // z^+_{1i}, ghost +1
  Z2Plus,    // z^+_{2i}, ghost  0
  ZAbs,      // abstract z^i, ghost stored per variable
  ZAbsPlus,  // abstract z^+_i, ghost stored per variable
};

struct GradedVariable {
  VarKind kind{VarKind::Z1};
  std::int16_t index{1};  // Lie index (1-based), or abstract pair index
  std::int16_t ghost{0};

  bool odd() const { return (ghost % 2) != 0; }

  auto operator<=>(const GradedVariable&) const = default;

  std::string str() const;
};

GradedVariable z1(int i);
GradedVariable z2(int i);
GradedVariable z1plus(int i);
GradedVariable z2plus(int i);
GradedVariable zabs(int i, int ghost);
GradedVariable zabsplus(int i, int ghost);

/// Ordered word of graded variables in canonical (sorted) order.
/// Construction from an arbitrary ordering yields the Koszul sign.
struct Monomial {
  std::vector<GradedVariable> vars;

  // Sorts `vs`; returns {monomial, sign}; sign 0 means an odd square killed it.
  static std::pair<Monomial, int> from_sequence(std::vector<GradedVariable> vs);

  int ghost() const;
  int parity() const { return ghost() & 1; }
  bool empty() const { return vars.empty(); }

  auto operator<=>(const Monomial&) const = default;

  std::string str() const;
};

struct PolyKey {
  int hbar{0};
  Monomial mono;
  auto operator<=>(const PolyKey&) const = default;
};

/// Z-graded commutative polynomial with Gaussian-rational coefficients and a
/// formal central hbar carried as an integer exponent per term.
class GradedPolynomial {
 public:
  GradedPolynomial() = default;
  static GradedPolynomial zero() { return {}; }
  static GradedPolynomial unit() { return scalar(GaussQ(1), 0); }
  static GradedPolynomial scalar(const GaussQ& c, int hbar = 0);
  static GradedPolynomial variable(const GradedVariable& v);
  static GradedPolynomial monomial(const Monomial& m, const GaussQ& c,
                                   int hbar = 0);

  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const std::map<PolyKey, GaussQ>& terms() const { return terms_; }

  void add_term(const PolyKey& k, const GaussQ& c);

  GradedPolynomial operator+(const GradedPolynomial& o) const;
  GradedPolynomial operator-(const GradedPolynomial& o) const;
  GradedPolynomial operator*(const GradedPolynomial& o) const;
  GradedPolynomial operator*(const GaussQ& c) const;
  GradedPolynomial& operator+=(const GradedPolynomial& o);
  GradedPolynomial& operator-=(const GradedPolynomial& o);

  bool operator==(const GradedPolynomial& o) const {
    return terms_ == o.terms_;
  }

  /// Common ghost degree of all monomials, or nullopt for mixed degree.
  /// The zero polynomial reports degree 0.
  std::optional<int> ghost_number() const;

  /// Left derivative with respect to `v`.
  GradedPolynomial derivative(const GradedVariable& v) const;

  std::string str() const;

 private:
  std::map<PolyKey, GaussQ> terms_;
};

/// The BV pairing underlying the Laplacian: Delta = -sum_i d/d(first_i)
/// d/d(second_i), left derivatives, rightmost factor applied first.
struct BVPairing {
  std::vector<std::pair<GradedVariable, GradedVariable>> pairs;

  static BVPairing torus(int dim);
  static BVPairing abstract_model(const std::vector<int>& chi_degrees);
};

GradedPolynomial bv_laplacian(const GradedPolynomial& p, const BVPairing& pairing);

/// Odd bracket as the failure of Delta to be a derivation:
///   (x,y) = (-1)^|x| [Delta(xy) - Delta(x) y - (-1)^|x| x Delta(y)]
/// extended bilinearly over (ghost-)homogeneous monomial pieces.
GradedPolynomial bv_bracket(const GradedPolynomial& p, const GradedPolynomial& q,
                            const BVPairing& pairing);

}  // namespace bvbfv
