#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "bvbfv/rational.hpp"

namespace bvbfv {

struct MalformedInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using IndexTriple = std::array<int, 3>;

/// Structure constants of a candidate Manin triple: f^k_{ij} for V and
/// g_k^{ij} for W, exact rationals, indices 1..dim. Only independent (i<j)
/// entries are stored; antisymmetric partners are derived on read.
class StructureConstants {
 public:
  StructureConstants() = default;
  explicit StructureConstants(int dim) : dim_(dim) {}

  int dim() const { return dim_; }

  /// Records f^k_{ij} = v (and f^k_{ji} = -v). Throws MalformedInput on
  /// out-of-range indices or i == j with nonzero value.
  void set_f(int i, int j, int k, const Rational& v);
  void set_g(int i, int j, int k, const Rational& v);

  Rational f(int i, int j, int k) const;
  Rational g(int i, int j, int k) const;

  /// Stored (i<j) entries, for serialization.
  const std::map<IndexTriple, Rational>& f_entries() const { return f_; }
  const std::map<IndexTriple, Rational>& g_entries() const { return g_; }

  /// Duality swap (f,g) -> (g,f).
  StructureConstants swapped() const;

  std::string to_json() const;
  static StructureConstants from_json(const std::string& text);

 private:
  void check_range(int i, int j, int k) const;

  int dim_{0};
  std::map<IndexTriple, Rational> f_;
  std::map<IndexTriple, Rational> g_;
};

struct Violation {
  std::string identity;     // "antisymmetry" | "jacobi" | "compatibility"
  std::vector<int> indices; // offending index tuple
  std::string str() const;
};

using ValidationReport = std::vector<Violation>;

/// Antisymmetry and Jacobi for a single set of constants given as a full
/// (i,j,k) -> value map. Indices outside 1..dim throw MalformedInput.
ValidationReport validate_lie_algebra(const std::map<IndexTriple, Rational>& c,
                                      int dim);

/// Full Manin-triple validation: f and g individually, then the bialgebra
/// compatibility identity over all (i,j,l,m).
ValidationReport validate_manin_triple(const StructureConstants& sc);

/// Element of the double V (+) W as a pair of rational coordinate vectors.
struct DoubleElement {
  std::vector<Rational> v;
  std::vector<Rational> w;

  static DoubleElement zero(int dim);
  static DoubleElement basis_v(int dim, int i);
  static DoubleElement basis_w(int dim, int i);

  bool operator==(const DoubleElement& o) const { return v == o.v && w == o.w; }
};

/// Canonical pairing <(v,w),(v',w')> = sum_i v_i w'_i + w_i v'_i.
Rational pairing(const DoubleElement& x, const DoubleElement& y);

/// Bracket of the double: f on V, g on W, mixed part the unique bilinear
/// extension making the canonical pairing ad-invariant:
///   [xi_i, xi^j] = g_i^{jk} xi_k - f^j_{ik} xi^k.
DoubleElement double_bracket(const DoubleElement& x, const DoubleElement& y,
                             const StructureConstants& sc);

/// Built-in certified triples: abelian_2, double_2d, iwasawa_su2.
StructureConstants fixture(const std::string& name);

std::vector<std::string> fixture_names();

}  // namespace bvbfv
