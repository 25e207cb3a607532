#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "bvbfv/lie.hpp"
#include "bvbfv/rational.hpp"

namespace bvbfv {

/// Half-edge labels at an interaction vertex: backgrounds a, b, arrow tail
/// (alpha) and arrowhead (beta).
enum class Leg : std::uint8_t { BkgA, BkgB, Tail, Head };

/// Endpoint of an arrow: an interaction vertex or a boundary source vertex.
/// Sources on component 1 carry arrowheads, sources on component 2 carry
/// tails; the solid torus only has component 1.
struct ArrowEnd {
  bool source{false};
  int index{0};  // interaction vertex or source vertex id
  auto operator<=>(const ArrowEnd&) const = default;
};

struct FeynmanGraph {
  std::vector<std::array<Leg, 3>> vertices;  // interaction vertices
  int sources1{0};                           // beta-A sources on d1
  int sources2{0};                           // B-alpha sources on d2
  int backgrounds1{0};                       // b-A background vertices on d1
  int backgrounds2{0};                       // B-a background vertices on d2
  std::vector<std::pair<ArrowEnd, ArrowEnd>> arrows;  // tail -> head

  bool has_tadpole() const;
  std::string serialize() const;
};

struct GraphClass {
  FeynmanGraph graph;
  int aut_order{1};
};

struct EnumerationOptions {
  bool trees_only{false};
  bool connected{true};
  /// Vertex-level vanishing rules (a wedge a, and the single-propagator
  /// moments that vanish by the propagator's orthogonality to the
  /// cohomology representatives). On by default; the pruning pass applies
  /// them as well, so disabling here exposes the raw matchings.
  bool vertex_rules{true};
  /// Iterate candidate matchings in reverse, for enumeration-stability tests.
  bool reverse_order{false};
};

/// All admissibility classes with exactly l interaction vertices, m source
/// vertices and k background vertices on the solid torus (component 2 empty).
std::vector<GraphClass> enumerate_admissible(int l, int m, int k,
                                             const EnumerationOptions& opts = {});

/// Census over m' <= m_cap, k' <= k_cap.
int census_count(int l, int m_cap, int k_cap, bool trees_only);

/// Pre-integration integrand of an admissible graph.
struct GraphWeight {
  int hbar_power{0};       // power of hbar after the S^eff normalization
  GaussQ scalar;           // rule factors, overall (i/hbar) removed
  std::string rendering;   // human-readable symbolic integrand
  int f_count{0};
  int g_count{0};
};

/// Feynman rules: (i/hbar) per interaction vertex (as in the perturbative
/// expansion), (-i/hbar) per source and background vertex, (-i hbar) delta
/// eta per arrow, background insertion per leaf; a vertex whose two
/// same-category legs are indistinguishable keeps its 1/2. Throws
/// PreconditionError on tadpoles (zero Euler characteristic excludes them).
GraphWeight graph_weight(const FeynmanGraph& g, const StructureConstants& sc);

/// Removes classes whose bulk integrals factor through the vanishing
/// moments of the improved propagator (int eta chi and int eta eta
/// patterns). Marks nothing as universal: this encodes the choice of
/// propagator, not a theorem about all of them.
std::vector<GraphClass> prune_by_propagator_properties(
    const std::vector<GraphClass>& classes);

/// Family tag linking a surviving class to the effective-action term it
/// produces: "S1".."S5", or "?" for classes outside the catalogue.
std::string term_family(const FeynmanGraph& g);

std::string graph_dot(const FeynmanGraph& g, const std::string& name);

}  // namespace bvbfv
