#include "bvbfv/graphs.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "bvbfv/forms.hpp"

namespace bvbfv {

namespace {

int count_leg(const std::array<Leg, 3>& v, Leg l) {
  int n = 0;
  for (Leg x : v) {
    if (x == l) ++n;
  }
  return n;
}

bool valid_vertex_type(const std::array<Leg, 3>& v) {
  // One B-category leg (f-vertex) or two (g-vertex); <A,[A,A]> and
  // <B,[B,B]> drop out for a Manin triple.
  int b_legs = count_leg(v, Leg::BkgB) + count_leg(v, Leg::Head);
  return b_legs == 1 || b_legs == 2;
}

// Vertex-level vanishing: a^a = 0, and the lone-propagator moments
// (head against a lower-type background product, tail against an
// upper-type one).
bool vertex_vanishes(const std::array<Leg, 3>& v) {
  int a = count_leg(v, Leg::BkgA);
  int b = count_leg(v, Leg::BkgB);
  int tails = count_leg(v, Leg::Tail);
  int heads = count_leg(v, Leg::Head);
  if (a >= 2) return true;
  if (tails + heads == 1) {
    if (heads == 1 && a == 1 && b == 1) return true;  // int eta chi_low
    if (tails == 1 && b == 2) return true;            // int chi_up eta
  }
  return false;
}

std::array<Leg, 3> sorted_vertex(std::array<Leg, 3> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

bool FeynmanGraph::has_tadpole() const {
  for (const auto& [t, h] : arrows) {
    if (!t.source && !h.source && t.index == h.index) return true;
  }
  return false;
}

std::string FeynmanGraph::serialize() const {
  std::ostringstream os;
  os << "V[";
  for (const auto& v : vertices) {
    for (Leg l : sorted_vertex(v)) os << static_cast<int>(l);
    os << ";";
  }
  os << "] s1=" << sources1 << " s2=" << sources2 << " k1=" << backgrounds1
     << " k2=" << backgrounds2 << " A[";
  auto arr = arrows;
  std::sort(arr.begin(), arr.end());
  for (const auto& [t, h] : arr) {
    os << (t.source ? "s" : "i") << t.index << ">"
       << (h.source ? "s" : "i") << h.index << ";";
  }
  os << "]";
  return os.str();
}

namespace {

// Relabels interaction vertices by `vp` and d1 sources by `sp`; returns the
// canonical serialization of the relabeled graph.
std::string relabeled_serialization(const FeynmanGraph& g,
                                    const std::vector<int>& vp,
                                    const std::vector<int>& sp) {
  FeynmanGraph h = g;
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    h.vertices[vp[i]] = g.vertices[i];
  }
  for (auto& [t, hd] : h.arrows) {
    if (!t.source) t.index = vp[t.index];
    if (!hd.source) hd.index = vp[hd.index];
    else hd.index = sp[hd.index];
  }
  return h.serialize();
}

struct CanonicalResult {
  std::string key;
  int aut{1};
};

CanonicalResult canonical_form(const FeynmanGraph& g) {
  std::vector<int> vp(g.vertices.size());
  std::iota(vp.begin(), vp.end(), 0);
  std::vector<int> sp(g.sources1);
  std::iota(sp.begin(), sp.end(), 0);

  std::string best;
  int aut = 0;
  bool have = false;
  std::vector<int> vperm = vp;
  do {
    std::vector<int> sperm = sp;
    do {
      std::string s = relabeled_serialization(g, vperm, sperm);
      if (!have || s < best) {
        best = s;
        aut = 1;
        have = true;
      } else if (s == best) {
        ++aut;
      }
    } while (std::next_permutation(sperm.begin(), sperm.end()));
  } while (std::next_permutation(vperm.begin(), vperm.end()));
  // Every labeling of the class was visited; the stabilizer size of the
  // best labeling equals the number of times it was achieved.
  return {best, aut};
}

bool is_tree(const FeynmanGraph& g) {
  int nv = static_cast<int>(g.vertices.size()) + g.sources1 + g.sources2;
  if (g.backgrounds1 + g.backgrounds2 > 0) {
    // Background vertices are isolated; a tree containing one is the single
    // point with nothing else.
    return nv == 0 && g.backgrounds1 + g.backgrounds2 == 1 && g.arrows.empty();
  }
  if (nv == 0) return false;
  if (static_cast<int>(g.arrows.size()) != nv - 1) return false;
  // Connectivity via union-find over arrows.
  std::vector<int> parent(nv);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto id = [&](const ArrowEnd& e) {
    return e.source ? static_cast<int>(g.vertices.size()) + e.index : e.index;
  };
  for (const auto& [t, h] : g.arrows) {
    parent[find(id(t))] = find(id(h));
  }
  int roots = 0;
  for (int i = 0; i < nv; ++i) {
    if (find(i) == i) ++roots;
  }
  return roots == 1;
}

bool is_connected(const FeynmanGraph& g) {
  int nv = static_cast<int>(g.vertices.size()) + g.sources1 + g.sources2;
  int nb = g.backgrounds1 + g.backgrounds2;
  if (nb > 0) return nv == 0 && nb == 1;
  if (nv == 0) return false;
  std::vector<int> parent(nv);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto id = [&](const ArrowEnd& e) {
    return e.source ? static_cast<int>(g.vertices.size()) + e.index : e.index;
  };
  for (const auto& [t, h] : g.arrows) {
    parent[find(id(t))] = find(id(h));
  }
  int roots = 0;
  for (int i = 0; i < nv; ++i) {
    if (find(i) == i) ++roots;
  }
  return roots == 1;
}

}  // namespace

std::vector<GraphClass> enumerate_admissible(int l, int m, int k,
                                             const EnumerationOptions& opts) {
  if (l < 0 || m < 0 || k < 0) {
    throw PreconditionError("vertex counts must be nonnegative");
  }

  // The one legal pure-background configuration.
  if (l == 0 && m == 0) {
    std::vector<GraphClass> out;
    if (k == 1) {
      FeynmanGraph g;
      g.backgrounds1 = 1;
      out.push_back({g, 1});
    }
    return out;
  }
  if (k > 0) return {};  // isolated vertices disconnect everything else

  // All leg assignments per vertex.
  std::vector<std::array<Leg, 3>> vertex_types;
  {
    const Leg legs[4] = {Leg::BkgA, Leg::BkgB, Leg::Tail, Leg::Head};
    std::set<std::array<Leg, 3>> seen;
    for (Leg x : legs) {
      for (Leg y : legs) {
        for (Leg z : legs) {
          std::array<Leg, 3> v = sorted_vertex({x, y, z});
          if (!valid_vertex_type(v)) continue;
          if (opts.vertex_rules && vertex_vanishes(v)) continue;
          seen.insert(v);
        }
      }
    }
    vertex_types.assign(seen.begin(), seen.end());
  }

  std::map<std::string, GraphClass> classes;

  // Choose a type for each of the l vertices.
  std::vector<int> choice(l, 0);
  const int ntypes = static_cast<int>(vertex_types.size());
  while (true) {
    FeynmanGraph g;
    g.sources1 = m;
    for (int i = 0; i < l; ++i) g.vertices.push_back(vertex_types[choice[i]]);

    // Tails: interaction alphas. Heads: interaction betas + d1 sources
    // (every source must absorb exactly one arrow).
    std::vector<ArrowEnd> tails, heads;
    for (int i = 0; i < l; ++i) {
      for (int c = 0; c < count_leg(g.vertices[i], Leg::Tail); ++c) {
        tails.push_back({false, i});
      }
      for (int c = 0; c < count_leg(g.vertices[i], Leg::Head); ++c) {
        heads.push_back({false, i});
      }
    }
    for (int s = 0; s < m; ++s) heads.push_back({true, s});

    if (tails.size() == heads.size() && !tails.empty()) {
      std::vector<int> perm(tails.size());
      std::iota(perm.begin(), perm.end(), 0);
      std::vector<std::vector<int>> perms;
      do {
        perms.push_back(perm);
      } while (std::next_permutation(perm.begin(), perm.end()));
      if (opts.reverse_order) std::reverse(perms.begin(), perms.end());

      for (const auto& p : perms) {
        FeynmanGraph cand = g;
        for (std::size_t t = 0; t < tails.size(); ++t) {
          cand.arrows.emplace_back(tails[t], heads[p[t]]);
        }
        if (cand.has_tadpole()) continue;
        if (opts.trees_only && !is_tree(cand)) continue;
        if (opts.connected && !is_connected(cand)) continue;
        CanonicalResult cf = canonical_form(cand);
        if (!classes.count(cf.key)) {
          classes[cf.key] = {cand, cf.aut};
        }
      }
    }

    // next choice
    int pos = l - 1;
    while (pos >= 0) {
      if (++choice[pos] < ntypes) break;
      choice[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }

  std::vector<GraphClass> out;
  for (auto& [key, gc] : classes) out.push_back(gc);
  return out;
}

int census_count(int l, int m_cap, int k_cap, bool trees_only) {
  int total = 0;
  for (int m = 0; m <= m_cap; ++m) {
    for (int k = 0; k <= k_cap; ++k) {
      EnumerationOptions opts;
      opts.trees_only = trees_only;
      total += static_cast<int>(enumerate_admissible(l, m, k, opts).size());
    }
  }
  return total;
}

GraphWeight graph_weight(const FeynmanGraph& g, const StructureConstants& sc) {
  if (g.has_tadpole()) {
    throw PreconditionError(
        "tadpole arrows are not supported on a manifold of zero Euler "
        "characteristic");
  }
  (void)sc;
  GraphWeight w;
  w.scalar = GaussQ(1);

  // hbar powers: each vertex (interaction, source, background) carries 1/hbar,
  // each arrow hbar; one overall (i/hbar) is stripped (S^eff normalization).
  int l = static_cast<int>(g.vertices.size());
  int m = g.sources1 + g.sources2;
  int k = g.backgrounds1 + g.backgrounds2;
  int arrows = static_cast<int>(g.arrows.size());
  w.hbar_power = arrows - (l + m + k) + 1;

  GaussQ i = GaussQ::i();
  GaussQ factor(1);
  for (int v = 0; v < l; ++v) factor *= i;            // +i per interaction
  for (int v = 0; v < m + k; ++v) factor *= -i;       // -i per boundary vertex
  for (int a = 0; a < arrows; ++a) factor *= -i;      // -i hbar per arrow
  factor *= -i;                                       // strip one (i/hbar)
  w.scalar = factor;

  std::ostringstream os;
  for (int v = 0; v < l; ++v) {
    const auto& legs = g.vertices[v];
    int b_legs = count_leg(legs, Leg::BkgB) + count_leg(legs, Leg::Head);
    bool f_vertex = (b_legs == 1);
    if (f_vertex) {
      ++w.f_count;
    } else {
      ++w.g_count;
    }
    // The two same-category legs keep the vertex 1/2 only when they are
    // indistinguishable background insertions.
    std::array<Leg, 3> s = sorted_vertex(legs);
    bool halved = false;
    if (f_vertex) {
      halved = (count_leg(legs, Leg::BkgA) == 2);
    } else {
      halved = (count_leg(legs, Leg::BkgB) == 2);
    }
    if (halved) w.scalar = w.scalar * rat(1, 2);
    os << (f_vertex ? "f" : "g") << "(";
    for (int j = 0; j < 3; ++j) {
      if (j) os << ",";
      switch (s[j]) {
        case Leg::BkgA: os << "a"; break;
        case Leg::BkgB: os << "b"; break;
        case Leg::Tail: os << "alpha"; break;
        case Leg::Head: os << "beta"; break;
      }
    }
    os << ")@x" << v + 1 << " ";
  }
  for (const auto& [t, h] : g.arrows) {
    os << "eta(" << (t.source ? "y" : "x") << t.index + 1 << ","
       << (h.source ? "y" : "x") << h.index + 1 << ") ";
  }
  for (int s = 0; s < g.sources1; ++s) os << "A@y" << s + 1 << " ";
  for (int s = 0; s < g.backgrounds1; ++s) os << "bA@w" << s + 1 << " ";
  w.rendering = os.str();
  return w;
}

std::vector<GraphClass> prune_by_propagator_properties(
    const std::vector<GraphClass>& classes) {
  std::vector<GraphClass> out;
  for (const auto& gc : classes) {
    const FeynmanGraph& g = gc.graph;
    bool pruned = false;

    // Per-vertex arrow bookkeeping.
    int l = static_cast<int>(g.vertices.size());
    std::vector<int> src_arrows(l, 0);
    std::vector<std::vector<int>> bulk_neighbors(l);
    for (const auto& [t, h] : g.arrows) {
      if (!t.source && h.source) ++src_arrows[t.index];
      if (t.source && !h.source) ++src_arrows[h.index];
      if (!t.source && !h.source) {
        bulk_neighbors[t.index].push_back(h.index);
        bulk_neighbors[h.index].push_back(t.index);
      }
    }
    auto bkgs = [&](int v) {
      return count_leg(g.vertices[v], Leg::BkgA) +
             count_leg(g.vertices[v], Leg::BkgB);
    };

    for (int v = 0; v < l && !pruned; ++v) {
      const auto& legs = g.vertices[v];
      int a = count_leg(legs, Leg::BkgA);
      int b = count_leg(legs, Leg::BkgB);
      int tails = count_leg(legs, Leg::Tail);
      int heads = count_leg(legs, Leg::Head);
      // Lone propagator against a cohomology representative.
      if (a >= 2) pruned = true;
      if (tails + heads == 1 && heads == 1 && a == 1 && b == 1) pruned = true;
      if (tails + heads == 1 && tails == 1 && b == 2) pruned = true;
      // Head-tail composition through an upper-type background.
      if (heads >= 1 && tails >= 1 && b >= 1) pruned = true;
      // Interior vertex current against a decorated vertex.
      if (src_arrows[v] == 0 && bkgs(v) == 2) {
        for (int nb : bulk_neighbors[v]) {
          if (bkgs(nb) >= 1) pruned = true;
        }
      }
    }
    if (!pruned) out.push_back(gc);
  }
  return out;
}

std::string term_family(const FeynmanGraph& g) {
  int l = static_cast<int>(g.vertices.size());
  int m = g.sources1;
  if (l == 0 && m == 0 && g.backgrounds1 == 1) return "S0";
  if (l == 1) {
    if (m == 0) return "S1";
    if (m == 1) return "S2";
    if (m == 2) return "S3";
  }
  if (l == 2 && m == 2) {
    std::vector<int> src_arrows(l, 0);
    for (const auto& [t, h] : g.arrows) {
      if (!t.source && h.source) ++src_arrows[t.index];
    }
    std::sort(src_arrows.begin(), src_arrows.end());
    if (src_arrows == std::vector<int>{1, 1}) return "S4";
    if (src_arrows == std::vector<int>{0, 2}) return "S5";
  }
  return "?";
}

std::string graph_dot(const FeynmanGraph& g, const std::string& name) {
  std::ostringstream os;
  os << "digraph \"" << name << "\" {\n";
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    os << "  x" << v << " [shape=circle,label=\"";
    for (Leg leg : sorted_vertex(g.vertices[v])) {
      switch (leg) {
        case Leg::BkgA: os << "a"; break;
        case Leg::BkgB: os << "b"; break;
        case Leg::Tail: os << "t"; break;
        case Leg::Head: os << "h"; break;
      }
    }
    os << "\"];\n";
  }
  for (int s = 0; s < g.sources1; ++s) {
    os << "  y" << s << " [shape=box,label=\"A\"];\n";
  }
  for (int s = 0; s < g.backgrounds1; ++s) {
    os << "  w" << s << " [shape=diamond,label=\"bA\"];\n";
  }
  for (const auto& [t, h] : g.arrows) {
    os << "  " << (t.source ? "y" : "x") << t.index << " -> "
       << (h.source ? "y" : "x") << h.index << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace bvbfv
