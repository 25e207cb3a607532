#include "bvbfv/graded.hpp"

#include <sstream>
#include <stdexcept>

#include "bvbfv/detail/koszul.hpp"

namespace bvbfv {

namespace {

const char* kind_name(VarKind k) {
  switch (k) {
    case VarKind::Z1: return "z1";
    case VarKind::Z2: return "z2";
    case VarKind::Z1Plus: return "z1+";
    case VarKind::Z2Plus: return "z2+";
    case VarKind::ZAbs: return "z";
    case VarKind::ZAbsPlus: return "z+";
  }
  return "?";
}

}  // namespace

std::string GradedVariable::str() const {
  std::ostringstream os;
  os << kind_name(kind) << "_" << index;
  if (kind == VarKind::ZAbs || kind == VarKind::ZAbsPlus) {
    os << "{gh" << ghost << "}";
  }
  return os.str();
}

GradedVariable z1(int i) { return {VarKind::Z1, static_cast<std::int16_t>(i), -2}; }
GradedVariable z2(int i) { return {VarKind::Z2, static_cast<std::int16_t>(i), -1}; }
GradedVariable z1plus(int i) { return {VarKind::Z1Plus, static_cast<std::int16_t>(i), 1}; }
GradedVariable z2plus(int i) { return {VarKind::Z2Plus, static_cast<std::int16_t>(i), 0}; }
GradedVariable zabs(int i, int ghost) {
  return {VarKind::ZAbs, static_cast<std::int16_t>(i), static_cast<std::int16_t>(ghost)};
}
GradedVariable zabsplus(int i, int ghost) {
  return {VarKind::ZAbsPlus, static_cast<std::int16_t>(i), static_cast<std::int16_t>(ghost)};
}

std::pair<Monomial, int> Monomial::from_sequence(std::vector<GradedVariable> vs) {
  auto [sorted, sign] = detail::koszul_sort(
      std::move(vs), [](const GradedVariable& a, const GradedVariable& b) { return a < b; },
      [](const GradedVariable& v) { return v.odd(); });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] == sorted[i - 1] && sorted[i].odd()) {
      return {Monomial{}, 0};
    }
  }
  return {Monomial{std::move(sorted)}, sign};
}

int Monomial::ghost() const {
  int g = 0;
  for (const auto& v : vars) g += v.ghost;
  return g;
}

std::string Monomial::str() const {
  if (vars.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) s += " ";
    s += vars[i].str();
  }
  return s;
}

GradedPolynomial GradedPolynomial::scalar(const GaussQ& c, int hbar) {
  GradedPolynomial p;
  p.add_term({hbar, Monomial{}}, c);
  return p;
}

GradedPolynomial GradedPolynomial::variable(const GradedVariable& v) {
  GradedPolynomial p;
  p.add_term({0, Monomial{{v}}}, GaussQ(1));
  return p;
}

GradedPolynomial GradedPolynomial::monomial(const Monomial& m, const GaussQ& c,
                                            int hbar) {
  GradedPolynomial p;
  p.add_term({hbar, m}, c);
  return p;
}

void GradedPolynomial::add_term(const PolyKey& k, const GaussQ& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    terms_.emplace(k, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

GradedPolynomial GradedPolynomial::operator+(const GradedPolynomial& o) const {
  GradedPolynomial r = *this;
  return r += o;
}

GradedPolynomial& GradedPolynomial::operator+=(const GradedPolynomial& o) {
  for (const auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

GradedPolynomial GradedPolynomial::operator-(const GradedPolynomial& o) const {
  GradedPolynomial r = *this;
  return r -= o;
}

GradedPolynomial& GradedPolynomial::operator-=(const GradedPolynomial& o) {
  for (const auto& [k, c] : o.terms_) add_term(k, -c);
  return *this;
}

GradedPolynomial GradedPolynomial::operator*(const GradedPolynomial& o) const {
  GradedPolynomial r;
  for (const auto& [ka, ca] : terms_) {
    for (const auto& [kb, cb] : o.terms_) {
      std::vector<GradedVariable> cat = ka.mono.vars;
      cat.insert(cat.end(), kb.mono.vars.begin(), kb.mono.vars.end());
      auto [m, sign] = Monomial::from_sequence(std::move(cat));
      if (sign == 0) continue;
      GaussQ c = ca * cb;
      if (sign < 0) c = -c;
      r.add_term({ka.hbar + kb.hbar, m}, c);
    }
  }
  return r;
}

GradedPolynomial GradedPolynomial::operator*(const GaussQ& c) const {
  GradedPolynomial r;
  if (c.is_zero()) return r;
  for (const auto& [k, v] : terms_) r.add_term(k, v * c);
  return r;
}

std::optional<int> GradedPolynomial::ghost_number() const {
  if (terms_.empty()) return 0;
  std::optional<int> g;
  for (const auto& [k, c] : terms_) {
    int tg = k.mono.ghost();
    if (!g) {
      g = tg;
    } else if (*g != tg) {
      return std::nullopt;
    }
  }
  return g;
}

GradedPolynomial GradedPolynomial::derivative(const GradedVariable& v) const {
  GradedPolynomial r;
  for (const auto& [k, c] : terms_) {
    const auto& vars = k.mono.vars;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (!(vars[i] == v)) continue;
      int sign = 1;
      if (v.odd()) {
        int crossings = 0;
        for (std::size_t j = 0; j < i; ++j) {
          if (vars[j].odd()) ++crossings;
        }
        if (crossings % 2) sign = -1;
      }
      Monomial m;
      m.vars.reserve(vars.size() - 1);
      for (std::size_t j = 0; j < vars.size(); ++j) {
        if (j != i) m.vars.push_back(vars[j]);
      }
      r.add_term({k.hbar, m}, sign < 0 ? -c : c);
    }
  }
  return r;
}

std::string GradedPolynomial::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ")";
    if (k.hbar != 0) os << " hbar^" << k.hbar;
    if (!k.mono.empty()) os << " " << k.mono.str();
  }
  return os.str();
}

BVPairing BVPairing::torus(int dim) {
  BVPairing p;
  for (int i = 1; i <= dim; ++i) {
    p.pairs.emplace_back(z1(i), z1plus(i));
    p.pairs.emplace_back(z2(i), z2plus(i));
  }
  return p;
}

BVPairing BVPairing::abstract_model(const std::vector<int>& chi_degrees) {
  // Total degree 1 of the superfields fixes ghost(z^i) = 1 - deg(chi_i) and
  // ghost(z^+_i) = deg(chi_i) - 2 on a 3-manifold.
  BVPairing p;
  for (std::size_t i = 0; i < chi_degrees.size(); ++i) {
    int d = chi_degrees[i];
    p.pairs.emplace_back(zabs(static_cast<int>(i) + 1, 1 - d),
                         zabsplus(static_cast<int>(i) + 1, d - 2));
  }
  return p;
}

GradedPolynomial bv_laplacian(const GradedPolynomial& p, const BVPairing& pairing) {
  GradedPolynomial r;
  for (const auto& [a, b] : pairing.pairs) {
    r -= p.derivative(b).derivative(a);
  }
  return r;
}

namespace {

// Parity-homogeneous component of p.
GradedPolynomial parity_part(const GradedPolynomial& p, int parity) {
  GradedPolynomial r;
  for (const auto& [k, c] : p.terms()) {
    if ((k.mono.ghost() & 1) == parity) r.add_term(k, c);
  }
  return r;
}

}  // namespace

GradedPolynomial bv_bracket(const GradedPolynomial& p, const GradedPolynomial& q,
                            const BVPairing& pairing) {
  GradedPolynomial r;
  for (int parity = 0; parity <= 1; ++parity) {
    GradedPolynomial x = parity_part(p, parity);
    if (x.is_zero()) continue;
    GradedPolynomial mid = bv_laplacian(x * q, pairing) -
                           bv_laplacian(x, pairing) * q;
    GradedPolynomial last = x * bv_laplacian(q, pairing);
    if (parity == 0) {
      r += mid - last;
    } else {
      // (-1)^|x| [Delta(xy) - Delta(x)y] - x Delta(y)
      r -= mid;
      r -= last;
    }
  }
  return r;
}

}  // namespace bvbfv
