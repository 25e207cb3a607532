#include "bvbfv/lie.hpp"

#include <nlohmann/json.hpp>
#include <sstream>

namespace bvbfv {

using nlohmann::json;

void StructureConstants::check_range(int i, int j, int k) const {
  if (i < 1 || j < 1 || k < 1 || i > dim_ || j > dim_ || k > dim_) {
    std::ostringstream os;
    os << "index out of range: (" << i << "," << j << "," << k
       << ") with dim " << dim_;
    throw MalformedInput(os.str());
  }
}

void StructureConstants::set_f(int i, int j, int k, const Rational& v) {
  check_range(i, j, k);
  if (i == j) {
    if (v != 0) throw MalformedInput("nonzero diagonal constant f with i == j");
    return;
  }
  if (i > j) {
    set_f(j, i, k, Rational(-v));
    return;
  }
  if (v == 0) {
    f_.erase({i, j, k});
  } else {
    f_[{i, j, k}] = v;
  }
}

void StructureConstants::set_g(int i, int j, int k, const Rational& v) {
  check_range(i, j, k);
  if (i == j) {
    if (v != 0) throw MalformedInput("nonzero diagonal constant g with i == j");
    return;
  }
  if (i > j) {
    set_g(j, i, k, Rational(-v));
    return;
  }
  if (v == 0) {
    g_.erase({i, j, k});
  } else {
    g_[{i, j, k}] = v;
  }
}

Rational StructureConstants::f(int i, int j, int k) const {
  check_range(i, j, k);
  if (i == j) return 0;
  if (i > j) return -f(j, i, k);
  auto it = f_.find({i, j, k});
  return it == f_.end() ? Rational(0) : it->second;
}

Rational StructureConstants::g(int i, int j, int k) const {
  check_range(i, j, k);
  if (i == j) return 0;
  if (i > j) return -g(j, i, k);
  auto it = g_.find({i, j, k});
  return it == g_.end() ? Rational(0) : it->second;
}

StructureConstants StructureConstants::swapped() const {
  StructureConstants s(dim_);
  s.f_ = g_;
  s.g_ = f_;
  return s;
}

std::string StructureConstants::to_json() const {
  json j;
  j["dim"] = dim_;
  j["f"] = json::array();
  j["g"] = json::array();
  for (const auto& [idx, v] : f_) {
    j["f"].push_back({idx[0], idx[1], idx[2], rational_str(v)});
  }
  for (const auto& [idx, v] : g_) {
    j["g"].push_back({idx[0], idx[1], idx[2], rational_str(v)});
  }
  return j.dump(2);
}

StructureConstants StructureConstants::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw MalformedInput(std::string("JSON parse error: ") + e.what());
  }
  if (!j.is_object() || !j.contains("dim") || !j["dim"].is_number_integer()) {
    throw MalformedInput("expected object with integer \"dim\"");
  }
  int dim = j["dim"].get<int>();
  if (dim < 1) throw MalformedInput("dim must be positive");
  StructureConstants sc(dim);
  auto load = [&](const char* key, auto setter) {
    if (!j.contains(key)) return;
    if (!j[key].is_array()) throw MalformedInput("expected array for constants");
    for (const auto& e : j[key]) {
      if (!e.is_array() || e.size() != 4 || !e[0].is_number_integer() ||
          !e[1].is_number_integer() || !e[2].is_number_integer() ||
          !e[3].is_string()) {
        throw MalformedInput("constant entries must be [i, j, k, \"p/q\"]");
      }
      auto v = parse_rational(e[3].get<std::string>());
      if (!v) throw MalformedInput("bad rational: " + e[3].get<std::string>());
      setter(e[0].get<int>(), e[1].get<int>(), e[2].get<int>(), *v);
    }
  };
  load("f", [&](int i, int jj, int k, const Rational& v) {
    // A file listing both orders must be consistent; set_f would silently
    // antisymmetrize, so check explicitly.
    if (i > jj && sc.f(jj, i, k) != 0 && sc.f(jj, i, k) != -v) {
      throw MalformedInput("inconsistent duplicate f entry");
    }
    if (i < jj && sc.f(i, jj, k) != 0 && sc.f(i, jj, k) != v) {
      throw MalformedInput("inconsistent duplicate f entry");
    }
    sc.set_f(i, jj, k, v);
  });
  load("g", [&](int i, int jj, int k, const Rational& v) {
    if (i > jj && sc.g(jj, i, k) != 0 && sc.g(jj, i, k) != -v) {
      throw MalformedInput("inconsistent duplicate g entry");
    }
    if (i < jj && sc.g(i, jj, k) != 0 && sc.g(i, jj, k) != v) {
      throw MalformedInput("inconsistent duplicate g entry");
    }
    sc.set_g(i, jj, k, v);
  });
  return sc;
}

std::string Violation::str() const {
  std::ostringstream os;
  os << identity << " at (";
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (i) os << ",";
    os << indices[i];
  }
  os << ")";
  return os.str();
}

ValidationReport validate_lie_algebra(const std::map<IndexTriple, Rational>& c,
                                      int dim) {
  auto at = [&](int i, int j, int k) -> Rational {
    if (i < 1 || j < 1 || k < 1 || i > dim || j > dim || k > dim) {
      throw MalformedInput("index out of range in constants map");
    }
    auto it = c.find({i, j, k});
    return it == c.end() ? Rational(0) : it->second;
  };
  for (const auto& [idx, v] : c) {
    (void)v;
    if (idx[0] < 1 || idx[1] < 1 || idx[2] < 1 || idx[0] > dim ||
        idx[1] > dim || idx[2] > dim) {
      throw MalformedInput("index out of range in constants map");
    }
  }

  ValidationReport report;
  for (int i = 1; i <= dim; ++i) {
    for (int j = i; j <= dim; ++j) {
      for (int k = 1; k <= dim; ++k) {
        if (at(i, j, k) + at(j, i, k) != 0) {
          report.push_back({"antisymmetry", {i, j, k}});
        }
      }
    }
  }
  // Jacobi: sum_m c^m_{ij} c^l_{mk} + c^m_{jk} c^l_{mi} + c^m_{ki} c^l_{mj} = 0.
  for (int i = 1; i <= dim; ++i) {
    for (int j = i + 1; j <= dim; ++j) {
      for (int k = j + 1; k <= dim; ++k) {
        for (int l = 1; l <= dim; ++l) {
          Rational s = 0;
          for (int m = 1; m <= dim; ++m) {
            s += at(i, j, m) * at(m, k, l);
            s += at(j, k, m) * at(m, i, l);
            s += at(k, i, m) * at(m, j, l);
          }
          if (s != 0) report.push_back({"jacobi", {i, j, k, l}});
        }
      }
    }
  }
  return report;
}

namespace {

std::map<IndexTriple, Rational> full_map_f(const StructureConstants& sc) {
  std::map<IndexTriple, Rational> m;
  for (int i = 1; i <= sc.dim(); ++i) {
    for (int j = 1; j <= sc.dim(); ++j) {
      for (int k = 1; k <= sc.dim(); ++k) {
        Rational v = sc.f(i, j, k);
        if (v != 0) m[{i, j, k}] = v;
      }
    }
  }
  return m;
}

std::map<IndexTriple, Rational> full_map_g(const StructureConstants& sc) {
  std::map<IndexTriple, Rational> m;
  for (int i = 1; i <= sc.dim(); ++i) {
    for (int j = 1; j <= sc.dim(); ++j) {
      for (int k = 1; k <= sc.dim(); ++k) {
        Rational v = sc.g(i, j, k);
        if (v != 0) m[{i, j, k}] = v;
      }
    }
  }
  return m;
}

}  // namespace

ValidationReport validate_manin_triple(const StructureConstants& sc) {
  ValidationReport report = validate_lie_algebra(full_map_f(sc), sc.dim());
  for (auto& v : report) v.identity = "f-" + v.identity;
  ValidationReport rg = validate_lie_algebra(full_map_g(sc), sc.dim());
  for (auto& v : rg) {
    v.identity = "g-" + v.identity;
    report.push_back(v);
  }
  const int n = sc.dim();
  // f^k_{ij} g_k^{lm} = f^l_{ik} g_j^{km} - f^l_{jk} g_i^{km}
  //                   + f^m_{ik} g_j^{lk} - f^m_{jk} g_i^{lk}
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      for (int l = 1; l <= n; ++l) {
        for (int m = 1; m <= n; ++m) {
          Rational lhs = 0, rhs = 0;
          for (int k = 1; k <= n; ++k) {
            lhs += sc.f(i, j, k) * sc.g(l, m, k);
            rhs += sc.f(i, k, l) * sc.g(k, m, j);
            rhs -= sc.f(j, k, l) * sc.g(k, m, i);
            rhs += sc.f(i, k, m) * sc.g(l, k, j);
            rhs -= sc.f(j, k, m) * sc.g(l, k, i);
          }
          if (lhs != rhs) report.push_back({"compatibility", {i, j, l, m}});
        }
      }
    }
  }
  return report;
}

DoubleElement DoubleElement::zero(int dim) {
  return {std::vector<Rational>(dim, Rational(0)),
          std::vector<Rational>(dim, Rational(0))};
}

DoubleElement DoubleElement::basis_v(int dim, int i) {
  DoubleElement e = zero(dim);
  e.v[i - 1] = 1;
  return e;
}

DoubleElement DoubleElement::basis_w(int dim, int i) {
  DoubleElement e = zero(dim);
  e.w[i - 1] = 1;
  return e;
}

Rational pairing(const DoubleElement& x, const DoubleElement& y) {
  Rational s = 0;
  for (std::size_t i = 0; i < x.v.size(); ++i) {
    s += x.v[i] * y.w[i] + x.w[i] * y.v[i];
  }
  return s;
}

DoubleElement double_bracket(const DoubleElement& x, const DoubleElement& y,
                             const StructureConstants& sc) {
  const int n = sc.dim();
  DoubleElement r = DoubleElement::zero(n);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      Rational vv = x.v[i - 1] * y.v[j - 1];
      Rational ww = x.w[i - 1] * y.w[j - 1];
      // [xi_i, xi^j] = g_i^{jk} xi_k - f^j_{ik} xi^k; the reverse order flips sign.
      Rational vw = x.v[i - 1] * y.w[j - 1] - y.v[i - 1] * x.w[j - 1];
      for (int k = 1; k <= n; ++k) {
        if (vv != 0) r.v[k - 1] += vv * sc.f(i, j, k);
        if (ww != 0) r.w[k - 1] += ww * sc.g(i, j, k);
        if (vw != 0) {
          r.v[k - 1] += vw * sc.g(j, k, i);
          r.w[k - 1] -= vw * sc.f(i, k, j);
        }
      }
    }
  }
  return r;
}

StructureConstants fixture(const std::string& name) {
  if (name == "abelian_2") {
    return StructureConstants(2);
  }
  if (name == "double_2d") {
    StructureConstants sc(2);
    sc.set_f(1, 2, 2, 1);
    return sc;
  }
  if (name == "iwasawa_su2") {
    // su(2) with [e_a, e_b] = eps_{abc} e_c against the dual basis of
    // sb(2,C) cut out by the imaginary part of the trace form, which gives
    // [b^1, b^3] = 2 b^1 and [b^2, b^3] = 2 b^2.
    StructureConstants sc(3);
    sc.set_f(1, 2, 3, 1);
    sc.set_f(2, 3, 1, 1);
    sc.set_f(3, 1, 2, 1);
    sc.set_g(1, 3, 1, 2);
    sc.set_g(2, 3, 2, 2);
    return sc;
  }
  throw MalformedInput("unknown fixture: " + name);
}

std::vector<std::string> fixture_names() {
  return {"abelian_2", "double_2d", "iwasawa_su2"};
}

}  // namespace bvbfv
