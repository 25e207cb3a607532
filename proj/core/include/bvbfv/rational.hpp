#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace bvbfv {

using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Parses a decimal-free "p/q" (or "p") string; returns nullopt on garbage.
inline std::optional<Rational> parse_rational(const std::string& s) {
  if (s.empty()) return std::nullopt;
  for (char c : s) {
    if (c != '-' && c != '/' && (c < '0' || c > '9')) return std::nullopt;
  }
  try {
    Rational r(s);
    r.canonicalize();
    if (r.get_den() == 0) return std::nullopt;
    return r;
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

inline std::string rational_str(const Rational& r) { return r.get_str(); }

/// Gaussian rational a + b*i with exact components.
struct GaussQ {
  Rational re{0};
  Rational im{0};

  GaussQ() = default;
  GaussQ(Rational r) : re(std::move(r)) {}
  GaussQ(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  GaussQ(long n) : re(rat(n)) {}

  static GaussQ i() { return GaussQ(rat(0), rat(1)); }

  bool is_zero() const { return re == 0 && im == 0; }

  GaussQ operator-() const { return GaussQ(-re, -im); }
  GaussQ& operator+=(const GaussQ& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussQ& operator-=(const GaussQ& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  GaussQ operator+(const GaussQ& o) const {
    GaussQ r = *this;
    return r += o;
  }
  GaussQ operator-(const GaussQ& o) const {
    GaussQ r = *this;
    return r -= o;
  }
  GaussQ operator*(const GaussQ& o) const {
    return GaussQ(re * o.re - im * o.im, re * o.im + im * o.re);
  }
  GaussQ& operator*=(const GaussQ& o) { return *this = *this * o; }
  GaussQ operator*(const Rational& s) const { return GaussQ(re * s, im * s); }

  bool operator==(const GaussQ& o) const { return re == o.re && im == o.im; }
  bool operator!=(const GaussQ& o) const { return !(*this == o); }

  std::string str() const {
    if (im == 0) return rational_str(re);
    if (re == 0) return rational_str(im) + "i";
    std::string s = rational_str(re);
    if (im > 0) s += "+";
    return s + rational_str(im) + "i";
  }
};

inline GaussQ operator*(const Rational& s, const GaussQ& g) { return g * s; }

}  // namespace bvbfv
