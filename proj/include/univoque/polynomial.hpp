#pragma once

#include <utility>
#include <vector>

#include "univoque/rational.hpp"

namespace univoque {

// Dense univariate polynomial over Q; coeffs[i] multiplies q^i.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(Rational constant) : coeffs_{std::move(constant)} { trim(); }
  explicit Polynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

  static Polynomial monomial(unsigned degree, const Rational& c = Rational(1)) {
    std::vector<Rational> v(degree + 1);
    v[degree] = c;
    return Polynomial(std::move(v));
  }

  bool is_zero() const { return coeffs_.empty(); }
  // Degree of the zero polynomial is reported as -1.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  const Rational& leading() const { return coeffs_.back(); }
  Rational coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Rational(0); }

  Rational eval(const Rational& x) const {
    Rational acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  // Horner in interval arithmetic. Valid for any x; tight when x is narrow.
  Interval eval(const Interval& x) const {
    if (x.is_point()) return Interval(eval(x.lo));
    Interval acc{Rational(0), Rational(0)};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  // Multiply by q.
  Polynomial shifted() const {
    if (is_zero()) return {};
    std::vector<Rational> v;
    v.reserve(coeffs_.size() + 1);
    v.emplace_back(0);
    v.insert(v.end(), coeffs_.begin(), coeffs_.end());
    return Polynomial(std::move(v));
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    trim();
    return *this;
  }
  Polynomial& operator+=(const Rational& c) {
    if (coeffs_.empty()) coeffs_.emplace_back(0);
    coeffs_[0] += c;
    trim();
    return *this;
  }
  Polynomial& operator-=(const Rational& c) { return *this += Rational(-c); }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator+(Polynomial a, const Rational& c) { return a += c; }
  friend Polynomial operator-(Polynomial a, const Rational& c) { return a -= c; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> v(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (sgn(a.coeffs_[i]) == 0) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return Polynomial(std::move(v));
  }
  friend Polynomial operator*(Polynomial a, const Rational& c) {
    for (auto& x : a.coeffs_) x *= c;
    a.trim();
    return a;
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }

  // Euclidean division: *this = quot * d + rem.
  std::pair<Polynomial, Polynomial> divmod(const Polynomial& d) const {
    if (d.is_zero()) throw DomainError("polynomial division by zero");
    std::vector<Rational> rem = coeffs_;
    const int dd = d.degree();
    if (degree() < dd) return {Polynomial(), *this};
    std::vector<Rational> quot(static_cast<std::size_t>(degree() - dd + 1));
    for (int k = degree(); k >= dd; --k) {
      const Rational c = rem[static_cast<std::size_t>(k)] / d.leading();
      quot[static_cast<std::size_t>(k - dd)] = c;
      if (sgn(c) == 0) continue;
      for (int j = 0; j <= dd; ++j) rem[static_cast<std::size_t>(k - dd + j)] -= c * d.coeffs_[static_cast<std::size_t>(j)];
    }
    rem.resize(static_cast<std::size_t>(dd));
    return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
  }

  Polynomial monic() const {
    if (is_zero()) return {};
    return *this * Rational(1 / leading());
  }

  // Strip factors of q (roots at zero); harmless for roots in (1, inf).
  Polynomial without_zero_roots() const {
    std::size_t k = 0;
    while (k < coeffs_.size() && sgn(coeffs_[k]) == 0) ++k;
    return Polynomial(std::vector<Rational>(coeffs_.begin() + static_cast<std::ptrdiff_t>(k), coeffs_.end()));
  }

 private:
  void trim() {
    while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
  }

  std::vector<Rational> coeffs_;
};

inline Polynomial gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    auto r = a.divmod(b).second;
    a = std::move(b);
    b = r.monic();
  }
  return a.monic();
}

inline Polynomial derivative(const Polynomial& p) {
  if (p.degree() <= 0) return {};
  std::vector<Rational> v(static_cast<std::size_t>(p.degree()));
  for (std::size_t i = 1; i < p.coeffs().size(); ++i) v[i - 1] = p.coeffs()[i] * Rational(static_cast<long>(i));
  return Polynomial(std::move(v));
}

// p with every repeated factor reduced to a simple one; same real roots.
inline Polynomial squarefree_part(const Polynomial& p) {
  if (p.degree() <= 0) return p;
  const Polynomial g = gcd(p, derivative(p));
  if (g.degree() <= 0) return p;
  return p.divmod(g).first;
}

}  // namespace univoque
