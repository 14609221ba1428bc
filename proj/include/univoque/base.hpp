#pragma once

#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "univoque/digits.hpp"
#include "univoque/polynomial.hpp"
#include "univoque/rational.hpp"

namespace univoque {

// Refinement stops once an enclosure is narrower than 2^-kDefaultMaxBits.
inline constexpr unsigned kDefaultMaxBits = 256;

// Something that pins down a real base and can enclose it ever more tightly.
class BaseSource {
 public:
  virtual ~BaseSource() = default;
  // Enclosure of width <= width, or a single point when the base is rational.
  virtual Interval enclose(const Rational& width) const = 0;
  // Polynomial whose only root inside any enclosure handed out is the base, and a simple one.
  virtual const Polynomial* defining_polynomial() const { return nullptr; }
  // Quasi-greedy expansion of 1 in this base, when it is eventually periodic and known.
  virtual const EPSeq* defining_alpha() const { return nullptr; }
  virtual std::string describe() const = 0;
};

namespace detail {

// q^a (q^p - 1) (pi_q(s) - 1) as an integer polynomial. Positive for 1 < q < root.
inline Polynomial alpha_polynomial(const EPSeq& s) {
  const auto& pre = s.preperiod();
  const auto& per = s.period();
  const unsigned a = static_cast<unsigned>(pre.size());
  const unsigned p = static_cast<unsigned>(per.size());
  std::vector<Rational> A(a), B(p);
  for (unsigned i = 0; i < a; ++i) A[a - 1 - i] = pre[i];
  for (unsigned j = 0; j < p; ++j) B[p - 1 - j] = per[j];
  Polynomial qp1 = Polynomial::monomial(p) - Rational(1);
  return qp1 * Polynomial(A) + Polynomial(B) - Polynomial::monomial(a) * qp1;
}

inline bool is_rational_square(const Rational& x, Rational& root) {
  if (sgn(x) < 0) return false;
  Integer n = x.get_num(), d = x.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return false;
  Integer rn, rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  root = Rational(rn, rd);
  root.canonicalize();
  return true;
}

}  // namespace detail

// Bracketing refinement by halving. Levels are stored, so the enclosure
// returned for a width does not depend on earlier, finer requests.
class BisectionSource : public BaseSource {
 public:
  Interval enclose(const Rational& width) const override {
    std::lock_guard<std::mutex> lock(mutex_);
    while (true) {
      const Interval& last = levels_.back();
      if (last.is_point() || last.width() <= width) break;
      levels_.push_back(halve(last));
    }
    for (const Interval& iv : levels_)
      if (iv.is_point() || iv.width() <= width) return iv;
    return levels_.back();
  }

 protected:
  void start(const Interval& bracket) { levels_.assign(1, bracket); }
  // +1 if the base lies above mid, -1 if below, 0 if it equals mid.
  virtual int side(const Rational& mid) const = 0;
  // Rational root hidden in the bracket, if one can be recognised.
  virtual std::optional<Rational> exact_in(const Interval&) const { return std::nullopt; }

 private:
  Interval halve(const Interval& iv) const {
    const Rational mid = iv.midpoint();
    const int s = side(mid);
    Interval next = s == 0 ? Interval(mid) : s > 0 ? Interval(mid, iv.hi) : Interval(iv.lo, mid);
    if (!next.is_point())
      if (auto r = exact_in(next)) next = Interval(*r);
    return next;
  }

  mutable std::mutex mutex_;
  mutable std::vector<Interval> levels_;
};

// Bisection on the exact sign of a polynomial with a single root inside the
// bracket (the caller's promise; only the sign change is checked).
class PolynomialRootSource : public BisectionSource {
 public:
  PolynomialRootSource(const Polynomial& p, const Rational& lo, const Rational& hi) : poly_(squarefree_part(p)) {
    if (lo > hi) throw DomainError("root bracket with lo > hi");
    const int a = sgn(poly_.eval(lo)), b = sgn(poly_.eval(hi));
    if (a == 0) {
      start(Interval(lo));
    } else if (b == 0) {
      start(Interval(hi));
    } else {
      if (a == b) throw DomainError("polynomial has no sign change on the bracket");
      sign_below_ = a;
      const Interval bracket(lo, hi);
      if (auto r = closed_form_root(bracket))
        start(Interval(*r));
      else
        start(bracket);
    }
  }

  const Polynomial* defining_polynomial() const override { return &poly_; }
  std::string describe() const override {
    std::string s = "root of [";
    for (std::size_t i = 0; i < poly_.coeffs().size(); ++i) s += (i ? "," : "") + univoque::to_string(poly_.coeffs()[i]);
    return s + "]";
  }

 protected:
  int side(const Rational& mid) const override {
    const int s = sgn(poly_.eval(mid));
    return s == 0 ? 0 : s == sign_below_ ? 1 : -1;
  }

  // The simplest rational of a narrow bracket is the only rational root candidate
  // worth an exact evaluation.
  std::optional<Rational> exact_in(const Interval& iv) const override {
    Rational cand = simplest_between(iv.lo, iv.hi);
    if (sgn(poly_.eval(cand)) == 0) return cand;
    return std::nullopt;
  }

 private:
  std::optional<Rational> closed_form_root(const Interval& bracket) const {
    const Polynomial p = poly_.without_zero_roots();
    auto inside = [&](const Rational& r) { return bracket.contains(r) && sgn(poly_.eval(r)) == 0; };
    if (p.degree() == 1) {
      Rational r = -p.coeff(0) / p.coeff(1);
      if (inside(r)) return r;
    } else if (p.degree() == 2) {
      const Rational a = p.coeff(2), b = p.coeff(1), c = p.coeff(0);
      Rational root;
      if (detail::is_rational_square(b * b - 4 * a * c, root)) {
        for (const Rational& r : {Rational((-b + root) / (2 * a)), Rational((-b - root) / (2 * a))})
          if (inside(r)) return r;
      }
    }
    return std::nullopt;
  }

  Polynomial poly_;
  int sign_below_ = 1;
};

// The unique base q with pi_q(seq) = 1, i.e. alpha(q) = seq when seq is admissible.
class AlphaRootSource final : public PolynomialRootSource {
 public:
  explicit AlphaRootSource(EPSeq seq)
      : PolynomialRootSource(detail::alpha_polynomial(seq), Rational(1), Rational(seq.alphabet().M() + 1)),
        seq_(std::move(seq)) {}

  const EPSeq* defining_alpha() const override { return &seq_; }
  std::string describe() const override { return "root:" + seq_.to_string(); }

 private:
  EPSeq seq_;
};

// The Komornik-Loreti constant q_KL(M): root of sum lambda_i q^-i = 1, bracketed
// with the truncation tail M q^-n / (q - 1).
class KomornikLoretiSource final : public BisectionSource {
 public:
  explicit KomornikLoretiSource(Alphabet a) : alphabet_(a) {
    // lambda_1 = k + 1 forces q_KL into (k + 1, k + 2].
    const int k = a.M() / 2;
    start(Interval(Rational(k + 1), Rational(std::min(k + 2, a.M() + 1))));
  }

  std::string describe() const override { return "kl:" + std::to_string(alphabet_.M()); }

 protected:
  // q_KL is transcendental, so the loop separates any rational from it once
  // enough terms are summed.
  int side(const Rational& q) const override {
    const Rational x = 1 / q;
    const Rational tail_factor = Rational(alphabet_.M()) / (q - 1);
    for (std::size_t n = 64; n <= (std::size_t{1} << 16); n *= 2) {
      const Word w = lambda_prefix(alphabet_, n);
      Rational s(0);
      for (std::size_t i = n; i-- > 0;) s = (s + w[i]) * x;
      if (s > 1) return 1;
      if (s + tail_factor * pow_int(x, static_cast<unsigned>(n)) < 1) return -1;
    }
    throw PrecisionExhausted("cannot separate rational from q_KL");
  }

 private:
  Alphabet alphabet_;
};

// A real base q > 1 held as a rational enclosure [lo, hi], optionally backed by
// a source that refines it on demand.
class BaseEnclosure {
 public:
  explicit BaseEnclosure(const Rational& exact) : iv_(exact) { validate(); }
  BaseEnclosure(const Rational& lo, const Rational& hi) : iv_(lo, hi) { validate(); }
  BaseEnclosure(std::shared_ptr<const BaseSource> source, const Rational& width)
      : iv_(source->enclose(width)), source_(std::move(source)) {
    validate();
  }

  const Rational& lo() const noexcept { return iv_.lo; }
  const Rational& hi() const noexcept { return iv_.hi; }
  const Interval& interval() const noexcept { return iv_; }
  bool is_exact() const { return iv_.is_point(); }
  bool refinable() const noexcept { return source_ != nullptr; }
  const std::shared_ptr<const BaseSource>& source() const noexcept { return source_; }

  const EPSeq* defining_alpha() const { return source_ ? source_->defining_alpha() : nullptr; }
  const Polynomial* defining_polynomial() const { return source_ ? source_->defining_polynomial() : nullptr; }

  BaseEnclosure refined(const Rational& width) const {
    if (!source_ || iv_.is_point() || iv_.width() <= width) return *this;
    BaseEnclosure b = *this;
    b.iv_ = source_->enclose(width);
    return b;
  }

  // Certified sign of p(q). Narrows the enclosure as needed; an exact zero is
  // recognised through gcd(p, defining polynomial).
  // When used is given it receives the enclosure that settled the sign.
  int sign(const Polynomial& p, Interval* used = nullptr, unsigned max_bits = kDefaultMaxBits) const {
    if (used) *used = iv_;
    if (p.degree() <= 0) return p.is_zero() ? 0 : sgn(p.coeff(0));
    Interval iv = iv_;
    if (auto s = interval_sign(p, iv)) return *s;
    if (const Polynomial* P = defining_polynomial()) {
      const Polynomial g = gcd(*P, p);
      if (g.degree() >= 1) {
        const int a = sgn(g.eval(iv.lo)), b = sgn(g.eval(iv.hi));
        if (a == 0 || b == 0 || a != b) return 0;
      }
    }
    if (!source_) throw PrecisionExhausted("sign undecidable on a fixed enclosure " + to_string());
    const Rational floor_width = pow2_neg(max_bits);
    Rational w = iv.width();
    while (w > floor_width) {
      w /= Rational(1 << 24);
      iv = source_->enclose(w);
      if (used) *used = iv;
      if (auto s = interval_sign(p, iv)) return *s;
    }
    throw PrecisionExhausted("sign undecidable at maximum refinement for base " + describe());
  }

  // Certified sign of q - r.
  int compare(const Rational& r) const {
    std::vector<Rational> c{Rational(-r), Rational(1)};
    return sign(Polynomial(std::move(c)));
  }

  // Outward-rounded bounds on log q.
  double log_lower() const { return next_down(std::log(to_double_down(iv_.lo))); }
  double log_upper() const { return next_up(std::log(to_double_up(iv_.hi))); }

  std::string describe() const { return source_ ? source_->describe() : to_string(); }
  // "[lo, hi]" with num/den endpoints.
  std::string to_string() const { return "[" + univoque::to_string(iv_.lo) + ", " + univoque::to_string(iv_.hi) + "]"; }

 private:
  void validate() {
    iv_.lo.canonicalize();
    iv_.hi.canonicalize();
    if (iv_.lo > iv_.hi) throw DomainError("base enclosure with lo > hi");
    if (iv_.lo <= 1) throw DomainError("base must exceed 1");
  }

  static std::optional<int> interval_sign(const Polynomial& p, const Interval& iv) {
    if (iv.is_point()) return sgn(p.eval(iv.lo));
    Interval v = p.eval(iv);
    if (sgn(v.lo) > 0) return 1;
    if (sgn(v.hi) < 0) return -1;
    if (sgn(v.lo) == 0 && sgn(v.hi) == 0) return 0;
    return std::nullopt;
  }

  Interval iv_;
  std::shared_ptr<const BaseSource> source_;
};

// Certified sign of a - b. Equality is recognised for exact endpoints and for
// algebraic bases sharing a root of their defining polynomials.
inline int compare_bases(const BaseEnclosure& a, const BaseEnclosure& b, unsigned max_bits = kDefaultMaxBits) {
  if (a.is_exact()) return -b.compare(a.lo());
  if (b.is_exact()) return a.compare(b.lo());
  if (a.defining_alpha() && b.defining_alpha() && *a.defining_alpha() == *b.defining_alpha() &&
      a.defining_alpha()->alphabet() == b.defining_alpha()->alphabet())
    return 0;
  std::optional<Polynomial> common;
  if (a.defining_polynomial() && b.defining_polynomial()) {
    Polynomial g = gcd(*a.defining_polynomial(), *b.defining_polynomial());
    if (g.degree() >= 1) common = std::move(g);
  }
  const Rational floor_width = pow2_neg(max_bits);
  BaseEnclosure x = a, y = b;
  while (true) {
    if (x.hi() < y.lo()) return -1;
    if (x.lo() > y.hi()) return 1;
    if (x.is_exact() || y.is_exact()) return x.is_exact() ? -y.compare(x.lo()) : x.compare(y.lo());
    if (common) {
      const Rational lo = std::max(x.lo(), y.lo()), hi = std::min(x.hi(), y.hi());
      const int s = sgn(common->eval(lo)), t = sgn(common->eval(hi));
      if (s == 0 || t == 0 || s != t) return 0;
    }
    const Rational w = std::max(x.interval().width(), y.interval().width()) / Rational(1 << 24);
    if (w < floor_width || (!x.refinable() && !y.refinable()))
      throw PrecisionExhausted("cannot order bases " + a.describe() + " and " + b.describe());
    x = x.refined(w);
    y = y.refined(w);
  }
}

// Plain width 10^-digits.
inline Rational decimal_width(unsigned digits) {
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, digits);
  return Rational(Integer(1), p);
}

inline const Rational& default_width() {
  static const Rational w = decimal_width(12);
  return w;
}

}  // namespace univoque
