#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <utility>

#include "univoque/base.hpp"
#include "univoque/digits.hpp"

namespace univoque {

// Exact sum s_i q^-i for a rational base.
inline Rational pi_value(const EPSeq& s, const Rational& q) {
  if (q <= 1) throw DomainError("pi_value needs q > 1");
  const Rational x = 1 / q;
  Rational head(0), cycle(0);
  for (std::size_t i = s.preperiod().size(); i-- > 0;) head = (head + s.preperiod()[i]) * x;
  for (std::size_t j = s.period().size(); j-- > 0;) cycle = (cycle + s.period()[j]) * x;
  const Rational xa = pow_int(x, static_cast<unsigned>(s.preperiod().size()));
  const Rational xp = pow_int(x, static_cast<unsigned>(s.period().size()));
  return head + xa * cycle / (1 - xp);
}

// Finite sum w_i q^-i (the word followed by zeros).
inline Rational pi_finite(const Word& w, const Rational& q) {
  const Rational x = 1 / q;
  Rational v(0);
  for (std::size_t i = w.size(); i-- > 0;) v = (v + w[i]) * x;
  return v;
}

// pi is decreasing in q for nonnegative digits.
inline Interval pi_value(const EPSeq& s, const BaseEnclosure& q) {
  if (q.is_exact()) return Interval(pi_value(s, q.lo()));
  return Interval(pi_value(s, q.hi()), pi_value(s, q.lo()));
}

// Enclosure of pi_q of any sequence starting with w, tail bound M q^-n / (q - 1).
inline Interval pi_value(const Word& w, const BaseEnclosure& q) {
  const Rational tail = Rational(w.alphabet().M()) * pow_int(1 / q.lo(), static_cast<unsigned>(w.size())) / (q.lo() - 1);
  return Interval(pi_finite(w, q.hi()), pi_finite(w, q.lo()) + tail);
}

namespace detail {

// Remainder of a digit recursion r -> q r - d. Kept as a rational when q is
// exact and as a polynomial in q otherwise, so that boundary hits are exact.
class DigitMachine {
 public:
  DigitMachine(const BaseEnclosure& q, const Rational& r0) : work_(q), exact_(q.is_exact()) {
    if (exact_) {
      qv_ = q.lo();
      r_ = r0;
    } else {
      poly_ = Polynomial(r0);
    }
  }

  void scale() {
    if (exact_)
      r_ *= qv_;
    else
      poly_ = poly_.shifted();
  }
  void subtract(long d) {
    if (exact_)
      r_ -= d;
    else
      poly_ -= Rational(d);
  }

  // Certified sign of r - c.
  int compare(long c) { return exact_ ? sgn(r_ - c) : sign_of_poly(poly_ - Rational(c)); }

  // Certified sign of (r - c)(q - 1) - M, i.e. whether r - c exceeds M/(q - 1).
  int compare_tail(long c, int M) {
    if (exact_) return sgn((r_ - c) * (qv_ - 1) - M);
    std::vector<Rational> qm1{Rational(-1), Rational(1)};
    return sign_of_poly((poly_ - Rational(c)) * Polynomial(std::move(qm1)) - Rational(M));
  }

  // Smallest integer c >= 1 with r <= c; requires r > 0.
  long ceil_positive() {
    long c = std::max<long>(1, start_hint(true));
    while (compare(c) > 0) ++c;
    return c;
  }

  // Largest integer c >= 0 with r >= c; requires r >= 0.
  long floor_nonnegative() {
    long c = std::max<long>(0, start_hint(false));
    while (compare(c + 1) >= 0) ++c;
    return c;
  }

  const BaseEnclosure& work() const noexcept { return work_; }
  bool exact() const noexcept { return exact_; }
  const Rational& exact_value() const noexcept { return r_; }

 private:
  int sign_of_poly(const Polynomial& p) {
    Interval used;
    const int s = work_.sign(p, &used);
    if (used.width() < work_.interval().width()) work_ = work_.refined(used.width());
    return s;
  }

  // A starting point at or below the true ceiling/floor, from the current enclosure.
  long start_hint(bool ceiling) const {
    const Rational lo = exact_ ? r_ : poly_.eval(work_.interval()).lo;
    const Integer c = ceiling ? ceil_of(lo) : floor_of(lo);
    if (!c.fits_slong_p()) return 0;
    return c.get_si();
  }

  BaseEnclosure work_;
  bool exact_;
  Rational qv_;
  Rational r_;
  Polynomial poly_;
};

inline void require_base_in_range(const BaseEnclosure& q, int M) {
  if (q.compare(Rational(M + 1)) > 0) throw DomainError("base exceeds M+1 = " + std::to_string(M + 1));
}

}  // namespace detail

// First n digits of the quasi-greedy expansion of 1:
// a_k = min(M, ceil(q r) - 1), r <- q r - a_k, starting from r = 1.
inline Word quasi_greedy_alpha(const BaseEnclosure& q, Alphabet a, std::size_t n) {
  detail::require_base_in_range(q, a.M());
  detail::DigitMachine m(q, Rational(1));
  std::vector<Digit> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    m.scale();
    const long d = m.compare(a.M()) > 0 ? a.M() : m.ceil_positive() - 1;
    m.subtract(d);
    out.push_back(static_cast<Digit>(d));
  }
  return Word(a, std::move(out));
}

// First n digits of the greedy expansion of x: d = min(M, floor(q r)).
inline Word greedy_expansion(const Rational& x, const BaseEnclosure& q, Alphabet a, std::size_t n) {
  detail::require_base_in_range(q, a.M());
  if (sgn(x) < 0) throw DomainError("greedy_expansion needs x >= 0");
  detail::DigitMachine m(q, x);
  if (m.compare_tail(0, a.M()) > 0) throw DomainError("x exceeds M/(q-1)");
  std::vector<Digit> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    m.scale();
    const long d = m.compare(a.M()) >= 0 ? a.M() : m.floor_nonnegative();
    m.subtract(d);
    out.push_back(static_cast<Digit>(d));
  }
  return Word(a, std::move(out));
}

// Not ending in 0^inf, and shift^n(s) <= s whenever s_n < M.
inline bool is_admissible_alpha(const EPSeq& s) {
  if (s.ends_with_zeros()) return false;
  const int M = s.alphabet().M();
  for (std::size_t n = 1; n <= s.distinct_shifts(); ++n)
    if (s.at(n - 1) < M && s.shift(n) > s) return false;
  return true;
}

// The base whose quasi-greedy expansion is seq, enclosed to the given width.
inline BaseEnclosure base_from_alpha(const EPSeq& seq, const Rational& width = default_width()) {
  if (!is_admissible_alpha(seq)) throw NotAdmissible(seq.to_string() + " is not a quasi-greedy expansion");
  return BaseEnclosure(std::make_shared<AlphaRootSource>(seq), width);
}

// alpha(q) as an exact eventually periodic sequence, when that can be established:
// either the base was built from it, or q is rational and the remainders cycle
// within max_steps.
inline std::optional<EPSeq> known_alpha(const BaseEnclosure& q, Alphabet a, std::size_t max_steps = 4096) {
  if (const EPSeq* s = q.defining_alpha()) {
    if (s->alphabet() == a) return *s;
    if (max_digit(*s) <= a.M()) {
      EPSeq t = with_alphabet(*s, a);
      if (is_admissible_alpha(t)) return t;
    }
    return std::nullopt;
  }
  if (!q.is_exact()) return std::nullopt;
  const Rational qv = q.lo();
  if (qv > a.M() + 1) throw DomainError("base exceeds M+1");
  // With a non-integer q = u/v the k-th remainder has denominator v^k, so nothing repeats.
  if (qv.get_den() != 1) return std::nullopt;
  std::map<Rational, std::size_t> seen;
  std::vector<Digit> digits;
  Rational r(1);
  for (std::size_t k = 0; k <= max_steps; ++k) {
    auto [it, fresh] = seen.emplace(r, k);
    if (!fresh) {
      const std::size_t i = it->second;
      std::vector<Digit> pre(digits.begin(), digits.begin() + static_cast<std::ptrdiff_t>(i));
      std::vector<Digit> per(digits.begin() + static_cast<std::ptrdiff_t>(i), digits.end());
      return EPSeq(Word(a, std::move(pre)), Word(a, std::move(per)));
    }
    const Rational t = r * qv;
    long d = a.M();
    if (t <= a.M()) d = ceil_of(t).get_si() - 1;
    digits.push_back(static_cast<Digit>(d));
    r = t - d;
  }
  return std::nullopt;
}

enum class Membership { Yes, No, UndecidedAtDepth };

inline const char* to_string(Membership m) {
  switch (m) {
    case Membership::Yes: return "yes";
    case Membership::No: return "no";
    default: return "undecided";
  }
}

namespace detail {

// reflect(a) < shift^n(a) and shift^n(a) < a (or <= a when closure) for all n >= 1.
inline bool univoque_condition(const EPSeq& alpha, bool closure) {
  const EPSeq r = alpha.reflect();
  for (std::size_t n = 1; n <= alpha.distinct_shifts(); ++n) {
    const EPSeq t = alpha.shift(n);
    if (!(r < t)) return false;
    if (closure ? t > alpha : t >= alpha) return false;
  }
  return true;
}

inline Membership univoque_membership(const BaseEnclosure& q, Alphabet a, std::size_t depth, bool closure) {
  const int top = q.compare(Rational(a.M() + 1));
  if (top > 0) throw DomainError("base exceeds M+1");
  if (top == 0) return Membership::Yes;
  if (auto alpha = known_alpha(q, a)) return univoque_condition(*alpha, closure) ? Membership::Yes : Membership::No;
  // Only strict inequalities can be witnessed by finitely many digits.
  const Word w = quasi_greedy_alpha(q, a, depth);
  const int M = a.M();
  for (std::size_t n = 1; n < depth; ++n) {
    for (std::size_t i = 0; n + i < depth; ++i) {
      const Digit x = w[n + i], lo = M - w[i];
      if (x != lo) {
        if (x < lo) return Membership::No;
        break;
      }
    }
    for (std::size_t i = 0; n + i < depth; ++i) {
      if (w[n + i] != w[i]) {
        if (w[n + i] > w[i]) return Membership::No;
        break;
      }
    }
  }
  return Membership::UndecidedAtDepth;
}

}  // namespace detail

// q in U: 1 has a unique q-expansion.
inline Membership in_univoque_bases(const BaseEnclosure& q, Alphabet a, std::size_t depth = 256) {
  return detail::univoque_membership(q, a, depth, false);
}

// q in the closure of U.
inline Membership in_closure_univoque(const BaseEnclosure& q, Alphabet a, std::size_t depth = 256) {
  return detail::univoque_membership(q, a, depth, true);
}

struct ExpansionVerdict {
  enum class Kind { UniqueToDepth, NotUnique, Trivial };
  Kind kind = Kind::Trivial;
  std::size_t depth = 0;
  // For NotUnique: 1-based digit position where both digits extend to expansions.
  std::size_t position = 0;
  Digit upper = 0;
  Digit lower = 0;
  // Greedy digits walked before the verdict.
  std::vector<Digit> greedy_prefix;

  bool unique() const noexcept { return kind != Kind::NotUnique; }
};

// Walks the greedy expansion. Before the first branch every expansion shares
// the greedy path, so x has a unique expansion to depth n iff no position
// k <= n admits both the greedy digit d and d - 1.
inline ExpansionVerdict is_unique_expansion(const Rational& x, const BaseEnclosure& q, Alphabet a, std::size_t depth) {
  detail::require_base_in_range(q, a.M());
  if (sgn(x) < 0) throw DomainError("x must be nonnegative");
  ExpansionVerdict v;
  v.depth = depth;
  detail::DigitMachine m(q, x);
  const int top = m.compare_tail(0, a.M());
  if (top > 0) throw DomainError("x exceeds M/(q-1)");
  if (sgn(x) == 0 || top == 0) return v;
  for (std::size_t k = 1; k <= depth; ++k) {
    m.scale();
    const long d = m.compare(a.M()) >= 0 ? a.M() : m.floor_nonnegative();
    if (d >= 1 && m.compare_tail(d - 1, a.M()) <= 0) {
      v.kind = ExpansionVerdict::Kind::NotUnique;
      v.position = k;
      v.upper = static_cast<Digit>(d);
      v.lower = static_cast<Digit>(d - 1);
      return v;
    }
    m.subtract(d);
    v.greedy_prefix.push_back(static_cast<Digit>(d));
  }
  v.kind = ExpansionVerdict::Kind::UniqueToDepth;
  return v;
}

// First 1-based n at which the finite digits certify a failure of
//   x_{n+1}.. < alpha when x_n < M,   reflect(x_{n+1}..) < alpha when x_n > 0.
// Equality over the available digits is not a certificate.
inline std::optional<std::size_t> lexicographic_violation(const Word& x, const Word& alpha) {
  const int M = x.alphabet().M();
  for (std::size_t n = 1; n < x.size(); ++n) {
    const Digit xn = x[n - 1];
    for (int side = 0; side < 2; ++side) {
      if (side == 0 ? xn >= M : xn <= 0) continue;
      for (std::size_t i = 0; n + i < x.size() && i < alpha.size(); ++i) {
        const Digit y = side == 0 ? x[n + i] : M - x[n + i];
        if (y != alpha[i]) {
          if (y > alpha[i]) return n;
          break;
        }
      }
    }
  }
  return std::nullopt;
}

// Number of length-depth digit words that extend to a q-expansion of x,
// saturating at cap. Digit d is feasible at remainder r iff 0 <= q r - d <= M/(q-1).
inline std::uint64_t count_expansions(const Rational& x, const Rational& q, Alphabet a, std::size_t depth,
                                      std::uint64_t cap = std::numeric_limits<std::uint64_t>::max()) {
  if (q <= 1 || q > a.M() + 1) throw DomainError("count_expansions needs 1 < q <= M+1");
  const Rational bound = Rational(a.M()) / (q - 1);
  if (sgn(x) < 0 || x > bound) throw DomainError("x outside [0, M/(q-1)]");
  std::map<std::pair<std::size_t, Rational>, std::uint64_t> memo;
  auto rec = [&](auto& self, std::size_t left, const Rational& r) -> std::uint64_t {
    if (left == 0) return 1;
    auto key = std::make_pair(left, r);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const Rational t = q * r;
    std::uint64_t total = 0;
    for (int d = 0; d <= a.M() && total < cap; ++d) {
      const Rational next = t - d;
      if (sgn(next) < 0 || next > bound) continue;
      const std::uint64_t c = self(self, left - 1, next);
      total = c > cap - total ? cap : total + c;
    }
    memo.emplace(std::move(key), total);
    return total;
  };
  return rec(rec, depth, x);
}

}  // namespace univoque
