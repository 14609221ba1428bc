#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "univoque/base.hpp"
#include "univoque/digits.hpp"
#include "univoque/expansion.hpp"
#include "univoque/subshift.hpp"

namespace univoque {

// Shared Komornik-Loreti source per alphabet; enclosures are history independent.
inline std::shared_ptr<const KomornikLoretiSource> komornik_loreti_source(Alphabet a) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const KomornikLoretiSource>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[a.M()];
  if (!slot) slot = std::make_shared<KomornikLoretiSource>(a);
  return slot;
}

inline BaseEnclosure q_kl(Alphabet a, const Rational& width = default_width()) {
  return BaseEnclosure(komornik_loreti_source(a), width);
}

// alpha(q_T): (k+1) k^inf for M = 2k, (k+1)((k+1)k)^inf for M = 2k+1.
inline EPSeq alpha_q_t(Alphabet a) {
  const int k = a.M() / 2;
  if (a.M() % 2 == 0) return EPSeq(Word(a, {k + 1}), Word(a, {k}));
  return EPSeq(Word(a, {k + 1}), Word(a, {k + 1, k}));
}

inline BaseEnclosure q_t(Alphabet a, const Rational& width = default_width()) {
  return base_from_alpha(alpha_q_t(a), width);
}

namespace detail {

inline void require_periodic_in_v(const EPSeq& seq) {
  if (!seq.purely_periodic()) throw DomainError("expected a purely periodic sequence, got " + seq.to_string());
  if (!is_reflection_bounded(seq)) throw NotInV(seq.to_string() + " is not in V");
}

// The comparison a_1..a_j (reflect(a_1..a_j)^+)^inf < seq, required whenever
// a_j > 0 and (a_1..a_j^-)^inf is in V. Digits past the period wrap around.
inline bool irreducibility_check(const EPSeq& seq, std::size_t j) {
  const Word w = seq.prefix(j);
  if (w.back() == 0) return true;
  if (!is_reflection_bounded(EPSeq::periodic(w.minus()))) return true;
  return EPSeq(w, w.reflect().plus()) < seq;
}

inline bool irreducibility_checks(const EPSeq& seq, std::size_t j_from, std::size_t j_to) {
  for (std::size_t j = j_from; j <= j_to; ++j)
    if (!irreducibility_check(seq, j)) return false;
  return true;
}

}  // namespace detail

// Irreducibility of a purely periodic sequence in V, checking j = 1..j_max
// (0 means the minimal period).
inline bool is_irreducible(const EPSeq& seq, std::size_t j_max = 0) {
  detail::require_periodic_in_v(seq);
  if (j_max == 0) j_max = seq.period().size();
  return detail::irreducibility_checks(seq, 1, j_max);
}

// The n with xi(n+1) <= seq < xi(n); NotInRange outside (lambda, xi(1)).
inline unsigned star_level(const EPSeq& seq) {
  const Alphabet a = seq.alphabet();
  if (seq >= xi(a, 1)) throw NotInRange(seq.to_string() + " is not below xi(1)");
  if (compare_lex(seq, lambda_stream(a)) < 0) throw NotInRange(seq.to_string() + " is below the Komornik-Loreti sequence");
  for (unsigned n = 1; n < 40; ++n)
    if (xi(a, n + 1) <= seq) return n;
  throw NotInRange(seq.to_string() + " is too close to the Komornik-Loreti sequence");
}

struct StarVerdict {
  bool value = false;
  unsigned n = 0;
  explicit operator bool() const noexcept { return value; }
};

// *-irreducibility: locate n, then run the checks for 2^n < j <= j_max (M even)
// or 2^(n+1) < j <= j_max (M odd). j_max = 0 means the minimal period.
inline StarVerdict is_star_irreducible(const EPSeq& seq, std::size_t j_max = 0) {
  detail::require_periodic_in_v(seq);
  const unsigned n = star_level(seq);
  if (j_max == 0) j_max = seq.period().size();
  const std::size_t skip = std::size_t{1} << (seq.alphabet().M() % 2 == 0 ? n : n + 1);
  return {detail::irreducibility_checks(seq, skip + 1, j_max), n};
}

struct Plateau {
  enum class Kind { Irreducible, StarIrreducible };

  Word generator;
  EPSeq alpha_L, alpha_hat, alpha_R;
  BaseEnclosure p_L, p_hat, p_R;
  EntropyBounds entropy;
  Kind kind = Kind::Irreducible;
  // The level n of a *-irreducible generator.
  unsigned star_n = 0;

  std::string kind_string() const {
    return kind == Kind::Irreducible ? "irreducible" : "star-irreducible(" + std::to_string(star_n) + ")";
  }
};

namespace detail {

struct GeneratorInfo {
  Word generator;
  Plateau::Kind kind;
  unsigned star_n;
};

// Classifies gen^inf; throws NotAPlateauGenerator when it does not start a plateau.
inline GeneratorInfo check_generator(const Word& gen) {
  using R = NotAPlateauGenerator::Reason;
  if (gen.empty()) throw NotAPlateauGenerator(R::Inadmissible, "empty generator");
  const Alphabet a = gen.alphabet();
  const EPSeq L = EPSeq::periodic(gen);
  const Word g = L.period();
  if (!is_admissible_alpha(L)) throw NotAPlateauGenerator(R::Inadmissible, L.to_string() + " is not a quasi-greedy expansion");
  if (g.back() == a.M()) throw NotAPlateauGenerator(R::Inadmissible, "generator " + g.to_string() + " has no successor word");
  if (!is_reflection_bounded(L)) throw NotAPlateauGenerator(R::Reducible, L.to_string() + " is not in V");
  if (compare_lex(L, lambda_stream(a)) < 0)
    throw NotAPlateauGenerator(R::BelowKL, L.to_string() + " lies at or below q_KL");
  if (L >= xi(a, 1)) {
    if (!is_irreducible(L)) throw NotAPlateauGenerator(R::Reducible, L.to_string() + " is not irreducible");
    return {g, Plateau::Kind::Irreducible, 0};
  }
  const StarVerdict v = is_star_irreducible(L);
  if (!v) throw NotAPlateauGenerator(R::Reducible, L.to_string() + " is not *-irreducible");
  return {g, Plateau::Kind::StarIrreducible, v.n};
}

inline EPSeq plateau_alpha_R(const Word& g) { return EPSeq(g.plus(), g.reflect()); }
inline EPSeq plateau_alpha_hat(const Word& g) { return EPSeq::periodic(g.plus() + g.plus().reflect()); }

inline Plateau make_plateau(const GeneratorInfo& info, const Rational& width) {
  const Word& g = info.generator;
  Plateau p{g,
            EPSeq::periodic(g),
            plateau_alpha_hat(g),
            plateau_alpha_R(g),
            base_from_alpha(EPSeq::periodic(g), width),
            base_from_alpha(plateau_alpha_hat(g), width),
            base_from_alpha(plateau_alpha_R(g), width),
            {},
            info.kind,
            info.star_n};
  // V at p_L is exactly the non-strict window SFT of length m.
  p.entropy = entropy(build_window_sft(g, false));
  return p;
}

// Depth-first generation of primitive words of length <= max_period whose
// periodization can lie in V; prefixes violating a shift inequality are cut.
inline void generate_generators(Alphabet a, std::size_t max_period, std::vector<GeneratorInfo>& out) {
  std::vector<Digit> w;
  const int M = a.M();
  auto prefix_ok = [&]() {
    const std::size_t k = w.size();
    for (std::size_t i = 1; i < k; ++i) {
      for (std::size_t t = 0; i + t < k; ++t) {
        if (w[i + t] != w[t]) {
          if (w[i + t] > w[t]) return false;
          break;
        }
      }
      for (std::size_t t = 0; i + t < k; ++t) {
        if (w[i + t] != M - w[t]) {
          if (w[i + t] < M - w[t]) return false;
          break;
        }
      }
    }
    return true;
  };
  auto rec = [&](auto& self) -> void {
    if (!w.empty()) {
      const Word gen(a, w);
      if (EPSeq::periodic(gen).period().size() == gen.size()) {
        try {
          out.push_back(check_generator(gen));
        } catch (const NotAPlateauGenerator&) {
        }
      }
    }
    if (w.size() == max_period) return;
    for (int d = M; d >= 0; --d) {
      w.push_back(d);
      if (prefix_ok()) self(self);
      w.pop_back();
    }
  };
  rec(rec);
  std::sort(out.begin(), out.end(), [](const GeneratorInfo& x, const GeneratorInfo& y) {
    return EPSeq::periodic(x.generator) < EPSeq::periodic(y.generator);
  });
}

}  // namespace detail

inline Plateau plateau_from_generator(const Word& gen, const Rational& width = default_width()) {
  return detail::make_plateau(detail::check_generator(gen), width);
}

// Plateaus with generator period <= max_period and q_lo < p_L <= q_hi, sorted by p_L.
inline std::vector<Plateau> enumerate_plateaus(Alphabet a, const Rational& q_lo, const Rational& q_hi,
                                               std::size_t max_period, const Rational& width = default_width()) {
  std::vector<detail::GeneratorInfo> gens;
  detail::generate_generators(a, max_period, gens);
  std::vector<Plateau> out;
  for (const auto& g : gens) {
    const BaseEnclosure pl = base_from_alpha(EPSeq::periodic(g.generator), width);
    if (pl.compare(q_lo) <= 0 || pl.compare(q_hi) > 0) continue;
    out.push_back(detail::make_plateau(g, width));
  }
  return out;
}

// Certified p_R(i) < p_L(i+1) for consecutive plateaus, via the exact order of
// their quasi-greedy expansions.
inline bool plateaus_disjoint(const std::vector<Plateau>& ps) {
  for (std::size_t i = 0; i + 1 < ps.size(); ++i)
    if (!(ps[i].alpha_R < ps[i + 1].alpha_L)) return false;
  return true;
}

struct BaseClass {
  enum class Verdict { BelowKL, InPlateau, BifurcationCandidate };
  Verdict verdict = Verdict::BifurcationCandidate;
  std::optional<Plateau> plateau;
  // Candidate data: generator period searched and the nearest plateaus on each side.
  std::size_t resolution = 0;
  std::optional<Plateau> below, above;

  std::string verdict_string() const {
    switch (verdict) {
      case Verdict::BelowKL: return "BelowKL";
      case Verdict::InPlateau: return "InPlateau";
      default: return "BifurcationCandidate";
    }
  }
};

inline BaseClass classify_base(const BaseEnclosure& q, Alphabet a, std::size_t max_period,
                               const Rational& width = default_width()) {
  detail::require_base_in_range(q, a.M());
  BaseClass c;
  c.resolution = max_period;
  if (compare_bases(q, q_kl(a, width)) <= 0) {
    c.verdict = BaseClass::Verdict::BelowKL;
    return c;
  }
  std::vector<detail::GeneratorInfo> gens;
  detail::generate_generators(a, max_period, gens);
  const detail::GeneratorInfo* below = nullptr;
  const detail::GeneratorInfo* above = nullptr;
  for (const auto& g : gens) {
    const BaseEnclosure pl = base_from_alpha(EPSeq::periodic(g.generator), width);
    if (compare_bases(pl, q) > 0) {
      above = &g;  // sorted by p_L, so the first one above is the nearest
      break;
    }
    const BaseEnclosure pr = base_from_alpha(detail::plateau_alpha_R(g.generator), width);
    if (compare_bases(q, pr) <= 0) {
      c.verdict = BaseClass::Verdict::InPlateau;
      c.plateau = detail::make_plateau(g, width);
      return c;
    }
    below = &g;
  }
  c.verdict = BaseClass::Verdict::BifurcationCandidate;
  if (below) c.below = detail::make_plateau(*below, width);
  if (above) c.above = detail::make_plateau(*above, width);
  return c;
}

// Membership of q in U(K) cap ... cap U(M), decided as q <= K+1 and q in U(M).
inline Membership multi_alphabet_member(const BaseEnclosure& q, Alphabet a, int K, std::size_t depth = 256) {
  const int M = a.M();
  if (K < 1 || K > M) throw DomainError("multi_alphabet_member needs 1 <= K <= M");
  detail::require_base_in_range(q, M);
  if (q_kl(a).compare(Rational(K + 1)) > 0) return Membership::No;
  if (q.compare(Rational(K + 1)) > 0) return Membership::No;
  const Membership m = in_univoque_bases(q, a, depth);
  if (m == Membership::Yes) {
    const Word alpha = quasi_greedy_alpha(q, a, 64);
    for (Digit d : alpha)
      if (d < M - K || d > K) throw std::logic_error("digit bound M-K <= alpha_i <= K violated at " + q.describe());
  }
  return m;
}

}  // namespace univoque
