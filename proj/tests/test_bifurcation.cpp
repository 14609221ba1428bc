#include <gtest/gtest.h>

#include <bit>
#include <cmath>

#include "oracles.hpp"
#include "univoque/univoque.hpp"

using namespace univoque;

namespace {

EPSeq per(const char* text, int M) { return EPSeq::periodic(Word::parse(text, Alphabet(M))); }

// lambda_i from the Thue-Morse parity of i, written out independently.
int lambda_digit(int M, unsigned i) {
  auto tau = [](unsigned n) { return std::popcount(n) % 2; };
  const int k = M / 2;
  if (M % 2 == 1) return k + tau(i);
  return k + tau(i) - tau(i - 1);
}

// Root of sum_{i<=n} lambda_i q^-i = 1 by plain double bisection.
double kl_oracle(int M) {
  auto f = [M](double q) {
    double v = 0, p = 1;
    for (unsigned i = 1; i <= 400; ++i) {
      p /= q;
      v += lambda_digit(M, i) * p;
    }
    return v - 1;
  };
  double lo = 1.0001, hi = M + 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = (lo + hi) / 2;
    (f(mid) > 0 ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

bool contains(const BaseEnclosure& q, double x, double tol) {
  return to_double_down(q.lo()) - tol <= x && x <= to_double_up(q.hi()) + tol;
}

}  // namespace

TEST(Bifurcation, KomornikLoretiConstants) {
  EXPECT_TRUE(contains(q_kl(Alphabet(9), decimal_width(6)), 5.97592, 5e-6));
  EXPECT_TRUE(contains(q_kl(Alphabet(1), decimal_width(7)), 1.787232, 1e-6));
  for (int M : {1, 2, 3, 4, 9}) {
    const BaseEnclosure q = q_kl(Alphabet(M), decimal_width(12));
    EXPECT_TRUE(contains(q, kl_oracle(M), 1e-11)) << M;
  }
}

TEST(Bifurcation, KomornikLoretiRoundTrip) {
  const Alphabet a(2);
  EXPECT_EQ(quasi_greedy_alpha(q_kl(a), a, 32), lambda_prefix(a, 32));
}

TEST(Bifurcation, BaseQT) {
  EXPECT_TRUE(contains(q_t(Alphabet(2), decimal_width(7)), 2.618034, 1e-6));
  // alpha = 1(10)^inf, so q^3 - q^2 - 2q + 1 = 0.
  EXPECT_TRUE(contains(q_t(Alphabet(1), decimal_width(7)), 1.801938, 1e-6));
  for (int M = 1; M <= 10; ++M) {
    const Alphabet a(M);
    EXPECT_LT(compare_bases(q_kl(a), q_t(a)), 0) << M;
    EXPECT_EQ(xi(a, 1), alpha_q_t(a));
  }
}

TEST(Bifurcation, IrreducibleExamples) {
  EXPECT_TRUE(is_irreducible(per("110", 1)));
  EXPECT_FALSE(is_irreducible(per("1100", 1)));
  EXPECT_TRUE(is_irreducible(per("21", 2)));
  EXPECT_THROW(is_irreducible(per("100", 1)), NotInV);
  EXPECT_THROW(is_irreducible(EPSeq::parse("pre:1,per:10", Alphabet(1))), DomainError);
}

TEST(Bifurcation, StarIrreducibleRange) {
  EXPECT_THROW(is_star_irreducible(per("110", 1)), NotInRange);
  const Alphabet a(1);
  int seen = 0;
  for (std::size_t m = 2; m <= 10; ++m) {
    oracle::for_each_word(1, m, [&](const std::vector<int>& v) {
      if (!oracle::primitive(v) || !oracle::periodic_admissible(v) || !oracle::periodic_in_v(v, 1)) return;
      const EPSeq s = EPSeq::periodic(oracle::word(v, 1));
      if (!(s < xi(a, 1) && s >= xi(a, 2))) return;
      EXPECT_EQ(is_star_irreducible(s).n, 1u) << s.to_string();
      ++seen;
    });
  }
  EXPECT_GT(seen, 0);
}

TEST(Bifurcation, PlateauFromGeneratorExamples) {
  const Plateau p = plateau_from_generator(Word::parse("2", Alphabet(3)));
  EXPECT_TRUE(p.p_L.is_exact());
  EXPECT_EQ(p.p_L.lo(), 3);
  EXPECT_TRUE(contains(p.p_R, 2 + std::sqrt(2.0), 1e-9));
  EXPECT_TRUE(p.entropy.contains(std::log(2.0)));
  EXPECT_EQ(p.alpha_R.to_string(), "pre:3,per:1");

  const Plateau t = plateau_from_generator(Word::parse("110", Alphabet(1)));
  EXPECT_EQ(t.alpha_R, EPSeq::parse("pre:111,per:001", Alphabet(1)));
  EXPECT_TRUE(t.entropy.contains(std::log((1 + std::sqrt(5.0)) / 2)));
  EXPECT_LT(t.entropy.width(), 1e-9);
  EXPECT_EQ(t.kind, Plateau::Kind::Irreducible);

  const Plateau s = plateau_from_generator(Word::parse("21", Alphabet(2)));
  EXPECT_TRUE(contains(s.p_L, 1 + std::sqrt(3.0), 1e-9));
  EXPECT_TRUE(s.entropy.contains(std::log(1 + std::sqrt(2.0))));
}

TEST(Bifurcation, PlateauGeneratorRejections) {
  using R = NotAPlateauGenerator::Reason;
  auto reason = [](const char* g, int M) {
    try {
      plateau_from_generator(Word::parse(g, Alphabet(M)));
    } catch (const NotAPlateauGenerator& e) {
      return e.reason();
    }
    ADD_FAILURE() << g << " accepted";
    return R::Inadmissible;
  };
  EXPECT_EQ(reason("011", 1), R::Inadmissible);
  EXPECT_EQ(reason("110010", 1), R::Reducible);
  EXPECT_EQ(reason("1100", 1), R::BelowKL);
  EXPECT_EQ(reason("10", 1), R::BelowKL);
}

TEST(Bifurcation, EnumerationExamples) {
  const auto m1 = enumerate_plateaus(Alphabet(1), Rational(178, 100), Rational(2), 3);
  EXPECT_TRUE(std::any_of(m1.begin(), m1.end(), [](const Plateau& p) { return p.generator.to_string() == "110"; }));
  const auto m3 = enumerate_plateaus(Alphabet(3), q_kl(Alphabet(3)).lo(), Rational(7, 2), 1);
  ASSERT_EQ(m3.size(), 1u);
  EXPECT_EQ(m3[0].generator.to_string(), "2");
}

// Structural invariants over every enumerated plateau.
TEST(Bifurcation, EnumeratedPlateauInvariants) {
  struct Case {
    int M;
    std::size_t max_period;
  };
  for (const Case& c : {Case{1, 8}, Case{2, 5}, Case{3, 4}}) {
    const Alphabet a(c.M);
    const auto ps = enumerate_plateaus(a, q_kl(a).lo(), Rational(c.M + 1), c.max_period);
    ASSERT_FALSE(ps.empty());
    EXPECT_TRUE(plateaus_disjoint(ps));
    for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
      EXPECT_LT(compare_bases(ps[i].p_R, ps[i + 1].p_L), 0);
      EXPECT_LT(ps[i].alpha_L, ps[i + 1].alpha_L);
    }
    for (const Plateau& p : ps) {
      const Word& g = p.generator;
      const std::size_t m = g.size();
      EXPECT_LT(compare_bases(p.p_L, p.p_hat), 0) << g;
      EXPECT_LT(compare_bases(p.p_hat, p.p_R), 0) << g;
      EXPECT_GT(compare_bases(p.p_L, q_kl(a)), 0) << g;
      EXPECT_TRUE(is_admissible_alpha(p.alpha_L) && is_admissible_alpha(p.alpha_hat) && is_admissible_alpha(p.alpha_R));
      EXPECT_EQ(in_closure_univoque(p.p_L, a), Membership::Yes) << g;
      // a_{i+1}..a_m < a_1..a_{m-i}, and every rotation exceeds reflect(a_1..a_m).
      for (std::size_t i = 1; i < m; ++i) EXPECT_LT(g.slice(i, m), g.slice(0, m - i)) << g;
      for (std::size_t i = 0; i < m; ++i) EXPECT_GT(g.slice(i, m) + g.slice(0, i), g.reflect()) << g;
    }
  }
}

// The j <= m cutoff against the definition checked out to j <= 4m.
TEST(Bifurcation, RestrictedJCutoffMatchesBruteForce) {
  int checked = 0;
  for (int M = 1; M <= 3; ++M) {
    for (std::size_t m = 1; m <= 6; ++m) {
      oracle::for_each_word(M, m, [&](const std::vector<int>& v) {
        if (!oracle::primitive(v) || !oracle::periodic_admissible(v) || !oracle::periodic_in_v(v, M)) return;
        const EPSeq s = EPSeq::periodic(oracle::word(v, M));
        EXPECT_EQ(is_irreducible(s), oracle::irreducible_brute(v, M, 4 * m)) << s.to_string();
        ++checked;
      });
    }
  }
  EXPECT_GT(checked, 100);
}

// Same guard for the *-irreducible cutoff, whose restricted range starts past 2^n or 2^(n+1).
TEST(Bifurcation, StarCutoffMatchesLongerScan) {
  int checked = 0;
  for (int M = 1; M <= 3; ++M) {
    const Alphabet a(M);
    for (std::size_t m = 1; m <= 8; ++m) {
      oracle::for_each_word(M, m, [&](const std::vector<int>& v) {
        if (!oracle::primitive(v) || !oracle::periodic_admissible(v) || !oracle::periodic_in_v(v, M)) return;
        const EPSeq s = EPSeq::periodic(oracle::word(v, M));
        if (s >= xi(a, 1) || compare_lex(s, lambda_stream(a)) <= 0) return;
        EXPECT_EQ(bool(is_star_irreducible(s)), bool(is_star_irreducible(s, 4 * m))) << s.to_string();
        ++checked;
      });
    }
  }
  EXPECT_GT(checked, 0);
}

TEST(Bifurcation, ClassifyExamples) {
  EXPECT_EQ(classify_base(BaseEnclosure(Rational(3, 2)), Alphabet(1), 6).verdict, BaseClass::Verdict::BelowKL);
  const BaseClass c = classify_base(BaseEnclosure(Rational(16, 5)), Alphabet(3), 4);
  ASSERT_EQ(c.verdict, BaseClass::Verdict::InPlateau);
  EXPECT_EQ(c.plateau->generator.to_string(), "2");
  const BaseClass top = classify_base(BaseEnclosure(Rational(2)), Alphabet(1), 6);
  EXPECT_EQ(top.verdict, BaseClass::Verdict::BifurcationCandidate);
  EXPECT_TRUE(top.below.has_value());
  EXPECT_FALSE(top.above.has_value());
  // 1.85 sits in the 110 plateau [1.8393, 1.8713].
  const BaseClass mid = classify_base(BaseEnclosure(Rational(37, 20)), Alphabet(1), 6);
  ASSERT_EQ(mid.verdict, BaseClass::Verdict::InPlateau);
  EXPECT_EQ(mid.plateau->generator.to_string(), "110");
}

TEST(Bifurcation, MultiAlphabetExamples) {
  // K + 1 < q_KL(M): empty intersection.
  EXPECT_EQ(multi_alphabet_member(BaseEnclosure(Rational(5, 2)), Alphabet(3), 1), Membership::No);
  EXPECT_EQ(multi_alphabet_member(BaseEnclosure(Rational(4)), Alphabet(3), 3), Membership::Yes);
  // p_R of the generator-2 plateau is in U(3) but exceeds K + 1 = 3.
  const BaseEnclosure pr = plateau_from_generator(Word::parse("2", Alphabet(3))).p_R;
  EXPECT_EQ(in_univoque_bases(pr, Alphabet(3)), Membership::Yes);
  EXPECT_EQ(multi_alphabet_member(pr, Alphabet(3), 2), Membership::No);
  EXPECT_THROW(multi_alphabet_member(pr, Alphabet(3), 4), DomainError);
}
