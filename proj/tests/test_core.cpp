#include <gtest/gtest.h>

#include "univoque/univoque.hpp"

using namespace univoque;

TEST(Rational, ParsesFractionsIntegersAndDecimals) {
  EXPECT_EQ(parse_rational("3/2"), Rational(3, 2));
  EXPECT_EQ(parse_rational("-4"), Rational(-4));
  EXPECT_EQ(parse_rational("6/4"), Rational(3, 2));
  EXPECT_EQ(parse_rational("1.25"), Rational(5, 4));
  EXPECT_EQ(parse_rational("1e-3"), Rational(1, 1000));
  EXPECT_THROW(parse_rational("1.25", false), ParseError);
  EXPECT_THROW(parse_rational("1/0"), ParseError);
  EXPECT_THROW(parse_rational("abc"), ParseError);
  EXPECT_THROW(parse_rational(""), ParseError);
}

TEST(Rational, RatioIsReduced) {
  const Rational r = ratio(256, 256);
  EXPECT_EQ(r.get_den(), 1);
  EXPECT_EQ(ratio(6, 4), Rational(3, 2));
}

TEST(Rational, DirectedRoundingBracketsValue) {
  const Rational third(1, 3);
  EXPECT_LT(Rational(to_double_down(third)), third);
  EXPECT_GT(Rational(to_double_up(third)), third);
  EXPECT_EQ(to_double_down(Rational(2)), 2.0);
  const double n = to_double_nearest(ratio(7, 4));
  EXPECT_EQ(n, 1.75);
}

TEST(Rational, SimplestBetween) {
  EXPECT_EQ(simplest_between(Rational(13, 10), Rational(17, 10)), Rational(3, 2));
  EXPECT_EQ(simplest_between(Rational(1, 3), Rational(1, 3)), Rational(1, 3));
  EXPECT_EQ(simplest_between(Rational(5, 2), Rational(7, 2)), Rational(3));
}

TEST(Polynomial, EvalGcdSquarefree) {
  // (x-1)^2 (x+2) = x^3 - 3x + 2
  const Polynomial p({Rational(2), Rational(-3), Rational(0), Rational(1)});
  EXPECT_EQ(p.eval(Rational(1)), 0);
  EXPECT_EQ(p.eval(Rational(-2)), 0);
  const Polynomial sf = squarefree_part(p);
  EXPECT_EQ(sf.degree(), 2);
  EXPECT_EQ(sf.eval(Rational(1)), 0);
  EXPECT_EQ(sf.eval(Rational(-2)), 0);
  const Polynomial q({Rational(-1), Rational(1)});  // x - 1
  EXPECT_EQ(gcd(p, q).degree(), 1);
  const auto [quot, rem] = p.divmod(q);
  EXPECT_TRUE(rem.is_zero());
  EXPECT_EQ(quot * q, p);
}

TEST(Polynomial, IntervalEvalEncloses) {
  const Polynomial p({Rational(-1), Rational(-1), Rational(-1), Rational(1)});
  const Interval x(Rational(18, 10), Rational(19, 10));
  const Interval y = p.eval(x);
  for (int i = 0; i <= 10; ++i) {
    const Rational t = Rational(18, 10) + ratio(i, 100);
    EXPECT_TRUE(y.contains(p.eval(t)));
  }
}

TEST(Word, ParseAndOperations) {
  const Alphabet a(2);
  const Word w = Word::parse("210", a);
  EXPECT_EQ(w.to_string(), "210");
  EXPECT_EQ(w.reflect().to_string(), "012");
  EXPECT_EQ(w.plus().to_string(), "211");
  EXPECT_EQ(Word::parse("211", a).minus().to_string(), "210");
  EXPECT_THROW(Word::parse("212", a).plus(), OutOfAlphabet);
  EXPECT_THROW(Word::parse("210", a).minus(), OutOfAlphabet);
  EXPECT_THROW(Word::parse("3", a), ParseError);
  EXPECT_EQ(Word::parse("3,10", Alphabet(10)).to_string(), "3,10");
}

TEST(EPSeq, CanonicalFormAndEquality) {
  const Alphabet a(1);
  const EPSeq s(Word::parse("1", a), Word::parse("01", a));
  EXPECT_EQ(s, EPSeq::periodic(Word::parse("10", a)));
  EXPECT_EQ(EPSeq::periodic(Word::parse("1010", a)).period().to_string(), "10");
  EXPECT_EQ(EPSeq::parse("pre:11,per:0101", a).to_string(), "pre:1,per:10");
  EXPECT_THROW(EPSeq::parse("11", a), ParseError);
}

TEST(EPSeq, LexOrderMatchesLongPrefix) {
  const Alphabet a(1);
  const EPSeq x = EPSeq::parse("pre:11,per:01", a);
  const EPSeq y = EPSeq::parse("pre:,per:110", a);
  EXPECT_LT(x, y);
  EXPECT_LT(x.prefix(40), y.prefix(40));
  EXPECT_EQ(x.shift(3).to_string(), "pre:,per:10");
  EXPECT_EQ(x.reflect().to_string(), "pre:0,per:01");
}

TEST(Sequences, ThueMorseAndLambda) {
  EXPECT_EQ(thue_morse_prefix(16).to_string(), "0110100110010110");
  // M = 1: lambda_i = tau_i (i >= 1), the Komornik-Loreti sequence 11010011...
  EXPECT_EQ(lambda_prefix(Alphabet(1), 12).to_string(), "110100110010");
  // M = 2 = 2k: lambda_i = k + tau_i - tau_{i-1}.
  EXPECT_EQ(lambda_prefix(Alphabet(2), 8).to_string(), "21020121");
  // M = 9 = 2k+1: lambda_i = k + tau_i.
  EXPECT_EQ(lambda_prefix(Alphabet(9), 8).to_string(), "55454455");
}

TEST(Sequences, XiIsDecreasingTowardLambda) {
  const Alphabet a(1);
  EXPECT_EQ(xi(a, 1).to_string(), "pre:1,per:10");
  for (unsigned n = 1; n < 6; ++n) {
    EXPECT_GT(xi(a, n), xi(a, n + 1));
    EXPECT_TRUE(compare_lex(xi(a, n + 1), lambda_stream(a)) > 0);
  }
}

TEST(Sequences, ReflectionBounded) {
  const Alphabet a(1);
  EXPECT_TRUE(is_reflection_bounded(EPSeq::parse("pre:,per:110", a)));
  EXPECT_TRUE(is_reflection_bounded(EPSeq::parse("pre:,per:10", a)));
  EXPECT_FALSE(is_reflection_bounded(EPSeq::parse("pre:,per:100", a)));
}
