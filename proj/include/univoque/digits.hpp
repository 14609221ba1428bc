#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <memory>
#include <mutex>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "univoque/errors.hpp"

namespace univoque {

using Digit = int;

// Digit set {0, ..., M}.
class Alphabet {
 public:
  explicit Alphabet(int max_digit) : M_(max_digit) {
    if (max_digit < 1) throw DomainError("alphabet needs M >= 1, got " + std::to_string(max_digit));
  }
  int M() const noexcept { return M_; }
  int size() const noexcept { return M_ + 1; }
  bool contains(Digit d) const noexcept { return d >= 0 && d <= M_; }
  friend bool operator==(Alphabet, Alphabet) = default;

 private:
  int M_;
};

// Finite word over an alphabet.
class Word {
 public:
  explicit Word(Alphabet a) : alphabet_(a) {}
  Word(Alphabet a, std::vector<Digit> digits) : alphabet_(a), digits_(std::move(digits)) {
    for (Digit d : digits_)
      if (!a.contains(d))
        throw OutOfAlphabet("digit " + std::to_string(d) + " outside {0.." + std::to_string(a.M()) + "}");
  }

  // Plain digit string when M <= 9, comma-separated decimals otherwise.
  static Word parse(std::string_view text, Alphabet a) {
    std::vector<Digit> v;
    if (a.M() <= 9) {
      for (char c : text) {
        if (c < '0' || c > '9') throw ParseError("bad digit '" + std::string(1, c) + "' in word");
        v.push_back(c - '0');
      }
    } else if (!text.empty()) {
      std::size_t start = 0;
      while (true) {
        auto comma = text.find(',', start);
        auto tok = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        if (tok.empty() || tok.size() > 9 ||
            !std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; }))
          throw ParseError("bad digit token '" + std::string(tok) + "' in word");
        v.push_back(std::stoi(std::string(tok)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
    }
    try {
      return Word(a, std::move(v));
    } catch (const OutOfAlphabet& e) {
      throw ParseError(e.what());
    }
  }

  Alphabet alphabet() const noexcept { return alphabet_; }
  const std::vector<Digit>& digits() const noexcept { return digits_; }
  std::size_t size() const noexcept { return digits_.size(); }
  bool empty() const noexcept { return digits_.empty(); }
  Digit operator[](std::size_t i) const { return digits_[i]; }
  Digit back() const { return digits_.back(); }
  auto begin() const { return digits_.begin(); }
  auto end() const { return digits_.end(); }

  Word prefix(std::size_t n) const { return slice(0, std::min(n, size())); }
  Word slice(std::size_t from, std::size_t to) const {
    return Word(alphabet_, std::vector<Digit>(digits_.begin() + static_cast<std::ptrdiff_t>(from),
                                              digits_.begin() + static_cast<std::ptrdiff_t>(to)));
  }

  void push_back(Digit d) {
    if (!alphabet_.contains(d)) throw OutOfAlphabet("digit " + std::to_string(d) + " outside alphabet");
    digits_.push_back(d);
  }

  Word repeated(std::size_t times) const {
    Word w(alphabet_);
    w.digits_.reserve(size() * times);
    for (std::size_t i = 0; i < times; ++i) w.digits_.insert(w.digits_.end(), digits_.begin(), digits_.end());
    return w;
  }

  friend Word operator+(const Word& a, const Word& b) {
    if (a.alphabet_ != b.alphabet_) throw DomainError("concatenating words over different alphabets");
    Word w = a;
    w.digits_.insert(w.digits_.end(), b.digits_.begin(), b.digits_.end());
    return w;
  }

  // d -> M - d digit-wise.
  Word reflect() const {
    Word w = *this;
    for (auto& d : w.digits_) d = alphabet_.M() - d;
    return w;
  }

  // Last digit incremented; requires last digit < M.
  Word plus() const {
    if (empty() || back() >= alphabet_.M()) throw OutOfAlphabet("word_plus needs a last digit below M");
    Word w = *this;
    ++w.digits_.back();
    return w;
  }

  // Last digit decremented; requires last digit > 0.
  Word minus() const {
    if (empty() || back() <= 0) throw OutOfAlphabet("word_minus needs a positive last digit");
    Word w = *this;
    --w.digits_.back();
    return w;
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < digits_.size(); ++i) {
      if (alphabet_.M() > 9) {
        if (i) s += ',';
        s += std::to_string(digits_[i]);
      } else {
        s += static_cast<char>('0' + digits_[i]);
      }
    }
    return s;
  }

  friend bool operator==(const Word& a, const Word& b) {
    return a.alphabet_ == b.alphabet_ && a.digits_ == b.digits_;
  }
  // Plain lexicographic order; on equal lengths this is the order of w0^inf.
  friend std::strong_ordering operator<=>(const Word& a, const Word& b) { return a.digits_ <=> b.digits_; }

  friend std::ostream& operator<<(std::ostream& os, const Word& w) { return os << w.to_string(); }

 private:
  Alphabet alphabet_;
  std::vector<Digit> digits_;
};

// Order of w0^inf against v0^inf, i.e. words compared after zero padding.
inline std::strong_ordering compare_padded(const Word& a, const Word& b) {
  const std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    Digit x = i < a.size() ? a[i] : 0;
    Digit y = i < b.size() ? b[i] : 0;
    if (x != y) return x <=> y;
  }
  return std::strong_ordering::equal;
}

// Eventually periodic sequence preperiod . period^inf, kept in canonical form:
// primitive period and minimal preperiod. Structural equality is sequence equality.
class EPSeq {
 public:
  EPSeq(Word preperiod, Word period) : pre_(std::move(preperiod)), per_(std::move(period)) {
    if (per_.empty()) throw DomainError("EPSeq needs a nonempty period");
    if (pre_.alphabet() != per_.alphabet()) throw DomainError("EPSeq parts over different alphabets");
    canonicalize();
  }

  static EPSeq periodic(Word period) {
    Alphabet a = period.alphabet();
    return EPSeq(Word(a), std::move(period));
  }

  // "pre:<word>,per:<word>".
  static EPSeq parse(std::string_view text, Alphabet a) {
    constexpr std::string_view kPre = "pre:";
    if (text.substr(0, kPre.size()) != kPre) throw ParseError("EPSeq must start with 'pre:'");
    auto sep = text.find("per:", kPre.size());
    if (sep == std::string_view::npos) throw ParseError("EPSeq needs ',per:<word>'");
    std::string_view pre = text.substr(kPre.size(), sep - kPre.size());
    if (pre.empty() || pre.back() != ',') throw ParseError("EPSeq needs ',' before 'per:'");
    pre.remove_suffix(1);
    Word period = Word::parse(text.substr(sep + 4), a);
    if (period.empty()) throw ParseError("EPSeq period is empty");
    return EPSeq(Word::parse(pre, a), std::move(period));
  }

  Alphabet alphabet() const noexcept { return per_.alphabet(); }
  const Word& preperiod() const noexcept { return pre_; }
  const Word& period() const noexcept { return per_; }
  bool purely_periodic() const noexcept { return pre_.empty(); }
  // Number of distinct shifts shift^0 ... shift^(k-1); shift^k cycles back.
  std::size_t distinct_shifts() const noexcept { return pre_.size() + per_.size(); }
  bool ends_with_zeros() const { return per_.size() == 1 && per_[0] == 0; }

  // Zero-based digit access.
  Digit at(std::size_t i) const {
    if (i < pre_.size()) return pre_[i];
    return per_[(i - pre_.size()) % per_.size()];
  }

  Word prefix(std::size_t n) const {
    std::vector<Digit> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = at(i);
    return Word(alphabet(), std::move(v));
  }

  EPSeq shift(std::size_t k) const {
    if (k <= pre_.size()) return EPSeq(pre_.slice(k, pre_.size()), per_);
    std::size_t r = (k - pre_.size()) % per_.size();
    return EPSeq(Word(alphabet()), per_.slice(r, per_.size()) + per_.slice(0, r));
  }

  EPSeq reflect() const { return EPSeq(pre_.reflect(), per_.reflect()); }

  std::string to_string() const { return "pre:" + pre_.to_string() + ",per:" + per_.to_string(); }

  friend bool operator==(const EPSeq& a, const EPSeq& b) { return a.pre_ == b.pre_ && a.per_ == b.per_; }

  // Exact lexicographic order. Two eventually periodic sequences agreeing on
  // max(|pre|) + lcm(|per|) digits agree everywhere.
  friend std::strong_ordering operator<=>(const EPSeq& a, const EPSeq& b) {
    const std::size_t P = std::max(a.pre_.size(), b.pre_.size()) + std::lcm(a.per_.size(), b.per_.size());
    for (std::size_t i = 0; i < P; ++i) {
      Digit x = a.at(i), y = b.at(i);
      if (x != y) return x <=> y;
    }
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const EPSeq& s) { return os << s.to_string(); }

 private:
  void canonicalize() {
    // Primitive period via the prefix function.
    const auto& p = per_.digits();
    const std::size_t n = p.size();
    std::vector<std::size_t> fail(n, 0);
    for (std::size_t i = 1; i < n; ++i) {
      std::size_t k = fail[i - 1];
      while (k > 0 && p[i] != p[k]) k = fail[k - 1];
      if (p[i] == p[k]) ++k;
      fail[i] = k;
    }
    const std::size_t root = n - fail[n - 1];
    if (root < n && n % root == 0) per_ = per_.prefix(root);
    // Absorb preperiod digits that continue the period backwards.
    while (!pre_.empty() && pre_.back() == per_.back()) {
      pre_ = pre_.prefix(pre_.size() - 1);
      per_ = per_.slice(per_.size() - 1, per_.size()) + per_.slice(0, per_.size() - 1);
    }
  }

  Word pre_;
  Word per_;
};

inline std::strong_ordering compare_lex(const EPSeq& a, const EPSeq& b) { return a <=> b; }

// Same digits read over another alphabet; OutOfAlphabet if a digit does not fit.
inline Word with_alphabet(const Word& w, Alphabet a) { return Word(a, w.digits()); }
inline EPSeq with_alphabet(const EPSeq& s, Alphabet a) {
  return EPSeq(with_alphabet(s.preperiod(), a), with_alphabet(s.period(), a));
}

inline Digit max_digit(const EPSeq& s) {
  Digit m = *std::max_element(s.period().begin(), s.period().end());
  for (Digit d : s.preperiod()) m = std::max(m, d);
  return m;
}

// Membership in the set of sequences a with reflect(a) <= shift^n(a) <= a for all n >= 0.
inline bool is_reflection_bounded(const EPSeq& s) {
  const EPSeq r = s.reflect();
  for (std::size_t n = 0; n < s.distinct_shifts(); ++n) {
    const EPSeq t = s.shift(n);
    if (t > s || t < r) return false;
  }
  return true;
}

// Deterministic, memoised infinite digit stream. Copies share the memo.
class StreamSeq {
 public:
  enum class Kind { ThueMorse, Lambda };

  // (tau_i), i >= 0, over {0,1}.
  static StreamSeq thue_morse() { return StreamSeq(Kind::ThueMorse, Alphabet(1)); }
  // (lambda_i), i >= 1: the quasi-greedy expansion at the Komornik-Loreti constant.
  static StreamSeq lambda(Alphabet a) { return StreamSeq(Kind::Lambda, a); }

  Kind kind() const noexcept { return kind_; }
  Alphabet alphabet() const noexcept { return alphabet_; }

  // Zero-based: for Lambda, at(0) is lambda_1.
  Digit at(std::size_t i) const {
    std::lock_guard<std::mutex> lock(memo_->mutex);
    grow(i + 1);
    return memo_->digits[i];
  }

  Word prefix(std::size_t n) const {
    std::lock_guard<std::mutex> lock(memo_->mutex);
    grow(n);
    return Word(alphabet_, std::vector<Digit>(memo_->digits.begin(), memo_->digits.begin() + static_cast<std::ptrdiff_t>(n)));
  }

 private:
  struct Memo {
    std::mutex mutex;
    std::vector<Digit> digits;
    std::vector<Digit> tau;  // Thue-Morse bits backing Lambda
  };

  StreamSeq(Kind k, Alphabet a) : kind_(k), alphabet_(a), memo_(std::make_shared<Memo>()) {}

  // Extend tau by block doubling until it holds at least n bits.
  static void grow_thue_morse(std::vector<Digit>& tau, std::size_t n) {
    if (tau.empty()) tau.push_back(0);
    while (tau.size() < n) {
      const std::size_t len = tau.size();
      tau.reserve(2 * len);
      for (std::size_t i = 0; i < len; ++i) tau.push_back(1 - tau[i]);
    }
  }

  void grow(std::size_t n) const {
    auto& out = memo_->digits;
    if (out.size() >= n) return;
    if (kind_ == Kind::ThueMorse) {
      grow_thue_morse(out, n);
      return;
    }
    grow_thue_morse(memo_->tau, n + 1);
    const auto& tau = memo_->tau;
    const int M = alphabet_.M();
    const int k = M / 2;
    for (std::size_t i = out.size() + 1; i <= n; ++i)
      out.push_back(M % 2 == 0 ? k + tau[i] - tau[i - 1] : k + tau[i]);
  }

  Kind kind_;
  Alphabet alphabet_;
  std::shared_ptr<Memo> memo_;
};

inline Word thue_morse_prefix(std::size_t n) { return StreamSeq::thue_morse().prefix(n); }

inline const StreamSeq& lambda_stream(Alphabet a) {
  static std::mutex mutex;
  static std::vector<std::unique_ptr<StreamSeq>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  const auto idx = static_cast<std::size_t>(a.M());
  if (cache.size() <= idx) cache.resize(idx + 1);
  if (!cache[idx]) cache[idx] = std::make_unique<StreamSeq>(StreamSeq::lambda(a));
  return *cache[idx];
}

inline Word lambda_prefix(Alphabet a, std::size_t n) { return lambda_stream(a).prefix(n); }

// xi(n) = w (plus(reflect(w)))^inf with w = lambda_1..lambda_{2^(n-1)} (M even)
// or lambda_1..lambda_{2^n} (M odd). xi(1) is the quasi-greedy expansion at q_T.
inline EPSeq xi(Alphabet a, unsigned n) {
  if (n < 1) throw DomainError("xi(n) needs n >= 1");
  if (n > 40) throw DomainError("xi(n) block length too large");
  const std::size_t len = std::size_t{1} << (a.M() % 2 == 0 ? n - 1 : n);
  Word w = lambda_prefix(a, len);
  return EPSeq(w, w.reflect().plus());
}

// Compare an eventually periodic sequence with a stream that is not eventually
// periodic (Thue-Morse, lambda), so the two always differ somewhere.
inline std::strong_ordering compare_lex(const EPSeq& s, const StreamSeq& t, std::size_t max_scan = 1u << 20) {
  for (std::size_t i = 0; i < max_scan; ++i) {
    Digit x = s.at(i), y = t.at(i);
    if (x != y) return x <=> y;
  }
  throw PrecisionExhausted("sequence agrees with stream on " + std::to_string(max_scan) + " digits");
}

}  // namespace univoque
