#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "univoque/digits.hpp"
#include "univoque/errors.hpp"
#include "univoque/rational.hpp"

namespace univoque {

inline constexpr std::uint64_t kDefaultStateCap = 2'000'000;

// Upper limit on (M+1)^(N-1); UNIVOQUE_STATE_CAP overrides the default.
inline std::uint64_t state_cap() {
  if (const char* env = std::getenv("UNIVOQUE_STATE_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return kDefaultStateCap;
}

// Certified enclosure of a topological entropy, in nats.
struct EntropyBounds {
  double lower = 0;
  double upper = 0;
  std::size_t N = 0;
  std::size_t iterations = 0;

  double width() const noexcept { return upper - lower; }
  bool contains(double x) const noexcept { return lower <= x && x <= upper; }
  bool intersects(const EntropyBounds& o) const noexcept { return lower <= o.upper && o.lower <= upper; }
};

namespace detail {

// Compressed adjacency with one digit label per edge.
struct LabeledGraph {
  std::vector<std::uint32_t> offsets{0};
  std::vector<std::uint32_t> targets;
  std::vector<std::uint8_t> labels;

  std::size_t size() const noexcept { return offsets.size() - 1; }
};

// Tarjan, iterative. Returns component id per vertex; ids are in reverse
// topological order of the condensation.
inline std::vector<int> strongly_connected(const std::vector<std::vector<std::pair<int, int>>>& adj, int& count) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1), stack;
  std::vector<char> on_stack(n, 0);
  std::vector<std::pair<int, std::size_t>> call;
  int next = 0;
  count = 0;
  for (int root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    call.emplace_back(root, 0);
    while (!call.empty()) {
      auto& [v, i] = call.back();
      if (i == 0 && index[v] < 0) {
        index[v] = low[v] = next++;
        stack.push_back(v);
        on_stack[v] = 1;
      }
      if (i < adj[v].size()) {
        const int w = adj[v][i++].first;
        if (index[w] < 0) {
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = count;
        } while (w != v);
        ++count;
      }
      const int done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }
  return comp;
}

// log of a positive integer, outward rounded by a few ulps.
inline std::pair<double, double> log_bounds(const Integer& x) {
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
  const double v = std::log(mant) + static_cast<double>(exp) * std::log(2.0);
  const double slack = 8 * std::numeric_limits<double>::epsilon() * (std::abs(v) + 1);
  return {v - slack, v + slack};
}

// Perron root of a strongly connected nonnegative integer matrix, enclosed by
// Collatz-Wielandt quotients of B = A + I under power iteration. Returns
// bounds on rho(A) and the iteration count.
struct PerronResult {
  double lo, hi;
  std::size_t iterations;
};

inline PerronResult perron_root(const std::vector<std::vector<std::pair<int, int>>>& adj, double tolerance,
                                std::size_t max_iterations) {
  const std::size_t n = adj.size();
  const double u = std::numeric_limits<double>::epsilon();
  std::vector<double> v(n, 1.0), w(n);
  double best_lo = 0, best_hi = std::numeric_limits<double>::infinity();
  std::size_t it = 0;
  for (; it < max_iterations; ++it) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = v[i];
      std::size_t terms = 1;
      for (auto [j, m] : adj[i]) {
        s += m * v[static_cast<std::size_t>(j)];
        ++terms;
      }
      w[i] = s;
      // Relative error of the positive sum and the division.
      const double rel = static_cast<double>(terms + 2) * u;
      const double ratio = s / v[i];
      lo = std::min(lo, ratio * (1 - rel));
      hi = std::max(hi, ratio * (1 + rel));
    }
    best_lo = std::max(best_lo, lo);
    best_hi = std::min(best_hi, hi);
    if (best_hi - best_lo <= tolerance * best_hi) break;
    const double top = *std::max_element(w.begin(), w.end());
    bool degenerate = false;
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = w[i] / top;
      if (!(v[i] > 0)) degenerate = true;
    }
    if (degenerate) break;
  }
  // rho(A) = rho(B) - 1.
  return {std::max(0.0, next_down(best_lo - 1)), next_up(best_hi - 1), it + 1};
}

}  // namespace detail

// Subshift of finite type given by allowed windows of length N, held as an
// essential de Bruijn graph: states are (N-1)-words, edges are allowed N-words.
class WindowSFT {
 public:
  using WindowPredicate = std::function<bool(const std::vector<Digit>&)>;

  // Windows w with lower < w < upper (strict) or lower <= w <= upper.
  static WindowSFT from_bounds(const Word& lower, const Word& upper, bool strict) {
    if (lower.size() != upper.size() || upper.empty()) throw DomainError("window bounds need equal positive length");
    WindowSFT s(upper.alphabet(), upper.size());
    s.lower_ = lower;
    s.upper_ = upper;
    s.strict_ = strict;
    const std::uint64_t lo = s.encode(lower.digits()), hi = s.encode(upper.digits());
    s.build([&](std::uint64_t code) { return strict ? (lo < code && code < hi) : (lo <= code && code <= hi); });
    return s;
  }

  // Arbitrary allowed-window set.
  static WindowSFT from_predicate(Alphabet a, std::size_t N, const WindowPredicate& allowed) {
    if (N == 0) throw DomainError("window length must be positive");
    WindowSFT s(a, N);
    std::vector<Digit> buf(N);
    s.build([&](std::uint64_t code) {
      s.decode(code, N, buf);
      return allowed(buf);
    });
    return s;
  }

  Alphabet alphabet() const noexcept { return alphabet_; }
  std::size_t window() const noexcept { return N_; }
  bool strict() const noexcept { return strict_; }
  const std::optional<Word>& lower() const noexcept { return lower_; }
  const std::optional<Word>& upper() const noexcept { return upper_; }

  std::size_t state_count() const noexcept { return graph_.size(); }
  std::size_t edge_count() const noexcept { return graph_.targets.size(); }
  // The (N-1)-word of an essential state.
  Word state_word(std::size_t i) const {
    std::vector<Digit> d(N_ - 1);
    decode(codes_[i], N_ - 1, d);
    return Word(alphabet_, std::move(d));
  }
  const detail::LabeledGraph& graph() const noexcept { return graph_; }

  // Essential state whose word is w, if any.
  std::optional<std::size_t> find_state(const std::vector<Digit>& w) const {
    const std::uint64_t code = encode(w);
    auto it = std::lower_bound(codes_.begin(), codes_.end(), code);
    if (it == codes_.end() || *it != code) return std::nullopt;
    return static_cast<std::size_t>(it - codes_.begin());
  }

  // States that follow the word w, i.e. where sequences beginning with w sit after
  // reading it (|w| >= N-1), or that begin with w (|w| < N-1).
  std::vector<std::size_t> follower_states(const Word& w) const {
    std::vector<std::size_t> out;
    const std::size_t k = N_ - 1;
    if (w.size() < k) {
      for (std::size_t i = 0; i < codes_.size(); ++i) {
        std::vector<Digit> d(k);
        decode(codes_[i], k, d);
        if (std::equal(w.begin(), w.end(), d.begin())) out.push_back(i);
      }
      return out;
    }
    auto start = find_state(std::vector<Digit>(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k)));
    if (!start) return out;
    std::size_t s = *start;
    for (std::size_t i = k; i < w.size(); ++i) {
      bool moved = false;
      for (std::uint32_t e = graph_.offsets[s]; e < graph_.offsets[s + 1]; ++e) {
        if (graph_.labels[e] == w[i]) {
          s = graph_.targets[e];
          moved = true;
          break;
        }
      }
      if (!moved) return out;
    }
    out.push_back(s);
    return out;
  }

  // Merge states with equal follower languages (Moore refinement on the
  // deterministic labelled graph). Path counts from a state are preserved.
  struct Quotient {
    std::vector<int> class_of;
    std::vector<std::vector<std::pair<int, int>>> adj;  // (target, multiplicity)
  };

  const Quotient& quotient() const {
    std::call_once(cache_->once, [this] { cache_->quotient = build_quotient(); });
    return cache_->quotient;
  }

 private:
  WindowSFT(Alphabet a, std::size_t N) : alphabet_(a), N_(N), cache_(std::make_shared<Cache>()) {}

  struct Cache {
    std::once_flag once;
    Quotient quotient;
  };

  std::uint64_t encode(const std::vector<Digit>& d) const {
    std::uint64_t c = 0;
    for (Digit x : d) c = c * static_cast<std::uint64_t>(alphabet_.size()) + static_cast<std::uint64_t>(x);
    return c;
  }
  void decode(std::uint64_t code, std::size_t len, std::vector<Digit>& out) const {
    out.resize(len);
    const auto base = static_cast<std::uint64_t>(alphabet_.size());
    for (std::size_t i = len; i-- > 0;) {
      out[i] = static_cast<Digit>(code % base);
      code /= base;
    }
  }

  template <class Allowed>
  void build(Allowed allowed) {
    const auto base = static_cast<std::uint64_t>(alphabet_.size());
    const std::uint64_t cap = state_cap();
    std::uint64_t S = 1;
    for (std::size_t i = 0; i + 1 < N_; ++i) {
      if (S > cap / base) throw StateSpaceTooLarge("window SFT needs more than " + std::to_string(cap) + " states");
      S *= base;
    }
    if (S > cap) throw StateSpaceTooLarge("window SFT needs more than " + std::to_string(cap) + " states");
    const std::uint64_t W = S * base;
    std::vector<std::uint8_t> ok(W);
    for (std::uint64_t c = 0; c < W; ++c) ok[c] = allowed(c) ? 1 : 0;
    const std::uint64_t high = S / base;  // weight of the first state digit (N >= 2)
    auto target = [&](std::uint64_t window_code) { return N_ == 1 ? 0 : window_code % S; };

    std::vector<std::uint32_t> indeg(S, 0), outdeg(S, 0);
    for (std::uint64_t c = 0; c < W; ++c)
      if (ok[c]) {
        ++outdeg[c / base];
        ++indeg[target(c)];
      }
    std::vector<std::uint8_t> alive(S, 1);
    std::vector<std::uint64_t> queue;
    for (std::uint64_t s = 0; s < S; ++s)
      if (indeg[s] == 0 || outdeg[s] == 0) {
        alive[s] = 0;
        queue.push_back(s);
      }
    auto drop_edge = [&](std::uint64_t c) {
      ok[c] = 0;
      const std::uint64_t from = c / base, to = target(c);
      for (std::uint64_t x : {from, to}) {
        const bool was_alive = alive[x];
        if (x == from) --outdeg[x];
        if (x == to) --indeg[x];
        if (was_alive && (indeg[x] == 0 || outdeg[x] == 0)) {
          alive[x] = 0;
          queue.push_back(x);
        }
        if (from == to) break;
      }
    };
    while (!queue.empty()) {
      const std::uint64_t s = queue.back();
      queue.pop_back();
      for (std::uint64_t d = 0; d < base; ++d)
        if (ok[s * base + d]) drop_edge(s * base + d);
      if (N_ == 1) continue;
      const std::uint64_t tail = s / base;
      const std::uint64_t last = s % base;
      for (std::uint64_t c = 0; c < base; ++c) {
        const std::uint64_t pred = c * high + tail;
        if (ok[pred * base + last]) drop_edge(pred * base + last);
      }
    }
    std::vector<std::uint32_t> index(S, 0);
    for (std::uint64_t s = 0; s < S; ++s)
      if (alive[s]) {
        index[s] = static_cast<std::uint32_t>(codes_.size());
        codes_.push_back(s);
      }
    if (codes_.empty()) throw EmptySubshift("no bi-infinite path through the allowed windows");
    for (std::uint64_t s : codes_) {
      for (std::uint64_t d = 0; d < base; ++d) {
        const std::uint64_t c = s * base + d;
        if (!ok[c]) continue;
        graph_.targets.push_back(index[target(c)]);
        graph_.labels.push_back(static_cast<std::uint8_t>(d));
      }
      graph_.offsets.push_back(static_cast<std::uint32_t>(graph_.targets.size()));
    }
  }

  Quotient build_quotient() const {
    const std::size_t n = graph_.size();
    const std::size_t base = static_cast<std::size_t>(alphabet_.size());
    std::vector<int> cls(n, 0);
    int classes = 1;
    std::vector<int> sig((base + 1) * n);
    std::vector<std::size_t> order(n);
    while (true) {
      for (std::size_t s = 0; s < n; ++s) {
        int* row = &sig[s * (base + 1)];
        row[0] = cls[s];
        std::fill(row + 1, row + base + 1, -1);
        for (std::uint32_t e = graph_.offsets[s]; e < graph_.offsets[s + 1]; ++e)
          row[1 + graph_.labels[e]] = cls[graph_.targets[e]];
      }
      std::iota(order.begin(), order.end(), 0);
      auto less = [&](std::size_t a, std::size_t b) {
        return std::lexicographical_compare(&sig[a * (base + 1)], &sig[(a + 1) * (base + 1)], &sig[b * (base + 1)],
                                            &sig[(b + 1) * (base + 1)]);
      };
      std::sort(order.begin(), order.end(), less);
      std::vector<int> next(n);
      int count = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && less(order[i - 1], order[i])) ++count;
        next[order[i]] = count;
      }
      ++count;
      cls.swap(next);
      if (count == classes) break;
      classes = count;
    }
    Quotient q;
    q.class_of = cls;
    q.adj.assign(static_cast<std::size_t>(classes), {});
    std::vector<char> seen(static_cast<std::size_t>(classes), 0);
    for (std::size_t s = 0; s < n; ++s) {
      const auto c = static_cast<std::size_t>(cls[s]);
      if (seen[c]) continue;
      seen[c] = 1;
      std::vector<std::pair<int, int>> row;
      for (std::uint32_t e = graph_.offsets[s]; e < graph_.offsets[s + 1]; ++e) {
        const int t = cls[graph_.targets[e]];
        auto it = std::find_if(row.begin(), row.end(), [t](const auto& p) { return p.first == t; });
        if (it == row.end())
          row.emplace_back(t, 1);
        else
          ++it->second;
      }
      std::sort(row.begin(), row.end());
      q.adj[c] = std::move(row);
    }
    return q;
  }

  Alphabet alphabet_;
  std::size_t N_;
  bool strict_ = false;
  std::optional<Word> lower_, upper_;
  std::vector<std::uint64_t> codes_;
  detail::LabeledGraph graph_;
  std::shared_ptr<Cache> cache_;
};

// Window SFT approximating V_q from the first N digits u of alpha(q): windows
// between reflect(u) and u, strictly or not.
inline WindowSFT build_window_sft(const Word& alpha_prefix, bool strict) {
  if (alpha_prefix.empty()) throw DomainError("alpha prefix must be nonempty");
  return WindowSFT::from_bounds(alpha_prefix.reflect(), alpha_prefix, strict);
}

// Number of words of length n in the language of the essential graph.
inline Integer count_words(const WindowSFT& sft, std::size_t n) {
  if (n == 0) throw DomainError("count_words needs n >= 1");
  const std::size_t k = sft.window() - 1;
  const auto& g = sft.graph();
  if (n < k) {
    std::vector<Word> prefixes;
    for (std::size_t i = 0; i < g.size(); ++i) prefixes.push_back(sft.state_word(i).prefix(n));
    std::sort(prefixes.begin(), prefixes.end());
    return Integer(static_cast<unsigned long>(std::unique(prefixes.begin(), prefixes.end()) - prefixes.begin()));
  }
  std::vector<Integer> c(g.size(), 1), next(g.size());
  for (std::size_t step = 0; step < n - k; ++step) {
    for (std::size_t s = 0; s < g.size(); ++s) {
      Integer t = 0;
      for (std::uint32_t e = g.offsets[s]; e < g.offsets[s + 1]; ++e) t += c[g.targets[e]];
      next[s] = t;
    }
    c.swap(next);
  }
  Integer total = 0;
  for (const auto& x : c) total += x;
  return total;
}

struct EntropyOptions {
  double tolerance = 1e-13;
  std::size_t max_iterations = 200'000;
  // Length of the path-count cross-check on the quotient graph.
  std::size_t count_length = 64;
};

namespace detail {

// Max Perron root over the quotient components selected by keep (all when empty).
inline EntropyBounds quotient_entropy(const WindowSFT& sft, const std::vector<char>& keep, const EntropyOptions& opt) {
  const auto& q = sft.quotient();
  int comps = 0;
  const std::vector<int> comp = strongly_connected(q.adj, comps);
  std::vector<std::vector<int>> members(static_cast<std::size_t>(comps));
  for (std::size_t v = 0; v < q.adj.size(); ++v)
    if (keep.empty() || keep[v]) members[static_cast<std::size_t>(comp[v])].push_back(static_cast<int>(v));
  EntropyBounds out;
  out.N = sft.window();
  double rho_lo = 0, rho_hi = 0;
  bool any = false;
  for (const auto& m : members) {
    if (m.empty()) continue;
    std::vector<int> local(q.adj.size(), -1);
    for (std::size_t i = 0; i < m.size(); ++i) local[static_cast<std::size_t>(m[i])] = static_cast<int>(i);
    std::vector<std::vector<std::pair<int, int>>> sub(m.size());
    bool has_edge = false;
    for (std::size_t i = 0; i < m.size(); ++i)
      for (auto [t, mult] : q.adj[static_cast<std::size_t>(m[i])])
        if (local[static_cast<std::size_t>(t)] >= 0) {
          sub[i].emplace_back(local[static_cast<std::size_t>(t)], mult);
          has_edge = true;
        }
    if (!has_edge) continue;
    const PerronResult r = perron_root(sub, opt.tolerance, opt.max_iterations);
    any = true;
    rho_lo = std::max(rho_lo, r.lo);
    rho_hi = std::max(rho_hi, r.hi);
    out.iterations += r.iterations;
  }
  if (!any) return out;
  const double log_top = next_up(std::log(static_cast<double>(sft.alphabet().size())));
  out.lower = rho_lo > 1 ? std::max(0.0, next_down(next_down(std::log(rho_lo)))) : 0.0;
  out.upper = std::min(log_top, next_up(next_up(std::log(rho_hi))));

  // rho^n <= max row sum of A^n over the kept classes.
  if (q.adj.size() <= 4096 && opt.count_length > 0) {
    std::vector<Integer> c(q.adj.size(), 1), next(q.adj.size());
    for (std::size_t step = 0; step < opt.count_length; ++step) {
      for (std::size_t v = 0; v < q.adj.size(); ++v) {
        Integer t = 0;
        for (auto [w, mult] : q.adj[v]) t += c[static_cast<std::size_t>(w)] * mult;
        next[v] = t;
      }
      c.swap(next);
    }
    Integer best = 0;
    for (std::size_t v = 0; v < q.adj.size(); ++v)
      if ((keep.empty() || keep[v]) && c[v] > best) best = c[v];
    if (best > 0) {
      const double bound = log_bounds(best).second / static_cast<double>(opt.count_length);
      out.upper = std::min(out.upper, next_up(bound));
    }
  }
  out.lower = std::min(out.lower, out.upper);
  return out;
}

}  // namespace detail

inline EntropyBounds entropy(const WindowSFT& sft, const EntropyOptions& opt = {}) {
  return detail::quotient_entropy(sft, {}, opt);
}

// Entropy of the sequences in the SFT that begin with w.
inline EntropyBounds follower_entropy(const WindowSFT& sft, const Word& w, const EntropyOptions& opt = {}) {
  const auto starts = sft.follower_states(w);
  if (starts.empty()) throw WordNotInLanguage("word " + w.to_string() + " is not in the language");
  const auto& q = sft.quotient();
  std::vector<char> keep(q.adj.size(), 0);
  std::vector<int> stack;
  for (std::size_t s : starts) {
    const int c = q.class_of[s];
    if (!keep[static_cast<std::size_t>(c)]) {
      keep[static_cast<std::size_t>(c)] = 1;
      stack.push_back(c);
    }
  }
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (auto [t, m] : q.adj[static_cast<std::size_t>(v)])
      if (!keep[static_cast<std::size_t>(t)]) {
        keep[static_cast<std::size_t>(t)] = 1;
        stack.push_back(t);
      }
  }
  return detail::quotient_entropy(sft, keep, opt);
}

// Strong connectivity of the essential graph.
inline bool is_transitive(const WindowSFT& sft) {
  const auto& g = sft.graph();
  std::vector<std::vector<std::pair<int, int>>> adj(g.size());
  for (std::size_t s = 0; s < g.size(); ++s)
    for (std::uint32_t e = g.offsets[s]; e < g.offsets[s + 1]; ++e) adj[s].emplace_back(static_cast<int>(g.targets[e]), 1);
  int comps = 0;
  detail::strongly_connected(adj, comps);
  return comps == 1;
}

}  // namespace univoque
