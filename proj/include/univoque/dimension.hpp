#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <vector>

#include "univoque/base.hpp"
#include "univoque/bifurcation.hpp"
#include "univoque/expansion.hpp"
#include "univoque/subshift.hpp"

namespace univoque {

// Window length used when none is given: keeps (M+1)^(N-1) at desk scale.
inline std::size_t default_window(int M) {
  if (M == 1) return 12;
  if (M <= 3) return 8;
  return 6;
}

// Generator period of the plateau endpoints added to staircase grids.
inline std::size_t default_grid_period(int M) {
  if (M == 1) return 8;
  if (M <= 3) return 5;
  return 3;
}

namespace detail {

inline EntropyBounds entropy_or_zero(const Word& prefix, bool strict, std::size_t N) {
  try {
    EntropyBounds e = entropy(build_window_sft(prefix, strict));
    e.N = N;
    return e;
  } catch (const EmptySubshift&) {
    EntropyBounds e;
    e.N = N;
    return e;
  }
}

}  // namespace detail

// H(q) = h_top(V_q) between the strict and non-strict window SFTs on the first N
// digits of alpha(q). A purely periodic alpha with period m <= N gives the exact
// value from the non-strict SFT at window m.
inline EntropyBounds entropy_H(const BaseEnclosure& q, Alphabet a, std::size_t N) {
  if (N == 0) throw DomainError("window length must be positive");
  detail::require_base_in_range(q, a.M());
  const std::optional<EPSeq> known = known_alpha(q, a);
  if (known && known->purely_periodic() && known->period().size() <= N) {
    const std::size_t m = known->period().size();
    return detail::entropy_or_zero(known->period(), false, m);
  }
  const Word u = known ? known->prefix(N) : quasi_greedy_alpha(q, a, N);
  const EntropyBounds lo = detail::entropy_or_zero(u, true, N);
  const EntropyBounds hi = detail::entropy_or_zero(u, false, N);
  EntropyBounds e;
  e.N = N;
  e.lower = std::min(lo.lower, hi.upper);
  e.upper = hi.upper;
  e.iterations = lo.iterations + hi.iterations;
  return e;
}

struct DimBounds {
  double lower = 0;
  double upper = 0;
  std::size_t N = 0;
  EntropyBounds entropy;

  bool contains(double x) const noexcept { return lower <= x && x <= upper; }
};

inline DimBounds dim_from_entropy(const EntropyBounds& h, const BaseEnclosure& q) {
  DimBounds d;
  d.N = h.N;
  d.entropy = h;
  d.lower = std::clamp(next_down(h.lower / q.log_upper()), 0.0, 1.0);
  d.upper = std::clamp(next_up(h.upper / q.log_lower()), 0.0, 1.0);
  return d;
}

// dim_H U_q = H(q) / log q.
inline DimBounds dim_univoque(const BaseEnclosure& q, Alphabet a, std::size_t N) {
  return dim_from_entropy(entropy_H(q, a, N), q);
}

struct StaircaseRow {
  Rational t;
  double phi_lo = 0;
  double phi_hi = 0;
};

struct StaircaseTable {
  int M = 1;
  std::size_t N = 0;
  std::size_t samples = 0;
  Interval q_kl;
  std::size_t grid_points = 0;
  std::vector<StaircaseRow> rows;
};

struct StaircaseOptions {
  std::size_t initial_points = 256;
  std::size_t refinement_rounds = 2;
  // Generator period of plateau left endpoints added to the grid; 0 picks a default.
  std::size_t plateau_period = 0;
};

namespace detail {

struct GridPoint {
  BaseEnclosure q;
  EntropyBounds h;
  DimBounds d;
};

// Evaluates phi(t) = max over q <= t of dim U_q at every row t. One grid is
// shared by all rows:
//   lower(t) = max of certified dimension lower bounds at grid points <= t,
//   upper(t) = max over cells [g_i, g_{i+1}] covering (q_KL, t] of
//              H_up(g_{i+1}) / log(g_i), valid because H is nondecreasing.
// Rows at or below q_KL are exactly 0.
class StaircaseEngine {
 public:
  StaircaseEngine(Alphabet a, std::size_t N, const StaircaseOptions& opt) : a_(a), N_(N), opt_(opt) {
    if (opt_.plateau_period == 0) opt_.plateau_period = default_grid_period(a.M());
    kl_ = q_kl(a);
  }

  const BaseEnclosure& kl() const noexcept { return kl_; }
  std::size_t grid_size() const noexcept { return grid_.size(); }

  // phi enclosures at each row value, in the given order.
  std::vector<std::pair<double, double>> run(const std::vector<Rational>& rows) {
    const Rational top(a_.M() + 1);
    const Rational start = kl_.lo();
    Rational T = start;
    for (const Rational& t : rows) T = std::max(T, std::min(t, top));
    std::vector<std::pair<double, double>> out(rows.size(), {0.0, 0.0});
    if (T <= start) return out;

    std::vector<BaseEnclosure> pts;
    pts.emplace_back(start);
    const std::size_t K = std::max<std::size_t>(opt_.initial_points, 1);
    for (std::size_t i = 1; i <= K; ++i) pts.emplace_back(start + (T - start) * ratio(static_cast<long>(i), static_cast<long>(K)));
    for (const Rational& t : rows)
      if (t > start) pts.emplace_back(std::min(t, top));
    for (const Plateau& p : enumerate_plateaus(a_, start, T, opt_.plateau_period)) pts.push_back(p.p_L);
    insert(pts);

    for (std::size_t round = 0; round < opt_.refinement_rounds; ++round) {
      std::vector<BaseEnclosure> extra;
      for (std::size_t i : record_points(rows)) trisect_around(i, extra);
      if (extra.empty()) break;
      insert(extra);
    }

    for (std::size_t r = 0; r < rows.size(); ++r) {
      const Rational t = std::min(rows[r], top);
      if (t <= start || compare_bases(BaseEnclosure(t), kl_) <= 0) continue;
      out[r] = phi_at(t);
    }
    return out;
  }

 private:
  // Adds evaluated points, keeping the grid sorted and free of duplicates.
  void insert(const std::vector<BaseEnclosure>& pts) {
    for (const BaseEnclosure& q : pts) {
      auto it = std::lower_bound(grid_.begin(), grid_.end(), q,
                                 [](const GridPoint& g, const BaseEnclosure& x) { return compare_bases(g.q, x) < 0; });
      if (it != grid_.end() && compare_bases(it->q, q) == 0) continue;
      const EntropyBounds h = entropy_H(q, a_, N_);
      grid_.insert(it, GridPoint{q, h, dim_from_entropy(h, q)});
    }
  }

  // Index of the last grid point that is <= t.
  std::size_t last_at_or_below(const Rational& t) const {
    std::size_t k = 0;
    while (k + 1 < grid_.size() && grid_[k + 1].q.compare(t) <= 0) ++k;
    return k;
  }

  double cell_bound(std::size_t i) const {
    const double log_lo = grid_[i].q.log_lower();
    if (!(log_lo > 0)) return 1.0;
    return std::min(1.0, next_up(grid_[i + 1].h.upper / log_lo));
  }

  std::pair<double, double> phi_at(const Rational& t) const {
    const std::size_t k = last_at_or_below(t);
    double lo = 0, hi = 0;
    for (std::size_t i = 0; i <= k; ++i) lo = std::max(lo, grid_[i].d.lower);
    // t is itself a grid point, so cells 0..k-1 cover (q_KL, t].
    for (std::size_t i = 0; i < k; ++i) hi = std::max(hi, cell_bound(i));
    return {lo, std::max(lo, hi)};
  }

  // Grid indices where a row's running maximum (lower bound or cell bound) is attained.
  std::set<std::size_t> record_points(const std::vector<Rational>& rows) const {
    std::set<std::size_t> out;
    const Rational top(a_.M() + 1);
    for (const Rational& row : rows) {
      const Rational t = std::min(row, top);
      if (t <= kl_.lo()) continue;
      const std::size_t k = last_at_or_below(t);
      std::size_t best_lo = 0, best_cell = 0;
      for (std::size_t i = 0; i <= k; ++i)
        if (grid_[i].d.lower > grid_[best_lo].d.lower) best_lo = i;
      for (std::size_t i = 0; i < k; ++i)
        if (cell_bound(i) > cell_bound(best_cell)) best_cell = i;
      out.insert(best_lo);
      if (k > 0) out.insert(best_cell + 1);
    }
    return out;
  }

  // Points at thirds of the cells on either side of grid point i.
  void trisect_around(std::size_t i, std::vector<BaseEnclosure>& extra) const {
    auto third = [&](std::size_t l, std::size_t r) {
      const Rational a = grid_[l].q.hi(), b = grid_[r].q.lo();
      if (b <= a) return;
      extra.emplace_back(a + (b - a) / 3);
      extra.emplace_back(a + 2 * (b - a) / 3);
    };
    if (i > 0) third(i - 1, i);
    if (i + 1 < grid_.size()) third(i, i + 1);
  }

  Alphabet a_;
  std::size_t N_;
  StaircaseOptions opt_;
  BaseEnclosure kl_{Rational(2)};
  std::vector<GridPoint> grid_;
};

}  // namespace detail

// phi(t) = dim_H(U cap (1, t]) = max over q <= t of dim_H U_q.
inline DimBounds phi(const BaseEnclosure& t, Alphabet a, std::size_t N, const StaircaseOptions& opt = {}) {
  DimBounds d;
  d.N = N;
  detail::StaircaseEngine engine(a, N, opt);
  if (compare_bases(t, engine.kl()) <= 0) return d;
  const auto r = engine.run({t.lo(), t.hi()});
  d.lower = r[0].first;
  d.upper = r[1].second;
  return d;
}

// phi enclosures on the even grid t_min + i (t_max - t_min)/(samples - 1).
inline StaircaseTable staircase(Alphabet a, const Rational& t_min, const Rational& t_max, std::size_t samples,
                                std::size_t N, const StaircaseOptions& opt = {}) {
  if (!(t_min > 1) || !(t_min < t_max)) throw DomainError("staircase needs 1 < t_min < t_max");
  if (samples < 2) throw DomainError("staircase needs at least 2 samples");
  StaircaseTable table;
  table.M = a.M();
  table.N = N;
  table.samples = samples;
  std::vector<Rational> ts;
  for (std::size_t i = 0; i < samples; ++i)
    ts.push_back(t_min + (t_max - t_min) * ratio(static_cast<long>(i), static_cast<long>(samples - 1)));
  detail::StaircaseEngine engine(a, N, opt);
  table.q_kl = engine.kl().interval();
  const auto r = engine.run(ts);
  table.grid_points = engine.grid_size();
  for (std::size_t i = 0; i < samples; ++i) table.rows.push_back({ts[i], r[i].first, r[i].second});
  return table;
}

}  // namespace univoque
