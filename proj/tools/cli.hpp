#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "univoque/univoque.hpp"

namespace univoque::cli {

enum Exit : int { kOk = 0, kNegative = 1, kPrecision = 2, kParse = 3, kResource = 4 };

struct RunConfig {
  int M = 1;
  std::string q, x;
  std::size_t digits = 20;
  std::size_t depth = 64;
  std::string width = "1e-12";
  std::size_t window = 0;
  std::size_t max_period = 6;
  std::string tmin, tmax;
  std::size_t samples = 200;
  std::string format = "csv";
  std::string out;
};

using Json = nlohmann::ordered_json;

inline std::string num(double d) { return to_decimal_string(d); }
inline double lo_of(const BaseEnclosure& q) { return to_double_down(q.lo()); }
inline double hi_of(const BaseEnclosure& q) { return to_double_up(q.hi()); }

inline Rational parse_width(const RunConfig& c) {
  const Rational w = parse_rational(c.width);
  if (w <= 0) throw ParseError("--width must be positive");
  return w;
}

// p/q, an integer, or root:<EPSeq> for the base whose quasi-greedy expansion is given.
inline BaseEnclosure parse_base(const std::string& text, const RunConfig& c) {
  if (text.empty()) throw ParseError("--q is required");
  if (text.rfind("root:", 0) == 0) return base_from_alpha(EPSeq::parse(text.substr(5), Alphabet(c.M)), parse_width(c));
  return BaseEnclosure(parse_rational(text, false));
}

inline Json enclosure_json(const BaseEnclosure& q) { return Json::array({lo_of(q), hi_of(q)}); }

inline std::string plateau_row(int M, const Plateau& p) {
  std::ostringstream s;
  s << M << ',' << p.generator.to_string() << ',' << num(lo_of(p.p_L)) << ',' << num(hi_of(p.p_L)) << ','
    << num(lo_of(p.p_hat)) << ',' << num(hi_of(p.p_hat)) << ',' << num(lo_of(p.p_R)) << ',' << num(hi_of(p.p_R))
    << ',' << num(p.entropy.lower) << ',' << num(p.entropy.upper) << ',' << p.kind_string();
  return s.str();
}

inline Json plateau_json(const Plateau& p) {
  return Json{{"generator", p.generator.to_string()}, {"p_L", enclosure_json(p.p_L)},
              {"p_hat", enclosure_json(p.p_hat)},      {"p_R", enclosure_json(p.p_R)},
              {"entropy", {p.entropy.lower, p.entropy.upper}}, {"kind", p.kind_string()}};
}

inline const char* kPlateauHeader = "M,generator,p_L_lo,p_L_hi,p_hat_lo,p_hat_hi,p_R_lo,p_R_hi,entropy_lo,entropy_hi,kind";

struct Result {
  std::string text;
  int code = kOk;
};

inline Result cmd_alpha(const RunConfig& c) {
  const Alphabet a(c.M);
  const BaseEnclosure q = parse_base(c.q, c);
  const Word w = quasi_greedy_alpha(q, a, c.digits);
  if (c.format == "json")
    return {Json{{"M", c.M}, {"q", enclosure_json(q)}, {"alpha", w.to_string()}}.dump(2) + "\n"};
  return {"alpha,q_lo,q_hi\n" + w.to_string() + "," + num(lo_of(q)) + "," + num(hi_of(q)) + "\n"};
}

inline Result cmd_bound(const RunConfig& c, const BaseEnclosure& q) {
  if (c.format == "json") return {Json{{"M", c.M}, {"lo", lo_of(q)}, {"hi", hi_of(q)}}.dump(2) + "\n"};
  return {"lo,hi\n" + num(lo_of(q)) + "," + num(hi_of(q)) + "\n"};
}

inline Result cmd_unique(const RunConfig& c) {
  const Alphabet a(c.M);
  const BaseEnclosure q = parse_base(c.q, c);
  if (c.x.empty()) throw ParseError("--x is required");
  const Rational x = parse_rational(c.x, false);
  const ExpansionVerdict v = is_unique_expansion(x, q, a, c.depth);
  const char* verdict = v.kind == ExpansionVerdict::Kind::NotUnique ? "not-unique"
                        : v.kind == ExpansionVerdict::Kind::Trivial ? "unique-trivial"
                                                                   : "unique-to-depth";
  const int code = v.unique() ? kOk : kNegative;
  std::string witness;
  if (!v.unique()) witness = std::to_string(v.position) + ":" + std::to_string(v.upper) + "/" + std::to_string(v.lower);
  if (c.format == "json")
    return {Json{{"M", c.M}, {"q", enclosure_json(q)}, {"x", to_string(x)}, {"verdict", verdict}, {"depth", v.depth},
                 {"position", v.position}, {"digits", v.unique() ? Json() : Json::array({v.upper, v.lower})}}
                    .dump(2) + "\n",
            code};
  return {"verdict,depth,witness\n" + std::string(verdict) + "," + std::to_string(v.depth) + "," + witness + "\n", code};
}

inline Result cmd_entropy(const RunConfig& c) {
  const Alphabet a(c.M);
  const BaseEnclosure q = parse_base(c.q, c);
  const std::size_t N = c.window ? c.window : default_window(c.M);
  const DimBounds d = dim_univoque(q, a, N);
  if (c.format == "json")
    return {Json{{"M", c.M}, {"q", enclosure_json(q)}, {"lower", d.entropy.lower}, {"upper", d.entropy.upper},
                 {"N", d.N}, {"dim", {d.lower, d.upper}}}
                .dump(2) + "\n"};
  return {"lower,upper,N\n" + num(d.entropy.lower) + "," + num(d.entropy.upper) + "," + std::to_string(d.N) + "\n"};
}

inline Result cmd_plateaus(const RunConfig& c) {
  const Alphabet a(c.M);
  const Rational w = parse_width(c);
  const Rational lo = c.tmin.empty() ? q_kl(a).lo() : parse_rational(c.tmin);
  const Rational hi = c.tmax.empty() ? Rational(c.M + 1) : parse_rational(c.tmax);
  const std::vector<Plateau> ps = enumerate_plateaus(a, lo, hi, c.max_period, w);
  if (c.format == "json") {
    Json rows = Json::array();
    for (const Plateau& p : ps) rows.push_back(plateau_json(p));
    return {Json{{"M", c.M}, {"max_period", c.max_period}, {"plateaus", rows}}.dump(2) + "\n"};
  }
  std::string s = std::string(kPlateauHeader) + "\n";
  for (const Plateau& p : ps) s += plateau_row(c.M, p) + "\n";
  return {s};
}

inline Result cmd_staircase(const RunConfig& c) {
  const Alphabet a(c.M);
  if (c.tmin.empty() || c.tmax.empty()) throw ParseError("--tmin and --tmax are required");
  const std::size_t N = c.window ? c.window : default_window(c.M);
  const StaircaseTable t = staircase(a, parse_rational(c.tmin), parse_rational(c.tmax), c.samples, N);
  if (c.format == "json") {
    Json rows = Json::array();
    for (const StaircaseRow& r : t.rows) rows.push_back(Json::array({to_double_nearest(r.t), r.phi_lo, r.phi_hi}));
    return {Json{{"M", t.M},
                 {"N", t.N},
                 {"samples", t.samples},
                 {"q_KL", {to_double_down(t.q_kl.lo), to_double_up(t.q_kl.hi)}},
                 {"columns", {"t", "phi_lo", "phi_hi"}},
                 {"rows", rows}}
                .dump(2) + "\n"};
  }
  std::string s = "t,phi_lo,phi_hi\n";
  for (const StaircaseRow& r : t.rows) s += num(to_double_nearest(r.t)) + "," + num(r.phi_lo) + "," + num(r.phi_hi) + "\n";
  return {s};
}

inline Result cmd_classify(const RunConfig& c) {
  const Alphabet a(c.M);
  const BaseEnclosure q = parse_base(c.q, c);
  const BaseClass b = classify_base(q, a, c.max_period, parse_width(c));
  auto gen = [](const std::optional<Plateau>& p) { return p ? p->generator.to_string() : std::string(); };
  if (c.format == "json") {
    Json j{{"M", c.M}, {"q", enclosure_json(q)}, {"verdict", b.verdict_string()}};
    if (b.plateau) j["plateau"] = plateau_json(*b.plateau);
    if (b.verdict == BaseClass::Verdict::BifurcationCandidate) {
      j["resolution"] = b.resolution;
      j["below"] = b.below ? plateau_json(*b.below) : Json();
      j["above"] = b.above ? plateau_json(*b.above) : Json();
    }
    return {j.dump(2) + "\n"};
  }
  std::string s = "verdict,generator,resolution,below,above\n" + b.verdict_string() + "," + gen(b.plateau) + ",";
  if (b.verdict == BaseClass::Verdict::BifurcationCandidate) s += std::to_string(b.resolution);
  return {s + "," + gen(b.below) + "," + gen(b.above) + "\n"};
}

// Runs one invocation; args excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"univoque: unique expansions, entropy plateaus and the dimension staircase"};
  app.require_subcommand(1);
  RunConfig c;

  auto add_common = [&](CLI::App* s) {
    s->add_option("--M", c.M, "largest digit")->required()->check(CLI::PositiveNumber);
    s->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    s->add_option("--out", c.out, "write output to this file");
    s->add_option("--width", c.width, "enclosure width for derived bases");
  };

  std::function<Result()> action;
  auto sub = [&](const char* name, const char* desc, std::function<Result()> f) {
    CLI::App* s = app.add_subcommand(name, desc);
    add_common(s);
    s->callback([&action, f] { action = f; });
    return s;
  };

  CLI::App* s = sub("alpha", "quasi-greedy expansion of 1 in base q", [&] { return cmd_alpha(c); });
  s->add_option("--q", c.q, "base: p/q or root:<EPSeq>")->required();
  s->add_option("--digits", c.digits)->check(CLI::PositiveNumber);

  sub("kl", "Komornik-Loreti constant", [&] { return cmd_bound(c, q_kl(Alphabet(c.M), parse_width(c))); });
  sub("qt", "the base q_T", [&] { return cmd_bound(c, q_t(Alphabet(c.M), parse_width(c))); });

  s = sub("unique", "is x's expansion in base q unique", [&] { return cmd_unique(c); });
  s->add_option("--q", c.q)->required();
  s->add_option("--x", c.x)->required();
  s->add_option("--depth", c.depth)->check(CLI::PositiveNumber);

  s = sub("entropy", "entropy and dimension bounds at q", [&] { return cmd_entropy(c); });
  s->add_option("--q", c.q)->required();
  s->add_option("--window", c.window)->check(CLI::PositiveNumber);

  s = sub("plateaus", "entropy plateaus with p_L in (tmin, tmax]", [&] { return cmd_plateaus(c); });
  s->add_option("--max-period", c.max_period)->check(CLI::PositiveNumber);
  s->add_option("--tmin", c.tmin);
  s->add_option("--tmax", c.tmax);

  s = sub("staircase", "phi(t) enclosures on an even grid", [&] { return cmd_staircase(c); });
  s->add_option("--tmin", c.tmin)->required();
  s->add_option("--tmax", c.tmax)->required();
  s->add_option("--samples", c.samples)->check(CLI::Range(2, 1000000));
  s->add_option("--window", c.window)->check(CLI::PositiveNumber);

  s = sub("classify", "bifurcation-set classification of q", [&] { return cmd_classify(c); });
  s->add_option("--q", c.q)->required();
  s->add_option("--max-period", c.max_period)->check(CLI::PositiveNumber);

  std::vector<const char*> argv{"univoque"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  }

  try {
    const Result r = action();
    if (c.out.empty()) {
      out << r.text;
    } else {
      std::ofstream f(c.out, std::ios::binary);
      if (!f) {
        err << "error: cannot write " << c.out << "\n";
        return kResource;
      }
      f << r.text;
    }
    return r.code;
  } catch (const PrecisionExhausted& e) {
    err << "precision exhausted: " << e.what() << "\n";
    return kPrecision;
  } catch (const StateSpaceTooLarge& e) {
    err << "resource limit: " << e.what() << "\n";
    return kResource;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  } catch (const std::bad_alloc&) {
    err << "resource limit: out of memory\n";
    return kResource;
  }
}

}  // namespace univoque::cli
