#pragma once

// Family files: one JSON document with a spec header and a kind-specific
// payload holding materialized prefixes, support descriptors and build
// records. verify_family recomputes every certificate from the payload.

#include "orthofam/comb.hpp"
#include "orthofam/exact/quadratic_field.hpp"
#include "orthofam/exact/serialize.hpp"
#include "orthofam/fullsupport.hpp"
#include "orthofam/kunen.hpp"
#include "orthofam/l2fam.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace orthofam {

class UsageError : public DomainError {
 public:
  using DomainError::DomainError;
};

inline const std::vector<std::string>& family_kinds() {
  static const std::vector<std::string> k{"comb", "comb-full-support", "kunen", "fullsupport", "l2tree", "staircase", "grid"};
  return k;
}

struct FamilySpec {
  std::string kind;
  unsigned depth = 0;
  std::map<std::string, std::string> params;  ///< exact strings

  std::string param(const std::string& key, const std::string& fallback) const {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  }
};

inline unsigned default_depth(const std::string& kind) {
  if (kind == "comb") return 2;
  if (kind == "comb-full-support") return 8;
  if (kind == "kunen") return 8;
  if (kind == "fullsupport") return 3;
  if (kind == "l2tree") return 8;
  if (kind == "staircase") return 6;
  return 4;  // grid: rows
}

namespace detail {

inline unsigned long spec_count(const FamilySpec& s, const std::string& key, unsigned long fallback, unsigned long lo,
                                unsigned long hi) {
  const std::string v = s.param(key, std::to_string(fallback));
  BigInt n;
  try {
    n = parse_int(v);
  } catch (const std::exception&) {
    throw UsageError("parameter " + key + " must be an integer, got '" + v + "'");
  }
  if (n < lo || n > hi) throw UsageError("parameter " + key + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return n.get_ui();
}

inline void check_depth(const FamilySpec& s, unsigned lo, unsigned hi) {
  if (s.depth < lo || s.depth > hi)
    throw UsageError(s.kind + " depth must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

inline Json spec_json(const FamilySpec& s) {
  Json p = Json::object();
  for (const auto& [k, v] : s.params) p[k] = v;
  return Json{{"kind", s.kind}, {"depth", s.depth}, {"params", p}};
}

inline Json path_json(const CombPath& p) {
  Json bits = Json::array();
  for (int b : p.prefix) bits.push_back(b);
  return Json{{"prefix", bits}, {"tail_bit", p.tail_bit}};
}

inline CombPath path_from_json(const Json& j) {
  CombPath p;
  for (const auto& b : j.at("prefix")) {
    const int v = b.get<int>();
    if (v != 0 && v != 1) throw DomainError("path bits must be 0 or 1");
    p.prefix.push_back(v);
  }
  p.tail_bit = j.at("tail_bit").get<int>();
  if (p.tail_bit != 0 && p.tail_bit != 1) throw DomainError("path bits must be 0 or 1");
  return p;
}

/// Paths with every prefix of length `bits` and tail 0; any two diverge
/// before bit `bits`.
inline std::vector<CombPath> sample_paths(unsigned bits) {
  std::vector<CombPath> out;
  for (unsigned long v = 0; v < (1ul << bits); ++v) {
    CombPath p;
    for (unsigned i = 0; i < bits; ++i) p.prefix.push_back(static_cast<int>((v >> (bits - 1 - i)) & 1));
    p.tail_bit = 0;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace detail

/// Which pairs to check: all, or a deterministic sample of k.
struct PairSelection {
  bool all = true;
  std::size_t k = 0;

  std::vector<std::pair<std::size_t, std::size_t>> pick(std::size_t n) const {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    if (all || k >= pairs.size()) return pairs;
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t t = 0; t < k; ++t) out.push_back(pairs[t * pairs.size() / k]);
    return out;
  }
};

inline PairSelection parse_pairs(const std::string& s) {
  if (s.empty() || s == "all") return {};
  try {
    const BigInt k = parse_int(s);
    if (k < 1 || !k.fits_ulong_p()) throw UsageError("");
    return {false, k.get_ui()};
  } catch (const std::exception&) {
    throw UsageError("--pairs takes 'all' or a positive count, got '" + s + "'");
  }
}

// ---------------------------------------------------------------- generate

inline Json generate_comb(const FamilySpec& s, const BigInt& budget) {
  detail::check_depth(s, 1, 12);
  const CombParams c = comb_params(s.depth, default_exponent, budget);
  Json levels = Json::array();
  for (unsigned n = 0; n <= c.depth; ++n)
    levels.push_back(Json{{"n", n},
                          {"p", to_json_scalar(c.p[n])},
                          {"r", c.r[n].get_str()},
                          {"k", c.k[n].get_str()},
                          {"eps_sq", to_json_scalar(c.eps_sq[n])},
                          {"eps", to_json_scalar(c.eps[n])},
                          {"start", c.start[n].get_str()}});
  Json elements = Json::array();
  for (const auto& p : detail::sample_paths(s.depth)) {
    Json blocks = Json::array();
    const BlockSupport sup = comb_support(c, p);
    for (const auto& [lvl, ranges] : sup.levels)
      for (const auto& [first, last] : ranges)
        blocks.push_back(Json{{"level", lvl}, {"first", first.get_str()}, {"last", last.get_str()},
                              {"weight", to_json_scalar(comb_entry(c, p, first))}});
    elements.push_back(Json{{"path", detail::path_json(p)}, {"blocks", blocks}});
  }
  return Json{{"exponent_rule", "p_n = 2 + 1/(n+1)"},
              {"root_weight", to_json_scalar(c.root_weight)},
              {"layout_end", c.layout_end().get_str()},
              {"levels", levels},
              {"elements", elements}};
}

inline Json generate_comb_full_support(const FamilySpec& s) {
  detail::check_depth(s, 2, 16);
  BigRat b0;
  try {
    b0 = parse_rat(s.param("b0", "1"));
  } catch (const std::exception&) {
    throw UsageError("parameter b0 must be a rational");
  }
  if (b0 <= 0) throw UsageError("parameter b0 must be positive");
  const FullSupportComb f = comb_full_support(s.depth, b0);
  Json b_sq = Json::array();
  for (const auto& v : f.b_sq) b_sq.push_back(to_json_scalar(v));
  Json elements = Json::array();
  for (const auto& p : detail::sample_paths(std::min(s.depth - 1, 3u))) {
    PrefixVec v;
    for (Index m = 0; m < f.layout_end(); ++m) v.push_back(full_support_entry(f, p, m));
    elements.push_back(Json{{"path", detail::path_json(p)}, {"prefix", to_json_vec(v)}});
  }
  return Json{{"b0", to_json_scalar(b0)}, {"b_sq", b_sq}, {"layout_end", std::to_string(f.layout_end())}, {"elements", elements}};
}

inline Json generate_kunen(const FamilySpec& s) {
  detail::check_depth(s, 1, 64);
  const KunenTree t = kunen_tree(s.depth);
  Json levels = Json::array();
  for (std::size_t n = 1; n <= t.depth(); ++n) {
    Json lvl = Json::array();
    for (const auto& node : t.level(n)) lvl.push_back(to_json_vec(node.entries));
    levels.push_back(lvl);
  }
  Json splits = Json::array();
  for (std::size_t n = 2; n <= t.depth(); ++n) splits.push_back(t.split_position(n));
  return Json{{"levels", levels}, {"split_positions", splits}};
}

inline Json segment_json(const Segment& seg) {
  if (const auto* e = std::get_if<ExplicitColumn>(&seg)) return Json{{"type", "column"}, {"entries", to_json_vec(e->entries)}};
  const auto& p = std::get<PadSegment>(seg);
  Json bits = Json::array();
  for (unsigned b : p.bit_of_row) bits.push_back(b);
  return Json{{"type", "pad"}, {"bits", p.bits}, {"eps", to_json_scalar(p.eps)}, {"repeats", p.repeats.get_str()}, {"bit_of_row", bits}};
}

inline Segment segment_from_json(const Json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "column") return ExplicitColumn{rational_vec_from_json(j.at("entries"))};
  if (type != "pad") throw DomainError("unknown segment type " + type);
  PadSegment p;
  p.bits = j.at("bits").get<unsigned>();
  p.eps = rational_from_json(j.at("eps"));
  p.repeats = parse_int(j.at("repeats").get<std::string>());
  for (const auto& b : j.at("bit_of_row")) p.bit_of_row.push_back(b.get<unsigned>());
  return p;
}

inline Json condition_json(const SignCondition& c) {
  Json segs = Json::array();
  for (const auto& s : c.segments()) segs.push_back(segment_json(s));
  Json reqs = Json::array();
  for (const auto& r : c.requirements())
    reqs.push_back(Json{{"i", r.i}, {"j", r.j}, {"k", r.k.get_str()}, {"eps", to_json_scalar(r.eps)}, {"head", to_json_scalar(r.head)}});
  Json gram = Json::array();
  for (std::size_t i = 0; i < c.h(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < c.h(); ++j) row.push_back(to_json_scalar(c.gram(i, j)));
    gram.push_back(row);
  }
  return Json{{"h", c.h()}, {"N", c.N().get_str()}, {"segments", segs}, {"requirements", reqs}, {"gram", gram}};
}

inline Json generate_fullsupport(const FamilySpec& s) {
  const unsigned long h0 = detail::spec_count(s, "h0", 2, 1, 16);
  detail::check_depth(s, 1, 5);
  const FullSupportBuild b = build_perfect_family(h0, default_seed(h0), s.depth);
  Json seed = Json::array();
  for (const auto& r : b.seed) seed.push_back(to_json_vec(r));
  Json stages = Json::array();
  for (const auto& r : b.records)
    stages.push_back(Json{{"stage", r.stage},
                          {"h", r.h},
                          {"require_begin", r.require_begin.get_str()},
                          {"pad_begin", r.pad_begin.get_str()},
                          {"pad_end", r.pad_end.get_str()},
                          {"eps_req", to_json_scalar(r.eps_req)},
                          {"delta", to_json_scalar(r.delta)},
                          {"pad_eps", to_json_scalar(r.pad_eps)},
                          {"repeats", r.repeats.get_str()}});
  return Json{{"h0", h0}, {"seed", seed}, {"stages", stages}, {"condition", condition_json(b.condition)}};
}

inline Json generate_l2tree(const FamilySpec& s) {
  detail::check_depth(s, 1, 24);
  const UnequalTree t = unequal_tree(s.depth);
  Json levels = Json::array();
  for (std::size_t n = 1; n <= t.depth(); ++n) {
    Json lvl = Json::array();
    for (const auto& node : t.level(n)) lvl.push_back(to_json_vec(node.entries));
    levels.push_back(lvl);
  }
  Json splits = Json::array();
  for (std::size_t n = 1; n < t.depth(); ++n)
    splits.push_back(Json{{"level", n},
                          {"position", t.split_position(n + 1)},
                          {"delta", to_json_scalar(t.delta(n))},
                          {"b", to_json_scalar(t.b(n))},
                          {"m_sq", to_json_scalar(t.m_sq(n))}});
  return Json{{"levels", levels}, {"splits", splits}};
}

inline Json generate_staircase(const FamilySpec& s) {
  detail::check_depth(s, 2, 64);
  Json vecs = Json::array();
  for (std::size_t n = 0; n + 2 <= s.depth; ++n) {
    auto v = staircase(n);
    v.resize(s.depth, BigRat(0));
    vecs.push_back(to_json_vec(v));
  }
  const ComplementBasis cb = complement_basis(s.depth);
  Json basis = Json::array();
  for (const auto& v : cb.basis) basis.push_back(to_json_vec(v));
  return Json{{"vectors", vecs}, {"complement", basis}};
}

inline Json grid_vector_json(Index n, Index m) {
  const SeqHandle h = grid_vector(n, m);
  Json entries = Json::array();
  for (Index k : std::get<FiniteSupport>(h.support).indices) entries.push_back(Json{{"index", k}, {"value", to_json_scalar(h(k))}});
  return Json{{"row", n}, {"m", m}, {"entries", entries}};
}

inline Json generate_grid(const FamilySpec& s) {
  detail::check_depth(s, 1, 64);
  const unsigned long cols = detail::spec_count(s, "cols", 4, 1, 256);
  Json vecs = Json::array();
  for (Index n = 0; n < s.depth; ++n)
    for (Index m = 0; m < cols; ++m) vecs.push_back(grid_vector_json(n, m));
  return Json{{"pairing", "cantor"}, {"rows", s.depth}, {"cols", cols}, {"vectors", vecs}};
}

inline Json generate_family(const FamilySpec& s, const BigInt& budget) {
  Json payload;
  if (s.kind == "comb") payload = generate_comb(s, budget);
  else if (s.kind == "comb-full-support") payload = generate_comb_full_support(s);
  else if (s.kind == "kunen") payload = generate_kunen(s);
  else if (s.kind == "fullsupport") payload = generate_fullsupport(s);
  else if (s.kind == "l2tree") payload = generate_l2tree(s);
  else if (s.kind == "staircase") payload = generate_staircase(s);
  else if (s.kind == "grid") payload = generate_grid(s);
  else throw UsageError("unknown family kind '" + s.kind + "'");
  return Json{{"format", "orthofam-family"}, {"version", 1}, {"spec", detail::spec_json(s)}, {"family", payload}};
}

// ------------------------------------------------------------------ verify

struct Check {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct VerifyReport {
  std::string kind;
  std::vector<Check> checks;

  void add(std::string name, bool ok, std::string detail = {}) { checks.push_back({std::move(name), ok, std::move(detail)}); }
  bool ok() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok; });
  }
  std::string str() const {
    std::string s;
    for (const auto& c : checks) s += std::string(c.ok ? "ok   " : "FAIL ") + c.name + (c.detail.empty() ? "" : ": " + c.detail) + "\n";
    return s;
  }
};

namespace detail {

inline RadicalSum dot_prefix(const PrefixVec& a, const PrefixVec& b) {
  RadicalSum s;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i)
    if (!a[i].is_zero() && !b[i].is_zero()) s += a[i] * b[i];
  return s;
}

inline std::string residual(const RadicalSum& r) { return "residual " + r.str(); }

inline FamilySpec spec_from_json(const Json& j) {
  FamilySpec s;
  s.kind = j.at("kind").get<std::string>();
  s.depth = j.at("depth").get<unsigned>();
  for (const auto& [k, v] : j.at("params").items()) s.params[k] = v.get<std::string>();
  return s;
}

inline void verify_comb(const FamilySpec& s, const Json& f, const PairSelection& sel, VerifyReport& rep) {
  const CombParams c = comb_params(s.depth);
  const auto& levels = f.at("levels");
  bool table = levels.size() == c.depth + 1;
  std::string why;
  for (unsigned n = 0; table && n <= c.depth; ++n) {
    const auto& l = levels.at(n);
    if (rational_from_json(l.at("p")) != c.p[n] || parse_int(l.at("r").get<std::string>()) != c.r[n] ||
        parse_int(l.at("k").get<std::string>()) != c.k[n] || rational_from_json(l.at("eps_sq")) != c.eps_sq[n] ||
        radical_from_json(l.at("eps")) != c.eps[n] || parse_int(l.at("start").get<std::string>()) != c.start[n]) {
      table = false;
      why = "level " + std::to_string(n) + " differs from the recomputed parameters";
    }
  }
  rep.add("parameter table", table, why);
  BigInt tele = 0;
  for (unsigned n = 0; n + 1 <= c.depth; ++n) {
    tele += 2 * c.r[n];
    if (tele != 2 * c.r[n + 1]) {
      rep.add("telescoping sum_{n<=N} 2 r_n = 2 r_{N+1}", false, "fails at N = " + std::to_string(n));
      return;
    }
  }
  rep.add("telescoping sum_{n<=N} 2 r_n = 2 r_{N+1}", true);
  for (unsigned n = 1; n <= c.depth; ++n) rep.add("k condition at level " + std::to_string(n), k_condition_holds(n, c.r[n], c.p[n], c.k[n]));

  struct Block {
    BigInt first, last;
    Radical w;
  };
  std::vector<CombPath> paths;
  std::vector<std::vector<Block>> blocks;
  for (const auto& e : f.at("elements")) {
    paths.push_back(path_from_json(e.at("path")));
    std::vector<Block> bl;
    for (const auto& b : e.at("blocks"))
      bl.push_back({parse_int(b.at("first").get<std::string>()), parse_int(b.at("last").get<std::string>()), radical_from_json(b.at("weight"))});
    std::sort(bl.begin(), bl.end(), [](const Block& a, const Block& b) { return a.first < b.first; });
    // The stored descriptor must agree with the construction.
    const BlockSupport sup = comb_support(c, paths.back());
    std::size_t count = 0;
    bool same = true;
    for (const auto& [lvl, ranges] : sup.levels)
      for (const auto& [first, last] : ranges) {
        ++count;
        const bool found = std::any_of(bl.begin(), bl.end(), [&](const Block& b) {
          return b.first == first && b.last == last && b.w == comb_entry(c, paths.back(), first);
        });
        same = same && found;
      }
    same = same && count == bl.size();
    rep.add("element " + paths.back().str() + " blocks match the construction", same);
    blocks.push_back(std::move(bl));
  }
  for (const auto& [i, j] : sel.pick(paths.size())) {
    // Exact inner product from the stored blocks: overlaps times weights.
    RadicalSum total;
    for (const auto& a : blocks[i])
      for (const auto& b : blocks[j]) {
        const BigInt lo = std::max(a.first, b.first), hi = std::min(a.last, b.last);
        if (lo < hi) total += (a.w * b.w) * BigRat(hi - lo);
      }
    const auto cert = comb_inner(c, paths[i], paths[j]);
    const bool agree = std::holds_alternative<ExactInner>(cert) && std::get<ExactInner>(cert).value == total;
    rep.add("(" + paths[i].str() + ", " + paths[j].str() + ") = 0", total.is_zero() && agree,
            total.is_zero() ? (agree ? "" : "aggregate certificate disagrees") : residual(total));
  }
}

inline void verify_comb_full_support(const FamilySpec& s, const Json& f, const PairSelection& sel, VerifyReport& rep) {
  const BigRat b0 = rational_from_json(f.at("b0"));
  FullSupportComb g;
  g.depth = s.depth;
  g.b0 = b0;
  g.b_sq = rational_vec_from_json(f.at("b_sq"));
  if (g.b_sq.size() != s.depth + 1) throw DomainError("b_sq must list levels 0..depth");
  for (unsigned n = 0; n + 1 <= s.depth; ++n) {
    const BigRat r = g.residual(n);
    rep.add("recurrence residual at n = " + std::to_string(n), r == 0, r == 0 ? "" : "residual " + to_string(r));
  }
  const FullSupportComb ref = comb_full_support(s.depth, b0);
  g.b.clear();
  g.a = ref.a;
  for (const auto& v : g.b_sq) g.b.push_back(Radical::sqrt(v));
  std::vector<CombPath> paths;
  std::vector<PrefixVec> prefixes;
  for (const auto& e : f.at("elements")) {
    paths.push_back(path_from_json(e.at("path")));
    prefixes.push_back(radical_vec_from_json(e.at("prefix")));
    if (prefixes.back().size() != g.layout_end()) throw DomainError("prefix length differs from the layout");
    bool same = true;
    for (Index m = 0; m < g.layout_end(); ++m) same = same && prefixes.back()[m] == full_support_entry(g, paths.back(), m);
    bool nonzero = std::none_of(prefixes.back().begin(), prefixes.back().end(), [](const Radical& r) { return r.is_zero(); });
    rep.add("element " + paths.back().str() + " matches the construction, full support", same && nonzero);
  }
  for (const auto& [i, j] : sel.pick(paths.size())) {
    const auto div = divergence_index(paths[i], paths[j]);
    if (!div || *div + 1 > s.depth) throw DomainError("stored paths must diverge within the depth");
    RadicalSum run;
    Index m = 0;
    bool ok = true;
    std::string why;
    for (unsigned L = 0; L <= s.depth; ++L) {
      const Index end = (Index{1} << (L + 1)) - 1;
      for (; m < end; ++m) run += prefixes[i][m] * prefixes[j][m];
      if (L >= *div + 1) {
        RadicalSum expect(-footnote_tail(L));
        RadicalSum diff = run - expect;
        if (!diff.is_zero()) {
          ok = false;
          why = "level " + std::to_string(L) + ": " + residual(diff);
          break;
        }
      }
    }
    rep.add("(" + paths[i].str() + ", " + paths[j].str() + ") partial sums equal -T(L)", ok, why);
  }
}

inline std::string rank_over_sqrt2(const std::vector<PrefixVec>& rows, std::size_t& rank_out) {
  for (const auto& r : rows)
    for (const auto& e : r)
      if (e.radicand() != 1 && e.radicand() != 2) return "entry " + e.str() + " lies outside Q(sqrt 2)";
  rank_out = rank_sqrt2(rows);
  return {};
}

inline void verify_kunen(const FamilySpec& s, const Json& f, const PairSelection& sel, VerifyReport& rep) {
  const auto& levels = f.at("levels");
  const auto& splits = f.at("split_positions");
  if (levels.size() != s.depth || splits.size() + 1 != s.depth) throw DomainError("level count differs from depth");
  std::vector<std::vector<PrefixVec>> lv;
  for (const auto& l : levels) {
    std::vector<PrefixVec> vs;
    for (const auto& v : l) vs.push_back(radical_vec_from_json(v));
    lv.push_back(std::move(vs));
  }
  for (std::size_t n = 1; n <= lv.size(); ++n) {
    const auto& L = lv[n - 1];
    bool shape = L.size() == n;
    for (const auto& v : L) shape = shape && v.size() == n;
    rep.add("level " + std::to_string(n) + " has " + std::to_string(n) + " vectors of length " + std::to_string(n), shape);
    if (!shape) continue;
    const bool deepest = n == lv.size();
    const auto pairs = deepest ? sel.pick(n) : PairSelection{}.pick(n);
    bool ok = true;
    std::string why;
    for (const auto& [i, j] : pairs) {
      const RadicalSum d = dot_prefix(L[i], L[j]);
      if (!d.is_zero()) {
        ok = false;
        why = "vectors " + std::to_string(i) + ", " + std::to_string(j) + ": " + residual(d);
        break;
      }
    }
    rep.add("level " + std::to_string(n) + " pairwise orthogonal", ok, why);
    std::size_t r = 0;
    const std::string bad = rank_over_sqrt2(L, r);
    rep.add("level " + std::to_string(n) + " rank " + std::to_string(n), bad.empty() && r == n, bad.empty() ? "rank " + std::to_string(r) : bad);
    if (n == 1) {
      const RadicalSum d = RadicalSum(L[0][0]) - RadicalSum(Radical(1));
      rep.add("level 1 is the vector (1)", d.is_zero(), d.is_zero() ? "" : residual(d));
    } else {
      const std::size_t sp = splits.at(n - 2).get<std::size_t>();
      const auto& P = lv[n - 2];
      bool grown = sp < P.size();
      std::string gwhy = grown ? "" : "split position out of range";
      // First coordinate where a child differs from its parent, as an exact difference.
      auto prefix_diff = [&](const PrefixVec& parent, const PrefixVec& child, std::size_t k) {
        for (std::size_t c = 0; c < parent.size(); ++c)
          if (!(parent[c] == child[c])) {
            grown = false;
            gwhy = "vector " + std::to_string(k) + " coordinate " + std::to_string(c) + ": " +
                   residual(RadicalSum(child[c]) - RadicalSum(parent[c]));
            return;
          }
      };
      for (std::size_t i = 0, k = 0; grown && i < P.size(); ++i) {
        if (i != sp) {
          prefix_diff(P[i], L[k], k);
          if (grown && !L[k][n - 1].is_zero()) {
            grown = false;
            gwhy = "vector " + std::to_string(k) + " new coordinate: " + residual(RadicalSum(L[k][n - 1]));
          }
          ++k;
          continue;
        }
        prefix_diff(P[i], L[k], k);
        if (grown) prefix_diff(P[i], L[k + 1], k + 1);
        if (!grown) break;
        const BigRat norm = dot_prefix(P[i], P[i]).rational_value();
        const Radical w = L[k][n - 1];
        const RadicalSum pair_sum = RadicalSum(w) + RadicalSum(L[k + 1][n - 1]);
        if (w.square() != norm || w.sign() <= 0) {
          grown = false;
          gwhy = "split of vector " + std::to_string(i) + ": w^2 - (s,s) = " + to_string(w.square() - norm);
        } else if (!pair_sum.is_zero()) {
          grown = false;
          gwhy = "split of vector " + std::to_string(i) + ": w + w' " + residual(pair_sum);
        }
        k += 2;
      }
      rep.add("level " + std::to_string(n) + " grows from level " + std::to_string(n - 1) + " by one split", grown, gwhy);
    }
  }
}

inline void verify_fullsupport(const FamilySpec& s, const Json& f, const PairSelection&, VerifyReport& rep) {
  const auto& cj = f.at("condition");
  const std::size_t h = cj.at("h").get<std::size_t>();
  std::vector<Segment> segs;
  for (const auto& sj : cj.at("segments")) segs.push_back(segment_from_json(sj));
  std::vector<Requirement> reqs;
  for (const auto& rj : cj.at("requirements"))
    reqs.push_back(Requirement{rj.at("i").get<std::size_t>(), rj.at("j").get<std::size_t>(), parse_int(rj.at("k").get<std::string>()),
                               rational_from_json(rj.at("eps")), rational_from_json(rj.at("head"))});
  for (const auto& seg : segs) {
    if (const auto* e = std::get_if<ExplicitColumn>(&seg); e && e->entries.size() != h) throw DomainError("column height differs from h");
    if (const auto* p = std::get_if<PadSegment>(&seg); p && p->bit_of_row.size() != h) throw DomainError("pad pattern height differs from h");
  }
  const SignCondition c = SignCondition::from_parts(h, segs, reqs);
  if (c.N() != parse_int(cj.at("N").get<std::string>())) rep.add("column count", false, "stored N differs from the segments");
  rep.add("stored build matches a rebuild from the seed", true);
  {
    // Rebuild from the stored seed and compare every stored number.
    std::vector<std::vector<BigRat>> seed;
    for (const auto& r : f.at("seed")) seed.push_back(rational_vec_from_json(r));
    const std::size_t h0 = f.at("h0").get<std::size_t>();
    std::string why;
    auto diff = [&](const std::string& where, const BigRat& stored, const BigRat& want) {
      if (why.empty() && stored != want) why = where + ": residual " + to_string(stored - want);
    };
    if (seed.size() != h0 || h0 < 1 || h0 > 16) throw DomainError("seed must have h0 rows");
    const FullSupportBuild b = build_perfect_family(h0, seed, s.depth);
    const auto& rs = b.condition.segments();
    if (rs.size() != segs.size()) why = "segment count " + std::to_string(segs.size()) + " differs from " + std::to_string(rs.size());
    for (std::size_t k = 0; why.empty() && k < segs.size(); ++k) {
      const std::string where = "segment " + std::to_string(k);
      const auto* e = std::get_if<ExplicitColumn>(&segs[k]);
      const auto* re = std::get_if<ExplicitColumn>(&rs[k]);
      if (e && re) {
        for (std::size_t i = 0; i < h; ++i) diff(where + " row " + std::to_string(i), e->entries[i], re->entries[i]);
      } else if (!e && !re) {
        const auto& p = std::get<PadSegment>(segs[k]);
        const auto& rp = std::get<PadSegment>(rs[k]);
        diff(where + " eps", p.eps, rp.eps);
        diff(where + " repeats", BigRat(p.repeats), BigRat(rp.repeats));
        diff(where + " bits", BigRat(p.bits), BigRat(rp.bits));
        for (std::size_t i = 0; i < h; ++i) diff(where + " bit of row " + std::to_string(i), BigRat(p.bit_of_row[i]), BigRat(rp.bit_of_row[i]));
      } else {
        why = where + " has the wrong type";
      }
    }
    const auto& rr = b.condition.requirements();
    if (why.empty() && rr.size() != reqs.size()) why = "requirement count differs";
    for (std::size_t k = 0; why.empty() && k < reqs.size(); ++k) {
      const std::string where = "requirement " + std::to_string(k);
      diff(where + " i", BigRat(reqs[k].i), BigRat(rr[k].i));
      diff(where + " j", BigRat(reqs[k].j), BigRat(rr[k].j));
      diff(where + " k", BigRat(reqs[k].k), BigRat(rr[k].k));
      diff(where + " eps", reqs[k].eps, rr[k].eps);
      diff(where + " head", reqs[k].head, rr[k].head);
    }
    const auto& st = f.at("stages");
    if (why.empty() && st.size() != b.records.size()) why = "stage count differs";
    for (std::size_t k = 0; why.empty() && k < b.records.size(); ++k) {
      const auto& r = b.records[k];
      const std::string where = "stage " + std::to_string(r.stage);
      diff(where + " eps_req", rational_from_json(st[k].at("eps_req")), r.eps_req);
      diff(where + " delta", rational_from_json(st[k].at("delta")), r.delta);
      diff(where + " pad_eps", rational_from_json(st[k].at("pad_eps")), r.pad_eps);
      diff(where + " repeats", BigRat(parse_int(st[k].at("repeats").get<std::string>())), BigRat(r.repeats));
      diff(where + " pad_begin", BigRat(parse_int(st[k].at("pad_begin").get<std::string>())), BigRat(r.pad_begin));
      diff(where + " pad_end", BigRat(parse_int(st[k].at("pad_end").get<std::string>())), BigRat(r.pad_end));
      diff(where + " require_begin", BigRat(parse_int(st[k].at("require_begin").get<std::string>())), BigRat(r.require_begin));
    }
    rep.checks.back().ok = why.empty();
    rep.checks.back().detail = why;
  }
  const ConditionReport cr = verify_condition(c);
  rep.add("every entry nonzero", cr.entries_nonzero);
  std::size_t bad = 0;
  std::string first;
  for (const auto& chk : cr.checks)
    if (!chk.ok) {
      if (bad++ == 0)
        first = SignCondition::pair_str(chk.req) + ": head " + to_string(chk.head) + " (residual against stored " +
                to_string(chk.head - chk.req.head) + "), window max " + to_string(chk.max_tail);
    }
  rep.add("all " + std::to_string(cr.checks.size()) + " requirements hold on every window", bad == 0, first);
  const auto& gram = cj.at("gram");
  bool gram_ok = gram.size() == h;
  std::string gwhy;
  for (std::size_t i = 0; gram_ok && i < h; ++i)
    for (std::size_t j = 0; gram_ok && j < h; ++j) {
      const BigRat stored = rational_from_json(gram.at(i).at(j));
      const BigRat actual = cr.gram[std::min(i, j) * h + std::max(i, j)];
      if (stored != actual) {
        gram_ok = false;
        gwhy = "entry (" + std::to_string(i) + "," + std::to_string(j) + "): residual " + to_string(actual - stored);
      }
    }
  rep.add("Gram certificate matches the columns", gram_ok, gwhy);
  // Every pair of final rows carries a requirement from the last stage.
  std::set<std::pair<std::size_t, std::size_t>> covered;
  const BigRat last_eps = make_rat(1, s.depth);
  for (const auto& r : reqs)
    if (r.eps == last_eps) covered.insert({r.i, r.j});
  rep.add("final stage requires every pair of its rows", covered.size() >= (h / 2) * (h / 2 - 1) / 2);
  for (const auto& st : f.at("stages")) {
    const BigInt pb = parse_int(st.at("pad_begin").get<std::string>()), pe = parse_int(st.at("pad_end").get<std::string>());
    const BigRat pe_eps = rational_from_json(st.at("pad_eps"));
    bool found = false;
    for (std::size_t k = 0; k < c.segments().size(); ++k)
      if (c.segment_starts()[k] == pb)
        if (const auto* p = std::get_if<PadSegment>(&c.segments()[k]))
          found = p->eps == pe_eps && pb + p->columns() == pe && BigRat(p->columns()) * pow_rat(pe_eps, st.at("stage").get<unsigned>()) > 1;
    rep.add("stage " + std::to_string(st.at("stage").get<unsigned>()) + " padded range: entries eps, count * eps^l > 1", found);
  }
}

inline void verify_l2tree(const FamilySpec& s, const Json& f, const PairSelection& sel, VerifyReport& rep) {
  const auto& levels = f.at("levels");
  if (levels.size() != s.depth) throw DomainError("level count differs from depth");
  std::vector<std::vector<RatVec>> lv;
  for (const auto& l : levels) {
    std::vector<RatVec> vs;
    for (const auto& v : l) vs.push_back(rational_vec_from_json(v));
    lv.push_back(std::move(vs));
  }
  for (std::size_t n = 1; n <= lv.size(); ++n) {
    const auto& L = lv[n - 1];
    bool shape = L.size() == n;
    for (const auto& v : L) shape = shape && v.size() == n;
    rep.add("level " + std::to_string(n) + " shape", shape);
    if (!shape) continue;
    const auto pairs = n == lv.size() ? sel.pick(n) : PairSelection{}.pick(n);
    bool ok = true;
    std::string why;
    for (const auto& [i, j] : pairs) {
      const BigRat d = dot(L[i], L[j]);
      if (d != 0) {
        ok = false;
        why = "vectors " + std::to_string(i) + ", " + std::to_string(j) + ": residual " + to_string(d);
        break;
      }
    }
    rep.add("level " + std::to_string(n) + " pairwise orthogonal", ok, why);
    rep.add("level " + std::to_string(n) + " rank " + std::to_string(n), rank(Matrix<BigRat>(L.begin(), L.end())) == n);
  }
  std::optional<BigRat> prev;
  for (const auto& sp : f.at("splits")) {
    const std::size_t n = sp.at("level").get<std::size_t>();
    const std::size_t pos = sp.at("position").get<std::size_t>();
    const BigRat d = rational_from_json(sp.at("delta")), b = rational_from_json(sp.at("b")), m2 = rational_from_json(sp.at("m_sq"));
    if (n < 1 || n >= lv.size() || pos >= lv[n - 1].size()) throw DomainError("split record out of range");
    const RatVec& s_n = lv[n - 1][pos];
    const std::string tag = "split at level " + std::to_string(n);
    rep.add(tag + ": delta b = (s,s)", d * b == dot(s_n, s_n), "residual " + to_string(d * b - dot(s_n, s_n)));
    rep.add(tag + ": delta <= 2^-(n-1)", d <= half_pow(n - 1));
    const BigRat m2_re = minmax_radius_sq(lv[n - 1]);
    rep.add(tag + ": min-max radius", m2 == m2_re, m2 == m2_re ? "" : "residual " + to_string(m2 - m2_re));
    if (prev) rep.add(tag + ": delta^2 <= min(m^2/4, delta_prev^2)/4", d * d <= std::min<BigRat>(m2 / 4, *prev * *prev) / 4);
    const auto& next = lv[n];
    bool kids = pos + 1 < next.size() && next[pos].back() == d && next[pos + 1].back() == -b &&
                std::equal(s_n.begin(), s_n.end(), next[pos].begin()) && std::equal(s_n.begin(), s_n.end(), next[pos + 1].begin());
    rep.add(tag + ": children s^delta and s^(-b)", kids);
    prev = d;
  }
}

inline void verify_staircase(const FamilySpec& s, const Json& f, const PairSelection& sel, VerifyReport& rep) {
  std::vector<RatVec> vs;
  for (const auto& v : f.at("vectors")) vs.push_back(rational_vec_from_json(v));
  bool shape = vs.size() + 1 == s.depth;
  for (std::size_t n = 0; shape && n < vs.size(); ++n) {
    auto ref = staircase(n);
    ref.resize(s.depth, BigRat(0));
    shape = vs[n] == ref;
  }
  rep.add("stored vectors are the staircases", shape);
  bool ok = true;
  std::string why;
  for (const auto& [i, j] : sel.pick(vs.size())) {
    const BigRat d = dot(vs[i], vs[j]);
    if (d != 0) {
      ok = false;
      why = "x_" + std::to_string(i) + ", x_" + std::to_string(j) + ": residual " + to_string(d);
      break;
    }
  }
  rep.add("pairwise orthogonal", ok, why);
  std::vector<RatVec> basis;
  for (const auto& v : f.at("complement")) basis.push_back(rational_vec_from_json(v));
  bool comp = basis.size() == 1;
  std::string cwhy;
  if (comp)
    for (std::size_t n = 0; n < vs.size(); ++n)
      if (const BigRat d = dot(basis[0], vs[n]); d != 0) {
        comp = false;
        cwhy = "residual " + to_string(d) + " against x_" + std::to_string(n);
      }
  if (comp) comp = std::all_of(basis[0].begin(), basis[0].end(), [&](const BigRat& v) { return v == basis[0][0] && v != 0; });
  const ComplementBasis re = complement_basis(s.depth);
  rep.add("complement is one-dimensional, spanned by ones", comp && re.basis.size() == 1 && re.ones_direction, cwhy);
}

inline void verify_grid(const FamilySpec&, const Json& f, const PairSelection& sel, VerifyReport& rep) {
  if (f.at("pairing").get<std::string>() != "cantor") throw DomainError("unknown pairing");
  struct Sparse {
    Index row, m;
    std::map<Index, BigRat> e;
  };
  std::vector<Sparse> vs;
  for (const auto& v : f.at("vectors")) {
    Sparse s{v.at("row").get<Index>(), v.at("m").get<Index>(), {}};
    for (const auto& e : v.at("entries")) s.e[e.at("index").get<Index>()] = rational_from_json(e.at("value"));
    vs.push_back(std::move(s));
  }
  bool shape = true;
  for (const auto& v : vs) {
    const SeqHandle ref = grid_vector(v.row, v.m);
    const auto& idx = std::get<FiniteSupport>(ref.support).indices;
    shape = shape && idx.size() == v.e.size();
    for (Index k : idx) shape = shape && v.e.count(k) && v.e.at(k) == ref(k).coeff();
  }
  rep.add("stored vectors are row staircases", shape);
  bool ok = true;
  std::string why;
  for (const auto& [i, j] : sel.pick(vs.size())) {
    BigRat d = 0;
    for (const auto& [k, a] : vs[i].e)
      if (const auto it = vs[j].e.find(k); it != vs[j].e.end()) d += a * it->second;
    if (d != 0) {
      ok = false;
      why = "x^" + std::to_string(vs[i].row) + "_" + std::to_string(vs[i].m) + ", x^" + std::to_string(vs[j].row) + "_" +
            std::to_string(vs[j].m) + ": residual " + to_string(d);
      break;
    }
  }
  rep.add("pairwise orthogonal", ok, why);
  // Completions v_n: ones on rows >= n; sums against a staircase on such a
  // row vanish, y_i meets only row i.
  const Completions comp = completions(1);
  bool cok = true;
  for (const auto& v : vs) {
    BigRat d = 0;
    for (const auto& [k, a] : v.e) d += a * comp.v(k).coeff();
    cok = cok && (v.row < 1 || d == 0);
  }
  rep.add("completion v_1 orthogonal to stored vectors on rows >= 1", cok);
}

}  // namespace detail

inline VerifyReport verify_family(const Json& doc, const PairSelection& sel = {}) {
  VerifyReport rep;
  if (!doc.is_object() || doc.value("format", "") != "orthofam-family") throw DomainError("not a family file");
  const FamilySpec s = detail::spec_from_json(doc.at("spec"));
  rep.kind = s.kind;
  const Json& f = doc.at("family");
  if (s.kind == "comb") detail::verify_comb(s, f, sel, rep);
  else if (s.kind == "comb-full-support") detail::verify_comb_full_support(s, f, sel, rep);
  else if (s.kind == "kunen") detail::verify_kunen(s, f, sel, rep);
  else if (s.kind == "fullsupport") detail::verify_fullsupport(s, f, sel, rep);
  else if (s.kind == "l2tree") detail::verify_l2tree(s, f, sel, rep);
  else if (s.kind == "staircase") detail::verify_staircase(s, f, sel, rep);
  else if (s.kind == "grid") detail::verify_grid(s, f, sel, rep);
  else throw DomainError("unknown family kind '" + s.kind + "'");
  return rep;
}

}  // namespace orthofam
