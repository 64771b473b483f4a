#pragma once

// Subcommands behind the orthofam binary. Each returns a JSON document and an
// exit code; the binary only parses flags and does the I/O.

#include "orthofam/cli/family.hpp"
#include "orthofam/diagonal.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace orthofam {

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2 };

struct CommandResult {
  Json output;
  int code = kPass;
  std::optional<Json> artifact;  ///< row file for diagonalize
};

inline std::string approx_str(const RadicalSum& v) {
  std::ostringstream os;
  os << std::setprecision(12) << approx(v, 80).mid_double();
  return os.str();
}

inline std::string approx_str(const BigRat& v) { return approx_str(RadicalSum(v)); }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
  if (!out) throw UsageError("write to " + path + " failed");
}

/// Pretty JSON with a trailing newline; ordered keys keep it byte-stable.
inline std::string dump(const Json& j) { return j.dump(1) + "\n"; }

// ----------------------------------------------------------------- generate

inline CommandResult cmd_generate(const FamilySpec& spec, const BigInt& budget) {
  return {generate_family(spec, budget), kPass};
}

// ------------------------------------------------------------------- verify

inline CommandResult cmd_verify(const std::string& text, const PairSelection& sel) {
  CommandResult r;
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    r.output = Json{{"ok", false}, {"error", std::string("malformed family file: ") + e.what()}};
    r.code = kFail;
    return r;
  }
  VerifyReport rep;
  try {
    rep = verify_family(doc, sel);
  } catch (const std::exception& e) {
    // Content that cannot be read back is a failed certificate, not a usage error.
    r.output = Json{{"ok", false}, {"error", e.what()}};
    r.code = kFail;
    return r;
  }
  Json checks = Json::array();
  for (const auto& c : rep.checks) {
    Json cj{{"check", c.name}, {"ok", c.ok}};
    if (!c.detail.empty()) cj["detail"] = c.detail;
    checks.push_back(cj);
  }
  std::size_t failed = 0;
  for (const auto& c : rep.checks) failed += c.ok ? 0 : 1;
  r.output = Json{{"kind", rep.kind},
                  {"pairs", sel.all ? std::string("all") : std::to_string(sel.k)},
                  {"ok", rep.ok()},
                  {"checks_run", rep.checks.size()},
                  {"checks_failed", failed},
                  {"checks", checks}};
  r.code = rep.ok() ? kPass : kFail;
  return r;
}

// ------------------------------------------------------------------ witness

/// A JSON array of exact scalars or rational strings, or whitespace
/// separated rationals.
inline std::vector<BigRat> parse_vector(const std::string& text) {
  std::vector<BigRat> v;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error&) {
      throw UsageError("vector file is not valid JSON");
    }
    for (const auto& e : j) {
      try {
        if (e.is_string()) v.push_back(parse_rat(e.get<std::string>()));
        else if (e.is_number_integer()) v.push_back(BigRat(BigInt(e.dump())));
        else v.push_back(rational_from_json(e));
      } catch (const std::exception&) {
        throw UsageError("vector entry " + e.dump() + " is not rational");
      }
    }
    return v;
  }
  std::istringstream in(text);
  for (std::string t; in >> t;) {
    try {
      v.push_back(parse_rat(t));
    } catch (const std::exception&) {
      throw UsageError("vector entry '" + t + "' is not rational");
    }
  }
  return v;
}

inline CommandResult cmd_witness(const std::string& family, const std::vector<BigRat>& x, std::size_t max_depth = 64) {
  if (std::all_of(x.begin(), x.end(), [](const BigRat& v) { return v == 0; })) throw UsageError("witness needs a nonzero vector");
  std::size_t end = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0) end = i + 1;
  if (end + 1 > max_depth) throw UsageError("support length " + std::to_string(end) + " exhausts the depth limit");
  CommandResult r;
  if (family == "kunen") {
    KunenTree t = kunen_tree(1);
    const KunenWitness w = maximality_witness(t, x);
    r.output = Json{{"family", "kunen"},
                    {"level", w.start_level},
                    {"node", to_json_vec(w.s)},
                    {"head", to_json_sum(w.head)},
                    {"branch_prefix", to_json_vec(w.prefix)},
                    {"value", to_json_sum(w.value)},
                    {"value_approx", approx_str(w.value)},
                    {"inequality", "|value| >= |(s, x|n)| > 0"},
                    {"inequality_holds", w.dominates}};
    r.code = w.value.is_zero() ? kFail : kPass;
    return r;
  }
  if (family == "l2tree") {
    auto t = std::make_shared<SharedUnequalTree>();
    t->tree = unequal_tree(1);
    const L2Witness w = l2_witness(t, x, max_depth);
    Json prefix = Json::array();
    for (std::size_t m = 0; m <= w.level; ++m) prefix.push_back(to_json_scalar(w.y(static_cast<Index>(m)).coeff()));
    BigRat delta;
    {
      std::lock_guard<std::mutex> lock(t->mu);
      delta = t->tree.delta(w.level);
    }
    r.output = Json{{"family", "l2tree"},
                    {"level", w.level},
                    {"scale", to_json_scalar(w.scale)},
                    {"node", to_json_vec(w.s)},
                    {"branch_prefix", prefix},
                    {"value", to_json_scalar(w.value)},
                    {"value_approx", approx_str(w.value)},
                    {"m_sq", to_json_scalar(w.m_sq)},
                    {"delta", to_json_scalar(delta)},
                    {"inequality", "(s, c x)^2 >= m^2 and |(s, c x)| >= 4 delta"},
                    {"inequality_holds", w.head_above_m && w.head_above_4delta}};
    r.code = w.value == 0 ? kFail : kPass;
    return r;
  }
  throw UsageError("witness family must be kunen or l2tree, got '" + family + "'");
}

// ------------------------------------------------------------------- report

inline CommandResult report_lp(const BigRat& p, unsigned depth, const BigInt& budget) {
  if (p <= 2) throw UsageError("lp report needs p > 2");
  const CombParams c = comb_params(depth, default_exponent, budget);
  const CombLpReport rep = comb_lp_report(c, CombPath{{0}, 0}, p);
  Json levels = Json::array();
  bool ok = true;
  for (const auto& [n, holds] : rep.level_checks) {
    levels.push_back(Json{{"n", n}, {"inequality", "eps_n^p_n * k_n <= 1/n^2"}, {"holds", holds}});
    ok = ok && holds;
  }
  CommandResult r;
  r.output = Json{{"report", "lp"},
                  {"family", "comb"},
                  {"depth", depth},
                  {"p", to_json_scalar(p)},
                  {"n0", rep.n0},
                  {"p_n0", to_json_scalar(c.p[rep.n0 <= c.depth ? rep.n0 : c.depth])},
                  {"head_lower", to_json_scalar(rep.partial.lo)},
                  {"head_upper", to_json_scalar(rep.partial.hi)},
                  {"head_approx", std::to_string(rep.partial.mid_double())},
                  {"tail_bound", to_json_scalar(rep.tail_bound)},
                  {"level_checks", levels},
                  {"ok", ok}};
  r.code = ok ? kPass : kFail;
  return r;
}

inline CommandResult report_height_series(unsigned p, unsigned stages) {
  if (stages < 1 || stages > 7) throw UsageError("stages must lie in [1, 7]");
  const FullSupportBuild b = build_perfect_family(2, default_seed(2), stages);
  const HeightSeries hs = height_series(b, p);
  Json contrib = Json::array();
  for (const auto& [l, v] : hs.stage_contributions) contrib.push_back(Json{{"stage", l}, {"sum", to_json_scalar(v)}});
  CommandResult r;
  r.output = Json{{"report", "height-series"},
                  {"family", "fullsupport"},
                  {"stages", stages},
                  {"p", p},
                  {"sum", to_json_scalar(hs.sum)},
                  {"sum_approx", approx_str(hs.sum)},
                  {"lower_bound", to_json_scalar(hs.lower_bound)},
                  {"inequality", "sum_n h(n)^p >= #{l : p <= l <= stages}"},
                  {"stage_contributions", contrib},
                  {"ok", hs.holds}};
  r.code = hs.holds ? kPass : kFail;
  return r;
}

inline CommandResult report_complement(unsigned depth) {
  if (depth < 2 || depth > 256) throw UsageError("complement depth must lie in [2, 256]");
  const ComplementBasis cb = complement_basis(depth);
  Json basis = Json::array();
  for (const auto& v : cb.basis) basis.push_back(to_json_vec(v));
  CommandResult r;
  const bool ok = cb.basis.size() == 1 && cb.ones_direction && cb.triangular_system;
  r.output = Json{{"report", "complement"},
                  {"family", "staircase"},
                  {"depth", depth},
                  {"dimension", cb.basis.size()},
                  {"basis", basis},
                  {"ones_direction", cb.ones_direction},
                  {"triangular_system", cb.triangular_system},
                  {"ok", ok}};
  r.code = ok ? kPass : kFail;
  return r;
}

inline const char* report_family(const std::string& kind) {
  if (kind == "lp") return "comb";
  if (kind == "height-series") return "fullsupport";
  if (kind == "complement") return "staircase";
  throw UsageError("report kind must be lp, height-series or complement, got '" + kind + "'");
}

// -------------------------------------------------------------- diagonalize

/// Row file: run-length encoded entries of s.
inline Json row_json(const std::vector<BigRat>& s) {
  Json runs = Json::array();
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t j = i + 1;
    while (j < s.size() && s[j] == s[i]) ++j;
    runs.push_back(Json{{"from", std::to_string(i)}, {"count", std::to_string(j - i)}, {"value", to_json_scalar(s[i])}});
    i = j;
  }
  return Json{{"format", "orthofam-row"}, {"version", 1}, {"length", std::to_string(s.size())}, {"runs", runs}};
}


inline CommandResult cmd_diagonalize(const std::string& script_text) {
  Script sc;
  try {
    sc = parse_script(script_text);
  } catch (const ScriptError& e) {
    throw UsageError(e.what());
  }
  const DiagonalReport d = diagonalize(sc.registry, sc.goals);
  Json goals = Json::array();
  bool all = d.report.ok();
  for (const auto& g : sc.goals) {
    if (g.kind == Goal::Kind::Norm) {
      const bool met = d.report.square_sum > g.value;
      goals.push_back(Json{{"goal", "NORM"}, {"l", to_json_scalar(g.value)}, {"met", met}});
      all = all && met;
    } else {
      bool met = false;
      for (const auto& c : d.report.checks)
        if (c.req.x == g.x && c.req.eps <= g.value) met = met || c.ok;
      if (std::find(d.condition.H.begin(), d.condition.H.end(), g.x) != d.condition.H.end()) met = true;
      goals.push_back(Json{{"goal", "REQ"}, {"x", g.x}, {"eps", to_json_scalar(g.value)}, {"met", met}});
      all = all && met;
    }
  }
  Json checks = Json::array();
  for (const auto& c : d.report.checks)
    checks.push_back(Json{{"x", c.req.x},
                          {"k", std::to_string(c.req.k)},
                          {"eps", to_json_scalar(c.req.eps)},
                          {"head", to_json_scalar(c.head)},
                          {"max_window", to_json_scalar(c.max_window)},
                          {"ok", c.ok}});
  Json side = Json::array();
  for (const auto& [id, v] : d.report.side_residuals) side.push_back(Json{{"x", id}, {"inner", to_json_scalar(v)}});
  Json steps = Json::array();
  for (const auto& s : d.steps) steps.push_back(s);
  CommandResult r;
  r.output = Json{{"length", std::to_string(d.condition.N())},
                  {"square_sum", to_json_scalar(d.report.square_sum)},
                  {"square_sum_approx", approx_str(d.report.square_sum)},
                  {"steps", steps},
                  {"goals", goals},
                  {"checkpoints", checks},
                  {"side_conditions", side},
                  {"ok", all}};
  r.code = all ? kPass : kFail;
  r.artifact = row_json(d.condition.s);
  return r;
}

}  // namespace orthofam
