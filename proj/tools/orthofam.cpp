#include "orthofam/cli/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace orthofam;

namespace {

BigInt parse_budget(const std::string& s) {
  try {
    const BigInt b = parse_int(s);
    if (b < 1) throw UsageError("");
    return b;
  } catch (const std::exception&) {
    throw UsageError("--budget must be a positive integer, got '" + s + "'");
  }
}

int emit(const CommandResult& r, const std::string& out) {
  if (out.empty()) std::cout << dump(r.output);
  else write_text(out, dump(r.output));
  return r.code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact orthogonal families of real sequences"};
  app.require_subcommand(1);

  std::string family, out, in, pairs = "all", p, script, budget = "10000000", report_kind;
  unsigned depth = 0, stages = 0;
  std::vector<std::string> params;

  auto* gen = app.add_subcommand("generate", "Build a family and write its family file");
  gen->add_option("--family", family, "comb, comb-full-support, kunen, fullsupport, l2tree, staircase or grid")->required();
  gen->add_option("--depth", depth, "Levels (comb, kunen, l2tree, comb-full-support), length (staircase) or rows (grid)");
  gen->add_option("--stages", stages, "Stages for fullsupport");
  gen->add_option("--budget", budget, "Index budget for comb layouts");
  gen->add_option("--param", params, "Extra key=value parameter (h0, b0, cols)");
  gen->add_option("--out", out, "Output file (stdout when omitted)");

  auto* ver = app.add_subcommand("verify", "Recheck every certificate in a family file");
  ver->add_option("--in", in, "Family file")->required();
  ver->add_option("--pairs", pairs, "'all' or a sample size");
  ver->add_option("--out", out, "Report file (stdout when omitted)");

  auto* wit = app.add_subcommand("witness", "Find a member with nonzero inner product against a vector");
  wit->add_option("--family", family, "kunen or l2tree")->required();
  wit->add_option("--in", in, "Vector: JSON array or whitespace separated rationals")->required();
  wit->add_option("--depth", depth, "Depth limit for the tree (default 64)");

  auto* rep = app.add_subcommand("report", "Exact reports: lp, height-series, complement");
  rep->add_option("kind", report_kind, "lp, height-series or complement")->required();
  rep->add_option("--family", family, "Family the report applies to (checked)");
  rep->add_option("--p", p, "Exponent");
  rep->add_option("--stages", stages, "Stages for height-series");
  rep->add_option("--depth", depth, "Depth for lp (comb) or complement");
  rep->add_option("--budget", budget, "Index budget for comb layouts");

  auto* dia = app.add_subcommand("diagonalize", "Run a diagonalization script");
  dia->add_option("--script", script, "Script file")->required();
  dia->add_option("--out", out, "Row file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*gen) {
      FamilySpec s;
      s.kind = family;
      if (std::find(family_kinds().begin(), family_kinds().end(), family) == family_kinds().end())
        throw UsageError("unknown family kind '" + family + "'");
      if (stages && family != "fullsupport") throw UsageError("--stages applies to fullsupport only");
      if (stages && depth && stages != depth) throw UsageError("--stages and --depth disagree");
      s.depth = stages ? stages : (depth ? depth : default_depth(family));
      for (const auto& kv : params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("--param takes key=value, got '" + kv + "'");
        s.params[kv.substr(0, eq)] = kv.substr(eq + 1);
      }
      const CommandResult r = cmd_generate(s, parse_budget(budget));
      return emit(r, out);
    }
    if (*ver) {
      const PairSelection sel = parse_pairs(pairs);
      const CommandResult r = cmd_verify(read_text(in), sel);
      if (r.code != kPass) std::cerr << "verification failed\n";
      return emit(r, out);
    }
    if (*wit) return emit(cmd_witness(family, parse_vector(read_text(in)), depth ? depth : 64), "");
    if (*rep) {
      const char* fam = report_family(report_kind);
      if (!family.empty() && family != fam)
        throw UsageError("report " + report_kind + " applies to " + fam + ", not " + family);
      if (report_kind == "lp") {
        BigRat pv;
        try {
          pv = parse_rat(p.empty() ? "5/2" : p);
        } catch (const std::exception&) {
          throw UsageError("--p must be rational");
        }
        return emit(report_lp(pv, depth ? depth : 2, parse_budget(budget)), "");
      }
      if (report_kind == "height-series") {
        unsigned long pv = 2;
        if (!p.empty()) {
          try {
            const BigInt b = parse_int(p);
            if (b < 1 || b > 64) throw UsageError("");
            pv = b.get_ui();
          } catch (const std::exception&) {
            throw UsageError("height-series needs an integer --p in [1, 64]");
          }
        }
        return emit(report_height_series(static_cast<unsigned>(pv), stages ? stages : 5), "");
      }
      return emit(report_complement(depth ? depth : 7), "");
    }
    if (*dia) {
      const CommandResult r = cmd_diagonalize(read_text(script));
      if (!out.empty() && r.artifact) write_text(out, dump(*r.artifact));
      return emit(r, "");
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const BlockBudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
