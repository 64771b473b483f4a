#pragma once

// Goal scripts, one directive per line, '#' starts a comment:
//   SEQ <id> ones | even | odd | mod <k> <r> | harmonic-signs | finite <q>...
//   REQ <id> <eps>
//   NORM <l>
// Sequences must be declared before goals mention them.

#include "orthofam/diagonal/condition.hpp"

#include <istream>
#include <sstream>
#include <string>
#include <vector>

namespace orthofam {

class ScriptError : public DomainError {
 public:
  ScriptError(std::size_t line, const std::string& what) : DomainError("line " + std::to_string(line) + ": " + what), line_no(line) {}
  std::size_t line_no;
};

struct Script {
  Registry registry;
  std::vector<Goal> goals;
};

inline Script parse_script(std::istream& in) {
  Script sc;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    auto rat = [&](const std::string& s) {
      try {
        return parse_rat(s);
      } catch (const std::exception& e) {
        throw ScriptError(no, "bad number '" + s + "'");
      }
    };
    auto count = [&](const std::string& s) {
      const BigRat v = rat(s);
      if (v < 0 || v.get_den() != 1 || !v.get_num().fits_ulong_p()) throw ScriptError(no, "expected a small nonnegative integer, got '" + s + "'");
      return v.get_num().get_ui();
    };
    const std::string& cmd = tok[0];
    if (cmd == "SEQ") {
      if (tok.size() < 3) throw ScriptError(no, "SEQ needs an id and a kind");
      const std::string& id = tok[1];
      const std::string& kind = tok[2];
      if (sc.registry.contains(id)) throw ScriptError(no, "sequence " + id + " declared twice");
      if (kind == "ones" && tok.size() == 3) sc.registry.add(residue_class_seq(id, 1, 0));
      else if (kind == "even" && tok.size() == 3) sc.registry.add(residue_class_seq(id, 2, 0));
      else if (kind == "odd" && tok.size() == 3) sc.registry.add(residue_class_seq(id, 2, 1));
      else if (kind == "mod" && tok.size() == 5) {
        const auto k = count(tok[3]), r = count(tok[4]);
        if (k == 0 || r >= k) throw ScriptError(no, "mod needs 0 <= r < k");
        sc.registry.add(residue_class_seq(id, k, r));
      } else if (kind == "harmonic-signs" && tok.size() == 3) sc.registry.add(harmonic_signs_seq(id));
      else if (kind == "finite" && tok.size() >= 4) {
        std::vector<BigRat> v;
        for (std::size_t i = 3; i < tok.size(); ++i) v.push_back(rat(tok[i]));
        sc.registry.add(finite_seq(id, std::move(v)));
      } else {
        throw ScriptError(no, "unknown sequence kind or wrong arguments: " + kind);
      }
    } else if (cmd == "REQ") {
      if (tok.size() != 3) throw ScriptError(no, "REQ needs an id and eps");
      if (!sc.registry.contains(tok[1])) throw ScriptError(no, "sequence " + tok[1] + " is not declared");
      const BigRat eps = rat(tok[2]);
      if (eps <= 0) throw ScriptError(no, "eps must be positive");
      sc.goals.push_back({Goal::Kind::Requirement, tok[1], eps});
    } else if (cmd == "NORM") {
      if (tok.size() != 2) throw ScriptError(no, "NORM needs one bound");
      const BigRat l = rat(tok[1]);
      if (l < 0) throw ScriptError(no, "norm bound must be nonnegative");
      sc.goals.push_back({Goal::Kind::Norm, "", l});
    } else {
      throw ScriptError(no, "unknown directive " + cmd);
    }
  }
  return sc;
}

inline Script parse_script(const std::string& text) {
  std::istringstream in(text);
  return parse_script(in);
}

}  // namespace orthofam
