#pragma once

// A single rational row s of length N together with requirements
// (x, k, eps): every partial sum of s(n) x(n) before k, and every window sum
// from k on, stays below eps in absolute value. Registered square summable
// sequences z are side conditions: the full sum of s(n) z(n) is exactly 0.
//
// Requirement step for x: choose eps0 below every slack, skip ahead to N0
// where every partner's products with x move by less than eps0, then append
// rho * x on [N0, N1) with N1 minimal such that the squares of x there
// exceed |b|, b = sum s x. Then rho = -b / sum x^2 has |rho| < 1, the sum
// against x falls monotonically to 0 and old requirements on x survive.
// With side conditions a short correction window placed before the block
// is solved exactly (least norm) to cancel the block's products with each z.

#include "orthofam/diagonal/registry.hpp"
#include "orthofam/diagonal/solve.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace orthofam {

struct MARequirement {
  std::string x;
  Index k = 0;
  BigRat eps;
};

struct MACondition {
  std::vector<BigRat> s;
  std::vector<std::string> F;  ///< registered ids in the condition, in order of entry
  std::vector<MARequirement> P;
  std::vector<std::string> H;  ///< square summable side conditions

  Index N() const { return s.size(); }
  bool has(const std::string& id) const { return std::find(F.begin(), F.end(), id) != F.end(); }
  void include(const std::string& id) {
    if (!has(id)) F.push_back(id);
  }
};

/// Side-condition mode: every registered square summable sequence joins H.
inline MACondition ma_start(const Registry& reg) {
  MACondition c;
  for (const auto& id : reg.ids())
    if (reg.get(id).in_l2) {
      c.H.push_back(id);
      c.F.push_back(id);
    }
  return c;
}

inline BigRat ma_inner(const MACondition& c, const RegisteredSeq& x, Index from = 0, std::optional<Index> to = std::nullopt) {
  BigRat sum = 0;
  const Index end = to.value_or(c.N());
  for (Index n = from; n < end; ++n)
    if (c.s[n] != 0) sum += c.s[n] * x(n);
  return sum;
}

inline BigRat ma_square_sum(const MACondition& c) {
  BigRat sum = 0;
  for (const auto& v : c.s) sum += v * v;
  return sum;
}

/// eps - |sum_{k<=n<N} s x|.
inline BigRat ma_slack(const MACondition& c, const Registry& reg, const MARequirement& r) {
  return r.eps - abs_rat(ma_inner(c, reg.get(r.x), r.k));
}

struct MARequirementCheck {
  MARequirement req;
  BigRat head;        ///< sum_{n<k} s x
  BigRat max_window;  ///< max over k < l <= N of |sum_{k<=n<l} s x|
  bool ok = false;
};

struct MAReport {
  std::vector<MARequirementCheck> checks;
  std::vector<std::pair<std::string, BigRat>> side_residuals;  ///< full sums against H
  BigRat square_sum;
  bool ok() const {
    for (const auto& c : checks)
      if (!c.ok) return false;
    for (const auto& [id, v] : side_residuals)
      if (v != 0) return false;
    return true;
  }
};

/// Recomputes every requirement's head and window sums and every side
/// condition from the row alone.
inline MAReport verify_ma(const MACondition& c, const Registry& reg) {
  MAReport rep;
  rep.square_sum = ma_square_sum(c);
  for (const auto& r : c.P) {
    MARequirementCheck chk;
    chk.req = r;
    const RegisteredSeq& x = reg.get(r.x);
    BigRat run = 0;
    chk.max_window = 0;
    bool in_range = r.k <= c.N();
    for (Index n = 0; n < c.N(); ++n) {
      if (n == r.k) {
        chk.head = run;
        run = 0;
      }
      if (c.s[n] != 0) {
        run += c.s[n] * x(n);
        if (n >= r.k && abs_rat(run) > chk.max_window) chk.max_window = abs_rat(run);
      }
    }
    if (r.k == c.N()) chk.head = run;
    chk.ok = in_range && abs_rat(chk.head) < r.eps && chk.max_window < r.eps;
    rep.checks.push_back(std::move(chk));
  }
  for (const auto& z : c.H) rep.side_residuals.emplace_back(z, ma_inner(c, reg.get(z)));
  return rep;
}

inline void ma_require_valid(const MACondition& c, const Registry& reg, const std::string& step) {
  const MAReport rep = verify_ma(c, reg);
  for (const auto& chk : rep.checks)
    if (!chk.ok)
      throw InvariantViolation(step + " broke requirement (" + chk.req.x + ", " + std::to_string(chk.req.k) + ", " +
                               to_string(chk.req.eps) + "): head " + to_string(chk.head) + ", window max " +
                               to_string(chk.max_window));
  for (const auto& [id, v] : rep.side_residuals)
    if (v != 0) throw InvariantViolation(step + " left side condition " + id + " at " + to_string(v));
}

namespace detail {

inline BigRat ma_min_slack(const MACondition& c, const Registry& reg, const BigRat& cap) {
  BigRat m = cap;
  for (const auto& r : c.P) m = std::min(m, ma_slack(c, reg, r));
  if (m <= 0) throw InvariantViolation("a requirement has no slack left");
  return m;
}

inline std::vector<std::string> ma_partners(const MACondition& c, const std::string& x) {
  std::vector<std::string> out;
  for (const auto& r : c.P)
    if (r.x != x && std::find(out.begin(), out.end(), r.x) == out.end()) out.push_back(r.x);
  return out;
}

inline PairInfo ma_pair(const Registry& reg, const std::string& x, const std::string& y) {
  auto p = reg.pair(x, y);
  if (!p) throw Unverifiable("no convergence modulus for the pair (" + x + ", " + y + ")");
  return *p;
}

/// Side conditions whose support is infinite; finite ones are passed by
/// skipping beyond their support.
inline std::vector<std::string> ma_infinite_side(const MACondition& c, const Registry& reg) {
  std::vector<std::string> out;
  for (const auto& z : c.H)
    if (!reg.get(z).support_end) out.push_back(z);
  return out;
}

inline Index ma_side_skip(const MACondition& c, const Registry& reg, Index n) {
  for (const auto& z : c.H)
    if (const auto e = reg.get(z).support_end) n = std::max(n, *e);
  return n;
}

struct Window {
  Index start = 0;
  Index length = 0;
  bool includes_x = false;
};

/// Shortest window from `start` on which the restrictions of the infinite
/// side conditions (and x, when possible) are independent.
inline Window ma_choose_window(const Registry& reg, const std::vector<std::string>& zs, const std::string* x, Index start,
                               Index max_length) {
  for (int with_x = x ? 1 : 0; with_x >= 0; --with_x) {
    const Index need = zs.size() + static_cast<Index>(with_x);
    for (Index len = need; len <= max_length; ++len) {
      Matrix<BigRat> rows;
      for (const auto& z : zs) {
        std::vector<BigRat> r;
        for (Index n = start; n < start + len; ++n) r.push_back(reg.get(z)(n));
        rows.push_back(std::move(r));
      }
      if (with_x) {
        std::vector<BigRat> r;
        for (Index n = start; n < start + len; ++n) r.push_back(reg.get(*x)(n));
        rows.push_back(std::move(r));
      }
      if (!find_dependency(rows, BigRat(0))) return {start, len, with_x == 1};
    }
  }
  throw DomainError("no window of length <= " + std::to_string(max_length) +
                    " makes the side conditions independent; they may be linearly dependent");
}

/// Appends zeros up to `to`.
inline void ma_pad(MACondition& c, Index to) {
  if (to > c.N()) c.s.resize(to, BigRat(0));
}

/// Appends block values on [start, start + block.size()) after a correction
/// window, keeping every infinite side condition exact. `movers` are the
/// sequences whose partial sums may move by at most `budget` inside the
/// window. block_at(start) builds the block given its first index; it is
/// called again with a later start whenever the correction is too large.
template <class BlockAt>
void ma_place_with_side(MACondition& c, const Registry& reg, const std::vector<std::string>& zs, const std::string* x,
                        Index n0, const std::vector<std::string>& movers, const BigRat& budget, BlockAt block_at,
                        const std::function<Index(const BigRat&)>& block_start_for) {
  const Window w = ma_choose_window(reg, zs, x, n0, 64);
  BigRat tol = budget;
  for (int attempt = 0; attempt < 200; ++attempt, tol /= 2) {
    const Index start = std::max<Index>(w.start + w.length, block_start_for(tol));
    const std::vector<BigRat> block = block_at(start);
    std::vector<std::vector<BigRat>> v;
    std::vector<BigRat> beta;
    for (const auto& zid : zs) {
      const RegisteredSeq& z = reg.get(zid);
      std::vector<BigRat> r;
      for (Index n = w.start; n < w.start + w.length; ++n) r.push_back(z(n));
      v.push_back(std::move(r));
      BigRat b = ma_inner(c, z);
      for (Index i = 0; i < block.size(); ++i)
        if (block[i] != 0) b += block[i] * z(start + i);
      beta.push_back(-b);
    }
    if (w.includes_x) {
      std::vector<BigRat> r;
      for (Index n = w.start; n < w.start + w.length; ++n) r.push_back(reg.get(*x)(n));
      v.push_back(std::move(r));
      beta.push_back(BigRat(0));
    }
    const TargetSolution t = solve_targets(v, beta);
    bool small = true;
    for (const auto& yid : movers) {
      const RegisteredSeq& y = reg.get(yid);
      BigRat bound = 0;
      for (Index i = 0; i < w.length; ++i) bound += abs_rat(t.t[i] * y(w.start + i));
      if (bound >= budget) small = false;
    }
    if (!small) continue;
    ma_pad(c, w.start);
    for (const auto& v2 : t.t) c.s.push_back(v2);
    ma_pad(c, start);
    for (const auto& v2 : block) c.s.push_back(v2);
    return;
  }
  throw DomainError("side-condition correction stayed too large");
}

}  // namespace detail

struct MAStep {
  Index n0 = 0;
  Index n1 = 0;  ///< end of the rho block
  BigRat b;
  BigRat rho;
  BigRat eps0;
};

/// Adds (x, N1, eps). x must be registered; square summable x must be a side
/// condition, in which case the requirement holds at once.
inline MACondition ma_add_requirement(MACondition c, const Registry& reg, const std::string& xid, const BigRat& eps,
                                      MAStep* info = nullptr) {
  if (eps <= 0) throw DomainError("requirement eps must be positive");
  const RegisteredSeq& x = reg.get(xid);
  if (x.in_l2) {
    if (std::find(c.H.begin(), c.H.end(), xid) == c.H.end())
      throw DomainError(xid + " is square summable; register it as a side condition");
    c.P.push_back({xid, c.N(), eps});
    ma_require_valid(c, reg, "requirement on " + xid);
    return c;
  }
  c.include(xid);
  const auto partners = detail::ma_partners(c, xid);
  const auto zs = detail::ma_infinite_side(c, reg);
  const BigRat slack = detail::ma_min_slack(c, reg, eps);
  const BigRat eps0 = largest_power_of_half_below(slack);
  const BigRat move = zs.empty() ? eps0 : eps0 / 2;
  Index n0 = detail::ma_side_skip(c, reg, c.N());
  for (const auto& y : partners) n0 = std::max(n0, detail::ma_pair(reg, xid, y).modulus_at(move));

  MAStep st;
  st.eps0 = eps0;
  auto rho_block = [&](Index start) {
    st.n0 = start;
    st.b = ma_inner(c, x);
    if (st.b == 0) {
      st.n1 = start;
      st.rho = 0;
      return std::vector<BigRat>{};
    }
    const BigRat target = abs_rat(st.b);
    st.n1 = x.divergence(start, target);
    BigRat sq = 0, sq_short = 0;
    for (Index n = start; n < st.n1; ++n) {
      sq_short = sq;
      sq += x(n) * x(n);
    }
    if (!(sq > target) || sq_short > target) throw InvariantViolation("divergence witness for " + xid + " is not minimal");
    st.rho = -st.b / sq;
    std::vector<BigRat> out;
    for (Index n = start; n < st.n1; ++n) out.push_back(st.rho * x(n));
    return out;
  };
  if (zs.empty()) {
    const auto block = rho_block(n0);
    detail::ma_pad(c, n0);
    c.s.insert(c.s.end(), block.begin(), block.end());
  } else {
    std::vector<std::string> movers = partners;
    movers.push_back(xid);
    for (const auto& z : zs) {
      if (std::find(movers.begin(), movers.end(), z) == movers.end()) movers.push_back(z);
    }
    auto start_for = [&](const BigRat& tol) {
      Index s = 0;
      for (const auto& z : zs) s = std::max(s, detail::ma_pair(reg, xid, z).modulus_at(tol));
      for (const auto& y : partners) s = std::max(s, detail::ma_pair(reg, xid, y).modulus_at(move));
      return s;
    };
    detail::ma_place_with_side(c, reg, zs, &xid, n0, movers, move, rho_block, start_for);
  }
  // The block and the correction leave sum s x at 0 when x joined the
  // window; otherwise a small remainder is left and checked below.
  c.P.push_back({xid, c.N(), eps});
  ma_require_valid(c, reg, "requirement on " + xid);
  if (info) *info = st;
  return c;
}

struct GrowthInfo {
  std::string donor;
  bool constrained = false;  ///< donor already carries requirements
  Index start = 0;
  Index end = 0;
};

namespace detail {

inline bool ma_unconstrained_ok(const MACondition& c, const Registry& reg, const std::string& d) {
  const RegisteredSeq& x = reg.get(d);
  if (x.in_l2) return false;
  for (const auto& r : c.P)
    if (r.x == d || !reg.pair(d, r.x)) return false;
  for (const auto& z : ma_infinite_side(c, reg))
    if (!reg.pair(d, z)) return false;
  return true;
}

/// A donor with requirements can still be used when its products with every
/// other requirement sequence vanish from some index on and there are no
/// infinite side conditions.
inline std::optional<Index> ma_constrained_start(const MACondition& c, const Registry& reg, const std::string& d) {
  const RegisteredSeq& x = reg.get(d);
  if (x.in_l2 || !ma_infinite_side(c, reg).empty()) return std::nullopt;
  Index start = ma_side_skip(c, reg, c.N());
  for (const auto& r : c.P) {
    if (r.x == d) continue;
    const auto p = reg.pair(d, r.x);
    if (!p || !p->disjoint_from) return std::nullopt;
    start = std::max(start, *p->disjoint_from);
  }
  return start;
}

}  // namespace detail

/// Extends the row until its square sum exceeds l. The donor is the given id
/// or else the first registered sequence outside l2 with no requirement; the
/// row copies it on [N0, N1). Without such a donor, a donor with
/// requirements is used through pairs of entries +w/x(n), -w/x(m) on its
/// support, w below its slack, which return the sum against it to its old
/// value after every pair.
inline MACondition ma_grow_norm(MACondition c, const Registry& reg, const BigRat& l,
                                std::optional<std::string> donor = std::nullopt, GrowthInfo* info = nullptr,
                                Index max_length = 10'000'000) {
  GrowthInfo g;
  const BigRat have = ma_square_sum(c);
  if (have > l) {
    if (info) *info = g;
    return c;
  }
  if (!donor) {
    for (const auto& id : reg.ids())
      if (detail::ma_unconstrained_ok(c, reg, id)) {
        donor = id;
        break;
      }
  }
  if (!donor) {
    for (const auto& id : reg.ids())
      if (detail::ma_constrained_start(c, reg, id)) {
        donor = id;
        g.constrained = true;
        break;
      }
  }
  if (!donor) throw DomainError("no eligible donor sequence; register a sequence outside l2 without requirements");
  g.donor = *donor;
  const RegisteredSeq& x = reg.get(*donor);
  if (x.in_l2) throw DomainError("donor " + *donor + " is square summable");

  if (!g.constrained && detail::ma_unconstrained_ok(c, reg, *donor)) {
    const auto zs = detail::ma_infinite_side(c, reg);
    const BigRat eps0 = largest_power_of_half_below(detail::ma_min_slack(c, reg, BigRat(1)));
    const BigRat move = zs.empty() ? eps0 : eps0 / 2;
    std::vector<std::string> partners;
    for (const auto& r : c.P)
      if (std::find(partners.begin(), partners.end(), r.x) == partners.end()) partners.push_back(r.x);
    Index n0 = detail::ma_side_skip(c, reg, c.N());
    for (const auto& y : partners) n0 = std::max(n0, detail::ma_pair(reg, *donor, y).modulus_at(move));
    auto copy_block = [&](Index start) {
      g.start = start;
      g.end = x.divergence(start, l - have);
      if (g.end - start > max_length) throw DomainError("norm growth needs more than the length budget");
      std::vector<BigRat> out;
      for (Index n = start; n < g.end; ++n) out.push_back(x(n));
      return out;
    };
    if (zs.empty()) {
      const auto block = copy_block(n0);
      detail::ma_pad(c, n0);
      c.s.insert(c.s.end(), block.begin(), block.end());
    } else {
      std::vector<std::string> movers = partners;
      for (const auto& z : zs)
        if (std::find(movers.begin(), movers.end(), z) == movers.end()) movers.push_back(z);
      auto start_for = [&](const BigRat& tol) {
        Index s = 0;
        for (const auto& z : zs) s = std::max(s, detail::ma_pair(reg, *donor, z).modulus_at(tol));
        for (const auto& y : partners) s = std::max(s, detail::ma_pair(reg, *donor, y).modulus_at(move));
        return s;
      };
      detail::ma_place_with_side(c, reg, zs, nullptr, n0, movers, move, copy_block, start_for);
    }
  } else {
    const auto start = detail::ma_constrained_start(c, reg, *donor);
    if (!start) throw DomainError("donor " + *donor + " cannot be used without breaking its partners");
    g.constrained = true;
    BigRat slack = BigRat(1);
    for (const auto& r : c.P)
      if (r.x == *donor) slack = std::min(slack, ma_slack(c, reg, r));
    const BigRat w = largest_power_of_half_below(slack);
    detail::ma_pad(c, *start);
    g.start = *start;
    BigRat sq = ma_square_sum(c);
    std::optional<BigRat> pending;  // x(n) of the first entry of an open pair
    Index n = *start;
    while (sq <= l || pending) {
      if (n - *start > max_length) throw DomainError("norm growth needs more than the length budget");
      const BigRat v = x(n);
      if (v == 0) {
        c.s.push_back(BigRat(0));
      } else if (!pending) {
        c.s.push_back(w / v);
        pending = v;
      } else {
        c.s.push_back(-w / v);
        pending.reset();
      }
      sq += c.s.back() * c.s.back();
      ++n;
    }
    g.end = n;
  }
  ma_require_valid(c, reg, "norm growth with " + *donor);
  if (ma_square_sum(c) <= l) throw InvariantViolation("norm growth fell short");
  if (info) *info = g;
  return c;
}

struct Goal {
  enum class Kind { Requirement, Norm } kind = Kind::Requirement;
  std::string x;
  BigRat value;  ///< eps or l
};

struct DiagonalReport {
  MACondition condition;
  MAReport report;
  std::vector<std::string> steps;
};

/// Meets the goals in order, starting from the empty row; square summable
/// registered sequences become side conditions.
inline DiagonalReport diagonalize(const Registry& reg, const std::vector<Goal>& goals) {
  DiagonalReport out;
  MACondition c = ma_start(reg);
  for (const auto& g : goals) {
    if (g.kind == Goal::Kind::Requirement) {
      MAStep st;
      c = ma_add_requirement(std::move(c), reg, g.x, g.value, &st);
      out.steps.push_back("REQ " + g.x + " " + to_string(g.value) + ": N0=" + std::to_string(st.n0) +
                          " N1=" + std::to_string(st.n1) + " rho=" + to_string(st.rho) + " eps0=" + to_string(st.eps0));
    } else {
      GrowthInfo gi;
      c = ma_grow_norm(std::move(c), reg, g.value, std::nullopt, &gi);
      out.steps.push_back("NORM " + to_string(g.value) + ": donor=" + (gi.donor.empty() ? "-" : gi.donor) +
                          (gi.constrained ? " (paired entries)" : "") + " [" + std::to_string(gi.start) + ", " +
                          std::to_string(gi.end) + ")");
    }
  }
  out.report = verify_ma(c, reg);
  out.condition = std::move(c);
  return out;
}

}  // namespace orthofam
