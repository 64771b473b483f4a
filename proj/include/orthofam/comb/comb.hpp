#pragma once

// The comb family: one sequence per infinite 0/1 path, pairwise orthogonal and
// inside every l_p with p > 2. Node s of length n owns a block F_s of k_n
// consecutive indices; blocks are laid out level by level, lexicographically
// inside a level.

#include "orthofam/exact/interval.hpp"
#include "orthofam/exact/radical.hpp"
#include "orthofam/exact/radical_sum.hpp"
#include "orthofam/sequences/inner.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace orthofam {

class BlockBudgetExceeded : public DomainError {
 public:
  BlockBudgetExceeded(unsigned level, const BigInt& needed, const BigInt& budget)
      : DomainError("block budget exceeded at level " + std::to_string(level) + ": layout needs " + needed.get_str() +
                    " indices, budget is " + budget.get_str()),
        level(level) {}
  unsigned level;
};

/// Level -> exponent p_n > 2, decreasing to 2.
using ExponentRule = std::function<BigRat(unsigned)>;

/// p_n = 2 + 1/(n+1).
inline BigRat default_exponent(unsigned n) { return BigRat(2) + make_rat(1, static_cast<long>(n) + 1); }

struct CombParams {
  unsigned depth = 0;  ///< levels 0..depth are laid out
  ExponentRule p_rule = default_exponent;
  std::vector<BigRat> p;        ///< p_n
  std::vector<BigInt> r;        ///< r_0 = 1, r_{n+1} = sum_{i<=n} r_i
  std::vector<BigInt> k;        ///< block size at level n
  std::vector<BigRat> eps_sq;   ///< r_n / k_n
  std::vector<BigInt> start;    ///< first index of level n; start[depth+1] is the layout end
  std::vector<Radical> eps;     ///< sqrt(eps_sq)
  Radical root_weight;          ///< sqrt(2) * eps_0

  BigInt layout_end() const { return start.back(); }
  BigInt block_offset(unsigned level, const BigInt& lex_rank) const { return start[level] + lex_rank * k[level]; }
};

namespace detail {

/// Smallest k with k^(a-2b) >= n^(4b) * r^a, where p = a/b > 2. Both sides
/// are integers, so the root is taken exactly and rounded up.
inline BigInt min_k_power_condition(unsigned n, const BigInt& r, const BigRat& p) {
  const unsigned long a = p.get_num().get_ui();
  const unsigned long b = p.get_den().get_ui();
  const BigInt rhs = pow_int(BigInt(n), 4 * b) * pow_int(r, a);
  const unsigned long e = a - 2 * b;
  bool exact = false;
  BigInt k = int_root(rhs, e, &exact);
  if (!exact) k += 1;
  return k;
}

}  // namespace detail

/// Checks k^(a-2b) >= n^(4b) * r^a exactly.
inline bool k_condition_holds(unsigned n, const BigInt& r, const BigRat& p, const BigInt& k) {
  const unsigned long a = p.get_num().get_ui();
  const unsigned long b = p.get_den().get_ui();
  return pow_int(k, a - 2 * b) >= pow_int(BigInt(n), 4 * b) * pow_int(r, a);
}

/// Checks eps_n^(p_n) * k_n <= 1/n^2 for n >= 1 directly from eps_n^2, by
/// raising both sides to the power 2b: (eps^2)^a * k^(2b) * n^(4b) <= 1.
inline bool lp_level_bound_holds(const CombParams& c, unsigned n) {
  if (n == 0 || n > c.depth) throw DomainError("level out of range for the l_p bound");
  const BigRat& p = c.p[n];
  const unsigned long a = p.get_num().get_ui();
  const unsigned long b = p.get_den().get_ui();
  const BigRat lhs = pow_rat(c.eps_sq[n], a) * BigRat(pow_int(c.k[n], 2 * b)) * BigRat(pow_int(BigInt(n), 4 * b));
  return lhs <= 1;
}

inline CombParams comb_params(unsigned depth, ExponentRule p_rule = default_exponent,
                              std::optional<BigInt> index_budget = std::nullopt) {
  CombParams c;
  c.depth = depth;
  c.p_rule = p_rule;
  c.start.push_back(0);
  BigInt r_sum = 0;
  for (unsigned n = 0; n <= depth; ++n) {
    const BigRat p = p_rule(n);
    if (p <= 2) throw DomainError("exponent p_" + std::to_string(n) + " = " + to_string(p) + " is not above 2");
    if (n > 0 && p >= c.p.back()) throw DomainError("exponents must decrease strictly");
    if (!p.get_num().fits_ulong_p() || !p.get_den().fits_ulong_p()) throw DomainError("exponent too large");
    c.p.push_back(p);
    const BigInt r = n == 0 ? BigInt(1) : r_sum;
    r_sum += r;
    c.r.push_back(r);
    BigInt k = detail::min_k_power_condition(n, r, p);
    if (k <= r) k = r + 1;
    c.k.push_back(k);
    c.eps_sq.push_back(make_rat(r, k));
    c.eps.push_back(Radical::sqrt(c.eps_sq.back()));
    const BigInt end = c.start.back() + pow2(n) * k;
    if (index_budget && end > *index_budget) throw BlockBudgetExceeded(n, end, *index_budget);
    c.start.push_back(end);
  }
  c.root_weight = Radical::sqrt(BigRat(2) * c.eps_sq[0]);
  return c;
}

/// An infinite 0/1 path: explicit prefix, then a constant tail bit.
struct CombPath {
  std::vector<int> prefix;
  int tail_bit = 1;

  int bit(std::size_t i) const { return i < prefix.size() ? prefix[i] : tail_bit; }

  /// Lexicographic rank of the node x|n among the 2^n nodes of level n.
  BigInt node_rank(unsigned n) const {
    BigInt v = 0;
    for (unsigned i = 0; i < n; ++i) v = 2 * v + bit(i);
    return v;
  }

  std::string str() const {
    std::string s;
    for (int b : prefix) s += static_cast<char>('0' + b);
    return s + "(" + static_cast<char>('0' + tail_bit) + ")*";
  }
};

/// First index where two paths differ, or nullopt if they are equal.
inline std::optional<unsigned> divergence_index(const CombPath& x, const CombPath& y) {
  const std::size_t n = std::max(x.prefix.size(), y.prefix.size());
  for (std::size_t i = 0; i < n; ++i)
    if (x.bit(i) != y.bit(i)) return static_cast<unsigned>(i);
  if (x.tail_bit != y.tail_bit) return static_cast<unsigned>(n);
  return std::nullopt;
}

/// Level containing index m, with the lexicographic rank of its node.
struct BlockLocation {
  unsigned level;
  BigInt rank;
};

inline BlockLocation locate_block(const CombParams& c, const BigInt& m) {
  if (m < 0 || m >= c.layout_end()) throw DomainError("index " + m.get_str() + " is beyond the comb layout");
  unsigned n = 0;
  while (m >= c.start[n + 1]) ++n;
  return {n, BigInt((m - c.start[n]) / c.k[n])};
}

inline Radical comb_entry(const CombParams& c, const CombPath& x, const BigInt& m) {
  const BlockLocation loc = locate_block(c, m);
  if (loc.level == 0) return c.root_weight;
  const unsigned n = loc.level;
  const BigInt branch = x.node_rank(n);
  // The tooth t_n = x|(n-1) followed by the opposite of bit n-1.
  const BigInt tooth = x.bit(n - 1) ? BigInt(branch - 1) : BigInt(branch + 1);
  if (loc.rank == branch) return c.eps[n];
  if (loc.rank == tooth) return -c.eps[n];
  return Radical();
}

/// Index ranges [first, last) of the comb of x, per level.
inline BlockSupport comb_support(const CombParams& c, const CombPath& x) {
  BlockSupport s;
  s.levels[0] = {{c.start[0], c.start[1]}};
  for (unsigned n = 1; n <= c.depth; ++n) {
    const BigInt branch = x.node_rank(n);
    const BigInt tooth = x.bit(n - 1) ? BigInt(branch - 1) : BigInt(branch + 1);
    const BigInt lo = branch < tooth ? branch : tooth;
    // Branch and tooth are siblings, hence adjacent blocks.
    s.levels[n] = {{c.block_offset(n, lo), c.block_offset(n, lo + 2)}};
  }
  return s;
}

/// Levels on which two block supports share an index.
inline std::vector<unsigned> shared_levels(const BlockSupport& a, const BlockSupport& b) {
  std::vector<unsigned> out;
  for (const auto& [level, ra] : a.levels) {
    auto it = b.levels.find(level);
    if (it == b.levels.end()) continue;
    bool meet = false;
    for (const auto& [a0, a1] : ra)
      for (const auto& [b0, b1] : it->second)
        if (a0 < b1 && b0 < a1) meet = true;
    if (meet) out.push_back(level);
  }
  return out;
}

/// Inner product of two comb elements from per-level aggregates:
/// level 0 contributes (sqrt2 eps_0)^2 k_0 = 2 r_0, each shared level n <= N
/// contributes 2 eps_n^2 k_n = 2 r_n, and level N+1 (where branch and tooth
/// swap) contributes -2 r_{N+1}. Nothing is shared beyond level N+1.
inline InnerCertificate comb_inner(const CombParams& c, const CombPath& x, const CombPath& y) {
  const auto div = divergence_index(x, y);
  if (!div) {
    // Self inner product: level L adds 2 r_L, so the sum at the end of level
    // L is 2 r_{L+1} = 2^(L+1) and grows without bound.
    DivergentInner d;
    BigRat running = c.root_weight.square() * BigRat(c.k[0]);
    for (unsigned n = 0; n <= c.depth; ++n) {
      if (n > 0) running += BigRat(2) * c.eps_sq[n] * BigRat(c.k[n]);
      const BigRat bound(pow2(n));
      if (running <= bound) throw DomainError("self inner product failed to grow");
      d.witnesses.emplace_back(bound, c.start[n + 1]);
    }
    return d;
  }
  const unsigned N = *div;
  if (N + 1 > c.depth) throw DomainError("paths diverge at level " + std::to_string(N) + ", beyond the laid-out depth");
  BigRat total = c.root_weight.square() * BigRat(c.k[0]);
  for (unsigned n = 1; n <= N; ++n) total += BigRat(2) * c.eps_sq[n] * BigRat(c.k[n]);
  total -= BigRat(2) * c.eps_sq[N + 1] * BigRat(c.k[N + 1]);
  const BigInt stable = N + 2 <= c.depth + 1 ? c.start[N + 2] : c.layout_end();
  return ExactInner{RadicalSum(total), stable};
}

inline SeqHandle comb_handle(const CombParams& c, const CombPath& x, std::string id) {
  SeqHandle h;
  h.id = std::move(id);
  h.value = [c, x](Index m) { return comb_entry(c, x, BigInt(m)); };
  h.support = comb_support(c, x);
  h.square_divergence = [c](const BigRat& b) -> Index {
    for (unsigned n = 0; n <= c.depth; ++n)
      if (BigRat(2 * pow2(n)) > b) return checked_index(c.start[n + 1]);
    throw DomainError("bound is beyond the laid-out depth");
  };
  return h;
}

/// Attaches the pairwise metadata: disjoint beyond level N+1, with the
/// aggregate value below it.
inline void link_comb_pair(const CombParams& c, SeqHandle& hx, const CombPath& x, SeqHandle& hy, const CombPath& y) {
  const auto cert = comb_inner(c, x, y);
  const auto& e = std::get<ExactInner>(cert);
  hx.partners[hy.id] = DisjointBeyond{e.stable_from, e.value};
  hy.partners[hx.id] = DisjointBeyond{e.stable_from, e.value};
}

struct CombLpReport {
  unsigned n0 = 0;            ///< first level n >= 1 with p_n < p
  Interval partial;           ///< sum of |y_x(m)|^p over levels < n0
  BigRat tail_bound;          ///< bound on the sum over levels >= n0
  std::vector<std::pair<unsigned, bool>> level_checks;  ///< eps_n^{p_n} k_n <= 1/n^2 for n0 <= n <= depth
};

/// For levels n >= n0, eps_n < 1 and p > p_n give eps_n^p k_n <= eps_n^{p_n} k_n <= 1/n^2,
/// and each level carries two blocks, so the tail is at most
/// sum_{n>=n0} 2/n^2 <= 2/n0^2 + 2/n0.
inline CombLpReport comb_lp_report(const CombParams& c, const CombPath& x, const BigRat& p, unsigned long bits = 64) {
  (void)x;  // every path has the same block sizes on every level
  if (p <= 2) throw DomainError("p must exceed 2: comb elements have divergent square sums, so the family is not in l_2");
  CombLpReport rep;
  unsigned n0 = 0;
  while (!(c.p_rule(n0) < p)) {
    ++n0;
    if (n0 > (1u << 20)) throw DomainError("exponent rule does not drop below p");
  }
  rep.n0 = std::max(n0, 1u);
  if (rep.n0 > c.depth + 1) throw DomainError("first level below p lies beyond the laid-out depth");
  rep.partial = point_interval(BigRat(0));
  const unsigned long extra = 8;
  for (unsigned n = 0; n < rep.n0; ++n) {
    const Radical w = n == 0 ? c.root_weight : c.eps[n];
    const BigInt count = n == 0 ? c.k[0] : BigInt(2 * c.k[n]);
    const Interval t = abs_pow_enclosure(w, p, bits + extra + bit_length(count));
    rep.partial += Interval{t.lo * BigRat(count), t.hi * BigRat(count)};
  }
  const BigRat n0r(rep.n0);
  rep.tail_bound = BigRat(2) / (n0r * n0r) + BigRat(2) / n0r;
  for (unsigned n = rep.n0; n <= c.depth; ++n) rep.level_checks.emplace_back(n, lp_level_bound_holds(c, n));
  return rep;
}

}  // namespace orthofam
