#pragma once

// Full-support variant of the comb family. Every node of the binary tree owns
// exactly one index (length-lex order, so level i starts at 2^i - 1). Along
// the comb of a path x the root carries b_0, the branch node x|i carries
// +b_i and the tooth carries -b_i; every other node of level i carries
// a_i = 2^(-4i).
//
// Count convention for two paths diverging at bit N (levels i >= 1):
//   i <= N     both combs coincide; 2^i - 2 off-comb nodes carry a_i * a_i.
//   i == N+1   branch and tooth swap (-2 b_i^2); 2^i - 2 nodes carry a_i^2.
//   i >  N+1   the four comb nodes are distinct; the two cross terms of each
//              comb, +b_i a_i and -b_i a_i, cancel; 2^i - 4 nodes carry a_i^2.
// Level 0 holds the shared root and contributes b_0^2. Solving
//   b_0^2 + 2 sum_{1<=i<=n} b_i^2 - 2 b_{n+1}^2
//     + sum_{1<=i<=n+1} a_i^2 (2^i - 2) + sum_{i>n+1} a_i^2 (2^i - 4) = 0
// for b_{n+1}^2 makes every such pair orthogonal.

#include "orthofam/comb/comb.hpp"

#include <vector>

namespace orthofam {

/// a_i^2 = 2^(-8i).
inline BigRat footnote_a_sq(unsigned i) { return half_pow(8ul * i); }

/// sum_{i>m} a_i^2 (2^i - 4) = 2^(-7m)/127 - 4 * 2^(-8m)/255 (two geometric series).
inline BigRat footnote_tail(unsigned m) {
  return half_pow(7ul * m) / BigRat(127) - BigRat(4) * half_pow(8ul * m) / BigRat(255);
}

struct FullSupportComb {
  unsigned depth = 0;          ///< levels 0..depth
  BigRat b0;
  std::vector<BigRat> b_sq;    ///< b_n^2, b_sq[0] = b0^2
  std::vector<Radical> b;      ///< b_n
  std::vector<Radical> a;      ///< a_n (rational)

  Index layout_end() const { return (Index{1} << (depth + 1)) - 1; }

  /// The displayed identity at n, evaluated exactly; zero by construction.
  BigRat residual(unsigned n) const {
    if (n + 1 > depth) throw DomainError("residual needs level n+1 to be built");
    BigRat s = b_sq[0];
    for (unsigned i = 1; i <= n; ++i) s += BigRat(2) * b_sq[i];
    s -= BigRat(2) * b_sq[n + 1];
    for (unsigned i = 1; i <= n + 1; ++i) s += footnote_a_sq(i) * BigRat(pow2(i) - 2);
    s += footnote_tail(n + 1);
    return s;
  }
};

inline FullSupportComb comb_full_support(unsigned depth, const BigRat& b0 = BigRat(1)) {
  if (b0 <= 0) throw DomainError("b0 must be positive");
  FullSupportComb f;
  f.depth = depth;
  f.b0 = b0;
  f.b_sq.push_back(b0 * b0);
  f.b.push_back(Radical(b0));
  f.a.push_back(Radical(1));
  BigRat shared = b0 * b0;  // b_0^2 + 2 sum_{1<=i<=n} b_i^2
  BigRat off = 0;           // sum_{1<=i<=n+1} a_i^2 (2^i - 2), built incrementally
  for (unsigned n = 0; n + 1 <= depth; ++n) {
    off += footnote_a_sq(n + 1) * BigRat(pow2(n + 1) - 2);
    const BigRat next = (shared + off + footnote_tail(n + 1)) / BigRat(2);
    f.b_sq.push_back(next);
    f.b.push_back(Radical::sqrt(next));
    shared += BigRat(2) * next;
  }
  for (unsigned i = 1; i <= depth; ++i) f.a.push_back(Radical(BigRat(half_pow(4ul * i))));
  return f;
}

inline Radical full_support_entry(const FullSupportComb& f, const CombPath& x, Index m) {
  if (m >= f.layout_end()) throw DomainError("index " + std::to_string(m) + " is beyond the built levels");
  unsigned level = 0;
  while (m + 1 >= (Index{1} << (level + 1))) ++level;
  if (level == 0) return f.b[0];
  const BigInt rank(static_cast<unsigned long>(m + 1 - (Index{1} << level)));
  const BigInt branch = x.node_rank(level);
  const BigInt tooth = x.bit(level - 1) ? BigInt(branch - 1) : BigInt(branch + 1);
  if (rank == branch) return f.b[level];
  if (rank == tooth) return -f.b[level];
  return f.a[level];
}

inline SeqHandle full_support_handle(const FullSupportComb& f, const CombPath& x, std::string id) {
  SeqHandle h;
  h.id = std::move(id);
  h.value = [f, x](Index m) { return full_support_entry(f, x, m); };
  h.support = FullSupport{};
  return h;
}

struct FootnoteInnerReport {
  unsigned divergence = 0;
  /// (level L, exact partial inner sum over levels 0..L, certified tail T(L))
  std::vector<std::tuple<unsigned, RadicalSum, BigRat>> levels;
  PartialInner certificate;
};

/// Partial inner sums of two diverged elements, level by level, by direct
/// enumeration of the coordinates. From level N+1 on, the partial sum equals
/// -T(L) with T(L) = footnote_tail(L), so T(L) certifies the remaining tail.
inline FootnoteInnerReport footnote_inner(const FullSupportComb& f, const CombPath& x, const CombPath& y) {
  const auto div = divergence_index(x, y);
  if (!div) throw DomainError("paths are equal; the inner product diverges");
  FootnoteInnerReport rep;
  rep.divergence = *div;
  if (*div + 1 > f.depth) throw DomainError("paths diverge beyond the built levels");
  RadicalSum running;
  Index m = 0;
  for (unsigned L = 0; L <= f.depth; ++L) {
    const Index end = (Index{1} << (L + 1)) - 1;
    for (; m < end; ++m) running += full_support_entry(f, x, m) * full_support_entry(f, y, m);
    if (L >= *div + 1) {
      rep.levels.emplace_back(L, running, footnote_tail(L));
      rep.certificate.sums.emplace_back(end, running);
    }
  }
  rep.certificate.tail_bound = footnote_tail(f.depth);
  return rep;
}

}  // namespace orthofam
