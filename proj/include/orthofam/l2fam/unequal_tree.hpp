#pragma once

// A perfect orthogonal tree with unequal weights. Level n holds n pairwise
// orthogonal rational vectors of length n. The node s_n chosen at level n
// (oldest unsplit first) splits into s_n^delta_n and s_n^(-b_n) with
// delta_n * b_n = (s_n, s_n); all other nodes continue with 0. The deltas
// shrink fast enough that the branches taking the +delta child from some
// point on are square summable.

#include "orthofam/exact/linalg.hpp"
#include "orthofam/sequences/handle.hpp"

#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace orthofam {

using RatVec = std::vector<BigRat>;

/// m^2 for m = min over 3/4 <= ||x|| <= 1 of max_s |(s, x)|, for a pairwise
/// orthogonal basis. In coordinates c_s of the orthonormal basis s/||s||,
/// (s, x) = ||s|| c_s; the max is smallest when all ||s|| |c_s| are equal to
/// some t on the sphere of radius 3/4, so t^2 sum 1/||s||^2 = 9/16.
inline BigRat minmax_radius_sq(const std::vector<RatVec>& level) {
  if (level.empty()) throw DomainError("minmax radius needs a nonempty level");
  const std::size_t n = level[0].size();
  for (const auto& v : level)
    if (v.size() != n) throw DomainError("level vectors must have equal length");
  if (level.size() != n || rank(Matrix<BigRat>(level.begin(), level.end())) != n)
    throw DomainError("level must be a basis of its space");
  for (std::size_t i = 0; i < level.size(); ++i)
    for (std::size_t j = i + 1; j < level.size(); ++j)
      if (dot(level[i], level[j]) != 0) throw DomainError("level vectors must be pairwise orthogonal");
  BigRat inv = 0;
  for (const auto& v : level) inv += BigRat(1) / dot(v, v);
  return make_rat(9, 16) / inv;
}

struct UnequalNode {
  RatVec entries;
  std::size_t id = 0;
};

class UnequalTree {
 public:
  UnequalTree() {
    levels_.push_back({UnequalNode{{BigRat(1)}, 0}});
    queue_.push_back(0);
    next_id_ = 1;
    split_pos_.push_back(0);  // placeholder for level 1
    delta_.push_back(0);      // 1-based
    b_.push_back(0);
    m_sq_.push_back(0);
  }

  std::size_t depth() const { return levels_.size(); }

  const std::vector<UnequalNode>& level(std::size_t n) const {
    if (n < 1 || n > levels_.size()) throw DomainError("level " + std::to_string(n) + " is not built");
    return levels_[n - 1];
  }
  std::vector<RatVec> level_vectors(std::size_t n) const {
    std::vector<RatVec> out;
    for (const auto& node : level(n)) out.push_back(node.entries);
    return out;
  }

  /// delta_n, b_n, m_n^2 are known for n < depth(): they built level n+1.
  const BigRat& delta(std::size_t n) const { return checked(delta_, n); }
  const BigRat& b(std::size_t n) const { return checked(b_, n); }
  const BigRat& m_sq(std::size_t n) const { return checked(m_sq_, n); }

  std::size_t split_position(std::size_t n) const {
    if (n < 2 || n > levels_.size()) throw DomainError("no split recorded for level " + std::to_string(n));
    return split_pos_[n - 1];
  }

  void extend() {
    const std::size_t n = levels_.size();
    const auto& cur = levels_.back();
    const BigRat m2 = minmax_radius_sq(level_vectors(n));
    BigRat d;
    if (n == 1) {
      d = 1;
    } else {
      const BigRat& prev = delta_[n - 1];
      const BigRat cap = std::min<BigRat>(m2 / 4, prev * prev) / 4;
      d = largest_power_of_half([&](const BigRat& t) { return t * t <= cap; });
    }
    const std::size_t id = queue_.front();
    queue_.pop_front();
    std::size_t pos = 0;
    while (cur[pos].id != id) ++pos;
    const BigRat bn = dot(cur[pos].entries, cur[pos].entries) / d;
    std::vector<UnequalNode> next;
    next.reserve(cur.size() + 1);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if (i != pos) {
        UnequalNode c = cur[i];
        c.entries.push_back(BigRat(0));
        next.push_back(std::move(c));
        continue;
      }
      for (const BigRat& v : {d, BigRat(-bn)}) {
        UnequalNode c{cur[i].entries, next_id_++};
        c.entries.push_back(v);
        queue_.push_back(c.id);
        next.push_back(std::move(c));
      }
    }
    split_pos_.push_back(pos);
    delta_.push_back(d);
    b_.push_back(bn);
    m_sq_.push_back(m2);
    levels_.push_back(std::move(next));
  }

  void extend_to(std::size_t n) {
    while (levels_.size() < n) extend();
  }

  /// Position in level n of the branch that follows `choose` (+1 for the
  /// delta child, -1 for the -b child) at every split it meets.
  std::size_t branch_position(const std::function<int(std::size_t coordinate)>& choose, std::size_t n) {
    extend_to(n);
    std::size_t pos = 0;
    for (std::size_t lvl = 2; lvl <= n; ++lvl) {
      const std::size_t sp = split_pos_[lvl - 1];
      if (pos > sp) ++pos;
      else if (pos == sp && choose(lvl - 1) < 0) ++pos;
    }
    return pos;
  }

 private:
  static const BigRat& checked(const std::vector<BigRat>& v, std::size_t n) {
    if (n < 1 || n >= v.size()) throw DomainError("level " + std::to_string(n) + " has not split yet");
    return v[n];
  }

  std::vector<std::vector<UnequalNode>> levels_;
  std::deque<std::size_t> queue_;
  std::vector<std::size_t> split_pos_;
  std::vector<BigRat> delta_, b_, m_sq_;
  std::size_t next_id_ = 0;
};

inline UnequalTree unequal_tree(std::size_t depth) {
  UnequalTree t;
  t.extend_to(std::max<std::size_t>(depth, 1));
  return t;
}

inline UnequalTree unequal_extend(UnequalTree t) {
  t.extend();
  return t;
}

/// sum_{m >= n} 4^-(m-1) = (4/3) 4^-(n-1): bounds the square sum of entries
/// at coordinates >= n of any branch that takes only +delta children there,
/// since delta_m <= 2^-(m-1).
inline BigRat e_tail_bound(std::size_t n) {
  if (n < 1) throw DomainError("tail bound needs n >= 1");
  return make_rat(4, 3) * half_pow(2ul * (n - 1));
}

struct SharedUnequalTree {
  std::mutex mu;
  UnequalTree tree;
};

/// Member of E: follows `choices` (indexed by coordinate) at splits before
/// coordinate n, then always the +delta child.
inline SeqHandle e_member(const std::shared_ptr<SharedUnequalTree>& t, std::size_t n,
                          std::function<int(std::size_t)> choices, std::string id) {
  auto choose = [n, choices](std::size_t coord) { return coord < n ? choices(coord) : 1; };
  SeqHandle h;
  h.id = std::move(id);
  h.value = [t, choose](Index m) {
    std::lock_guard<std::mutex> lock(t->mu);
    const std::size_t lvl = m + 1;
    const std::size_t pos = t->tree.branch_position(choose, lvl);
    return Radical(t->tree.level(lvl)[pos].entries[m]);
  };
  h.support = OpaqueSupport{};
  return h;
}

struct ETailCheck {
  std::size_t from = 0;
  std::size_t upto = 0;
  BigRat square_sum;  ///< exact, coordinates [from, upto)
  BigRat bound;       ///< e_tail_bound(from)
  bool entries_in_zero_delta = true;
  bool holds = false;
};

/// Checks a member's entries at coordinates [from, upto) against the
/// geometric bound; `from` >= 1.
inline ETailCheck e_tail_check(const SeqHandle& member, const UnequalTree& t, std::size_t from, std::size_t upto) {
  ETailCheck c;
  c.from = from;
  c.upto = upto;
  c.square_sum = 0;
  for (std::size_t m = from; m < upto; ++m) {
    const Radical v = member(m);
    const BigRat r = v.is_zero() ? BigRat(0) : v.square();
    if (!v.is_zero() && (v.radicand() != 1 || v.coeff() != t.delta(m))) c.entries_in_zero_delta = false;
    c.square_sum += r;
  }
  c.bound = e_tail_bound(from);
  c.holds = c.entries_in_zero_delta && c.square_sum <= c.bound;
  return c;
}

struct L2Witness {
  std::size_t level = 0;
  BigRat scale;          ///< c with 9/16 <= c^2 ||x||^2 <= 1
  RatVec s;              ///< node of level `level` maximizing |(s, c x)|
  BigRat head;           ///< (s, x), unscaled
  BigRat m_sq;           ///< min-max radius of the level
  bool head_above_m = false;       ///< (s, c x)^2 >= m^2
  bool head_above_4delta = false;  ///< |(s, c x)| >= 4 delta_level
  BigRat value;          ///< (x, y), exact; equals head since x vanishes from `level` on
  SeqHandle y;
};

/// Finite-support rational x. The level is the support length (at least 1);
/// max_depth bounds how far the tree may grow.
inline L2Witness l2_witness(const std::shared_ptr<SharedUnequalTree>& t, const RatVec& x, std::size_t max_depth = 64) {
  std::size_t end = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0) end = i + 1;
  if (end == 0) throw DomainError("witness needs a nonzero vector");
  if (end + 1 > max_depth)
    throw DomainError("tree depth " + std::to_string(max_depth) + " is too small; the witness needs depth " + std::to_string(end + 1));
  L2Witness w;
  w.level = end;
  const BigRat q = dot(x, x);
  // c = 1/r with sqrt(q) <= r <= (4/3) sqrt(q).
  unsigned k = 0;
  while (pow2(2 * k) * q < 9) ++k;
  bool exact = false;
  BigInt root = int_root(floor_rat(q * BigRat(pow2(2 * k))), 2, &exact);
  if (BigRat(root) * BigRat(root) < q * BigRat(pow2(2 * k))) root += 1;
  w.scale = BigRat(pow2(k)) / BigRat(root);

  std::lock_guard<std::mutex> lock(t->mu);
  UnequalTree& tree = t->tree;
  tree.extend_to(end + 1);
  const RatVec xs(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(end));
  const auto& lvl = tree.level(end);
  std::size_t best = 0;
  for (std::size_t i = 1; i < lvl.size(); ++i)
    if (abs_rat(dot(lvl[i].entries, xs)) > abs_rat(dot(lvl[best].entries, xs))) best = i;
  w.s = lvl[best].entries;
  w.head = dot(w.s, xs);
  w.m_sq = minmax_radius_sq(tree.level_vectors(end));
  const BigRat scaled = w.scale * w.head;
  w.head_above_m = scaled * scaled >= w.m_sq;
  w.head_above_4delta = abs_rat(scaled) >= BigRat(4) * tree.delta(end);

  // Choices reproducing s up to the level, then the delta child.
  std::vector<int> picks(end, 1);
  std::size_t pos = best;
  for (std::size_t n = end; n >= 2; --n) {
    const std::size_t sp = tree.split_position(n);
    if (pos == sp + 1) {
      picks[n - 1] = -1;
      pos = sp;
    } else if (pos > sp + 1) {
      --pos;
    } else if (pos == sp) {
      picks[n - 1] = 1;
    }
  }
  auto shared_picks = std::make_shared<std::vector<int>>(std::move(picks));
  w.y = e_member(t, end, [shared_picks](std::size_t c) { return (*shared_picks)[c]; }, "E-witness");
  const std::size_t pos_end = tree.branch_position([&](std::size_t c) { return (*shared_picks)[c]; }, end);
  if (pos_end != best) throw InvariantViolation("witness branch does not pass through the chosen node");
  w.value = dot(tree.level(end)[pos_end].entries, xs);
  return w;
}

}  // namespace orthofam
