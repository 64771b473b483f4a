#pragma once

// Kunen's perfect orthogonal tree. Level n holds n pairwise orthogonal
// vectors of length n. To build level n+1, the oldest node that has not split
// yet splits into s^(+w) and s^(-w) with w = sqrt((s,s)); every other node
// continues with 0. Oldest-first keeps every node splitting eventually.

#include "orthofam/exact/linalg.hpp"
#include "orthofam/exact/quadratic_field.hpp"
#include "orthofam/exact/radical_sum.hpp"
#include "orthofam/sequences/inner.hpp"

#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace orthofam {

struct KunenNode {
  PrefixVec entries;
  BigRat norm_sq;
  std::size_t id = 0;  ///< stable across levels while the node does not split
};

class KunenTree {
 public:
  KunenTree() {
    levels_.push_back({KunenNode{{Radical(1)}, BigRat(1), 0}});
    next_id_ = 1;
    queue_.push_back(0);
    split_pos_.push_back(0);  // placeholder for level 1, which has no split
  }

  /// Number of built levels; level n (1-based) holds n vectors.
  std::size_t depth() const { return levels_.size(); }

  const std::vector<KunenNode>& level(std::size_t n) const {
    if (n < 1 || n > levels_.size()) throw DomainError("kunen level " + std::to_string(n) + " is not built");
    return levels_[n - 1];
  }

  /// Position (within level n-1) of the node that split to form level n.
  std::size_t split_position(std::size_t n) const {
    if (n < 2 || n > levels_.size()) throw DomainError("no split recorded for level " + std::to_string(n));
    return split_pos_[n - 1];
  }

  const std::deque<std::size_t>& split_queue() const { return queue_; }

  void extend() {
    const auto& cur = levels_.back();
    const std::size_t id = queue_.front();
    queue_.pop_front();
    std::size_t pos = 0;
    while (cur[pos].id != id) ++pos;
    std::vector<KunenNode> next;
    next.reserve(cur.size() + 1);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if (i != pos) {
        KunenNode n = cur[i];
        n.entries.push_back(Radical());
        next.push_back(std::move(n));
        continue;
      }
      const Radical w = Radical::sqrt(cur[i].norm_sq);
      for (const Radical& child : {w, -w}) {
        KunenNode n{cur[i].entries, BigRat(2) * cur[i].norm_sq, next_id_++};
        n.entries.push_back(child);
        queue_.push_back(n.id);
        next.push_back(std::move(n));
      }
    }
    split_pos_.push_back(pos);
    levels_.push_back(std::move(next));
  }

  void extend_to(std::size_t n) {
    while (levels_.size() < n) extend();
  }

 private:
  std::vector<std::vector<KunenNode>> levels_;
  std::deque<std::size_t> queue_;
  std::vector<std::size_t> split_pos_;
  std::size_t next_id_ = 0;
};

inline KunenTree kunen_tree(std::size_t depth) {
  KunenTree t;
  t.extend_to(depth);
  return t;
}

inline KunenTree kunen_extend(KunenTree t) {
  t.extend();
  return t;
}

inline RadicalSum dot(const PrefixVec& a, const PrefixVec& b) {
  RadicalSum s;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i)
    if (!a[i].is_zero() && !b[i].is_zero()) s += a[i] * b[i];
  return s;
}

/// Exact rank of vectors whose entries lie in Q(sqrt(2)).
inline std::size_t rank_sqrt2(const std::vector<PrefixVec>& rows) {
  const BigInt d = 2;
  Matrix<QuadElem> m;
  for (const auto& r : rows) {
    std::vector<QuadElem> row;
    for (const auto& e : r) row.push_back(QuadElem::from(e, d));
    m.push_back(std::move(row));
  }
  return rank(m);
}

struct KunenLevel {
  std::vector<PrefixVec> vectors;
  std::size_t rank = 0;
  bool pairwise_orthogonal = false;
};

inline KunenLevel kunen_level(const KunenTree& t, std::size_t n) {
  KunenLevel out;
  for (const auto& node : t.level(n)) out.vectors.push_back(node.entries);
  out.rank = rank_sqrt2(out.vectors);
  out.pairwise_orthogonal = true;
  for (std::size_t i = 0; i < out.vectors.size(); ++i)
    for (std::size_t j = i + 1; j < out.vectors.size(); ++j)
      if (!dot(out.vectors[i], out.vectors[j]).is_zero()) out.pairwise_orthogonal = false;
  return out;
}

/// Split choice: given the coordinate where the branch splits, +1 or -1.
using SplitSelector = std::function<int(std::size_t coordinate)>;

inline int always_plus(std::size_t) { return 1; }

/// A tree shared by lazily extended branch handles.
class SharedKunenTree {
 public:
  explicit SharedKunenTree(std::size_t depth = 1) : tree_(kunen_tree(std::max<std::size_t>(depth, 1))) {}

  /// Position of the branch inside level n, following the selector.
  std::size_t branch_position(const SplitSelector& sel, std::size_t n) {
    std::lock_guard<std::mutex> lock(mu_);
    tree_.extend_to(n);
    std::size_t pos = 0;
    for (std::size_t lvl = 2; lvl <= n; ++lvl) {
      const std::size_t sp = tree_.split_position(lvl);
      if (pos > sp) ++pos;
      else if (pos == sp && sel(lvl - 1) < 0) ++pos;
    }
    return pos;
  }

  Radical entry(std::size_t pos, std::size_t n, std::size_t coord) {
    std::lock_guard<std::mutex> lock(mu_);
    return tree_.level(n)[pos].entries[coord];
  }

  PrefixVec prefix(const SplitSelector& sel, std::size_t n) {
    const std::size_t pos = branch_position(sel, n);
    std::lock_guard<std::mutex> lock(mu_);
    return tree_.level(n)[pos].entries;
  }

  BigRat norm_sq(const SplitSelector& sel, std::size_t n) {
    const std::size_t pos = branch_position(sel, n);
    std::lock_guard<std::mutex> lock(mu_);
    return tree_.level(n)[pos].norm_sq;
  }

  /// Level at which two branches become different nodes, or nullopt if
  /// they agree up to max_level.
  std::optional<std::size_t> divergence_level(const SplitSelector& a, const SplitSelector& b, std::size_t max_level) {
    for (std::size_t n = 1; n <= max_level; ++n)
      if (branch_position(a, n) != branch_position(b, n)) return n;
    return std::nullopt;
  }

 private:
  std::mutex mu_;
  KunenTree tree_;
};

inline SeqHandle kunen_branch(const std::shared_ptr<SharedKunenTree>& tree, SplitSelector sel, std::string id) {
  SeqHandle h;
  h.id = std::move(id);
  h.value = [tree, sel](Index m) {
    const std::size_t n = m + 1;
    return tree->entry(tree->branch_position(sel, n), n, m);
  };
  h.support = OpaqueSupport{};
  h.square_divergence = [tree, sel](const BigRat& b) -> Index {
    // Norms double at every split of the branch, and every node splits.
    for (std::size_t n = 1;; ++n)
      if (tree->norm_sq(sel, n) > b) return n;
  };
  return h;
}

/// Declares that two branches are disjoint from the coordinate at which they
/// become siblings: beyond it exactly one node splits per level, so at most
/// one of them is nonzero at any coordinate.
inline std::size_t link_kunen_branches(const std::shared_ptr<SharedKunenTree>& tree, SeqHandle& x,
                                       const SplitSelector& sx, SeqHandle& y, const SplitSelector& sy,
                                       std::size_t max_level = 64) {
  const auto lvl = tree->divergence_level(sx, sy, max_level);
  if (!lvl) throw DomainError("branches " + x.id + " and " + y.id + " agree through level " + std::to_string(max_level));
  declare_disjoint_beyond(x, y, BigInt(static_cast<unsigned long>(*lvl)));
  return *lvl;
}

struct KunenWitness {
  std::size_t start_level = 0;   ///< n with x|n inside the level
  PrefixVec s;                   ///< chosen node of T_n
  RadicalSum head;               ///< (s, x|n)
  PrefixVec prefix;              ///< greedy extension, one level past the support
  RadicalSum value;              ///< (prefix, x), final since x vanishes beyond
  bool dominates = false;        ///< |value| >= |head| and value != 0
};

/// Finds a branch prefix with nonzero inner product against x (rational,
/// finite support). start_level, when given, may be smaller than the support
/// length; the greedy extension then keeps the sign of every new term.
inline KunenWitness maximality_witness(KunenTree& tree, const std::vector<BigRat>& x,
                                       std::optional<std::size_t> start_level = std::nullopt) {
  std::size_t support_end = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0) support_end = i + 1;
  if (support_end == 0) throw DomainError("witness needs a nonzero vector");
  PrefixVec xv(x.begin(), x.end());
  auto x_at = [&](std::size_t i) { return i < x.size() ? x[i] : BigRat(0); };

  KunenWitness w;
  w.start_level = start_level ? *start_level : support_end;
  if (w.start_level < 1) throw DomainError("start level must be at least 1");
  tree.extend_to(std::max(w.start_level, support_end + 1));
  const auto& lvl = tree.level(w.start_level);
  std::size_t best = lvl.size();
  RadicalSum best_abs;
  for (std::size_t i = 0; i < lvl.size(); ++i) {
    const RadicalSum v = abs(dot(lvl[i].entries, xv));
    if (v.is_zero()) continue;
    if (best == lvl.size() || less(best_abs, v)) {
      best = i;
      best_abs = v;
    }
  }
  if (best == lvl.size()) throw DomainError("x restricted to the start level is zero");
  w.s = lvl[best].entries;
  w.head = dot(w.s, xv);
  const int sigma = sign(w.head);

  // Follow the node through later levels, picking at each split the child
  // whose new coordinate times x has the sign of the head.
  const std::size_t target = support_end + 1;
  std::size_t pos = best;
  for (std::size_t n = w.start_level + 1; n <= std::max(target, w.start_level); ++n) {
    const std::size_t sp = tree.split_position(n);
    if (pos > sp) {
      ++pos;
    } else if (pos == sp) {
      const std::size_t coord = n - 1;
      const int xs = sign(x_at(coord));
      // The + child carries +w at coord.
      const bool plus = xs == 0 || xs == sigma;
      if (!plus) ++pos;
    }
  }
  w.prefix = tree.level(std::max(target, w.start_level))[pos].entries;
  w.value = dot(w.prefix, xv);
  w.dominates = !w.value.is_zero() && !less(abs(w.value), abs(w.head));
  return w;
}

}  // namespace orthofam
