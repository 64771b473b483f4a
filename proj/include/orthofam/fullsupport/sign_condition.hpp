#pragma once

// Finite conditions for the full-support construction: h rows of nonzero
// rationals plus requirements ({i,j}, k, eps) bounding the partial sums of
// s_i * s_j before k and on every window [k, l).
//
// Columns come in two kinds. An explicit column stores one entry per row. A
// pad segment stores eps, a number of repeats and, per row, which sign
// pattern of the 2^bits Hadamard block the row follows, so blocks with 2^64
// columns never need to be materialized. Over one period of a pad segment,
// rows with different patterns a < c have products (-1)^(t_a + t_c) eps^2,
// whose partial sums stay in [-2^a eps^2, 2^a eps^2] and return to 0; rows
// with the same pattern (copies made by doubling) gain eps^2 per column.

#include "orthofam/exact/bigrat.hpp"
#include "orthofam/fullsupport/hadamard.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace orthofam {

struct Requirement {
  std::size_t i = 0, j = 0;  ///< i < j
  BigInt k;                  ///< checkpoint
  BigRat eps;
  BigRat head;               ///< sum_{n<k} s_i s_j
};

struct ExplicitColumn {
  std::vector<BigRat> entries;
};

struct PadSegment {
  unsigned bits = 0;
  BigRat eps;
  BigInt repeats;
  std::vector<unsigned> bit_of_row;

  BigInt columns() const { return repeats * pow2(bits); }
};

using Segment = std::variant<ExplicitColumn, PadSegment>;

inline BigInt segment_columns(const Segment& s) {
  if (const auto* p = std::get_if<PadSegment>(&s)) return p->columns();
  return 1;
}

/// Sums of products kept as integers over one common denominator. Every
/// value is num/den; den only grows (to an lcm) when a new term needs it, so
/// the hot updates are integer multiply-adds. Extras are further scaled
/// values and bounds eps get thresholds thr with |x| < thr <=> |x|/den < eps.
class ScaledSums {
 public:
  explicit ScaledSums(std::size_t h = 0) : h_(h), vals_(h * h) {}

  const BigInt& den() const { return den_; }
  BigInt& num(std::size_t i, std::size_t j) { return vals_[std::min(i, j) * h_ + std::max(i, j)]; }
  const BigInt& num(std::size_t i, std::size_t j) const { return vals_[std::min(i, j) * h_ + std::max(i, j)]; }
  BigRat value(std::size_t i, std::size_t j) const { return make_rat(num(i, j), den_); }

  std::size_t add_extra(const BigRat& v) {
    fit(v.get_den());
    extras_.push_back(scaled(v));
    return extras_.size() - 1;
  }
  BigInt& extra(std::size_t k) { return extras_[k]; }
  const BigInt& extra(std::size_t k) const { return extras_[k]; }
  BigRat extra_value(std::size_t k) const { return make_rat(extras_[k], den_); }

  std::size_t add_bound(const BigRat& eps) {
    bounds_.push_back(eps);
    thr_.push_back(threshold(eps));
    return bounds_.size() - 1;
  }
  const BigInt& threshold_num(std::size_t k) const { return thr_[k]; }

  /// Makes d divide den.
  void fit(const BigInt& d) {
    if (mpz_divisible_p(den_.get_mpz_t(), d.get_mpz_t())) return;
    BigInt next;
    mpz_lcm(next.get_mpz_t(), den_.get_mpz_t(), d.get_mpz_t());
    const BigInt f = next / den_;
    for (auto& v : vals_) v *= f;
    for (auto& v : extras_) v *= f;
    den_ = next;
    for (std::size_t k = 0; k < bounds_.size(); ++k) thr_[k] = threshold(bounds_[k]);
  }

  /// v * den; den must already be a multiple of v's denominator.
  BigInt scaled(const BigRat& v) const { return v.get_num() * (den_ / v.get_den()); }

  /// Adds col col^T to the upper triangle. Columns usually repeat a few
  /// values, so products are formed once per pair of distinct values.
  void add_column(const std::vector<BigRat>& col) {
    distinct_.clear();
    idx_.resize(h_);
    for (std::size_t i = 0; i < h_; ++i) {
      std::size_t k = 0;
      while (k < distinct_.size() && *distinct_[k] != col[i]) ++k;
      if (k == distinct_.size()) distinct_.push_back(&col[i]);
      idx_[i] = k;
    }
    const std::size_t d = distinct_.size();
    BigInt l = 1;
    for (const auto* v : distinct_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v->get_den_mpz_t());
    fit(BigInt(l * l));
    const BigInt f = den_ / (l * l);
    w_.resize(d);
    for (std::size_t k = 0; k < d; ++k) w_[k] = distinct_[k]->get_num() * (l / distinct_[k]->get_den());
    prod_.resize(d * d);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = a; b < d; ++b) prod_[a * d + b] = prod_[b * d + a] = w_[a] * w_[b] * f;
    for (std::size_t i = 0; i < h_; ++i) {
      const BigInt* row = &prod_[idx_[i] * d];
      for (std::size_t j = i; j < h_; ++j) mpz_add(vals_[i * h_ + j].get_mpz_t(), vals_[i * h_ + j].get_mpz_t(), row[idx_[j]].get_mpz_t());
    }
  }

  void add_value(std::size_t i, std::size_t j, const BigRat& v) {
    fit(v.get_den());
    num(i, j) += scaled(v);
  }

 private:
  BigInt threshold(const BigRat& eps) const {
    BigInt t = eps.get_num() * den_;
    mpz_cdiv_q(t.get_mpz_t(), t.get_mpz_t(), eps.get_den_mpz_t());
    return t;
  }

  std::size_t h_ = 0;
  BigInt den_ = 1;
  std::vector<BigInt> vals_;
  std::vector<BigInt> extras_;
  std::vector<BigRat> bounds_;
  std::vector<BigInt> thr_;
  std::vector<const BigRat*> distinct_;
  std::vector<std::size_t> idx_;
  std::vector<BigInt> w_, prod_;
};

class SignCondition {
 public:
  SignCondition() = default;

  /// Rows of equal length; entries must be nonzero.
  explicit SignCondition(const std::vector<std::vector<BigRat>>& rows) : h_(rows.size()), sums_(rows.size()) {
    if (rows.empty()) throw DomainError("a condition needs at least one row");
    const std::size_t n = rows[0].size();
    for (const auto& r : rows)
      if (r.size() != n) throw DomainError("seed rows must have equal length");
    for (std::size_t c = 0; c < n; ++c) {
      std::vector<BigRat> col;
      for (const auto& r : rows) col.push_back(r[c]);
      append_column(std::move(col));
    }
  }

  std::size_t h() const { return h_; }
  const BigInt& N() const { return n_; }
  const std::vector<Segment>& segments() const { return segments_; }
  const std::vector<BigInt>& segment_starts() const { return starts_; }
  const std::vector<Requirement>& requirements() const { return reqs_; }

  /// sum over all columns of s_i s_j (i == j gives the square sum).
  BigRat gram(std::size_t i, std::size_t j) const { return sums_.value(i, j); }

  BigRat tail(const Requirement& r) const { return gram(r.i, r.j) - r.head; }

  /// eps - |current window sum from k|; positive while r holds.
  BigRat slack(const Requirement& r) const { return r.eps - abs_rat(tail(r)); }

  /// Smallest slack over all requirements except the one on rows `skip`.
  std::optional<BigRat> min_slack(std::optional<std::pair<std::size_t, std::size_t>> skip = std::nullopt) const {
    // For each distinct eps only the largest |tail| matters.
    std::vector<std::optional<std::size_t>> worst(eps_values_.size());
    BigInt t, best_abs;
    std::vector<BigInt> worst_abs(eps_values_.size());
    for (std::size_t r = 0; r < reqs_.size(); ++r) {
      if (skip && reqs_[r].i == skip->first && reqs_[r].j == skip->second) continue;
      mpz_sub(t.get_mpz_t(), sums_.num(reqs_[r].i, reqs_[r].j).get_mpz_t(), sums_.extra(r).get_mpz_t());
      mpz_abs(t.get_mpz_t(), t.get_mpz_t());
      const std::size_t g = eps_group_[r];
      if (!worst[g] || t > worst_abs[g]) {
        worst[g] = r;
        worst_abs[g] = t;
      }
    }
    std::optional<BigRat> m;
    for (std::size_t g = 0; g < eps_values_.size(); ++g) {
      if (!worst[g]) continue;
      const BigRat sl = eps_values_[g] - make_rat(worst_abs[g], sums_.den());
      if (!m || sl < *m) m = sl;
    }
    return m;
  }

  BigRat entry(std::size_t row, const BigInt& col) const {
    if (col < 0 || col >= n_) throw DomainError("column " + col.get_str() + " out of range");
    const auto it = std::upper_bound(starts_.begin(), starts_.end(), col);
    const std::size_t s = static_cast<std::size_t>(it - starts_.begin()) - 1;
    if (const auto* e = std::get_if<ExplicitColumn>(&segments_[s])) return e->entries.at(row);
    const auto& p = std::get<PadSegment>(segments_[s]);
    BigInt t = col - starts_[s];
    mpz_fdiv_r_2exp(t.get_mpz_t(), t.get_mpz_t(), p.bits);
    return p.eps * BigRat(hadamard_entry(p.bit_of_row.at(row), t));
  }

  /// Appends one explicit column; requirements are re-checked.
  void append_column(std::vector<BigRat> col) {
    if (col.size() != h_) throw DomainError("column height mismatch");
    for (const auto& v : col)
      if (v == 0) throw InvariantViolation("zero entry in a sign condition");
    sums_.add_column(col);
    starts_.push_back(n_);
    n_ += 1;
    segments_.push_back(ExplicitColumn{std::move(col)});
    BigInt t;
    for (std::size_t r = 0; r < reqs_.size(); ++r) {
      mpz_sub(t.get_mpz_t(), sums_.num(reqs_[r].i, reqs_[r].j).get_mpz_t(), sums_.extra(r).get_mpz_t());
      if (mpz_cmpabs(t.get_mpz_t(), sums_.threshold_num(r).get_mpz_t()) >= 0)
        throw InvariantViolation("column breaks requirement on rows " + pair_str(reqs_[r]));
    }
  }

  /// Appends a pad segment; every window sum over it is checked analytically.
  void append_pad(PadSegment p) {
    if (p.eps <= 0 || p.repeats < 1 || p.bit_of_row.size() != h_) throw DomainError("malformed pad segment");
    const BigRat eps_sq = p.eps * p.eps;
    const BigInt cols = p.columns();
    for (const auto& r : reqs_) {
      const BigRat t = tail(r);
      const unsigned a = p.bit_of_row[r.i], c = p.bit_of_row[r.j];
      BigRat worst;
      if (a != c) worst = abs_rat(t) + BigRat(pow2(std::min(a, c))) * eps_sq;
      else worst = std::max(abs_rat(t), abs_rat(t + BigRat(cols) * eps_sq));
      if (worst >= r.eps) throw InvariantViolation("pad segment breaks requirement on rows " + pair_str(r));
    }
    const BigRat add = BigRat(cols) * eps_sq;
    for (std::size_t i = 0; i < h_; ++i)
      for (std::size_t j = i; j < h_; ++j)
        if (p.bit_of_row[i] == p.bit_of_row[j]) sums_.add_value(i, j, add);
    starts_.push_back(n_);
    n_ += cols;
    segments_.push_back(std::move(p));
  }

  void add_requirement(std::size_t i, std::size_t j, const BigRat& eps) {
    if (i == j || i >= h_ || j >= h_) throw DomainError("requirement needs two distinct rows");
    if (eps <= 0) throw DomainError("requirement eps must be positive");
    Requirement r{std::min(i, j), std::max(i, j), n_, eps, BigRat(0)};
    r.head = gram(r.i, r.j);
    if (abs_rat(r.head) >= eps) throw InvariantViolation("new requirement fails at its checkpoint");
    push_requirement(std::move(r));
  }

  /// Rows 2i and 2i+1 both copy row i; requirements go to {2i,2j} and {2i+1,2j+1}.
  SignCondition doubled() const {
    SignCondition d;
    d.h_ = 2 * h_;
    d.n_ = n_;
    d.starts_ = starts_;
    for (const auto& s : segments_) {
      if (const auto* e = std::get_if<ExplicitColumn>(&s)) {
        ExplicitColumn c;
        for (const auto& v : e->entries) {
          c.entries.push_back(v);
          c.entries.push_back(v);
        }
        d.segments_.push_back(std::move(c));
      } else {
        PadSegment p = std::get<PadSegment>(s);
        std::vector<unsigned> bits;
        for (unsigned b : p.bit_of_row) {
          bits.push_back(b);
          bits.push_back(b);
        }
        p.bit_of_row = std::move(bits);
        d.segments_.push_back(std::move(p));
      }
    }
    d.sums_ = ScaledSums(d.h_);
    d.sums_.fit(sums_.den());
    for (std::size_t i = 0; i < d.h_; ++i)
      for (std::size_t j = i; j < d.h_; ++j) d.sums_.num(i, j) = sums_.num(i / 2, j / 2);
    for (const auto& r : reqs_) {
      d.push_requirement(Requirement{2 * r.i, 2 * r.j, r.k, r.eps, r.head});
      d.push_requirement(Requirement{2 * r.i + 1, 2 * r.j + 1, r.k, r.eps, r.head});
    }
    return d;
  }

  static std::string pair_str(const Requirement& r) {
    return "{" + std::to_string(r.i) + "," + std::to_string(r.j) + "} (k=" + r.k.get_str() + ", eps=" + to_string(r.eps) + ")";
  }

  /// Rebuilds a condition from stored parts without checking them; the
  /// result is only meant for verify_condition and entry lookups.
  static SignCondition from_parts(std::size_t h, std::vector<Segment> segments, std::vector<Requirement> reqs) {
    SignCondition c;
    c.h_ = h;
    c.sums_ = ScaledSums(h);
    for (auto& s : segments) {
      c.starts_.push_back(c.n_);
      c.n_ += segment_columns(s);
      c.segments_.push_back(std::move(s));
    }
    for (auto& r : reqs) c.push_requirement(std::move(r));
    return c;
  }

 private:
  void push_requirement(Requirement r) {
    sums_.add_extra(r.head);
    sums_.add_bound(r.eps);
    const auto it = std::find(eps_values_.begin(), eps_values_.end(), r.eps);
    eps_group_.push_back(static_cast<std::size_t>(it - eps_values_.begin()));
    if (it == eps_values_.end()) eps_values_.push_back(r.eps);
    reqs_.push_back(std::move(r));
  }

  std::size_t h_ = 0;
  BigInt n_ = 0;
  std::vector<Segment> segments_;
  std::vector<BigInt> starts_;
  std::vector<Requirement> reqs_;
  ScaledSums sums_;                 ///< gram entries; extra r is the head of requirement r, bound r its eps
  std::vector<BigRat> eps_values_;  ///< distinct requirement eps
  std::vector<std::size_t> eps_group_;
};

struct RequirementCheck {
  Requirement req;
  BigRat head;      ///< recomputed sum before k
  BigRat max_tail;  ///< max |window sum| over all l in (k, N]
  bool ok = false;
};

struct ConditionReport {
  bool entries_nonzero = true;
  std::vector<RequirementCheck> checks;
  std::vector<BigRat> gram;  ///< recomputed, h x h row-major (upper triangle filled)
  bool ok() const {
    if (!entries_nonzero) return false;
    for (const auto& c : checks)
      if (!c.ok) return false;
    return true;
  }
};

/// Recomputes everything from the stored columns: nonzero entries, each
/// requirement's head and every window sum, and the Gram matrix. Nothing
/// cached in the condition is used.
inline ConditionReport verify_condition(const SignCondition& c) {
  ConditionReport rep;
  const std::size_t h = c.h();
  ScaledSums g(h);
  const auto& reqs = c.requirements();
  const std::size_t R = reqs.size();
  rep.checks.resize(R);
  // extras 2r and 2r+1: head and running max |tail| of requirement r.
  for (std::size_t r = 0; r < R; ++r) {
    rep.checks[r].req = reqs[r];
    g.add_extra(BigRat(0));
    g.add_extra(BigRat(0));
  }
  std::vector<std::size_t> order(R);
  for (std::size_t r = 0; r < R; ++r) order[r] = r;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return reqs[a].k < reqs[b].k; });
  std::size_t next = 0;
  std::vector<std::size_t> active;
  std::vector<bool> seen(R, false);
  auto activate = [&](const BigInt& pos) {
    while (next < R && reqs[order[next]].k <= pos) {
      const std::size_t r = order[next++];
      if (reqs[r].k < pos) continue;  // checkpoint between segment starts
      g.extra(2 * r) = g.num(reqs[r].i, reqs[r].j);
      seen[r] = true;
      active.push_back(r);
    }
  };
  const auto& segs = c.segments();
  const auto& starts = c.segment_starts();
  BigInt t;
  for (std::size_t s = 0; s < segs.size(); ++s) {
    activate(starts[s]);
    if (const auto* e = std::get_if<ExplicitColumn>(&segs[s])) {
      if (e->entries.size() != h) throw DomainError("column height mismatch");
      for (const auto& v : e->entries)
        if (v == 0) rep.entries_nonzero = false;
      g.add_column(e->entries);
      for (std::size_t r : active) {
        mpz_sub(t.get_mpz_t(), g.num(reqs[r].i, reqs[r].j).get_mpz_t(), g.extra(2 * r).get_mpz_t());
        if (mpz_cmpabs(t.get_mpz_t(), g.extra(2 * r + 1).get_mpz_t()) > 0) mpz_abs(g.extra(2 * r + 1).get_mpz_t(), t.get_mpz_t());
      }
      continue;
    }
    const auto& p = std::get<PadSegment>(segs[s]);
    if (p.eps <= 0) rep.entries_nonzero = false;
    const BigRat eps_sq = p.eps * p.eps;
    const BigInt cols = p.columns();
    for (std::size_t r : active) {
      const BigRat tr = g.value(reqs[r].i, reqs[r].j) - g.extra_value(2 * r);
      const unsigned a = p.bit_of_row[reqs[r].i], b = p.bit_of_row[reqs[r].j];
      BigRat worst;
      if (a != b) worst = abs_rat(tr) + BigRat(pow2(std::min(a, b))) * eps_sq;
      else worst = std::max(abs_rat(tr), abs_rat(tr + BigRat(cols) * eps_sq));
      if (worst > g.extra_value(2 * r + 1)) {
        g.fit(worst.get_den());
        g.extra(2 * r + 1) = g.scaled(worst);
      }
    }
    const BigRat add = BigRat(cols) * eps_sq;
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = i; j < h; ++j)
        if (p.bit_of_row[i] == p.bit_of_row[j]) g.add_value(i, j, add);
  }
  activate(c.N());
  for (std::size_t r = 0; r < R; ++r) {
    auto& chk = rep.checks[r];
    chk.head = g.extra_value(2 * r);
    chk.max_tail = g.extra_value(2 * r + 1);
    chk.ok = seen[r] && abs_rat(chk.head) < reqs[r].eps && chk.max_tail < reqs[r].eps && chk.head == reqs[r].head;
  }
  rep.gram.assign(h * h, BigRat(0));
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = i; j < h; ++j) rep.gram[i * h + j] = g.value(i, j);
  return rep;
}

}  // namespace orthofam
