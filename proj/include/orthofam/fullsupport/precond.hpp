#pragma once

// Finite rows with almost disjoint promises. A row's nonzero entries have
// absolute value at least 1; a promise (beta, n) on row alpha says that from
// coordinate n on, alpha and beta are never both nonzero. Restoring
// orthogonality appends two columns per non-orthogonal pair, nonzero only on
// that pair, so no promise can break.

#include "orthofam/exact/bigrat.hpp"
#include "orthofam/fullsupport/sign_condition.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace orthofam {

using RowLabel = std::uint64_t;

struct AdRow {
  std::vector<BigRat> entries;
  std::set<std::pair<RowLabel, std::size_t>> promises;  ///< (beta, n)
};

class AdSupportCondition {
 public:
  AdSupportCondition() = default;

  /// Adds a row; every row must have length N (the first row fixes N).
  void add_row(RowLabel label, std::vector<BigRat> entries) {
    if (rows_.count(label)) throw DomainError("row " + std::to_string(label) + " already exists");
    if (!rows_.empty() && entries.size() != n_) throw DomainError("row length differs from N");
    for (const auto& v : entries)
      if (v != 0 && abs_rat(v) < 1) throw InvariantViolation("row " + std::to_string(label) + " has a nonzero entry below 1 in absolute value");
    if (rows_.empty()) n_ = entries.size();
    rows_[label].entries = std::move(entries);
  }

  void add_promise(RowLabel alpha, RowLabel beta, std::size_t from) {
    if (!rows_.count(alpha) || !rows_.count(beta)) throw DomainError("promise names an unknown row");
    if (alpha == beta) throw DomainError("a row cannot promise against itself");
    rows_[alpha].promises.insert({beta, from});
  }

  std::size_t N() const { return n_; }
  const std::map<RowLabel, AdRow>& rows() const { return rows_; }
  const AdRow& row(RowLabel a) const {
    const auto it = rows_.find(a);
    if (it == rows_.end()) throw DomainError("unknown row " + std::to_string(a));
    return it->second;
  }

  BigRat inner(RowLabel a, RowLabel b) const {
    BigRat s = 0;
    const auto& x = row(a).entries;
    const auto& y = row(b).entries;
    for (std::size_t m = 0; m < n_; ++m) s += x[m] * y[m];
    return s;
  }

  /// Pairs (a < b) with nonzero inner sum.
  std::vector<std::pair<RowLabel, RowLabel>> non_orthogonal_pairs() const {
    std::vector<std::pair<RowLabel, RowLabel>> out;
    for (auto a = rows_.begin(); a != rows_.end(); ++a)
      for (auto b = std::next(a); b != rows_.end(); ++b)
        if (inner(a->first, b->first) != 0) out.emplace_back(a->first, b->first);
    return out;
  }

  /// Empty when every promise holds coordinatewise; else a description of
  /// the first broken one.
  std::string broken_promise() const {
    for (const auto& [a, r] : rows_)
      for (const auto& [b, from] : r.promises) {
        const auto& y = row(b).entries;
        for (std::size_t m = from; m < n_; ++m)
          if (r.entries[m] != 0 && y[m] != 0)
            return "promise (" + std::to_string(b) + ", " + std::to_string(from) + ") of row " + std::to_string(a) +
                   " fails at coordinate " + std::to_string(m);
      }
    return {};
  }

  /// Appends one column; rows missing from `values` get 0.
  void append_column(const std::map<RowLabel, BigRat>& values) {
    for (const auto& [a, v] : values) {
      if (!rows_.count(a)) throw DomainError("column names an unknown row");
      if (v != 0 && abs_rat(v) < 1) throw InvariantViolation("new entry below 1 in absolute value");
    }
    for (auto& [a, r] : rows_) {
      const auto it = values.find(a);
      r.entries.push_back(it == values.end() ? BigRat(0) : it->second);
    }
    ++n_;
  }

 private:
  std::size_t n_ = 0;
  std::map<RowLabel, AdRow> rows_;
};

/// Smallest integer u >= 2 with |x + u| >= 1; then v = -x - u.
inline std::pair<BigInt, BigRat> restoring_pair(const BigRat& x) {
  BigInt u = 2;
  while (abs_rat(x + BigRat(u)) < 1) ++u;
  return {u, -x - BigRat(u)};
}

struct OrthogonalExtension {
  AdSupportCondition condition;
  std::vector<std::pair<RowLabel, RowLabel>> repaired;  ///< pairs that got two new columns
};

inline OrthogonalExtension extend_to_orthogonal(const AdSupportCondition& pre) {
  const auto pairs = pre.non_orthogonal_pairs();
  for (const auto& [a, b] : pairs)
    for (const auto& [p, q] : std::vector<std::pair<RowLabel, RowLabel>>{{a, b}, {b, a}})
      for (const auto& pr : pre.row(p).promises)
        if (pr.first == q)
          throw InvariantViolation("weak orthogonality fails: rows " + std::to_string(a) + " and " + std::to_string(b) +
                                   " are not orthogonal but row " + std::to_string(p) + " promises (" +
                                   std::to_string(q) + ", " + std::to_string(pr.second) + ")");
  if (auto e = pre.broken_promise(); !e.empty()) throw InvariantViolation(e);
  OrthogonalExtension out{pre, {}};
  for (const auto& [a, b] : pairs) {
    const BigRat x = out.condition.inner(a, b);
    const auto [u, v] = restoring_pair(x);
    out.condition.append_column({{a, BigRat(1)}, {b, BigRat(u)}});
    out.condition.append_column({{a, BigRat(1)}, {b, v}});
    out.repaired.emplace_back(a, b);
  }
  for (const auto& [a, b] : out.repaired)
    if (out.condition.inner(a, b) != 0) throw InvariantViolation("pair still not orthogonal after repair");
  if (!out.condition.non_orthogonal_pairs().empty()) throw InvariantViolation("repair left a non-orthogonal pair");
  if (auto e = out.condition.broken_promise(); !e.empty()) throw InvariantViolation(e);
  return out;
}

}  // namespace orthofam
