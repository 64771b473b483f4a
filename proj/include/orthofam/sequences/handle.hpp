#pragma once

// Finite prefixes and infinite-sequence handles with support and pairwise
// convergence metadata.

#include "orthofam/exact/radical.hpp"
#include "orthofam/exact/radical_sum.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace orthofam {

using Index = std::uint64_t;

using PrefixVec = std::vector<Radical>;

/// Raised when a certificate would need metadata the caller did not supply.
class Unverifiable : public DomainError {
 public:
  using DomainError::DomainError;
};

struct FiniteSupport {
  std::vector<Index> indices;  ///< sorted, distinct
};
struct FullSupport {};
/// Support given as a union of index ranges [first, last) listed per level.
struct BlockSupport {
  std::map<unsigned, std::vector<std::pair<BigInt, BigInt>>> levels;
  bool infinite = true;  ///< more levels exist beyond those listed
};
/// Support inside one row of a grid flattened by a pairing function.
struct RowSupport {
  std::vector<Index> rows;
  bool all_rows_from = false;  ///< rows[0].. onwards are all included
};
struct OpaqueSupport {};

using SupportInfo = std::variant<FiniteSupport, FullSupport, BlockSupport, RowSupport, OpaqueSupport>;

/// At each index m >= from at most one of the two sequences is nonzero.
/// Families whose blocks are too long to enumerate also supply the exact
/// inner sum below from, computed from block aggregates.
struct DisjointBeyond {
  BigInt from;
  std::optional<RadicalSum> value_before;
};

/// eps -> N such that partial inner sums at any m, m' >= N differ by < eps.
struct ConvergenceModulus {
  std::function<Index(const BigRat&)> modulus;
};

/// Exact value known in closed form together with its stabilization index.
struct ClosedForm {
  RadicalSum value;
  BigInt stable_from;
};

using PairMeta = std::variant<DisjointBeyond, ConvergenceModulus, ClosedForm>;

struct SeqHandle {
  std::string id;
  std::function<Radical(Index)> value;
  SupportInfo support = OpaqueSupport{};
  std::map<std::string, PairMeta> partners;
  /// bound b -> N with sum_{n<N} x(n)^2 > b; present when x is not in l2.
  std::function<Index(const BigRat&)> square_divergence;

  Radical operator()(Index n) const { return value(n); }

  PrefixVec prefix(Index n) const {
    PrefixVec out;
    out.reserve(n);
    for (Index i = 0; i < n; ++i) out.push_back(value(i));
    return out;
  }
};

/// Handle over a finite vector, zero beyond its end.
inline SeqHandle finite_handle(std::string id, PrefixVec entries) {
  auto data = std::make_shared<const PrefixVec>(std::move(entries));
  FiniteSupport sup;
  for (Index i = 0; i < data->size(); ++i)
    if (!(*data)[i].is_zero()) sup.indices.push_back(i);
  SeqHandle h;
  h.id = std::move(id);
  h.value = [data](Index n) { return n < data->size() ? (*data)[n] : Radical(); };
  h.support = std::move(sup);
  return h;
}

inline SeqHandle finite_handle(std::string id, const std::vector<BigRat>& entries) {
  PrefixVec v(entries.begin(), entries.end());
  return finite_handle(std::move(id), std::move(v));
}

inline SeqHandle unit_vector(std::string id, Index k) {
  PrefixVec v(k + 1);
  v[k] = Radical(1);
  return finite_handle(std::move(id), std::move(v));
}

/// The all-ones sequence: full support, square sum N at length N.
inline SeqHandle ones_handle(std::string id = "ones") {
  SeqHandle h;
  h.id = std::move(id);
  h.value = [](Index) { return Radical(1); };
  h.support = FullSupport{};
  h.square_divergence = [](const BigRat& b) { return static_cast<Index>(floor_rat(b).get_ui() + 1); };
  return h;
}

inline void declare_disjoint_beyond(SeqHandle& x, SeqHandle& y, const BigInt& from) {
  x.partners[y.id] = DisjointBeyond{from, std::nullopt};
  y.partners[x.id] = DisjointBeyond{from, std::nullopt};
}

/// Largest index listed in a finite support, plus one; zero for empty support.
inline std::optional<Index> finite_support_end(const SupportInfo& s) {
  if (const auto* f = std::get_if<FiniteSupport>(&s)) return f->indices.empty() ? 0 : f->indices.back() + 1;
  return std::nullopt;
}

}  // namespace orthofam
