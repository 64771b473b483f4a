#pragma once

// Staircase vectors x_n = (1, ..., 1, -(n+1), 0, ...) with n+1 ones. They are
// pairwise orthogonal and their orthogonal complement inside the first d
// coordinates is the ones direction. Repeating the staircase on every row of
// an omega x omega grid gives the grid family.

#include "orthofam/exact/linalg.hpp"
#include "orthofam/sequences/handle.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace orthofam {

inline std::vector<BigRat> staircase(std::size_t n) {
  std::vector<BigRat> v(n + 1, BigRat(1));
  v.push_back(-BigRat(static_cast<long>(n + 1)));
  return v;
}

struct ComplementBasis {
  std::size_t d = 0;
  std::vector<std::vector<BigRat>> basis;
  bool ones_direction = false;   ///< dimension 1, spanned by (1, ..., 1)
  bool triangular_system = false;  ///< u_0 + ... + u_{k} = (k+1) u_{k+1} for k < d-1
};

/// Orthogonal complement of {x_0, ..., x_{d-2}} in Q^d by exact elimination.
inline ComplementBasis complement_basis(std::size_t d) {
  if (d < 2) throw DomainError("complement basis needs d >= 2");
  Matrix<BigRat> rows;
  for (std::size_t n = 0; n + 2 <= d; ++n) {
    auto v = staircase(n);
    v.resize(d, BigRat(0));
    rows.push_back(std::move(v));
  }
  ComplementBasis out;
  out.d = d;
  out.basis = nullspace(rows, d, BigRat(0));
  if (out.basis.size() == 1) {
    const auto& u = out.basis[0];
    out.ones_direction = u[0] != 0;
    for (const auto& v : u)
      if (v != u[0]) out.ones_direction = false;
    out.triangular_system = true;
    BigRat run = 0;
    for (std::size_t k = 0; k + 1 < d; ++k) {
      run += u[k];
      if (run != BigRat(static_cast<long>(k + 1)) * u[k + 1]) out.triangular_system = false;
    }
  }
  return out;
}

/// Diagonal enumeration of omega x omega: (r, c) -> (r+c)(r+c+1)/2 + c.
struct GridIndex {
  static Index pair(Index r, Index c) {
    const Index s = r + c;
    if (s < r || s + 1 == 0) throw DomainError("grid index overflow");
    const unsigned __int128 v = static_cast<unsigned __int128>(s) * (s + 1) / 2 + c;
    if (v > static_cast<unsigned __int128>(~Index{0})) throw DomainError("grid index overflow");
    return static_cast<Index>(v);
  }

  static std::pair<Index, Index> unpair(Index k) {
    // Largest s with s(s+1)/2 <= k.
    Index s = static_cast<Index>((std::sqrt(8.0L * static_cast<long double>(k) + 1.0L) - 1.0L) / 2.0L);
    auto tri = [](Index t) { return static_cast<unsigned __int128>(t) * (t + 1) / 2; };
    while (s > 0 && tri(s) > k) --s;
    while (tri(s + 1) <= k) ++s;
    const Index c = k - static_cast<Index>(tri(s));
    return {s - c, c};
  }
};

/// x^n_m: the staircase x_m placed on row n of the grid.
inline SeqHandle grid_vector(Index n, Index m) {
  SeqHandle h;
  h.id = "x^" + std::to_string(n) + "_" + std::to_string(m);
  h.value = [n, m](Index k) {
    const auto [r, c] = GridIndex::unpair(k);
    if (r != n) return Radical();
    if (c <= m) return Radical(1);
    if (c == m + 1) return Radical(-BigRat(static_cast<unsigned long>(m + 1)));
    return Radical();
  };
  FiniteSupport sup;
  for (Index c = 0; c <= m + 1; ++c) sup.indices.push_back(GridIndex::pair(n, c));
  std::sort(sup.indices.begin(), sup.indices.end());
  h.support = std::move(sup);
  return h;
}

/// Indicator of rows [first, first+count), or of all rows from `first` when
/// count is empty.
inline SeqHandle row_indicator(std::string id, Index first, std::optional<Index> count) {
  SeqHandle h;
  h.id = std::move(id);
  h.value = [first, count](Index k) {
    const Index r = GridIndex::unpair(k).first;
    const bool in = r >= first && (!count || r - first < *count);
    return in ? Radical(1) : Radical();
  };
  RowSupport sup;
  if (count) {
    for (Index r = first; r < first + *count; ++r) sup.rows.push_back(r);
  } else {
    sup.rows.push_back(first);
    sup.all_rows_from = true;
  }
  h.support = std::move(sup);
  // Row `first` alone already has infinitely many ones.
  h.square_divergence = [first](const BigRat& b) {
    const BigInt need = floor_rat(b) + 1;  // cells (first, 0..need-1)
    if (!need.fits_ulong_p()) throw DomainError("square divergence bound too large");
    return GridIndex::pair(first, need.get_ui() - 1) + 1;
  };
  return h;
}

struct Completions {
  std::vector<SeqHandle> y;  ///< y_i: ones on row i, i < n
  SeqHandle v;               ///< ones on rows >= n
};

/// The rows are pairwise disjoint, so every pair among the completions has
/// inner product exactly 0 from index 0 on.
inline Completions completions(Index n) {
  if (n < 1) throw DomainError("completions need n >= 1");
  Completions out;
  for (Index i = 0; i < n; ++i) out.y.push_back(row_indicator("y_" + std::to_string(i), i, Index{1}));
  out.v = row_indicator("v_" + std::to_string(n), n, std::nullopt);
  std::vector<SeqHandle*> all;
  for (auto& y : out.y) all.push_back(&y);
  all.push_back(&out.v);
  for (auto* a : all)
    for (auto* b : all)
      if (a != b) a->partners[b->id] = ClosedForm{RadicalSum(), BigInt(0)};
  return out;
}

}  // namespace orthofam
