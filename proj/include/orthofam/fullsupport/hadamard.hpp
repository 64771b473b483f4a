#pragma once

// Sign blocks with pairwise orthogonal rows: row i of the h x 2^h block is
// (-1)^(bit i of t) at column t. The Remark variant uses h columns instead.

#include "orthofam/exact/bigrat.hpp"
#include "orthofam/exact/linalg.hpp"

#include <cstdint>
#include <vector>

namespace orthofam {

inline int hadamard_entry(unsigned row, const BigInt& t) { return mpz_tstbit(t.get_mpz_t(), row) ? -1 : 1; }

inline std::vector<std::vector<int>> hadamard_block(unsigned h) {
  if (h < 1) throw DomainError("hadamard block needs h >= 1");
  if (h > 24) throw DomainError("hadamard block too wide to materialize");
  const std::uint64_t n = std::uint64_t{1} << h;
  std::vector<std::vector<int>> rows(h, std::vector<int>(n));
  for (unsigned i = 0; i < h; ++i)
    for (std::uint64_t t = 0; t < n; ++t) rows[i][t] = (t >> i) & 1 ? -1 : 1;
  return rows;
}

/// Columns on which row i shows sign_i and row j shows sign_j.
inline std::uint64_t sign_pattern_count(const std::vector<std::vector<int>>& block, unsigned i, unsigned j, int sign_i,
                                        int sign_j) {
  std::uint64_t c = 0;
  for (std::size_t t = 0; t < block[i].size(); ++t)
    if (block[i][t] == sign_i && block[j][t] == sign_j) ++c;
  return c;
}

/// h x h matrix with -delta on the diagonal and eps elsewhere, where
/// delta = (h-2) eps / 2 makes the columns pairwise orthogonal:
/// -2 eps delta + (h-2) eps^2 = 0.
inline Matrix<BigRat> alt_pad_columns(unsigned h, const BigRat& eps) {
  if (h < 3) throw DomainError("alternative pad columns need h >= 3 (delta would not be positive)");
  if (eps <= 0) throw DomainError("eps must be positive");
  const BigRat delta = BigRat(h - 2) * eps / 2;
  Matrix<BigRat> m(h, std::vector<BigRat>(h, eps));
  for (unsigned i = 0; i < h; ++i) m[i][i] = -delta;
  return m;
}

}  // namespace orthofam
