#pragma once

// Exact Gaussian elimination over a field type T (BigRat or QuadElem).
// T needs +, -, *, /, unary minus, construction from 0/1 and is_zero(T).

#include "orthofam/exact/bigrat.hpp"
#include "orthofam/exact/quadratic_field.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace orthofam {

template <class T>
using Matrix = std::vector<std::vector<T>>;

template <class T>
struct RrefResult {
  Matrix<T> reduced;
  std::vector<std::size_t> pivots;  ///< pivot column of each nonzero row
  std::size_t rank() const { return pivots.size(); }
};

/// Reduced row echelon form.
template <class T>
RrefResult<T> rref(Matrix<T> m) {
  RrefResult<T> out;
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && is_zero(m[piv][c])) ++piv;
    if (piv == rows) continue;
    std::swap(m[r], m[piv]);
    const T inv = T(1) / m[r][c];
    for (auto& v : m[r]) v = v * inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || is_zero(m[i][c])) continue;
      const T f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] = m[i][j] - f * m[r][j];
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.reduced = std::move(m);
  return out;
}

template <class T>
std::size_t rank(const Matrix<T>& m) {
  return rref(m).rank();
}

/// Basis of {u : m u = 0}.
template <class T>
Matrix<T> nullspace(const Matrix<T>& m, std::size_t cols, const T& zero = T(0)) {
  const auto rr = rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : rr.pivots) is_pivot[c] = true;
  Matrix<T> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<T> u(cols, zero);
    u[free] = T(1);
    for (std::size_t i = 0; i < rr.pivots.size(); ++i) u[rr.pivots[i]] = -rr.reduced[i][free];
    basis.push_back(std::move(u));
  }
  return basis;
}

/// Coefficients c, not all zero, with sum_i c_i rows_i = 0, or nullopt if the
/// rows are independent. Runs elimination on [rows | I].
template <class T>
std::optional<std::vector<T>> find_dependency(const Matrix<T>& rows, const T& zero = T(0)) {
  const std::size_t n = rows.size();
  if (n == 0) return std::nullopt;
  const std::size_t cols = rows[0].size();
  Matrix<T> aug(n);
  for (std::size_t i = 0; i < n; ++i) {
    aug[i] = rows[i];
    aug[i].resize(cols + n, zero);
    aug[i][cols + i] = T(1);
  }
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < n; ++c) {
    std::size_t piv = r;
    while (piv < n && is_zero(aug[piv][c])) ++piv;
    if (piv == n) continue;
    std::swap(aug[r], aug[piv]);
    for (std::size_t i = r + 1; i < n; ++i) {
      if (is_zero(aug[i][c])) continue;
      const T f = aug[i][c] / aug[r][c];
      for (std::size_t j = c; j < cols + n; ++j) aug[i][j] = aug[i][j] - f * aug[r][j];
    }
    ++r;
  }
  if (r == n) return std::nullopt;
  // Row r has a zero left block; its right block is the combination.
  return std::vector<T>(aug[r].begin() + static_cast<std::ptrdiff_t>(cols), aug[r].end());
}

/// Solves the square nonsingular system a x = b.
template <class T>
std::vector<T> solve_square(const Matrix<T>& a, const std::vector<T>& b, const T& zero = T(0)) {
  const std::size_t n = a.size();
  Matrix<T> aug(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != n) throw DomainError("solve_square needs a square matrix");
    aug[i] = a[i];
    aug[i].push_back(b.at(i));
  }
  const auto rr = rref(aug);
  if (rr.rank() != n || (n > 0 && rr.pivots.back() != n - 1)) throw DomainError("singular system");
  std::vector<T> x(n, zero);
  for (std::size_t i = 0; i < n; ++i) x[i] = rr.reduced[i][n];
  return x;
}

template <class T>
T dot(const std::vector<T>& a, const std::vector<T>& b, const T& zero = T(0)) {
  T s = zero;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) s = s + a[i] * b[i];
  return s;
}

}  // namespace orthofam
