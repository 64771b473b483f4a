#pragma once

// Least-norm exact solutions of (v_i, t) = beta_i: t = sum c_i v_i with
// G c = beta for the Gram matrix G of the v_i.

#include "orthofam/exact/linalg.hpp"

#include <string>
#include <vector>

namespace orthofam {

class DependentVectors : public DomainError {
 public:
  DependentVectors(const std::string& what, std::vector<BigRat> coeffs) : DomainError(what), coefficients(std::move(coeffs)) {}
  std::vector<BigRat> coefficients;  ///< sum_i c_i v_i = 0, not all zero
};

struct TargetSolution {
  std::vector<BigRat> t;
  std::vector<BigRat> coefficients;  ///< t = sum c_i v_i
  BigRat norm_sq;                    ///< beta^T G^-1 beta = ||t||^2
  std::vector<BigRat> residuals;     ///< (v_i, t) - beta_i, all zero
};

inline TargetSolution solve_targets(const std::vector<std::vector<BigRat>>& v, const std::vector<BigRat>& beta) {
  if (v.size() != beta.size()) throw DomainError("one target per vector is required");
  if (v.empty()) return {};
  const std::size_t d = v[0].size();
  for (const auto& r : v)
    if (r.size() != d) throw DomainError("vectors must have equal length");
  if (auto dep = find_dependency(v, BigRat(0))) {
    std::string msg = "vectors are linearly dependent: ";
    for (std::size_t i = 0; i < dep->size(); ++i) msg += (i ? ", " : "") + to_string((*dep)[i]);
    throw DependentVectors(msg, *dep);
  }
  const std::size_t m = v.size();
  Matrix<BigRat> g(m, std::vector<BigRat>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) g[i][j] = g[j][i] = dot(v[i], v[j]);
  TargetSolution s;
  s.coefficients = solve_square(g, beta, BigRat(0));
  s.t.assign(d, BigRat(0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < d; ++k) s.t[k] += s.coefficients[i] * v[i][k];
  s.norm_sq = dot(beta, s.coefficients);
  for (std::size_t i = 0; i < m; ++i) s.residuals.push_back(dot(v[i], s.t) - beta[i]);
  for (const auto& r : s.residuals)
    if (r != 0) throw InvariantViolation("least-norm solution has a nonzero residual");
  if (dot(s.t, s.t) != s.norm_sq) throw InvariantViolation("least-norm solution has the wrong norm");
  return s;
}

}  // namespace orthofam
