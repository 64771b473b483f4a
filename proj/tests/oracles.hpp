#pragma once

// Independent reference computations for the tests. They share only the
// number types with the library; everything else is recomputed here, most of
// it by brute force.

#include "orthofam/exact/bigrat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

using orthofam::BigInt;
using orthofam::BigRat;

inline BigRat qpow(BigRat b, unsigned long e) {
  BigRat r = 1;
  for (; e; e >>= 1, b *= b)
    if (e & 1) r *= b;
  return r;
}

inline BigInt zpow(BigInt b, unsigned long e) {
  BigInt r = 1;
  for (; e; e >>= 1, b *= b)
    if (e & 1) r *= b;
  return r;
}

/// Smallest k > r with (r/k)^(p/2) k <= 1/n^2, p = a/b, checked as
/// (r/k)^a k^(2b) n^(4b) <= 1. Level 0 has no l_p condition, so only k > r.
/// Doubling then bisection; the predicate is monotone in k.
inline BigInt min_k(unsigned n, const BigInt& r, const BigRat& p) {
  const unsigned long a = p.get_num().get_ui(), b = p.get_den().get_ui();
  auto ok = [&](const BigInt& k) {
    if (k <= r) return false;
    if (n == 0) return true;
    return qpow(BigRat(r) / BigRat(k), a) * BigRat(zpow(k, 2 * b)) * BigRat(zpow(BigInt(n), 4 * b)) <= 1;
  };
  BigInt hi = 1;
  while (!ok(hi)) hi *= 2;
  BigInt lo = hi / 2;  // ok(lo) false or lo == 0
  while (hi - lo > 1) {
    const BigInt mid = (lo + hi) / 2;
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

/// Rank of a rational matrix by plain fraction elimination.
inline std::size_t rank(std::vector<std::vector<BigRat>> m) {
  std::size_t r = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = r + 1; i < m.size(); ++i) {
      const BigRat f = m[i][c] / m[r][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

inline BigRat dot(const std::vector<BigRat>& a, const std::vector<BigRat>& b) {
  BigRat s = 0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) s += a[i] * b[i];
  return s;
}

/// min over ||x|| = 3/4 of max_s (s, x)^2, sampled on the cube surface with
/// the given step and projected to radius 3/4. Overestimates the true value.
inline double minmax_grid(const std::vector<std::vector<double>>& level, double step = 1.0 / 64) {
  const std::size_t n = level.size();
  const long ticks = std::lround(2.0 / step);
  double best = INFINITY;
  std::vector<double> x(n);
  // One face at a time: coordinate f fixed at +-1, the others on the grid.
  for (std::size_t face = 0; face < 2 * n; ++face) {
    const std::size_t f = face / 2;
    std::vector<long> idx(n, 0);
    for (;;) {
      double norm = 0;
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = i == f ? (face % 2 ? 1.0 : -1.0) : -1.0 + static_cast<double>(idx[i]) * step;
        norm += x[i] * x[i];
      }
      const double scale2 = 0.5625 / norm;
      double worst = 0;
      for (const auto& s : level) {
        double d = 0;
        for (std::size_t i = 0; i < n; ++i) d += s[i] * x[i];
        worst = std::max(worst, d * d * scale2);
      }
      best = std::min(best, worst);
      std::size_t k = 0;
      while (k < n && (k == f || idx[k] == ticks)) {
        if (k != f) idx[k] = 0;
        ++k;
      }
      if (k == n) break;
      ++idx[k];
    }
  }
  return best;
}

/// Random rational in [-bound, bound] with denominator up to maxden.
inline BigRat random_rat(std::mt19937_64& rng, long bound, long maxden) {
  std::uniform_int_distribution<long> den(1, maxden);
  const long d = den(rng);
  std::uniform_int_distribution<long> num(-bound * d, bound * d);
  return orthofam::make_rat(num(rng), d);
}

}  // namespace oracle
