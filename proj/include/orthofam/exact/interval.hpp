#pragma once

// Rational interval enclosures of radicals, sums of radicals and rational
// powers. Roots are bracketed with integer roots of scaled integers, so the
// lower end rounds down and the upper end rounds up without floating point.

#include "orthofam/exact/bigrat.hpp"
#include "orthofam/exact/radical.hpp"

#include <string>

namespace orthofam {

struct Interval {
  BigRat lo;
  BigRat hi;

  BigRat width() const { return hi - lo; }
  bool contains(const BigRat& v) const { return lo <= v && v <= hi; }
  bool excludes_zero() const { return lo > 0 || hi < 0; }

  Interval& operator+=(const Interval& o) {
    lo += o.lo;
    hi += o.hi;
    return *this;
  }
  friend Interval operator+(Interval a, const Interval& b) { return a += b; }

  /// Decimal preview of the midpoint; approximate, for reports only.
  double mid_double() const { return BigRat((lo + hi) / 2).get_d(); }

  std::string str() const { return "[" + to_string(lo) + ", " + to_string(hi) + "]"; }
};

inline Interval point_interval(const BigRat& v) { return {v, v}; }

inline unsigned long bit_length(const BigInt& z) {
  if (z == 0) return 0;
  return mpz_sizeinbase(z.get_mpz_t(), 2);
}

/// Enclosure of x^(1/m) for rational x >= 0 with width <= 2^-bits.
inline Interval root_enclosure(const BigRat& x, unsigned long m, unsigned long bits) {
  if (x < 0) throw DomainError("root of a negative rational");
  if (m == 0) throw DomainError("zeroth root");
  if (x == 0) return point_interval(BigRat(0));
  // x^(1/m) = (num * den^(m-1))^(1/m) / den; scaling by 2^(m*k) gives k
  // fractional bits of the integer root, then dividing by den shrinks the
  // width further.
  const BigInt& den = x.get_den();
  const BigInt n = x.get_num() * pow_int(den, m - 1);
  const unsigned long k = bits + 1;
  bool exact = false;
  const BigInt scaled = n * pow2(m * k);
  const BigInt r = int_root(scaled, m, &exact);
  const BigRat scale = make_rat(BigInt(1), pow2(k) * den);
  if (exact) return point_interval(BigRat(r) * scale);
  return {BigRat(r) * scale, BigRat(r + 1) * scale};
}

/// Enclosure of a radical value with width <= 2^-bits.
inline Interval approx(const Radical& v, unsigned long bits) {
  if (v.is_rational()) return point_interval(v.coeff());
  const BigRat c = abs_rat(v.coeff());
  // Width of c*[root] is c * width(root); ask the root for enough extra bits.
  const unsigned long extra = bit_length(ceil_rat(c)) + 1;
  const Interval r = root_enclosure(BigRat(v.radicand()), 2, bits + extra);
  if (v.coeff() > 0) return {r.lo * c, r.hi * c};
  return {-(r.hi * c), -(r.lo * c)};
}

/// |x|^p for rational p = a/b > 0, with width <= 2^-bits. Exact whenever the
/// power is rational.
inline Interval abs_pow_enclosure(const Radical& x, const BigRat& p, unsigned long bits) {
  if (p <= 0) throw DomainError("exponent must be positive");
  if (x.is_zero()) return point_interval(BigRat(0));
  // |x|^p = (x^2)^(a/(2b)).
  const unsigned long a = p.get_num().get_ui();
  const unsigned long b = p.get_den().get_ui();
  const BigRat sq = x.square();
  const BigRat base = pow_rat(sq, a);
  const unsigned long m = 2 * b;
  // Exact when base is a perfect m-th power.
  bool en = false, ed = false;
  const BigInt rn = int_root(base.get_num(), m, &en);
  const BigInt rd = int_root(base.get_den(), m, &ed);
  if (en && ed) return point_interval(make_rat(rn, rd));
  return root_enclosure(base, m, bits);
}

}  // namespace orthofam
