#pragma once

// Arbitrary-precision integers and rationals, backed by GMP.
//
// BigRat values are always kept canonical: gcd(|num|, den) = 1, den > 0 and
// zero is 0/1. gmpxx canonicalizes the results of arithmetic; the helpers
// below canonicalize anything built from raw numerator/denominator pairs.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace orthofam {

using BigInt = mpz_class;
using BigRat = mpq_class;

/// Thrown for malformed scalar text or invalid arithmetic input.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A constructed object failed one of its own exact checks.
class InvariantViolation : public DomainError {
 public:
  using DomainError::DomainError;
};

inline BigRat make_rat(const BigInt& num, const BigInt& den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  BigRat q(num, den);
  q.canonicalize();
  return q;
}

inline BigRat make_rat(long num, long den = 1) { return make_rat(BigInt(num), BigInt(den)); }

inline int sign(const BigRat& q) { return sgn(q); }
inline int sign(const BigInt& z) { return sgn(z); }

inline BigInt parse_int(std::string_view text) {
  BigInt z;
  std::string s(text);
  if (s.empty() || z.set_str(s, 10) != 0) throw DomainError("malformed integer: '" + s + "'");
  return z;
}

/// Parses "a", "-a" or "a/b" (decimal integers).
inline BigRat parse_rat(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return BigRat(parse_int(text));
  return make_rat(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

inline std::string to_string(const BigInt& z) { return z.get_str(); }

inline std::string to_string(const BigRat& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline BigInt pow_int(const BigInt& base, unsigned long exp) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

inline BigRat pow_rat(const BigRat& base, unsigned long exp) {
  return make_rat(pow_int(base.get_num(), exp), pow_int(base.get_den(), exp));
}

/// 2^e as an integer.
inline BigInt pow2(unsigned long e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r;
}

/// 2^-e as a rational.
inline BigRat half_pow(unsigned long e) { return make_rat(BigInt(1), pow2(e)); }

inline BigRat abs_rat(const BigRat& q) { return q < 0 ? BigRat(-q) : q; }

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline BigInt floor_rat(const BigRat& q) { return floor_div(q.get_num(), q.get_den()); }

/// Smallest integer >= q.
inline BigInt ceil_rat(const BigRat& q) {
  BigInt r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return r;
}

/// Floor of the b-th root of a nonnegative integer, and whether it was exact.
inline BigInt int_root(const BigInt& x, unsigned long b, bool* exact = nullptr) {
  if (x < 0) throw DomainError("root of a negative integer");
  BigInt r;
  const int ex = mpz_root(r.get_mpz_t(), x.get_mpz_t(), b);
  if (exact) *exact = ex != 0;
  return r;
}

/// Largest 2^-e (e >= 0) satisfying pred, where pred is monotone: once true
/// for some 2^-e it stays true for all smaller powers. The bound guards
/// against predicates that never become true.
template <class Pred>
BigRat largest_power_of_half(Pred pred, unsigned long max_exponent = 1u << 20) {
  // Exponential probe, then bisection on the exponent.
  unsigned long hi = 1;
  while (!pred(half_pow(hi))) {
    if (hi >= max_exponent) throw DomainError("no power of 1/2 satisfies the bound");
    hi = std::min(hi * 2, max_exponent);
  }
  if (pred(BigRat(1))) return BigRat(1);
  unsigned long lo = 0;  // pred false at lo, true at hi
  while (hi - lo > 1) {
    const unsigned long mid = lo + (hi - lo) / 2;
    if (pred(half_pow(mid)))
      hi = mid;
    else
      lo = mid;
  }
  return half_pow(hi);
}

/// Largest power of 1/2 strictly below a positive bound.
inline BigRat largest_power_of_half_below(const BigRat& bound) {
  if (bound <= 0) throw DomainError("bound must be positive");
  return largest_power_of_half([&](const BigRat& v) { return v < bound; });
}

}  // namespace orthofam
