#pragma once

// Exact values of the form coeff * sqrt(radicand) with a rational coefficient
// and a square-free integer radicand.

#include "orthofam/exact/bigrat.hpp"
#include "orthofam/exact/squarefree.hpp"

#include <ostream>
#include <string>

namespace orthofam {

class Radical {
 public:
  /// Canonical zero: 0 * sqrt(1).
  Radical() : coeff_(0), radicand_(1) {}

  /// Rational value q * sqrt(1).
  Radical(const BigRat& q) : coeff_(q), radicand_(1) {}  // NOLINT(google-explicit-constructor)
  Radical(long q) : Radical(BigRat(q)) {}                 // NOLINT(google-explicit-constructor)

  /// q * sqrt(r) for rational r >= 0, normalized.
  static Radical of(const BigRat& q, const BigRat& r);

  /// sqrt(r) for rational r >= 0.
  static Radical sqrt(const BigRat& r) { return of(BigRat(1), r); }

  const BigRat& coeff() const { return coeff_; }
  const BigInt& radicand() const { return radicand_; }

  bool is_zero() const { return coeff_ == 0; }
  bool is_rational() const { return radicand_ == 1; }
  int sign() const { return orthofam::sign(coeff_); }

  /// value^2 = coeff^2 * radicand, always rational.
  BigRat square() const { return coeff_ * coeff_ * BigRat(radicand_); }

  Radical abs() const { return Radical(abs_rat(coeff_), radicand_, Trusted{}); }

  Radical operator-() const { return Radical(-coeff_, radicand_, Trusted{}); }

  Radical& operator*=(const BigRat& q) {
    coeff_ *= q;
    if (coeff_ == 0) radicand_ = 1;
    return *this;
  }

  friend Radical operator*(const Radical& a, const Radical& b);
  friend Radical operator*(Radical a, const BigRat& q) { return a *= q; }
  friend Radical operator*(const BigRat& q, Radical a) { return a *= q; }

  friend bool operator==(const Radical& a, const Radical& b) {
    return a.coeff_ == b.coeff_ && a.radicand_ == b.radicand_;
  }

  std::string str() const {
    if (radicand_ == 1) return to_string(coeff_);
    if (coeff_ == 1) return "sqrt(" + radicand_.get_str() + ")";
    if (coeff_ == -1) return "-sqrt(" + radicand_.get_str() + ")";
    return to_string(coeff_) + "*sqrt(" + radicand_.get_str() + ")";
  }

  friend std::ostream& operator<<(std::ostream& os, const Radical& r) { return os << r.str(); }

  /// Builds from an already normalized pair; checks only cheap invariants.
  static Radical from_normalized(const BigRat& coeff, const BigInt& radicand) {
    if (radicand < 1) throw DomainError("radicand must be a positive integer");
    if (coeff == 0) return Radical();
    return Radical(coeff, radicand, Trusted{});
  }

 private:
  struct Trusted {};
  Radical(BigRat coeff, BigInt radicand, Trusted) : coeff_(std::move(coeff)), radicand_(std::move(radicand)) {
    if (coeff_ == 0) radicand_ = 1;
  }

  BigRat coeff_;
  BigInt radicand_;
};

/// q * sqrt(r) = (q/b) * sqrt(a*b) for r = a/b, then the square part of a*b
/// moves into the coefficient.
inline Radical normalize_radical(const BigRat& q, const BigRat& r) {
  if (r < 0) throw DomainError("negative radicand " + to_string(r));
  if (q == 0 || r == 0) return Radical();
  const BigInt ab = r.get_num() * r.get_den();
  const SquareFreeParts parts = square_free_parts(ab);
  BigRat coeff = q * BigRat(parts.root) / BigRat(r.get_den());
  return Radical::from_normalized(coeff, parts.core);
}

inline Radical Radical::of(const BigRat& q, const BigRat& r) { return normalize_radical(q, r); }

/// With g = gcd of the radicands, sqrt(ra)*sqrt(rb) = g * sqrt((ra/g)*(rb/g));
/// the quotients are coprime square-free numbers, so their product is too.
inline Radical radical_mul(const Radical& a, const Radical& b) {
  if (a.is_zero() || b.is_zero()) return Radical();
  if (a.is_rational()) return b * a.coeff();
  if (b.is_rational()) return a * b.coeff();
  BigInt g;
  mpz_gcd(g.get_mpz_t(), a.radicand().get_mpz_t(), b.radicand().get_mpz_t());
  const BigInt rad = (a.radicand() / g) * (b.radicand() / g);
  return Radical::from_normalized(a.coeff() * b.coeff() * BigRat(g), rad);
}

inline Radical operator*(const Radical& a, const Radical& b) { return radical_mul(a, b); }

inline int radical_sign(const Radical& a) { return a.sign(); }

/// |a| <= |b| decided on exact squares.
inline bool abs_less_equal(const Radical& a, const Radical& b) { return a.square() <= b.square(); }

}  // namespace orthofam
