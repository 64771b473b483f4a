#pragma once

// Finite sums of radicals over distinct square-free radicands. Square roots of
// distinct square-free integers are linearly independent over Q, so the map
// representation is unique and the value is zero iff the map is empty.

#include "orthofam/exact/interval.hpp"
#include "orthofam/exact/radical.hpp"

#include <map>
#include <string>
#include <vector>

namespace orthofam {

class RadicalSum {
 public:
  using Terms = std::map<BigInt, BigRat>;

  RadicalSum() = default;
  RadicalSum(const Radical& r) { add(r); }  // NOLINT(google-explicit-constructor)
  RadicalSum(const BigRat& q) { add(Radical(q)); }  // NOLINT(google-explicit-constructor)
  RadicalSum(long q) : RadicalSum(BigRat(q)) {}     // NOLINT(google-explicit-constructor)

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 1); }

  /// Rational value; throws if an irrational term is present.
  BigRat rational_value() const {
    if (terms_.empty()) return BigRat(0);
    if (!is_rational()) throw DomainError("sum is not rational: " + str());
    return terms_.begin()->second;
  }

  std::vector<Radical> as_radicals() const {
    std::vector<Radical> out;
    for (const auto& [r, c] : terms_) out.push_back(Radical::from_normalized(c, r));
    return out;
  }

  RadicalSum& add(const Radical& t) {
    if (t.is_zero()) return *this;
    auto [it, inserted] = terms_.try_emplace(t.radicand(), t.coeff());
    if (!inserted) {
      it->second += t.coeff();
      if (it->second == 0) terms_.erase(it);
    }
    return *this;
  }

  RadicalSum& operator+=(const Radical& t) { return add(t); }
  RadicalSum& operator+=(const RadicalSum& o) {
    for (const auto& [r, c] : o.terms_) add(Radical::from_normalized(c, r));
    return *this;
  }
  RadicalSum& operator-=(const RadicalSum& o) {
    for (const auto& [r, c] : o.terms_) add(Radical::from_normalized(-c, r));
    return *this;
  }
  RadicalSum& operator*=(const BigRat& q) {
    if (q == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [r, c] : terms_) c *= q;
    return *this;
  }

  RadicalSum operator-() const {
    RadicalSum out = *this;
    for (auto& [r, c] : out.terms_) c = -c;
    return out;
  }

  friend RadicalSum operator+(RadicalSum a, const RadicalSum& b) { return a += b; }
  friend RadicalSum operator-(RadicalSum a, const RadicalSum& b) { return a -= b; }
  friend RadicalSum operator*(RadicalSum a, const BigRat& q) { return a *= q; }

  friend RadicalSum operator*(const RadicalSum& a, const Radical& b) {
    RadicalSum out;
    for (const auto& [r, c] : a.terms_) out.add(radical_mul(Radical::from_normalized(c, r), b));
    return out;
  }

  friend RadicalSum operator*(const RadicalSum& a, const RadicalSum& b) {
    RadicalSum out;
    for (const auto& [r, c] : b.terms_) out += a * Radical::from_normalized(c, r);
    return out;
  }

  friend bool operator==(const RadicalSum& a, const RadicalSum& b) { return a.terms_ == b.terms_; }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [r, c] : terms_) {
      const std::string t = Radical::from_normalized(c, r).str();
      if (!out.empty()) out += (t[0] == '-') ? " - " + t.substr(1) : " + " + t;
      else out = t;
    }
    return out;
  }

 private:
  Terms terms_;
};

inline RadicalSum sum_add(RadicalSum s, const Radical& t) { return s.add(t); }

inline bool sum_is_zero(const RadicalSum& s) { return s.is_zero(); }

/// Enclosure with width <= 2^-bits.
inline Interval approx(const RadicalSum& s, unsigned long bits) {
  Interval out = point_interval(BigRat(0));
  const unsigned long extra = bit_length(BigInt(static_cast<unsigned long>(s.terms().size()))) + 1;
  for (const auto& [r, c] : s.terms()) out += approx(Radical::from_normalized(c, r), bits + extra);
  return out;
}

/// Exact sign. Doubles the precision until the enclosure excludes zero, which
/// terminates because a nonempty map is a nonzero value.
inline int sign(const RadicalSum& s) {
  if (s.is_zero()) return 0;
  if (s.is_rational()) return sign(s.rational_value());
  for (unsigned long bits = 32;; bits *= 2) {
    const Interval iv = approx(s, bits);
    if (iv.lo > 0) return 1;
    if (iv.hi < 0) return -1;
  }
}

inline RadicalSum abs(const RadicalSum& s) { return sign(s) < 0 ? -s : s; }

/// a < b for exact sums.
inline bool less(const RadicalSum& a, const RadicalSum& b) { return sign(b - a) > 0; }

inline bool abs_less(const RadicalSum& a, const RadicalSum& b) { return less(abs(a), abs(b)); }

}  // namespace orthofam
