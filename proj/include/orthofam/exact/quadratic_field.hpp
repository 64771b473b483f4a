#pragma once

// Elements a + b*sqrt(d) of Q(sqrt(d)) for one fixed square-free d > 1.
// Used where exact division is needed (elimination), which RadicalSum lacks.

#include "orthofam/exact/bigrat.hpp"
#include "orthofam/exact/radical.hpp"
#include "orthofam/exact/radical_sum.hpp"

#include <string>

namespace orthofam {

class QuadElem {
 public:
  QuadElem() : a_(0), b_(0), d_(2) {}
  QuadElem(long v) : a_(v), b_(0), d_(2) {}  // NOLINT(google-explicit-constructor)
  QuadElem(BigRat a, BigRat b, BigInt d) : a_(std::move(a)), b_(std::move(b)), d_(std::move(d)) {}

  /// Embeds a radical whose radicand is 1 or d.
  static QuadElem from(const Radical& r, const BigInt& d) {
    if (r.is_rational()) return QuadElem(r.coeff(), BigRat(0), d);
    if (r.radicand() != d) throw DomainError("radical " + r.str() + " is outside Q(sqrt(" + d.get_str() + "))");
    return QuadElem(BigRat(0), r.coeff(), d);
  }

  static QuadElem from(const RadicalSum& s, const BigInt& d) {
    QuadElem out(BigRat(0), BigRat(0), d);
    for (const auto& r : s.as_radicals()) out += from(r, d);
    return out;
  }

  const BigRat& a() const { return a_; }
  const BigRat& b() const { return b_; }

  bool is_zero() const { return a_ == 0 && b_ == 0; }

  QuadElem& operator+=(const QuadElem& o) {
    check_same(*this, o);
    a_ += o.a_;
    b_ += o.b_;
    adopt(o);
    return *this;
  }
  QuadElem& operator-=(const QuadElem& o) {
    check_same(*this, o);
    a_ -= o.a_;
    b_ -= o.b_;
    adopt(o);
    return *this;
  }
  QuadElem operator-() const { return QuadElem(-a_, -b_, d_); }

  friend QuadElem operator+(QuadElem x, const QuadElem& y) { return x += y; }
  friend QuadElem operator-(QuadElem x, const QuadElem& y) { return x -= y; }

  friend QuadElem operator*(const QuadElem& x, const QuadElem& y) {
    const BigInt& d = x.b_ != 0 ? x.d_ : y.d_;
    check_same(x, y);
    return QuadElem(x.a_ * y.a_ + x.b_ * y.b_ * BigRat(d), x.a_ * y.b_ + x.b_ * y.a_, d);
  }

  QuadElem inverse() const {
    // (a - b sqrt d) / (a^2 - d b^2); the norm vanishes only at zero since d
    // is not a square.
    const BigRat norm = a_ * a_ - b_ * b_ * BigRat(d_);
    if (norm == 0) throw DomainError("division by zero in Q(sqrt(d))");
    return QuadElem(a_ / norm, -b_ / norm, d_);
  }

  friend QuadElem operator/(const QuadElem& x, const QuadElem& y) { return x * y.inverse(); }

  friend bool operator==(const QuadElem& x, const QuadElem& y) { return x.a_ == y.a_ && x.b_ == y.b_; }

  std::string str() const { return to_string(a_) + " + " + to_string(b_) + "*sqrt(" + d_.get_str() + ")"; }

 private:
  static void check_same(const QuadElem& x, const QuadElem& y) {
    if (x.b_ != 0 && y.b_ != 0 && x.d_ != y.d_) throw DomainError("mixing different quadratic fields");
  }
  void adopt(const QuadElem& o) {
    if (o.b_ != 0) d_ = o.d_;
  }

  BigRat a_, b_;
  BigInt d_;
};

inline bool is_zero(const QuadElem& x) { return x.is_zero(); }
inline bool is_zero(const BigRat& x) { return x == 0; }

}  // namespace orthofam
