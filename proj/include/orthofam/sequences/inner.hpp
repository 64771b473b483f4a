#pragma once

// Inner products with certificates, l_p partial sums, and the support-based
// predicates shared by the family modules.

#include "orthofam/exact/interval.hpp"
#include "orthofam/sequences/handle.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace orthofam {

struct ExactInner {
  RadicalSum value;
  BigInt stable_from;  ///< partial sums at every m >= stable_from equal value
};

struct PartialInner {
  std::vector<std::pair<Index, RadicalSum>> sums;  ///< (upto, partial sum)
  BigRat tail_bound;                               ///< later partial sums stay within this of the last one
};

struct DivergentInner {
  /// (bound b, index N) with the partial sum at N exceeding b.
  std::vector<std::pair<BigRat, BigInt>> witnesses;
};

using InnerCertificate = std::variant<ExactInner, PartialInner, DivergentInner>;

inline bool is_exact_zero(const InnerCertificate& c) {
  const auto* e = std::get_if<ExactInner>(&c);
  return e && e->value.is_zero();
}

inline std::string describe(const InnerCertificate& c) {
  if (const auto* e = std::get_if<ExactInner>(&c))
    return "exact " + e->value.str() + " from index " + e->stable_from.get_str();
  if (const auto* p = std::get_if<PartialInner>(&c)) {
    std::string s = "partial";
    if (!p->sums.empty()) s += " " + p->sums.back().second.str() + " at " + std::to_string(p->sums.back().first);
    return s + " tail <= " + to_string(p->tail_bound);
  }
  const auto& d = std::get<DivergentInner>(c);
  std::string s = "divergent";
  if (!d.witnesses.empty())
    s += " (sum exceeds " + to_string(d.witnesses.back().first) + " by index " + d.witnesses.back().second.get_str() + ")";
  return s;
}

/// Exact sum_{n < upto} x(n) y(n).
inline RadicalSum inner_partial(const SeqHandle& x, const SeqHandle& y, Index upto) {
  RadicalSum s;
  auto add_at = [&](Index n) {
    const Radical a = x(n);
    if (a.is_zero()) return;
    const Radical b = y(n);
    if (!b.is_zero()) s += a * b;
  };
  // Walk a finite support when one is available; the result is the same.
  const auto* fx = std::get_if<FiniteSupport>(&x.support);
  const auto* fy = std::get_if<FiniteSupport>(&y.support);
  const FiniteSupport* f = fx ? fx : fy;
  if (f) {
    for (Index n : f->indices) {
      if (n >= upto) break;
      add_at(n);
    }
    return s;
  }
  for (Index n = 0; n < upto; ++n) add_at(n);
  return s;
}

inline const PairMeta* find_pair_meta(const SeqHandle& x, const SeqHandle& y) {
  if (auto it = x.partners.find(y.id); it != x.partners.end()) return &it->second;
  if (auto it = y.partners.find(x.id); it != y.partners.end()) return &it->second;
  return nullptr;
}

inline DivergentInner square_divergence_certificate(const SeqHandle& x, unsigned bounds = 8) {
  DivergentInner d;
  for (unsigned e = 0; e <= bounds; ++e) {
    const BigRat b(pow2(e));
    d.witnesses.emplace_back(b, BigInt(x.square_divergence(b)));
  }
  return d;
}

inline Index checked_index(const BigInt& n) {
  if (n < 0 || !n.fits_ulong_p()) throw DomainError("index " + n.get_str() + " exceeds the addressable range");
  return n.get_ui();
}

/// Certified inner product. tolerance is the tail width requested from a
/// convergence modulus; it is unused for the exact cases.
inline InnerCertificate inner_certified(const SeqHandle& x, const SeqHandle& y,
                                        const BigRat& tolerance = half_pow(20)) {
  const bool self = x.id == y.id;
  if (const auto end_x = finite_support_end(x.support)) return ExactInner{inner_partial(x, y, *end_x), BigInt(*end_x)};
  if (const auto end_y = finite_support_end(y.support)) return ExactInner{inner_partial(x, y, *end_y), BigInt(*end_y)};
  if (self && x.square_divergence) return square_divergence_certificate(x);
  const PairMeta* meta = self ? nullptr : find_pair_meta(x, y);
  if (!meta) throw Unverifiable("no convergence metadata for the pair (" + x.id + ", " + y.id + ")");
  if (const auto* d = std::get_if<DisjointBeyond>(meta)) {
    if (d->value_before) return ExactInner{*d->value_before, d->from};
    return ExactInner{inner_partial(x, y, checked_index(d->from)), d->from};
  }
  if (const auto* c = std::get_if<ClosedForm>(meta)) return ExactInner{c->value, c->stable_from};
  const auto& m = std::get<ConvergenceModulus>(*meta);
  const Index n = m.modulus(tolerance);
  PartialInner p;
  p.sums.emplace_back(n, inner_partial(x, y, n));
  p.tail_bound = tolerance;
  return p;
}

struct LpReport {
  Interval partial;
  bool exact = false;
  std::optional<BigRat> tail_bound;
};

/// Encloses sum_{n < upto} |x(n)|^p. Exact when every term is rational.
inline LpReport lp_report(const SeqHandle& x, const BigRat& p, Index upto, unsigned long bits = 64,
                          std::optional<BigRat> tail_bound = std::nullopt) {
  if (p <= 0) throw DomainError("l_p exponent must be positive");
  LpReport r;
  r.partial = point_interval(BigRat(0));
  r.exact = true;
  std::vector<Radical> terms;
  for (Index n = 0; n < upto; ++n) {
    const Radical v = x(n);
    if (!v.is_zero()) terms.push_back(v);
  }
  const unsigned long extra = bit_length(BigInt(static_cast<unsigned long>(terms.size() + 1))) + 1;
  for (const auto& v : terms) {
    const Interval t = abs_pow_enclosure(v, p, bits + extra);
    if (t.lo != t.hi) r.exact = false;
    r.partial += t;
  }
  r.tail_bound = std::move(tail_bound);
  return r;
}

/// Entrywise min(|x(n)|, |y(n)|) for n < upto.
inline PrefixVec min_abs_seq(const SeqHandle& x, const SeqHandle& y, Index upto) {
  PrefixVec out;
  out.reserve(upto);
  for (Index n = 0; n < upto; ++n) {
    const Radical a = x(n).abs();
    const Radical b = y(n).abs();
    out.push_back(abs_less_equal(a, b) ? a : b);
  }
  return out;
}

struct StrongOrthogonality {
  bool holds = false;
  std::string reason;
  std::optional<InnerCertificate> inner;
};

namespace detail {

/// true: the supports meet in a finite set; false: provably infinite
/// intersection; nullopt: undecidable from the descriptors.
inline std::optional<bool> supports_almost_disjoint(const SeqHandle& x, const SeqHandle& y) {
  if (finite_support_end(x.support) || finite_support_end(y.support)) return true;
  if (x.id != y.id) {
    if (const PairMeta* m = find_pair_meta(x, y); m && std::holds_alternative<DisjointBeyond>(*m)) return true;
  }
  if (x.id == y.id) return std::holds_alternative<OpaqueSupport>(x.support) ? std::nullopt : std::optional<bool>(false);
  const auto* rx = std::get_if<RowSupport>(&x.support);
  const auto* ry = std::get_if<RowSupport>(&y.support);
  if (rx && ry) {
    // Rows are infinite; the supports meet infinitely iff they share a row.
    auto has_row = [](const RowSupport& r, Index row) {
      if (r.all_rows_from) return !r.rows.empty() && row >= r.rows.front();
      return std::find(r.rows.begin(), r.rows.end(), row) != r.rows.end();
    };
    if (rx->all_rows_from && ry->all_rows_from) return false;
    const RowSupport& listed = rx->all_rows_from ? *ry : *rx;
    const RowSupport& other = rx->all_rows_from ? *rx : *ry;
    for (Index row : listed.rows)
      if (has_row(other, row)) return false;
    return true;
  }
  const bool fx = std::holds_alternative<FullSupport>(x.support);
  const bool fy = std::holds_alternative<FullSupport>(y.support);
  const bool ox = std::holds_alternative<OpaqueSupport>(x.support);
  const bool oy = std::holds_alternative<OpaqueSupport>(y.support);
  // A full support meets any infinite support infinitely often.
  if ((fx && !oy) || (fy && !ox)) return false;
  return std::nullopt;
}

}  // namespace detail

/// Almost disjoint supports and an exact zero inner product.
inline StrongOrthogonality strongly_orthogonal(const SeqHandle& x, const SeqHandle& y) {
  StrongOrthogonality out;
  const auto disjoint = detail::supports_almost_disjoint(x, y);
  if (!disjoint) throw Unverifiable("cannot decide whether the supports of " + x.id + " and " + y.id + " are almost disjoint");
  if (!*disjoint) {
    out.reason = "supports meet in an infinite set";
    return out;
  }
  out.inner = inner_certified(x, y);
  out.holds = is_exact_zero(*out.inner);
  out.reason = out.holds ? "almost disjoint supports, inner product exactly 0"
                         : "inner product is " + describe(*out.inner);
  return out;
}

}  // namespace orthofam
