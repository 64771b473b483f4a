#pragma once

// Rational sequences registered for diagonalization, with the metadata the
// extension steps need: a divergence witness for sequences outside l2 and,
// per pair, either exact disjointness from some index on or a convergence
// modulus for the inner product.

#include "orthofam/exact/bigrat.hpp"
#include "orthofam/sequences/handle.hpp"

#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace orthofam {

struct RegisteredSeq {
  std::string id;
  std::string kind;  ///< ones, even, odd, mod, harmonic-signs, finite
  std::vector<BigRat> params;
  std::function<BigRat(Index)> value;
  bool in_l2 = false;
  std::optional<Index> support_end;  ///< finite support: zero from here on
  /// (N0, b) -> minimal N1 > N0 with sum_{N0<=n<N1} x(n)^2 > b. Only for
  /// sequences outside l2.
  std::function<Index(Index, const BigRat&)> divergence;
  /// Upper bound on |x(n)| for every n, when known.
  std::optional<BigRat> sup_abs;

  BigRat operator()(Index n) const { return value(n); }
};

/// How the inner sum of a pair behaves beyond some point.
struct PairInfo {
  /// x(n) y(n) = 0 for every n >= this index.
  std::optional<Index> disjoint_from;
  /// eps -> N with |sum_{m<=n<m'} x(n) y(n)| < eps for all N <= m < m'.
  std::function<Index(const BigRat&)> modulus;

  Index modulus_at(const BigRat& eps) const {
    if (disjoint_from) return *disjoint_from;
    return modulus(eps);
  }
};

/// Indicator of n = r (mod k).
inline RegisteredSeq residue_class_seq(std::string id, unsigned long k, unsigned long r) {
  if (k == 0 || r >= k) throw DomainError("residue class needs 0 <= r < k");
  RegisteredSeq s;
  s.id = std::move(id);
  s.kind = k == 1 ? "ones" : (k == 2 ? (r == 0 ? "even" : "odd") : "mod");
  s.params = {BigRat(k), BigRat(r)};
  s.value = [k, r](Index n) { return BigRat(n % k == r ? 1 : 0); };
  s.sup_abs = BigRat(1);
  s.divergence = [k, r](Index n0, const BigRat& b) {
    if (b < 0) return n0 + 1;
    // Need floor(b)+1 ones from n0 on.
    const BigInt need = floor_rat(b) + 1;
    if (!need.fits_ulong_p()) throw DomainError("divergence bound too large");
    const Index first = n0 + (r + k - n0 % k) % k;
    return first + (need.get_ui() - 1) * k + 1;
  };
  return s;
}

/// (-1)^n / (n+1): square summable, infinite support.
inline RegisteredSeq harmonic_signs_seq(std::string id) {
  RegisteredSeq s;
  s.id = std::move(id);
  s.kind = "harmonic-signs";
  s.value = [](Index n) { return make_rat(n % 2 == 0 ? 1 : -1, static_cast<long>(n + 1)); };
  s.in_l2 = true;
  s.sup_abs = BigRat(1);
  return s;
}

inline RegisteredSeq finite_seq(std::string id, std::vector<BigRat> entries) {
  RegisteredSeq s;
  s.id = std::move(id);
  s.kind = "finite";
  s.params = entries;
  auto data = std::make_shared<const std::vector<BigRat>>(std::move(entries));
  s.value = [data](Index n) { return n < data->size() ? (*data)[n] : BigRat(0); };
  s.in_l2 = true;
  Index end = 0;
  BigRat m = 0;
  for (Index i = 0; i < data->size(); ++i)
    if ((*data)[i] != 0) {
      end = i + 1;
      m = std::max(m, abs_rat((*data)[i]));
    }
  s.support_end = end;
  s.sup_abs = m;
  return s;
}

class Registry {
 public:
  void add(RegisteredSeq s) {
    if (seqs_.count(s.id)) throw DomainError("sequence " + s.id + " registered twice");
    if (!s.in_l2 && !s.divergence) throw DomainError("sequence " + s.id + " is outside l2 but has no divergence witness");
    order_.push_back(s.id);
    seqs_.emplace(s.id, std::move(s));
  }

  bool contains(const std::string& id) const { return seqs_.count(id) != 0; }

  const RegisteredSeq& get(const std::string& id) const {
    const auto it = seqs_.find(id);
    if (it == seqs_.end()) throw DomainError("sequence " + id + " is not registered");
    return it->second;
  }

  const std::vector<std::string>& ids() const { return order_; }

  /// Explicit metadata for a pair; overrides the built-in derivation.
  void set_pair(const std::string& a, const std::string& b, PairInfo info) {
    get(a);
    get(b);
    pairs_[key(a, b)] = std::move(info);
  }

  /// Pair metadata, or nullopt when the inner sum of the pair is not known
  /// to converge.
  std::optional<PairInfo> pair(const std::string& a, const std::string& b) const {
    if (const auto it = pairs_.find(key(a, b)); it != pairs_.end()) return it->second;
    return derive(get(a), get(b));
  }

 private:
  static std::pair<std::string, std::string> key(const std::string& a, const std::string& b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  }

  static bool residue(const RegisteredSeq& s) { return s.kind == "ones" || s.kind == "even" || s.kind == "odd" || s.kind == "mod"; }

  static std::optional<PairInfo> derive(const RegisteredSeq& x, const RegisteredSeq& y) {
    PairInfo p;
    if (x.support_end || y.support_end) {
      p.disjoint_from = std::min(x.support_end.value_or(~Index{0}), y.support_end.value_or(~Index{0}));
      return p;
    }
    if (residue(x) && residue(y)) {
      const unsigned long k1 = x.params[0].get_num().get_ui(), r1 = x.params[1].get_num().get_ui();
      const unsigned long k2 = y.params[0].get_num().get_ui(), r2 = y.params[1].get_num().get_ui();
      const unsigned long g = std::gcd(k1, k2);
      if (r1 % g == r2 % g) return std::nullopt;  // common residues: the sum diverges
      p.disjoint_from = 0;
      return p;
    }
    const RegisteredSeq* h = x.kind == "harmonic-signs" ? &x : (y.kind == "harmonic-signs" ? &y : nullptr);
    const RegisteredSeq* o = h == &x ? &y : &x;
    if (h && residue(*o) && o->params[0].get_num().get_ui() % 2 == 1) {
      // On the class n = r + k t with k odd the signs alternate in t and the
      // magnitudes 1/(n+1) decrease, so any window sum from m is at most 1/(m+1).
      p.modulus = [](const BigRat& eps) {
        const BigInt n = floor_rat(BigRat(1) / eps);
        if (!n.fits_ulong_p()) throw DomainError("modulus index too large");
        return static_cast<Index>(n.get_ui());
      };
      return p;
    }
    return std::nullopt;
  }

  std::map<std::string, RegisteredSeq> seqs_;
  std::vector<std::string> order_;
  std::map<std::pair<std::string, std::string>, PairInfo> pairs_;
};

}  // namespace orthofam
