#pragma once

// Square-free decomposition n = root^2 * core of positive integers.
//
// Small prime factors are removed by trial division. A leftover cofactor
// with no prime factor below the cutoff is classified without factoring when
// possible (perfect square, probable prime, or fewer than three prime factors);
// otherwise it is split with Brent's variant of Pollard rho under a fixed
// iteration budget. Exhausting the budget raises FactorizationLimit.

#include "orthofam/exact/bigrat.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace orthofam {

class FactorizationLimit : public DomainError {
 public:
  using DomainError::DomainError;
};

struct SquareFreeParts {
  BigInt root;  ///< n = root^2 * core
  BigInt core;  ///< square-free
};

namespace detail {

inline constexpr std::uint32_t kTrialCutoff = 1'000'000;
inline constexpr std::uint64_t kRhoIterations = 4'000'000;

inline const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    std::vector<bool> composite(kTrialCutoff + 1, false);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i <= kTrialCutoff; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (std::uint64_t j = std::uint64_t{i} * i; j <= kTrialCutoff; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

inline bool is_probable_prime(const BigInt& n) { return mpz_probab_prime_p(n.get_mpz_t(), 32) > 0; }

inline bool is_square(const BigInt& n) { return mpz_perfect_square_p(n.get_mpz_t()) != 0; }

inline BigInt isqrt(const BigInt& n) {
  BigInt r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

// Returns a nontrivial factor of the odd composite n, or 0 on budget exhaustion.
inline BigInt brent_rho(const BigInt& n) {
  for (unsigned long c = 1; c <= 6; ++c) {
    BigInt y = 2, x, ys, q = 1, g = 1, tmp;
    std::uint64_t r = 1, spent = 0;
    const std::uint64_t m = 128;
    auto f = [&](BigInt& v) {
      v = v * v + c;
      mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    };
    while (g == 1 && spent < kRhoIterations) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) f(y);
      std::uint64_t k = 0;
      while (k < r && g == 1) {
        ys = y;
        const std::uint64_t lim = std::min(m, r - k);
        for (std::uint64_t i = 0; i < lim; ++i) {
          f(y);
          tmp = x - y;
          q = q * abs(tmp);
          mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += lim;
        spent += lim;
      }
      r *= 2;
    }
    if (g == n) {
      // Backtrack one step at a time.
      do {
        f(ys);
        tmp = x - ys;
        tmp = abs(tmp);
        mpz_gcd(g.get_mpz_t(), tmp.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != 1 && g != n) return g;
  }
  return 0;
}

// Prime factorization of a cofactor with no prime factor below the cutoff.
inline void factor_large(const BigInt& n, std::map<BigInt, unsigned>& out) {
  if (n == 1) return;
  if (is_probable_prime(n)) {
    ++out[n];
    return;
  }
  if (is_square(n)) {
    const BigInt r = isqrt(n);
    factor_large(r, out);
    factor_large(r, out);
    return;
  }
  const BigInt d = brent_rho(n);
  if (d == 0) throw FactorizationLimit("square-free extraction exceeded the factorization budget for " + n.get_str());
  factor_large(d, out);
  factor_large(BigInt(n / d), out);
}

}  // namespace detail

inline SquareFreeParts square_free_parts(const BigInt& n) {
  if (n <= 0) throw DomainError("square-free decomposition needs a positive integer");
  SquareFreeParts parts{BigInt(1), BigInt(1)};
  BigInt c = n;
  bool cubed_out = false;  // trial division stopped because p^3 > c
  for (const std::uint32_t p : detail::small_primes()) {
    if (BigInt(p) * p * p > c) {
      cubed_out = true;
      break;
    }
    if (!mpz_divisible_ui_p(c.get_mpz_t(), p)) continue;
    unsigned e = 0;
    while (mpz_divisible_ui_p(c.get_mpz_t(), p)) {
      mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), p);
      ++e;
    }
    for (unsigned i = 0; i < e / 2; ++i) parts.root *= p;
    if (e % 2) parts.core *= p;
  }
  if (c == 1) return parts;
  // Every prime factor of c exceeds the last trial prime.
  if (detail::is_square(c)) {
    parts.root *= detail::isqrt(c);
    return parts;
  }
  if (cubed_out || detail::is_probable_prime(c)) {
    // At most two prime factors and not a square: square-free.
    parts.core *= c;
    return parts;
  }
  std::map<BigInt, unsigned> factors;
  detail::factor_large(c, factors);
  for (const auto& [p, e] : factors) {
    for (unsigned i = 0; i < e / 2; ++i) parts.root *= p;
    if (e % 2) parts.core *= p;
  }
  return parts;
}

inline bool is_square_free(const BigInt& n) { return square_free_parts(n).root == 1; }

}  // namespace orthofam
