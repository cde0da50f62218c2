#pragma once

// Word-size modular arithmetic, factorization and the classical
// multiplicative functions. Every operation is exact for inputs below 2^63
// (most work up to 2^64 - 1).

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace pspkit {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

inline constexpr u64 gcd(u64 a, u64 b) noexcept {
  while (b != 0) {
    u64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline constexpr u64 mulmod(u64 a, u64 b, u64 m) noexcept {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

// base^exponent mod modulus. Throws DomainError for modulus 0.
u64 powmod(u64 base, u64 exponent, u64 modulus);

// Montgomery multiplication modulo an odd modulus n. Values passed to mul()
// and pow_m() are in Montgomery form; use to_m() / from_m() to convert.
class Montgomery {
 public:
  explicit Montgomery(u64 odd_modulus);

  u64 modulus() const noexcept { return n_; }
  u64 one() const noexcept { return r1_; }

  u64 to_m(u64 x) const noexcept { return reduce(static_cast<u128>(x % n_) * r2_); }
  u64 from_m(u64 x) const noexcept { return reduce(x); }

  u64 mul(u64 a, u64 b) const noexcept { return reduce(static_cast<u128>(a) * b); }
  u64 add(u64 a, u64 b) const noexcept {
    u64 s = a + b;
    // a, b < n, so overflow only happens when the true sum is >= n.
    return (s < a || s >= n_) ? s - n_ : s;
  }

  // x^e for x in Montgomery form; result in Montgomery form.
  u64 pow_m(u64 x, u64 e) const noexcept;
  // 2^e, computed with doublings instead of general multiplies.
  u64 pow2_m(u64 e) const noexcept;

 private:
  u64 reduce(u128 t) const noexcept {
    u64 m = static_cast<u64>(t) * ninv_;
    u64 hi = static_cast<u64>(t >> 64);
    u64 mn = static_cast<u64>((static_cast<u128>(m) * n_) >> 64);
    return hi >= mn ? hi - mn : hi - mn + n_;
  }

  u64 n_;
  u64 ninv_;  // n^-1 mod 2^64
  u64 r1_;    // 2^64 mod n
  u64 r2_;    // 2^128 mod n
};

// Deterministic for all 64-bit n (fixed seven-base Miller-Rabin witness set).
bool is_prime(u64 n) noexcept;

struct PrimePower {
  u64 prime = 0;
  unsigned exponent = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// Prime-power decomposition stored inline. No 64-bit integer has more than
// 15 distinct prime factors.
class Factorization {
 public:
  static constexpr std::size_t kMaxDistinct = 15;

  // The empty factorization of 1.
  Factorization() = default;

  // Appends p^e; primes must arrive strictly increasing.
  void push(u64 prime, unsigned exponent);

  u64 value() const noexcept { return value_; }
  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  std::span<const PrimePower> factors() const noexcept { return {factors_.data(), size_}; }
  auto begin() const noexcept { return factors_.begin(); }
  auto end() const noexcept { return factors_.begin() + static_cast<std::ptrdiff_t>(size_); }

  bool is_squarefree() const noexcept;
  bool divisible_by(u64 prime) const noexcept;

  friend bool operator==(const Factorization& a, const Factorization& b) noexcept;

 private:
  std::array<PrimePower, kMaxDistinct> factors_{};
  std::size_t size_ = 0;
  u64 value_ = 1;
};

// Throws DomainError for n < 2. Trial division then Brent's rho.
Factorization factor(u64 n);
// As factor(), but factor(1) is the empty factorization.
Factorization factor_positive(u64 n);

// Smallest prime factor of every n in [lo, hi).
class SpfTable {
 public:
  SpfTable(u64 lo, std::vector<u64> spf) : lo_(lo), spf_(std::move(spf)) {}
  u64 lo() const noexcept { return lo_; }
  u64 hi() const noexcept { return lo_ + spf_.size(); }
  u64 operator[](u64 n) const { return spf_.at(n - lo_); }

 private:
  u64 lo_;
  std::vector<u64> spf_;
};

inline constexpr u64 kSpfMaxHi = u64{1} << 40;
inline constexpr u64 kSpfSegment = u64{1} << 26;
inline constexpr u64 kSpfMaxSpan = u64{1} << 28;

// Segmented sieve; entries for 0 and 1 are 0 and 1. CapacityError when
// hi > 2^40 or the span exceeds 2^28 entries.
SpfTable spf_table(u64 lo, u64 hi);

// Primes below `limit` by a plain Eratosthenes sieve.
std::vector<u64> primes_below(u64 limit);

// Factors every n in [lo, hi) with a segmented sieve and hands each
// factorization to `visit` in increasing order of n. lo >= 1.
void factor_range(u64 lo, u64 hi, const std::function<void(u64, const Factorization&)>& visit);

std::vector<u64> divisors(const Factorization& f);
u64 euler_phi(const Factorization& f) noexcept;
u64 tau(const Factorization& f) noexcept;
u64 carmichael_lambda(const Factorization& f) noexcept;

// l_a(n). Throws DomainError when gcd(a, n) > 1.
u64 multiplicative_order(u64 a, u64 n);
// Bulk form: the caller supplies lambda(n) and its factorization.
u64 multiplicative_order(u64 a, u64 n, u64 lambda, const Factorization& lambda_factors);

// Largest divisor of n coprime to a (0 for n = 0).
u64 coprime_part(u64 n, u64 a) noexcept;

// Jacobi symbol (a/k) for odd k; negative a is reduced mod k first.
// Throws DomainError for even k.
int jacobi(i64 a, u64 k);
int jacobi_u(u64 a, u64 k);

}  // namespace pspkit
