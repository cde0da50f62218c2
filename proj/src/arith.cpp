#include "pspkit/arith.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "pspkit/errors.hpp"

namespace pspkit {

u64 powmod(u64 base, u64 exponent, u64 modulus) {
  if (modulus == 0) throw DomainError("powmod: modulus must be positive");
  if (modulus == 1) return 0;
  if (modulus < (u64{1} << 32)) {
    u64 result = 1;
    base %= modulus;
    while (exponent != 0) {
      if (exponent & 1) result = result * base % modulus;
      base = base * base % modulus;
      exponent >>= 1;
    }
    return result;
  }
  if (modulus & 1) {
    Montgomery mont(modulus);
    return mont.from_m(mont.pow_m(mont.to_m(base), exponent));
  }
  u64 result = 1;
  base %= modulus;
  while (exponent != 0) {
    if (exponent & 1) result = mulmod(result, base, modulus);
    base = mulmod(base, base, modulus);
    exponent >>= 1;
  }
  return result;
}

Montgomery::Montgomery(u64 odd_modulus) : n_(odd_modulus) {
  if ((n_ & 1) == 0) throw DomainError("Montgomery: modulus must be odd");
  // Newton iteration for n^-1 mod 2^64; n*n == 1 mod 8 seeds 3 bits.
  u64 inv = n_;
  for (int i = 0; i < 5; ++i) inv *= 2 - n_ * inv;
  ninv_ = inv;
  r1_ = static_cast<u64>((static_cast<u128>(1) << 64) % n_);
  r2_ = mulmod(r1_, r1_, n_);
}

u64 Montgomery::pow_m(u64 x, u64 e) const noexcept {
  u64 result = r1_;
  while (e != 0) {
    if (e & 1) result = mul(result, x);
    x = mul(x, x);
    e >>= 1;
  }
  return result;
}

u64 Montgomery::pow2_m(u64 e) const noexcept {
  if (e == 0) return r1_;
  u64 x = add(r1_, r1_);
  for (int bit = 62 - std::countl_zero(e); bit >= 0; --bit) {
    x = mul(x, x);
    if ((e >> bit) & 1) x = add(x, x);
  }
  return x;
}

namespace {

constexpr std::array<u64, 25> kSmallPrimes = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                              43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

bool miller_rabin(const Montgomery& mont, u64 n, u64 base) {
  base %= n;
  if (base == 0) return true;
  u64 d = n - 1;
  int s = std::countr_zero(d);
  d >>= s;
  const u64 one = mont.one();
  const u64 minus_one = mont.to_m(n - 1);
  u64 x = mont.pow_m(mont.to_m(base), d);
  if (x == one || x == minus_one) return true;
  for (int i = 1; i < s; ++i) {
    x = mont.mul(x, x);
    if (x == minus_one) return true;
    if (x == one) return false;
  }
  return false;
}

}  // namespace

bool is_prime(u64 n) noexcept {
  if (n < 2) return false;
  for (u64 p : kSmallPrimes) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  if (n < 97 * 97) return true;
  Montgomery mont(n);
  // Jim Sinclair's base set, deterministic below 2^64.
  for (u64 base : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
    if (!miller_rabin(mont, n, base)) return false;
  }
  return true;
}

void Factorization::push(u64 prime, unsigned exponent) {
  if (size_ == kMaxDistinct) throw DomainError("Factorization: too many distinct primes");
  if (size_ != 0 && factors_[size_ - 1].prime >= prime)
    throw DomainError("Factorization: primes must be strictly increasing");
  factors_[size_++] = {prime, exponent};
  for (unsigned i = 0; i < exponent; ++i) value_ *= prime;
}

bool Factorization::is_squarefree() const noexcept {
  return std::all_of(begin(), end(), [](const PrimePower& pp) { return pp.exponent == 1; });
}

bool Factorization::divisible_by(u64 prime) const noexcept {
  return std::any_of(begin(), end(), [prime](const PrimePower& pp) { return pp.prime == prime; });
}

bool operator==(const Factorization& a, const Factorization& b) noexcept {
  return a.value_ == b.value_ && std::equal(a.begin(), a.end(), b.begin(), b.end());
}

namespace {

// Brent's variant with batched gcds. Returns a nontrivial factor of the odd
// composite n, or n on failure for this seed.
u64 brent_rho(u64 n, u64 seed) {
  Montgomery mont(n);
  const u64 c = mont.to_m(seed);
  auto f = [&](u64 x) { return mont.add(mont.mul(x, x), c); };
  u64 y = mont.to_m(2), x = y, ys = y, q = mont.one(), g = 1;
  constexpr u64 kBatch = 128;
  for (u64 r = 1; g == 1; r <<= 1) {
    x = y;
    for (u64 i = 0; i < r; ++i) y = f(y);
    for (u64 k = 0; k < r && g == 1; k += kBatch) {
      ys = y;
      for (u64 i = 0; i < std::min(kBatch, r - k); ++i) {
        y = f(y);
        u64 diff = x > y ? x - y : y - x;
        q = mont.mul(q, diff);
      }
      g = gcd(mont.from_m(q), n);
    }
  }
  if (g == n) {
    // Batch overshot; replay one step at a time.
    do {
      ys = f(ys);
      u64 diff = x > ys ? x - ys : ys - x;
      g = gcd(mont.from_m(diff), n);
    } while (g == 1);
  }
  return g;
}

void collect_prime_factors(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  for (u64 seed = 1;; ++seed) {
    u64 d = brent_rho(n, seed);
    if (d != n && d != 1) {
      collect_prime_factors(d, out);
      collect_prime_factors(n / d, out);
      return;
    }
  }
}

}  // namespace

Factorization factor_positive(u64 n) {
  if (n == 0) throw DomainError("factor: n must be positive");
  std::vector<u64> primes;
  for (u64 p = 2; p < 1024 && p * p <= n; p += (p == 2 ? 1 : 2)) {
    while (n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
  }
  if (n > 1) {
    if (n < 1024 * 1024)
      primes.push_back(n);
    else
      collect_prime_factors(n, primes);
  }
  std::sort(primes.begin(), primes.end());
  Factorization f;
  for (std::size_t i = 0; i < primes.size();) {
    std::size_t j = i;
    while (j < primes.size() && primes[j] == primes[i]) ++j;
    f.push(primes[i], static_cast<unsigned>(j - i));
    i = j;
  }
  return f;
}

Factorization factor(u64 n) {
  if (n < 2) throw DomainError("factor: n must be at least 2, got " + std::to_string(n));
  return factor_positive(n);
}

std::vector<u64> primes_below(u64 limit) {
  std::vector<u64> primes;
  if (limit <= 2) return primes;
  std::vector<bool> composite(limit, false);
  for (u64 i = 2; i < limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (u64 j = i * i; j < limit; j += i) composite[j] = true;
  }
  return primes;
}

namespace {

u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

SpfTable spf_table(u64 lo, u64 hi) {
  if (hi > kSpfMaxHi) throw CapacityError("spf_table: hi exceeds 2^40");
  if (hi < lo) throw DomainError("spf_table: empty range with hi < lo");
  if (hi - lo > kSpfMaxSpan) throw CapacityError("spf_table: span exceeds 2^28 entries");
  std::vector<u64> spf(hi - lo, 0);
  const auto base = primes_below(isqrt(hi > 0 ? hi - 1 : 0) + 1);
  for (u64 seg = lo; seg < hi; seg += kSpfSegment) {
    const u64 seg_hi = std::min(hi, seg + kSpfSegment);
    for (u64 p : base) {
      if (p * p >= seg_hi) break;
      u64 start = std::max(p * p, (seg + p - 1) / p * p);
      for (u64 m = start; m < seg_hi; m += p) {
        if (spf[m - lo] == 0) spf[m - lo] = p;
      }
    }
    for (u64 n = seg; n < seg_hi; ++n) {
      if (spf[n - lo] == 0) spf[n - lo] = n;
    }
  }
  return SpfTable(lo, std::move(spf));
}

void factor_range(u64 lo, u64 hi, const std::function<void(u64, const Factorization&)>& visit) {
  if (lo == 0) throw DomainError("factor_range: lo must be positive");
  if (hi <= lo) return;
  const auto base = primes_below(isqrt(hi - 1) + 1);
  constexpr u64 kChunk = u64{1} << 15;
  constexpr std::size_t kSlots = 16;
  std::vector<u64> rest;
  std::vector<PrimePower> found;
  std::vector<unsigned char> count;
  for (u64 seg = lo; seg < hi; seg += kChunk) {
    const u64 seg_hi = std::min(hi, seg + kChunk);
    const std::size_t len = seg_hi - seg;
    rest.resize(len);
    found.assign(len * kSlots, PrimePower{});
    count.assign(len, 0);
    for (std::size_t i = 0; i < len; ++i) rest[i] = seg + i;
    for (u64 p : base) {
      if (p >= seg_hi) break;
      for (u64 m = (seg + p - 1) / p * p; m < seg_hi; m += p) {
        const std::size_t i = m - seg;
        unsigned e = 0;
        do {
          rest[i] /= p;
          ++e;
        } while (rest[i] % p == 0);
        found[i * kSlots + count[i]++] = {p, e};
      }
    }
    for (std::size_t i = 0; i < len; ++i) {
      Factorization f;
      for (std::size_t k = 0; k < count[i]; ++k) f.push(found[i * kSlots + k].prime, found[i * kSlots + k].exponent);
      if (rest[i] > 1) f.push(rest[i], 1);
      visit(seg + i, f);
    }
  }
}

std::vector<u64> divisors(const Factorization& f) {
  std::vector<u64> out{1};
  for (const auto& [p, e] : f) {
    const std::size_t prev = out.size();
    u64 pk = 1;
    for (unsigned k = 0; k < e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < prev; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

u64 euler_phi(const Factorization& f) noexcept {
  u64 phi = 1;
  for (const auto& [p, e] : f) {
    phi *= p - 1;
    for (unsigned k = 1; k < e; ++k) phi *= p;
  }
  return phi;
}

u64 tau(const Factorization& f) noexcept {
  u64 t = 1;
  for (const auto& pp : f) t *= pp.exponent + 1;
  return t;
}

u64 carmichael_lambda(const Factorization& f) noexcept {
  u64 lambda = 1;
  for (const auto& [p, e] : f) {
    u64 part;
    if (p == 2 && e >= 3) {
      part = u64{1} << (e - 2);
    } else {
      part = p - 1;
      for (unsigned k = 1; k < e; ++k) part *= p;
    }
    lambda = lambda / gcd(lambda, part) * part;
  }
  return lambda;
}

u64 multiplicative_order(u64 a, u64 n, u64 lambda, const Factorization& lambda_factors) {
  if (n == 0) throw DomainError("multiplicative_order: n must be positive");
  if (n == 1) return 1;
  a %= n;
  if (gcd(a, n) != 1) throw DomainError("multiplicative_order: gcd(a, n) > 1");
  u64 order = lambda;
  if (n & 1) {
    Montgomery mont(n);
    const u64 am = mont.to_m(a);
    for (const auto& [p, e] : lambda_factors) {
      for (unsigned k = 0; k < e; ++k) {
        if (mont.pow_m(am, order / p) != mont.one()) break;
        order /= p;
      }
    }
  } else {
    for (const auto& [p, e] : lambda_factors) {
      for (unsigned k = 0; k < e; ++k) {
        if (powmod(a, order / p, n) != 1) break;
        order /= p;
      }
    }
  }
  return order;
}

u64 multiplicative_order(u64 a, u64 n) {
  if (n == 0) throw DomainError("multiplicative_order: n must be positive");
  if (n == 1) return 1;
  const u64 lambda = carmichael_lambda(factor(n));
  return multiplicative_order(a, n, lambda, factor_positive(lambda));
}

u64 coprime_part(u64 n, u64 a) noexcept {
  if (n == 0) return 0;
  for (u64 g = gcd(n, a); g > 1; g = gcd(n, g)) n /= g;
  return n;
}

int jacobi_u(u64 a, u64 k) {
  if ((k & 1) == 0) throw DomainError("jacobi: k must be odd");
  a %= k;
  int sign = 1;
  while (a != 0) {
    const int tz = std::countr_zero(a);
    a >>= tz;
    if ((tz & 1) && (k % 8 == 3 || k % 8 == 5)) sign = -sign;
    if (a % 4 == 3 && k % 4 == 3) sign = -sign;
    std::swap(a, k);
    a %= k;
  }
  return k == 1 ? sign : 0;
}

int jacobi(i64 a, u64 k) {
  if ((k & 1) == 0) throw DomainError("jacobi: k must be odd");
  if (a >= 0) return jacobi_u(static_cast<u64>(a), k);
  // |a| may be 2^63; reduce its magnitude before negating.
  const u64 mag = (static_cast<u64>(-(a + 1)) + 1) % k;
  return jacobi_u(mag == 0 ? 0 : k - mag, k);
}

}  // namespace pspkit
