#include "pspkit/fermat.hpp"

#include <string>

#include "pspkit/errors.hpp"

namespace pspkit::fermat {

namespace {

void require_domain(u64 n, u64 a, const char* who) {
  if (n < 2) throw DomainError(std::string(who) + ": n must be at least 2");
  if (a < 2) throw DomainError(std::string(who) + ": base must be at least 2");
}

}  // namespace

PspVerdict is_fermat_psp(u64 n, u64 a) {
  require_domain(n, a, "is_fermat_psp");
  PspVerdict v;
  v.n = n;
  v.base = a;
  v.passes_congruence = powmod(a, n, n) == a % n;
  v.is_composite = !is_prime(n);
  v.is_pseudoprime = v.passes_congruence && v.is_composite;
  return v;
}

bool psp_criterion(u64 n, u64 a) {
  require_domain(n, a, "psp_criterion");
  const u64 na = coprime_part(n, a);
  if (a % (n / na) != 0) return false;
  if (na == 1) return true;
  return (n - 1) % multiplicative_order(a, na) == 0;
}

u64 count_fermat_bases(const Factorization& f) {
  const u64 n1 = f.value() - 1;
  u64 count = 1;
  for (const auto& pp : f) count *= gcd(pp.prime - 1, n1);
  return count;
}

u64 count_fermat_bases_star(const Factorization& f) {
  const u64 n1 = f.value() - 1;
  u64 count = 1;
  for (const auto& pp : f) count *= 1 + gcd(pp.prime - 1, n1);
  return count;
}

u64 count_fermat_bases(u64 n) { return count_fermat_bases(factor_positive(n)); }
u64 count_fermat_bases_star(u64 n) { return count_fermat_bases_star(factor_positive(n)); }

namespace {

void check_brute_cap(u64 n) {
  if (n == 0) throw DomainError("brute-force base count: n must be positive");
  if (n > kBruteForceCap) throw CapacityError("brute-force base count: n exceeds 10^6");
}

}  // namespace

u64 count_fermat_bases_brute(u64 n) {
  check_brute_cap(n);
  u64 count = 0;
  for (u64 a = 0; a < n; ++a) count += powmod(a, n - 1, n) == 1 % n;
  return count;
}

u64 count_fermat_bases_star_brute(u64 n) {
  check_brute_cap(n);
  u64 count = 0;
  for (u64 a = 0; a < n; ++a) count += powmod(a, n, n) == a;
  return count;
}

u64 divisor_bases(const Factorization& f) {
  const u64 n = f.value();
  u64 count = 0;
  for (u64 d : divisors(f)) {
    if (d > 1 && d < n && powmod(d, n, n) == d) ++count;
  }
  return count;
}

u64 divisor_bases(u64 n) {
  if (n < 2) throw DomainError("divisor_bases: n must be at least 2");
  return divisor_bases(factor(n));
}

bool is_carmichael(const Factorization& f) {
  const u64 n = f.value();
  if (f.size() < 2 || !f.is_squarefree()) return false;
  for (const auto& pp : f) {
    if ((n - 1) % (pp.prime - 1) != 0) return false;
  }
  return true;
}

bool is_carmichael(u64 n) {
  if (n < 2) throw DomainError("is_carmichael: n must be at least 2");
  return is_carmichael(factor(n));
}

}  // namespace pspkit::fermat
