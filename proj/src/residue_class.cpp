#include "pspkit/residue_class.hpp"

#include <string>

#include "pspkit/errors.hpp"

namespace pspkit {

ResidueClass ResidueClass::make(u64 r, u64 m) {
  if (m == 0) throw DomainError("residue class: modulus must be positive");
  if (r >= m) throw DomainError("residue class: need 0 <= r < m, got r=" + std::to_string(r) + " m=" + std::to_string(m));
  return {r, m};
}

u64 inverse_mod(u64 a, u64 m) {
  if (m == 0) throw DomainError("inverse_mod: modulus must be positive");
  if (m == 1) return 0;
  // Extended Euclid on signed 128-bit to stay clear of overflow.
  __int128 old_r = static_cast<__int128>(a % m), r = m;
  __int128 old_s = 1, s = 0;
  while (r != 0) {
    const __int128 q = old_r / r;
    std::swap(old_r, r);
    r -= q * old_r;
    std::swap(old_s, s);
    s -= q * old_s;
  }
  if (old_r != 1) throw DomainError("inverse_mod: argument not invertible");
  old_s %= static_cast<__int128>(m);
  if (old_s < 0) old_s += m;
  return static_cast<u64>(old_s);
}

std::optional<ResidueClass> intersect(const ResidueClass& x, const ResidueClass& y) {
  const u64 g = gcd(x.m, y.m);
  const u64 diff = x.r >= y.r ? x.r - y.r : y.r - x.r;
  if (diff % g != 0) return std::nullopt;
  const u64 m1 = x.m / g;
  const u128 lcm = static_cast<u128>(m1) * y.m;
  if (lcm >> 63) throw DomainError("intersect: lcm of moduli exceeds 2^63");
  // n = x.r + x.m * t with x.m * t == y.r - x.r (mod y.m), i.e.
  // t == ((y.r - x.r) / g) * (x.m / g)^-1 (mod y.m / g).
  const u64 m2 = y.m / g;
  const u64 step = diff / g % (m2 == 0 ? 1 : m2);
  u64 t = m2 == 1 ? 0 : mulmod(step, inverse_mod(m1 % m2, m2), m2);
  if (y.r < x.r && t != 0) t = m2 - t;
  const u128 n = (static_cast<u128>(x.m) * t + x.r) % lcm;
  return ResidueClass{static_cast<u64>(n), static_cast<u64>(lcm)};
}

}  // namespace pspkit
