#pragma once

#include <optional>

#include "pspkit/arith.hpp"

namespace pspkit {

// The arithmetic progression {n : n == r (mod m)} with 0 <= r < m.
struct ResidueClass {
  u64 r = 0;
  u64 m = 1;

  // Throws DomainError unless m >= 1 and r < m.
  static ResidueClass make(u64 r, u64 m);

  bool contains(u64 n) const noexcept { return n % m == r; }
  friend auto operator<=>(const ResidueClass&, const ResidueClass&) = default;
};

// Intersection of two progressions by CRT; empty when r1 != r2 mod gcd.
// Moduli must keep their lcm below 2^63.
std::optional<ResidueClass> intersect(const ResidueClass& x, const ResidueClass& y);

// Inverse of a modulo m (gcd(a, m) = 1, m >= 1).
u64 inverse_mod(u64 a, u64 m);

}  // namespace pspkit
