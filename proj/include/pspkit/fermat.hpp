#pragma once

// Fermat pseudoprime predicates and the base-counting functions
// F(n) = #{a mod n : a^(n-1) = 1}, F*(n) = #{a mod n : a^n = a} and
// D(n) = #{a | n : 1 < a < n, a^n = a (mod n)}.

#include "pspkit/arith.hpp"

namespace pspkit::fermat {

struct PspVerdict {
  u64 n = 0;
  u64 base = 0;
  bool passes_congruence = false;
  bool is_composite = false;
  bool is_pseudoprime = false;
};

// a^n == a (mod n) together with compositeness. Requires n >= 2, a >= 2.
PspVerdict is_fermat_psp(u64 n, u64 a);

// The structural form: l_a(n_a) | n - 1 and n / n_a | a. Says nothing
// about compositeness.
bool psp_criterion(u64 n, u64 a);

u64 count_fermat_bases(const Factorization& f);       // F(n)
u64 count_fermat_bases_star(const Factorization& f);  // F*(n)
u64 count_fermat_bases(u64 n);
u64 count_fermat_bases_star(u64 n);

inline constexpr u64 kBruteForceCap = 1'000'000;

// Direct counts over a in [0, n). CapacityError above kBruteForceCap.
u64 count_fermat_bases_brute(u64 n);
u64 count_fermat_bases_star_brute(u64 n);

// D(n), testing the congruence once per proper divisor.
u64 divisor_bases(const Factorization& f);
u64 divisor_bases(u64 n);

// Korselt: composite, squarefree and p - 1 | n - 1 for every p | n.
bool is_carmichael(u64 n);
bool is_carmichael(const Factorization& f);

}  // namespace pspkit::fermat
