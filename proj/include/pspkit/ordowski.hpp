#pragma once

// The sets S_b = {ab : a >= 2, a^(ab) == a (mod ab)}, their residue-class
// structure and densities, the union S of all S_b, and the abelian p-group
// counting behind the tail bounds.

#include <map>
#include <optional>
#include <vector>

#include "pspkit/arith.hpp"
#include "pspkit/rational.hpp"
#include "pspkit/residue_class.hpp"

namespace pspkit::ordowski {

inline constexpr u64 kCensusMaxB = 10'000'000;
inline constexpr u64 kClassSystemMaxB = 100'000;
inline constexpr u64 kUnionMaxK = 30;
inline constexpr u64 kCountSMaxLimit = 100'000'000;
inline constexpr u64 kC1MaxB = 100'000;
inline constexpr u64 kTailMaxB = 20'000'000;

// N(d, b) for every d | lambda(b), zeros included.
struct OrderCensus {
  u64 b = 0;
  std::map<u64, u64> entries;
};

// Orders of all units mod b, one by one. CapacityError for b > 10^7.
OrderCensus order_census(u64 b);

struct ClassSystem {
  std::vector<ResidueClass> classes;  // pairwise disjoint
  std::vector<u64> excluded_points;

  bool contains(u64 n) const noexcept;
  ExactRational density() const;
};

// One class mod b^2 d per unit a0 (mod b) of order d with gcd(d, b) = 1;
// the point n = b is excluded. CapacityError for b > 10^5.
ClassSystem sb_class_system(u64 b);

// The class of sb_class_system(b) holding n, found from a0 = (n / b) mod b
// without listing the system; nullopt when n is not covered or is the
// excluded point b.
std::optional<ResidueClass> sb_class_containing(u64 n, u64 b);

// n in S_b, tested directly.
bool sb_membership(u64 n, u64 b);

// delta(S_b) = sum over d | lambda(b), gcd(d, b) = 1 of N(d, b) / (b^2 d),
// evaluated through the Sylow decomposition of (Z/bZ)*.
ExactRational sb_density(u64 b);

// Density of S_2 u ... u S_k by inclusion-exclusion over the class systems.
// CapacityError for k > 30 or when the search grows past its node budget.
// Imprimitive b (see is_imprimitive) add nothing to the union and are skipped
// unless `skip_imprimitive` is false.
ExactRational union_density(u64 k, bool skip_imprimitive = true);

struct SCount {
  u64 members = 0;      // n <= limit with D(n) > 0
  u64 divisor_sum = 0;  // sum of D(n) for n <= limit
  friend bool operator==(const SCount&, const SCount&) = default;
};

// CapacityError for limit > 10^8.
SCount count_S(u64 limit);
bool in_S(u64 n);

// sum of delta(S_b) for 2 <= b <= b_max (b_max <= 10^5).
ExactRational c1_partial(u64 b_max);

// tau(lambda0) phi0 / (lambda0 b^2), where lambda0 and phi0 are the largest
// divisors of lambda(b) and phi(b) coprime to b.
ExactRational tail_bound_term(u64 b);
// Sum of tail_bound_term(b) over lo < b <= hi (hi <= 2 * 10^7).
ExactRational tail_bound(u64 lo, u64 hi);

// Least b0 with b = a0 b0, a0, b0 >= 2 and a0 == 1 (mod b0); then S_b is
// contained in S_b0. Sufficient only.
std::optional<u64> is_imprimitive(u64 b);

// C_{p^l1} x ... x C_{p^lk} with l1 <= ... <= lk.
struct AbelianPGroup {
  u64 p = 2;
  std::vector<unsigned> lambdas;

  // Sorts the exponents; DomainError for composite p or a zero exponent.
  static AbelianPGroup make(u64 p, std::vector<unsigned> lambdas);
  unsigned log_order() const noexcept;     // n with #G = p^n
  unsigned log_exponent() const noexcept;  // lambda with exp(G) = p^lambda
  mpz_class order() const;
};

// N(p^j, G), the number of elements of order exactly p^j.
mpz_class group_order_count(unsigned j, const AbelianPGroup& g);
// N(G) = sum over j of N(p^j, G) / p^j.
ExactRational group_N(const AbelianPGroup& g);

struct GroupBoundReport {
  ExactRational n_of_g;
  ExactRational eq6_bound;         // tau(lambda(G)) #G / lambda(G)
  ExactRational eq6_margin;        // bound - N(G)
  ExactRational lemma3_min_margin;  // min over j, components of p^(n-lambda) - N(p^j,G)/p^j
  bool eq6_holds = false;
  bool lemma3_holds = false;
};

GroupBoundReport check_group_bounds(const AbelianPGroup& g);
// A group given by its p-components (distinct primes); N and the bound are
// multiplicative across components.
GroupBoundReport check_group_bounds(const std::vector<AbelianPGroup>& components);

// Sylow decomposition of (Z/bZ)*, one entry per prime dividing phi(b).
std::vector<AbelianPGroup> unit_group_components(u64 b);

}  // namespace pspkit::ordowski
