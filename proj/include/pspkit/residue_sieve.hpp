#pragma once

// Base-a pseudoprimes in residue classes: the necessary conditions a class
// must meet to contain any, segmented counting, the even-pseudoprime search,
// empty-class scans and ingestion of external pseudoprime lists.

#include <cstdint>
#include <functional>
#include <istream>
#include <string>
#include <vector>

#include "pspkit/arith.hpp"
#include "pspkit/residue_class.hpp"

namespace pspkit::sieve {

enum class JacobiVerdict { holds, fails, unknown, not_applicable };
std::string to_string(JacobiVerdict v);

struct ClassConditionReport {
  u64 a = 0, r = 0, m = 0;
  u64 g = 0;    // gcd(r, m)
  u64 g_a = 0;  // largest divisor of g coprime to a
  u64 h = 0;    // gcd(l_a(g_a), m)
  bool cond_h_divides = false;  // h | r - 1
  bool cond_u_divides = false;  // g / g_a | a
  JacobiVerdict cond_jacobi = JacobiVerdict::not_applicable;
  bool admissible = false;

  // Space-separated names of the failed conditions, empty when admissible.
  std::string reasons() const;
};

inline constexpr u64 kDefaultJacobiBound = u64{1} << 20;

// Evaluates the three necessary conditions for r (mod m) to hold a base-a
// pseudoprime. For even g the Jacobi condition is decided exactly when the
// p-adic valuations of k == r (mod m) are fixed for every p | 2a; otherwise
// k = r, r + m, ... is scanned and `unknown` returned if the bound runs out.
ClassConditionReport class_conditions(u64 a, u64 r, u64 m, u64 jacobi_search_bound = kDefaultJacobiBound);

// Closed interval [lo, hi] of integers.
struct Segment {
  u64 lo = 0;
  u64 hi = 0;
};

// Per-class pseudoprime counts for one base and modulus at one or more
// inclusive limits. Partial tables built over disjoint segments merge by
// addition.
class CountTable {
 public:
  CountTable(u64 base, u64 modulus, std::vector<u64> limits);

  u64 base() const noexcept { return base_; }
  u64 modulus() const noexcept { return modulus_; }
  const std::vector<u64>& limits() const noexcept { return limits_; }
  const std::vector<Segment>& coverage() const noexcept { return coverage_; }

  u64 count(u64 r, std::size_t limit_index) const { return counts_.at(limit_index).at(r); }
  u64 count_at(u64 r, u64 limit) const;
  u64 total(std::size_t limit_index) const;

  // Records n (n <= every limit it is counted against).
  void add(u64 n);
  void add_class_count(u64 r, std::size_t limit_index, u64 count);
  void mark_covered(Segment s);

  // Throws ContractViolation on mismatched shape or overlapping coverage.
  void merge(const CountTable& other);

  // Per class: true when class_conditions rejects it.
  std::vector<bool> empty_predicted(u64 jacobi_bound = kDefaultJacobiBound) const;

 private:
  u64 base_;
  u64 modulus_;
  std::vector<u64> limits_;
  std::vector<std::vector<u64>> counts_;  // [limit_index][r]
  std::vector<Segment> coverage_;
};

// a^n == a (mod n), splitting off the power of two so the odd part can use
// Montgomery arithmetic.
bool fermat_congruence(u64 n, u64 a);

// Calls `visit` for every base-a pseudoprime n in [seg.lo, seg.hi], ascending.
void for_each_psp(u64 a, Segment seg, const std::function<void(u64)>& visit);
std::vector<u64> list_psp(u64 a, Segment seg);

// Counts pseudoprimes of `seg` (clipped to [2, max limit]) by class mod m.
CountTable count_psp_in_classes(u64 a, u64 m, std::vector<u64> limits, Segment seg);
// Splits [2, max limit] into `segments` pieces, counts them concurrently and
// merges. The result does not depend on `segments`.
CountTable count_psp_in_classes(u64 a, u64 m, std::vector<u64> limits, unsigned segments = 1);

// Same tables for several moduli from a single scan of [2, max limit].
std::vector<CountTable> count_psp_multi(u64 a, const std::vector<u64>& moduli, const std::vector<u64>& limits,
                                        unsigned segments = 1);
// Tables from a precomputed ascending pseudoprime list.
CountTable table_from_list(u64 a, u64 m, const std::vector<u64>& limits, const std::vector<u64>& psps);

enum class EvenFilter { none, multiples_of_9, gcd_2145 };

// Even base-2 pseudoprimes <= limit. Candidates are n == 2, 14 (mod 16),
// further thinned by `filter`.
std::vector<u64> enumerate_even_psp(u64 limit, EvenFilter filter = EvenFilter::multiples_of_9);

struct EmptyClass {
  u64 m = 0;
  u64 r = 0;
  bool predicted_by_lemma = false;
  JacobiVerdict jacobi = JacobiVerdict::not_applicable;
};

// Every class r mod m, 2 <= m <= max_mod, without base-a pseudoprimes up to
// `limit`, flagged with whether class_conditions rejects it.
std::vector<EmptyClass> scan_empty_classes(u64 a, u64 max_mod, u64 limit, u64 jacobi_bound = kDefaultJacobiBound);
std::vector<EmptyClass> empty_classes_from_list(u64 a, u64 max_mod, const std::vector<u64>& psps,
                                                u64 jacobi_bound = kDefaultJacobiBound);

// Streams one decimal integer per line (LF or CRLF) and counts by class.
// ParseError on non-numeric or out-of-range lines, FormatError when a value
// is smaller than its predecessor. The table's single limit is 2^64 - 1.
CountTable ingest_psp_list(std::istream& in, u64 m, u64 base = 2);

enum class TableFormat { csv, json };

// Header `base,modulus,class,limit,count,empty_predicted`, plus `fraction`
// when the table has exactly one limit.
std::string emit_table(const CountTable& t, TableFormat format);

}  // namespace pspkit::sieve
