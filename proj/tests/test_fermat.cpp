#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "pspkit/errors.hpp"
#include "pspkit/fermat.hpp"

using namespace pspkit;
using namespace pspkit::fermat;

namespace {

bool composite(u64 n) {
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d == 0) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("base-2 pseudoprimes below 10^4") {
  std::vector<u64> found;
  for (u64 n = 2; n < 10000; ++n) {
    if (is_fermat_psp(n, 2).is_pseudoprime) found.push_back(n);
  }
  // Plain repeated squaring and a composite test, nothing shared.
  std::vector<u64> expect;
  for (u64 n = 2; n < 10000; ++n) {
    u64 r = 1;
    for (u64 i = 0; i < n; ++i) r = r * 2 % n;
    if (r == 2 % n && composite(n)) expect.push_back(n);
  }
  CHECK(found == expect);
  CHECK(found.front() == 341);
}

TEST_CASE("verdict fields") {
  const auto v = is_fermat_psp(341, 2);
  CHECK(v.passes_congruence);
  CHECK(v.is_composite);
  const auto p = is_fermat_psp(13, 2);
  CHECK(p.passes_congruence);
  CHECK_FALSE(p.is_pseudoprime);
  CHECK(is_fermat_psp(161038, 2).is_pseudoprime);
  CHECK_THROWS_AS(is_fermat_psp(1, 2), DomainError);
  CHECK_THROWS_AS(is_fermat_psp(10, 1), DomainError);
}

TEST_CASE("structural criterion matches the congruence") {
  for (u64 a = 2; a <= 12; ++a) {
    for (u64 n = 2; n < 3000; ++n) {
      CHECK_MESSAGE(psp_criterion(n, a) == is_fermat_psp(n, a).passes_congruence, "n=" << n << " a=" << a);
    }
  }
}

TEST_CASE("F and F* formulas against brute force, n <= 10^4") {
  for (u64 n = 2; n <= 10000; ++n) {
    CHECK(count_fermat_bases(n) == count_fermat_bases_brute(n));
    CHECK(count_fermat_bases_star(n) == count_fermat_bases_star_brute(n));
  }
}

TEST_CASE("F and F* formulas on random n <= 10^5") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 200; ++i) {
    const u64 n = rng() % 99999 + 2;
    CHECK(count_fermat_bases(n) == count_fermat_bases_brute(n));
    CHECK(count_fermat_bases_star(n) == count_fermat_bases_star_brute(n));
  }
  CHECK_THROWS_AS(count_fermat_bases_brute(kBruteForceCap + 1), CapacityError);
}

TEST_CASE("Carmichael numbers below 10^4 via Korselt") {
  std::vector<u64> found;
  for (u64 n = 2; n < 10000; ++n) {
    if (is_carmichael(n)) found.push_back(n);
  }
  CHECK(found == std::vector<u64>{561, 1105, 1729, 2465, 2821, 6601, 8911});
  // Same set from the definition: composite and a^n == a for all a.
  for (u64 n : found) CHECK(count_fermat_bases_star_brute(n) == n);
}

TEST_CASE("D(n) against the definition") {
  for (u64 n = 2; n < 3000; ++n) {
    u64 d = 0;
    for (u64 a = 2; a < n; ++a) {
      if (n % a) continue;
      u64 r = 1;
      for (u64 i = 0; i < n; ++i) r = r * a % n;
      d += r == a;
    }
    CHECK(divisor_bases(n) == d);
  }
}
