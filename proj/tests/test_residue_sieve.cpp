#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <sstream>

#include "json.hpp"
#include "pspkit/errors.hpp"
#include "pspkit/residue_sieve.hpp"

using namespace pspkit;
using namespace pspkit::sieve;

namespace {

bool composite(u64 n) {
  if (n < 4) return false;
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d == 0) return true;
  }
  return false;
}

std::vector<u64> brute_psp(u64 a, u64 lo, u64 hi) {
  std::vector<u64> out;
  for (u64 n = lo; n <= hi; ++n) {
    if (composite(n) && powmod(a, n, n) == a % n) out.push_back(n);
  }
  return out;
}

// Odd part of k after removing every prime dividing 2a.
u64 free_part(u64 k, u64 a) {
  for (u64 p = 2; p <= 2 * a; ++p) {
    if ((2 * a) % p == 0) {
      while (k % p == 0) k /= p;
    }
  }
  return k;
}

// Textbook Jacobi symbol by reciprocity, independent of the library code.
int jacobi_ref(u64 a, u64 n) {
  a %= n;
  int t = 1;
  while (a) {
    while (a % 2 == 0) {
      a /= 2;
      if (n % 8 == 3 || n % 8 == 5) t = -t;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) t = -t;
    a %= n;
  }
  return n == 1 ? t : 0;
}

const std::vector<u64>& psps_to_1e7() {
  static const std::vector<u64> list = list_psp(2, {4, 10'000'000});
  return list;
}

}  // namespace

TEST_CASE("class_conditions worked examples") {
  const auto r1 = class_conditions(2, 15, 20);
  CHECK(r1.h == 4);
  CHECK_FALSE(r1.cond_h_divides);
  CHECK_FALSE(r1.admissible);
  CHECK(r1.reasons() == "h∤r-1");

  const auto r2 = class_conditions(2, 0, 4);
  CHECK(r2.g / r2.g_a == 4);
  CHECK_FALSE(r2.cond_u_divides);

  const auto r3 = class_conditions(2, 6, 16);
  CHECK(r3.cond_jacobi == JacobiVerdict::fails);
  CHECK_FALSE(r3.admissible);

  const auto r4 = class_conditions(2, 0, 2);
  CHECK(r4.admissible);
  CHECK(r4.cond_jacobi == JacobiVerdict::holds);

  CHECK(class_conditions(2, 1, 9).cond_jacobi == JacobiVerdict::not_applicable);
  CHECK_THROWS_AS(class_conditions(2, 0, 0), DomainError);
  CHECK_THROWS_AS(class_conditions(2, 5, 5), DomainError);
}

TEST_CASE("report invariants") {
  for (u64 a : {2, 3, 5, 6, 10}) {
    for (u64 m = 1; m <= 40; ++m) {
      for (u64 r = 0; r < m; ++r) {
        const auto rep = class_conditions(a, r, m);
        CHECK(rep.g == gcd(r, m));
        CHECK((rep.cond_jacobi == JacobiVerdict::not_applicable) == (rep.g % 2 == 1));
        CHECK(rep.admissible == (rep.cond_h_divides && rep.cond_u_divides &&
                                 (rep.cond_jacobi == JacobiVerdict::holds ||
                                  rep.cond_jacobi == JacobiVerdict::not_applicable)));
        CHECK(rep.reasons().empty() == rep.admissible);
      }
    }
  }
}

TEST_CASE("Jacobi verdicts agree with a direct search") {
  // A class with a good k has one among its first 4a*m members; a "fails"
  // verdict must find none in a much longer stretch.
  for (u64 a : {2, 3, 5, 6, 7, 10}) {
    for (u64 m = 2; m <= 48; m += 2) {
      for (u64 r = 0; r < m; r += 2) {
        const auto v = class_conditions(a, r, m).cond_jacobi;
        bool found = false;
        for (u64 k = r == 0 ? m : r, i = 0; i < 64 * a * m && !found; k += m, ++i) {
          const u64 j = free_part(k, a);
          found = j > 1 && jacobi_ref(a, j) == 1;
        }
        if (v == JacobiVerdict::fails) CHECK_MESSAGE(!found, "a=" << a << " r=" << r << " m=" << m);
        if (v == JacobiVerdict::holds) CHECK_MESSAGE(found, "a=" << a << " r=" << r << " m=" << m);
      }
    }
  }
}

TEST_CASE("fermat_congruence against powmod") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 20000; ++i) {
    const u64 n = rng() % 1000000 + 2, a = rng() % 50 + 2;
    CHECK(fermat_congruence(n, a) == (powmod(a, n, n) == a % n));
  }
  for (int i = 0; i < 2000; ++i) {
    const u64 n = rng() >> 1, a = rng() % 1000 + 2;
    CHECK(fermat_congruence(n, a) == (powmod(a, n, n) == a % n));
  }
}

TEST_CASE("for_each_psp against brute force") {
  for (u64 a : {2, 3, 5, 6, 12}) CHECK(list_psp(a, {4, 30000}) == brute_psp(a, 4, 30000));
  CHECK(list_psp(2, {1000000, 1030000}) == brute_psp(2, 1000000, 1030000));
  const u64 big = 1'000'000'000'000ULL;
  std::vector<u64> slow;
  for (u64 n = big; n <= big + 20000; ++n) {
    if (powmod(2, n, n) == 2 && !is_prime(n)) slow.push_back(n);
  }
  CHECK(list_psp(2, {big, big + 20000}) == slow);
}

TEST_CASE("counts below 4 are all zero") {
  const auto t = count_psp_in_classes(2, 8, {3});
  CHECK(t.total(0) == 0);
}

TEST_CASE("segmented counting is independent of the partition") {
  const u64 X = 1'000'000;
  const auto whole = count_psp_in_classes(2, 12, {X / 10, X}, Segment{2, X});
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 4; ++trial) {
    std::vector<u64> cuts{2, X + 1};
    for (int i = 0; i < 5; ++i) cuts.push_back(rng() % (X - 2) + 3);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<CountTable> parts;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      parts.push_back(count_psp_in_classes(2, 12, {X / 10, X}, Segment{cuts[i], cuts[i + 1] - 1}));
    }
    std::shuffle(parts.begin(), parts.end(), rng);
    CountTable acc = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) acc.merge(parts[i]);
    for (u64 r = 0; r < 12; ++r) {
      CHECK(acc.count(r, 0) == whole.count(r, 0));
      CHECK(acc.count(r, 1) == whole.count(r, 1));
    }
  }
  for (unsigned s : {2u, 3u, 7u}) {
    const auto t = count_psp_in_classes(2, 12, {X / 10, X}, s);
    for (u64 r = 0; r < 12; ++r) CHECK(t.count(r, 1) == whole.count(r, 1));
  }
}

TEST_CASE("overlapping merge is a contract violation") {
  auto a = count_psp_in_classes(2, 4, {1000}, Segment{2, 600});
  const auto b = count_psp_in_classes(2, 4, {1000}, Segment{500, 1000});
  CHECK_THROWS_AS(a.merge(b), ContractViolation);
  const auto c = count_psp_in_classes(2, 8, {1000}, Segment{601, 1000});
  CHECK_THROWS_AS(a.merge(c), ContractViolation);
}

TEST_CASE("consistency across moduli at 10^7") {
  const u64 X = 10'000'000;
  for (u64 m = 2; m <= 10; ++m) {
    const auto coarse = table_from_list(2, m, {X}, psps_to_1e7());
    const auto fine = table_from_list(2, 2 * m, {X}, psps_to_1e7());
    for (u64 s = 0; s < m; ++s) CHECK(fine.count(s, 0) + fine.count(s + m, 0) == coarse.count(s, 0));
  }
  const auto multi = count_psp_multi(2, {6, 10}, {X}, 2);
  CHECK(multi.size() == 2);
  const auto six = table_from_list(2, 6, {X}, psps_to_1e7());
  for (u64 r = 0; r < 6; ++r) CHECK(multi[0].count(r, 0) == six.count(r, 0));
}

TEST_CASE("classes rejected by the conditions are empty to 10^7") {
  for (u64 m = 2; m <= 64; ++m) {
    const auto t = table_from_list(2, m, {10'000'000}, psps_to_1e7());
    const auto predicted = t.empty_predicted();
    for (u64 r = 0; r < m; ++r) {
      if (predicted[r]) CHECK_MESSAGE(t.count(r, 0) == 0, r << " mod " << m);
    }
  }
}

TEST_CASE("even pseudoprimes match a brute filter to 10^7") {
  std::vector<u64> brute;
  for (u64 n = 4; n <= 10'000'000; n += 2) {
    if (fermat_congruence(n, 2)) brute.push_back(n);
  }
  CHECK(enumerate_even_psp(10'000'000, EvenFilter::none) == brute);
  CHECK(enumerate_even_psp(10'000'000) == brute);
  CHECK(enumerate_even_psp(10'000'000, EvenFilter::gcd_2145) == brute);
  CHECK(brute.front() == 161038);
  for (u64 n : brute) {
    CHECK(n % 4 == 2);
    CHECK(n % 16 != 6);
  }
  CHECK(enumerate_even_psp(100000).empty());
  CHECK(enumerate_even_psp(200000) == std::vector<u64>{161038});
}

TEST_CASE("empty class scan includes the rejected classes") {
  const auto rows = empty_classes_from_list(2, 20, psps_to_1e7());
  auto has = [&rows](u64 m, u64 r) {
    return std::any_of(rows.begin(), rows.end(), [&](const EmptyClass& e) { return e.m == m && e.r == r; });
  };
  for (u64 r : {0, 4, 6, 8}) CHECK(has(12, r));
  for (u64 r : {0, 4, 8, 10, 12, 15, 16}) CHECK(has(20, r));
  CHECK(has(9, 0));
  CHECK_FALSE(has(2, 1));
  for (const auto& e : rows) {
    CHECK(std::none_of(psps_to_1e7().begin(), psps_to_1e7().end(), [&](u64 n) { return n % e.m == e.r; }));
  }
  const auto direct = scan_empty_classes(2, 20, 10'000'000);
  CHECK(direct.size() == rows.size());
}

TEST_CASE("ingestion") {
  std::istringstream in("561\n645\r\n1105\n");
  const auto t = ingest_psp_list(in, 4);
  CHECK(t.count(1, 0) == 3);
  CHECK(t.total(0) == 3);

  std::istringstream none("");
  CHECK(ingest_psp_list(none, 2).total(0) == 0);

  std::istringstream bad("341\n561\nx45\n");
  try {
    ingest_psp_list(bad, 2);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  std::istringstream huge("18446744073709551616\n");
  CHECK_THROWS_AS(ingest_psp_list(huge, 2), ParseError);
  std::istringstream down("561\n341\n");
  CHECK_THROWS_AS(ingest_psp_list(down, 2), FormatError);
}

TEST_CASE("table emission") {
  CountTable t(2, 2, {10'000'000'000'000'000ULL});
  t.add_class_count(0, 0, 2045);
  t.add_class_count(1, 0, 4744920);
  const std::string csv = emit_table(t, TableFormat::csv);
  CHECK(csv ==
        "base,modulus,class,limit,count,empty_predicted,fraction\n"
        "2,2,0,10000000000000000,2045,false,0.000431\n"
        "2,2,1,10000000000000000,4744920,false,0.999569\n");

  const auto j = nlohmann::json::parse(emit_table(t, TableFormat::json));
  REQUIRE(j.size() == 2);
  CHECK(j[1]["count"] == 4744920);
  CHECK(j[1]["class"] == 1);

  const CountTable empty(2, 3, {});
  CHECK(emit_table(empty, TableFormat::csv) == "base,modulus,class,limit,count,empty_predicted\n");

  const auto two = table_from_list(2, 4, {1000, 100000}, psps_to_1e7());
  const std::string c2 = emit_table(two, TableFormat::csv);
  CHECK(c2.rfind("base,modulus,class,limit,count,empty_predicted\n", 0) == 0);
  const auto j2 = nlohmann::json::parse(emit_table(two, TableFormat::json));
  CHECK(j2.size() == 8);
  for (const auto& row : j2) {
    const std::size_t li = row["limit"] == 1000 ? 0 : 1;
    CHECK(row["count"] == two.count(row["class"].get<u64>(), li));
  }
}
