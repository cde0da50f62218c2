#include "pspkit/residue_sieve.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "pspkit/errors.hpp"

namespace pspkit::sieve {

std::string to_string(JacobiVerdict v) {
  switch (v) {
    case JacobiVerdict::holds: return "holds";
    case JacobiVerdict::fails: return "fails";
    case JacobiVerdict::unknown: return "unknown";
    case JacobiVerdict::not_applicable: return "not_applicable";
  }
  return "?";
}

std::string ClassConditionReport::reasons() const {
  std::string out;
  auto append = [&out](const char* s) {
    if (!out.empty()) out += ' ';
    out += s;
  };
  if (!cond_h_divides) append("h∤r-1");
  if (!cond_u_divides) append("g/g_a∤a");
  if (cond_jacobi == JacobiVerdict::fails) append("jacobi=-1");
  if (cond_jacobi == JacobiVerdict::unknown) append("jacobi-unknown");
  return out;
}

namespace {

unsigned valuation(u64 x, u64 p) {
  unsigned v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

// Decides whether some k == r (mod m) has (a / k_{2a}) = 1, for even g.
JacobiVerdict jacobi_condition(u64 a, u64 r, u64 m, u64 bound) {
  const Factorization twice_a = factor_positive(2 * a);

  // When every p | 2a divides each k in the class to the same power, the
  // (2a)-free part k_{2a} runs through one progression r' + t m' of integers
  // coprime to 2a, and (a / j) only depends on j mod 4a.
  bool pinned = r != 0;
  u64 q = 1;
  for (const auto& pp : twice_a) {
    if (!pinned) break;
    const unsigned vr = valuation(r, pp.prime);
    if (vr >= valuation(m, pp.prime)) {
      pinned = false;
      break;
    }
    for (unsigned i = 0; i < vr; ++i) q *= pp.prime;
  }
  if (pinned && a < (u64{1} << 60)) {
    const u64 period = 4 * a;
    const u64 r1 = r / q, m1 = m / q;
    const u64 steps = period / gcd(period, m1);
    if (steps <= bound) {
      u64 j = r1 % period;
      const u64 stride = m1 % period;
      for (u64 t = 0; t < steps; ++t) {
        if (jacobi_u(a, j) == 1) return JacobiVerdict::holds;
        j = (j + stride) % period;
      }
      return JacobiVerdict::fails;
    }
  }

  u64 examined = 0;
  for (u64 k = r == 0 ? m : r; examined < bound; ++examined) {
    const u64 odd_free = coprime_part(k, 2 * a);
    if (odd_free > 1 && jacobi_u(a, odd_free) == 1) return JacobiVerdict::holds;
    if (k > std::numeric_limits<u64>::max() / 2 - m) break;
    k += m;
  }
  return JacobiVerdict::unknown;
}

}  // namespace

ClassConditionReport class_conditions(u64 a, u64 r, u64 m, u64 jacobi_search_bound) {
  if (m == 0) throw DomainError("class_conditions: modulus must be positive");
  if (a < 2) throw DomainError("class_conditions: base must be at least 2");
  if (r >= m) throw DomainError("class_conditions: need 0 <= r < m");
  ClassConditionReport rep;
  rep.a = a;
  rep.r = r;
  rep.m = m;
  rep.g = gcd(r, m);
  rep.g_a = coprime_part(rep.g, a);
  const u64 order = rep.g_a == 1 ? 1 : multiplicative_order(a, rep.g_a);
  rep.h = gcd(order, m);
  rep.cond_h_divides = ((r + m - 1) % m) % rep.h == 0;
  rep.cond_u_divides = a % (rep.g / rep.g_a) == 0;
  rep.cond_jacobi = rep.g % 2 == 0 ? jacobi_condition(a, r, m, jacobi_search_bound) : JacobiVerdict::not_applicable;
  rep.admissible = rep.cond_h_divides && rep.cond_u_divides &&
                   (rep.cond_jacobi == JacobiVerdict::holds || rep.cond_jacobi == JacobiVerdict::not_applicable);
  return rep;
}

CountTable::CountTable(u64 base, u64 modulus, std::vector<u64> limits)
    : base_(base), modulus_(modulus), limits_(std::move(limits)) {
  if (modulus_ == 0) throw DomainError("CountTable: modulus must be positive");
  std::sort(limits_.begin(), limits_.end());
  limits_.erase(std::unique(limits_.begin(), limits_.end()), limits_.end());
  counts_.assign(limits_.size(), std::vector<u64>(modulus_, 0));
}

u64 CountTable::count_at(u64 r, u64 limit) const {
  const auto it = std::find(limits_.begin(), limits_.end(), limit);
  if (it == limits_.end()) throw DomainError("CountTable: limit not tabulated");
  return count(r, static_cast<std::size_t>(it - limits_.begin()));
}

u64 CountTable::total(std::size_t limit_index) const {
  u64 s = 0;
  for (u64 c : counts_.at(limit_index)) s += c;
  return s;
}

void CountTable::add(u64 n) {
  const u64 r = n % modulus_;
  for (std::size_t i = limits_.size(); i-- > 0 && n <= limits_[i];) ++counts_[i][r];
}

void CountTable::add_class_count(u64 r, std::size_t limit_index, u64 count) { counts_.at(limit_index).at(r) += count; }

void CountTable::mark_covered(Segment s) {
  if (s.lo > s.hi) return;
  for (const auto& c : coverage_) {
    if (!(s.hi < c.lo || c.hi < s.lo)) throw ContractViolation("CountTable: overlapping segments");
  }
  coverage_.push_back(s);
}

void CountTable::merge(const CountTable& other) {
  if (other.base_ != base_ || other.modulus_ != modulus_ || other.limits_ != limits_)
    throw ContractViolation("CountTable: merging tables of different shape");
  for (const auto& s : other.coverage_) {
    for (const auto& c : coverage_) {
      if (!(s.hi < c.lo || c.hi < s.lo)) throw ContractViolation("CountTable: overlapping segments");
    }
  }
  coverage_.insert(coverage_.end(), other.coverage_.begin(), other.coverage_.end());
  std::sort(coverage_.begin(), coverage_.end(), [](const Segment& x, const Segment& y) { return x.lo < y.lo; });
  for (std::size_t i = 0; i < limits_.size(); ++i) {
    for (u64 r = 0; r < modulus_; ++r) counts_[i][r] += other.counts_[i][r];
  }
}

std::vector<bool> CountTable::empty_predicted(u64 jacobi_bound) const {
  std::vector<bool> p(modulus_);
  for (u64 r = 0; r < modulus_; ++r) p[r] = !class_conditions(base_, r, modulus_, jacobi_bound).admissible;
  return p;
}

bool fermat_congruence(u64 n, u64 a) {
  if (n == 0) throw DomainError("fermat_congruence: n must be positive");
  const int s = std::countr_zero(n);
  if (s > 0) {
    const u64 mask = s >= 64 ? ~u64{0} : (u64{1} << s) - 1;
    if (a % 2 == 0) {
      // n >= 2^s > s, so a^n vanishes mod 2^s.
      if ((a & mask) != 0) return false;
    } else {
      u64 result = 1, b = a, e = n;
      while (e != 0) {
        if (e & 1) result *= b;
        b *= b;
        e >>= 1;
      }
      if (((result ^ a) & mask) != 0) return false;
    }
  }
  const u64 odd = n >> s;
  if (odd == 1) return true;
  const Montgomery mont(odd);
  if (a == 2) return mont.pow2_m(n) == mont.add(mont.one(), mont.one());
  const u64 am = mont.to_m(a);
  return mont.pow_m(am, n) == am;
}

namespace {

constexpr u64 kPrimeSieveCeiling = 1'000'000'000;
constexpr u64 kChunk = u64{1} << 18;

u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

void for_each_psp(u64 a, Segment seg, const std::function<void(u64)>& visit) {
  if (a < 2) throw DomainError("for_each_psp: base must be at least 2");
  const u64 lo = std::max<u64>(seg.lo, 4);
  const u64 hi = seg.hi;
  if (lo > hi) return;
  if (hi > kPrimeSieveCeiling) {
    for (u64 n = lo;; ++n) {
      if (fermat_congruence(n, a) && !is_prime(n)) visit(n);
      if (n == hi) break;
    }
    return;
  }
  const auto base = primes_below(isqrt(hi) + 1);
  std::vector<unsigned char> composite;
  for (u64 start = lo; start <= hi; start += kChunk) {
    const u64 end = std::min(hi, start + kChunk - 1);
    composite.assign(end - start + 1, 0);
    for (u64 p : base) {
      if (p * p > end) break;
      for (u64 q = std::max(p * p, (start + p - 1) / p * p); q <= end; q += p) composite[q - start] = 1;
    }
    for (u64 n = start; n <= end; ++n) {
      if (composite[n - start] && fermat_congruence(n, a)) visit(n);
    }
  }
}

std::vector<u64> list_psp(u64 a, Segment seg) {
  std::vector<u64> out;
  for_each_psp(a, seg, [&out](u64 n) { out.push_back(n); });
  return out;
}

CountTable count_psp_in_classes(u64 a, u64 m, std::vector<u64> limits, Segment seg) {
  CountTable table(a, m, std::move(limits));
  if (table.limits().empty()) return table;
  const Segment clipped{std::max<u64>(seg.lo, 2), std::min(seg.hi, table.limits().back())};
  table.mark_covered(clipped);
  for_each_psp(a, clipped, [&table](u64 n) { table.add(n); });
  return table;
}

namespace {

std::vector<Segment> split(u64 lo, u64 hi, unsigned parts) {
  std::vector<Segment> out;
  if (lo > hi) return out;
  parts = std::max(1u, parts);
  const u64 len = hi - lo + 1;
  u64 start = lo;
  for (unsigned i = 0; i < parts; ++i) {
    const u64 size = len / parts + (i < len % parts ? 1 : 0);
    if (size == 0) continue;
    out.push_back({start, start + size - 1});
    start += size;
  }
  return out;
}

std::vector<u64> list_psp_parallel(u64 a, u64 lo, u64 hi, unsigned segments) {
  std::vector<std::future<std::vector<u64>>> jobs;
  for (const auto& s : split(lo, hi, segments))
    jobs.push_back(std::async(std::launch::async, [a, s] { return list_psp(a, s); }));
  std::vector<u64> all;
  for (auto& j : jobs) {
    auto part = j.get();
    all.insert(all.end(), part.begin(), part.end());
  }
  return all;
}

}  // namespace

CountTable count_psp_in_classes(u64 a, u64 m, std::vector<u64> limits, unsigned segments) {
  CountTable table(a, m, limits);
  if (table.limits().empty()) return table;
  std::vector<std::future<CountTable>> jobs;
  for (const auto& s : split(2, table.limits().back(), segments))
    jobs.push_back(std::async(std::launch::async, [=] { return count_psp_in_classes(a, m, limits, s); }));
  for (auto& j : jobs) table.merge(j.get());
  return table;
}

CountTable table_from_list(u64 a, u64 m, const std::vector<u64>& limits, const std::vector<u64>& psps) {
  CountTable table(a, m, limits);
  if (table.limits().empty()) return table;
  table.mark_covered({2, table.limits().back()});
  for (u64 n : psps) {
    if (n > table.limits().back()) break;
    table.add(n);
  }
  return table;
}

std::vector<CountTable> count_psp_multi(u64 a, const std::vector<u64>& moduli, const std::vector<u64>& limits,
                                        unsigned segments) {
  std::vector<CountTable> out;
  if (limits.empty()) {
    for (u64 m : moduli) out.emplace_back(a, m, limits);
    return out;
  }
  const u64 top = *std::max_element(limits.begin(), limits.end());
  const auto psps = list_psp_parallel(a, 2, top, segments);
  for (u64 m : moduli) out.push_back(table_from_list(a, m, limits, psps));
  return out;
}

std::vector<u64> enumerate_even_psp(u64 limit, EvenFilter filter) {
  std::vector<u64> out;
  auto consider = [&](u64 n) {
    if (n <= 2 || n > limit) return;
    if (filter == EvenFilter::multiples_of_9 && n % 9 == 0) return;
    if (filter == EvenFilter::gcd_2145 && gcd(n, 2145) != 1) return;
    if (fermat_congruence(n, 2)) out.push_back(n);
  };
  for (u64 block = 0; block <= limit; block += 16) {
    consider(block + 2);
    consider(block + 14);
    if (block > std::numeric_limits<u64>::max() - 32) break;
  }
  return out;
}

std::vector<EmptyClass> empty_classes_from_list(u64 a, u64 max_mod, const std::vector<u64>& psps, u64 jacobi_bound) {
  std::vector<EmptyClass> out;
  std::vector<u64> counts;
  for (u64 m = 2; m <= max_mod; ++m) {
    counts.assign(m, 0);
    for (u64 n : psps) ++counts[n % m];
    for (u64 r = 0; r < m; ++r) {
      if (counts[r] != 0) continue;
      const auto rep = class_conditions(a, r, m, jacobi_bound);
      out.push_back({m, r, !rep.admissible, rep.cond_jacobi});
    }
  }
  return out;
}

std::vector<EmptyClass> scan_empty_classes(u64 a, u64 max_mod, u64 limit, u64 jacobi_bound) {
  return empty_classes_from_list(a, max_mod, list_psp(a, {2, limit}), jacobi_bound);
}

CountTable ingest_psp_list(std::istream& in, u64 m, u64 base) {
  constexpr u64 kWholeList = std::numeric_limits<u64>::max();
  CountTable table(base, m, {kWholeList});
  std::vector<u64> counts(m, 0);
  std::string line;
  std::size_t line_no = 0;
  u64 prev = 0, first = 0;
  bool any = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || !std::all_of(line.begin(), line.end(), [](char c) { return c >= '0' && c <= '9'; }))
      throw ParseError("expected a decimal integer, got '" + line + "'", line_no);
    u64 value = 0;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), value);
    if (ec != std::errc{} || ptr != line.data() + line.size())
      throw ParseError("value does not fit below 2^64: '" + line + "'", line_no);
    if (any && value < prev)
      throw FormatError("line " + std::to_string(line_no) + ": " + line + " is smaller than the previous value " +
                        std::to_string(prev));
    if (!any) first = value;
    any = true;
    prev = value;
    ++counts[value % m];
  }
  for (u64 r = 0; r < m; ++r) table.add_class_count(r, 0, counts[r]);
  if (any) table.mark_covered({first, prev});
  return table;
}

namespace {

std::string fraction_6(u64 count, u64 total) {
  if (total == 0) return "0.000000";
  const u128 scaled = static_cast<u128>(count) * 1'000'000;
  u128 q = scaled / total;
  const u128 rem = scaled % total;
  if (2 * rem > total || (2 * rem == total && (q & 1))) ++q;
  const u64 whole = static_cast<u64>(q / 1'000'000);
  std::string frac = std::to_string(static_cast<u64>(q % 1'000'000));
  frac.insert(0, 6 - frac.size(), '0');
  return std::to_string(whole) + "." + frac;
}

}  // namespace

std::string emit_table(const CountTable& t, TableFormat format) {
  const bool with_fraction = t.limits().size() == 1;
  const bool has_rows = !t.limits().empty();
  std::vector<bool> predicted;
  if (has_rows) predicted = t.empty_predicted();
  std::vector<u64> totals;
  for (std::size_t i = 0; i < t.limits().size(); ++i) totals.push_back(t.total(i));

  if (format == TableFormat::csv) {
    std::ostringstream out;
    out << "base,modulus,class,limit,count,empty_predicted" << (with_fraction ? ",fraction" : "") << '\n';
    for (u64 r = 0; has_rows && r < t.modulus(); ++r) {
      for (std::size_t i = 0; i < t.limits().size(); ++i) {
        out << t.base() << ',' << t.modulus() << ',' << r << ',' << t.limits()[i] << ',' << t.count(r, i) << ','
            << (predicted[r] ? "true" : "false");
        if (with_fraction) out << ',' << fraction_6(t.count(r, i), totals[i]);
        out << '\n';
      }
    }
    return out.str();
  }

  auto rows = nlohmann::json::array();
  for (u64 r = 0; has_rows && r < t.modulus(); ++r) {
    for (std::size_t i = 0; i < t.limits().size(); ++i) {
      nlohmann::json row = {{"base", t.base()},         {"modulus", t.modulus()},
                            {"class", r},               {"limit", t.limits()[i]},
                            {"count", t.count(r, i)},   {"empty_predicted", static_cast<bool>(predicted[r])}};
      if (with_fraction) row["fraction"] = std::stod(fraction_6(t.count(r, i), totals[i]));
      rows.push_back(std::move(row));
    }
  }
  return rows.dump(2) + "\n";
}

}  // namespace pspkit::sieve
