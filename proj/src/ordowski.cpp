#include "pspkit/ordowski.hpp"

#include <algorithm>
#include <future>
#include <string>
#include <thread>

#include "pspkit/errors.hpp"

namespace pspkit::ordowski {

namespace {

mpz_class z(u64 v) { return mpz_class(static_cast<unsigned long>(v)); }

mpz_class zpow(u64 p, unsigned e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), e);
  return r;
}

void require_b(u64 b, const char* who) {
  if (b < 2) throw DomainError(std::string(who) + ": b must be at least 2");
}

unsigned worker_count(u64 items) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<u64>(hw, std::max<u64>(1, items / 4096)));
}

// Sum of f(b) over lo < b <= hi, split across workers; partial sums are
// combined in range order so the result is independent of the split.
template <class F>
ExactRational parallel_sum(u64 lo, u64 hi, F f) {
  if (hi <= lo) return ExactRational();
  const unsigned parts = worker_count(hi - lo);
  const u64 step = (hi - lo + parts - 1) / parts;
  std::vector<std::future<BalancedSum>> jobs;
  for (u64 s = lo; s < hi; s += step) {
    const u64 e = std::min(hi, s + step);
    jobs.push_back(std::async(parts > 1 ? std::launch::async : std::launch::deferred, [s, e, &f] {
      BalancedSum acc;
      f(s, e, acc);
      return acc;
    }));
  }
  BalancedSum total;
  for (auto& j : jobs) total.absorb(j.get());
  return total.result();
}

}  // namespace

OrderCensus order_census(u64 b) {
  require_b(b, "order_census");
  if (b > kCensusMaxB) throw CapacityError("order_census: b exceeds 10^7");
  const Factorization fb = factor(b);
  const u64 lam = carmichael_lambda(fb);
  const Factorization fl = factor_positive(lam);
  OrderCensus c{b, {}};
  for (u64 d : divisors(fl)) c.entries[d] = 0;
  for (u64 a = 1; a < b; ++a) {
    if (gcd(a, b) == 1) ++c.entries[multiplicative_order(a, b, lam, fl)];
  }
  return c;
}

bool ClassSystem::contains(u64 n) const noexcept {
  if (std::find(excluded_points.begin(), excluded_points.end(), n) != excluded_points.end()) return false;
  return std::any_of(classes.begin(), classes.end(), [n](const ResidueClass& c) { return c.contains(n); });
}

ExactRational ClassSystem::density() const {
  BalancedSum acc;
  for (const auto& c : classes) acc.add(ExactRational(1, c.m));
  return acc.result();
}

ClassSystem sb_class_system(u64 b) {
  require_b(b, "sb_class_system");
  if (b > kClassSystemMaxB) throw CapacityError("sb_class_system: b exceeds 10^5");
  const Factorization fb = factor(b);
  const u64 lam = carmichael_lambda(fb);
  const Factorization fl = factor_positive(lam);
  ClassSystem sys;
  for (u64 a0 = 1; a0 < b; ++a0) {
    if (gcd(a0, b) != 1) continue;
    const u64 d = multiplicative_order(a0, b, lam, fl);
    if (gcd(d, b) != 1) continue;
    // a == a0 (mod b), a == b^-1 (mod d)
    u64 a = a0;
    if (d > 1) {
      const u64 binv = inverse_mod(b % d, d);
      const u64 t = mulmod((binv + d - a0 % d) % d, binv, d);
      a = a0 + b * t;
    }
    const u64 mod = b * b * d;
    sys.classes.push_back(ResidueClass{b * a % mod, mod});
  }
  std::sort(sys.classes.begin(), sys.classes.end());
  sys.excluded_points = {b};
  return sys;
}

std::optional<ResidueClass> sb_class_containing(u64 n, u64 b) {
  require_b(b, "sb_class_containing");
  if (n == 0 || n == b || n % b != 0) return std::nullopt;
  const u64 a = n / b, a0 = a % b;
  if (gcd(a0, b) != 1) return std::nullopt;
  const u64 d = multiplicative_order(a0, b);
  if (gcd(d, b) != 1) return std::nullopt;
  if (d > 1 && a % d != inverse_mod(b % d, d)) return std::nullopt;
  const u64 mod = b * b * d;
  return ResidueClass{static_cast<u64>(static_cast<u128>(n) % mod), mod};
}

bool sb_membership(u64 n, u64 b) {
  if (b < 2 || n == 0 || n % b != 0) return false;
  const u64 a = n / b;
  if (a < 2 || gcd(a, b) != 1) return false;
  return powmod(a % b, n - 1, b) == 1 % b;
}

std::vector<AbelianPGroup> unit_group_components(u64 b) {
  require_b(b, "unit_group_components");
  std::map<u64, std::vector<unsigned>> parts;
  auto add_cyclic = [&](u64 order) {
    if (order < 2) return;
    for (const auto& pp : factor(order)) parts[pp.prime].push_back(pp.exponent);
  };
  for (const auto& pp : factor(b)) {
    if (pp.prime == 2) {
      if (pp.exponent == 2) add_cyclic(2);
      if (pp.exponent >= 3) {
        add_cyclic(2);
        add_cyclic(u64{1} << (pp.exponent - 2));
      }
    } else {
      u64 order = pp.prime - 1;
      for (unsigned i = 1; i < pp.exponent; ++i) order *= pp.prime;
      add_cyclic(order);
    }
  }
  std::vector<AbelianPGroup> out;
  for (auto& [p, ls] : parts) out.push_back(AbelianPGroup::make(p, std::move(ls)));
  return out;
}

ExactRational sb_density(u64 b) {
  require_b(b, "sb_density");
  // Only orders coprime to b count, and N(d, b) / d is multiplicative over
  // the Sylow subgroups, so the sum factors into N(G_q) for q not dividing b.
  ExactRational prod(1);
  for (const auto& g : unit_group_components(b)) {
    if (b % g.p != 0) prod *= group_N(g);
  }
  return prod * ExactRational(1, b) * ExactRational(1, b);
}

namespace {

struct Component {
  u64 p;
  u64 pe;
  u64 res;
};
using Progression = std::vector<Component>;  // sorted by prime

Progression to_components(const ResidueClass& c) {
  Progression out;
  for (const auto& pp : factor_positive(c.m)) {
    u64 pe = 1;
    for (unsigned i = 0; i < pp.exponent; ++i) pe *= pp.prime;
    out.push_back({pp.prime, pe, c.r % pe});
  }
  return out;
}

// Intersection of two progressions stored prime by prime; false when empty.
bool meet(const Progression& x, const Progression& y, Progression& out) {
  out.clear();
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].p < y[j].p)) {
      out.push_back(x[i++]);
    } else if (i == x.size() || y[j].p < x[i].p) {
      out.push_back(y[j++]);
    } else {
      const Component& lo = x[i].pe <= y[j].pe ? x[i] : y[j];
      const Component& hi = x[i].pe <= y[j].pe ? y[j] : x[i];
      if (hi.res % lo.pe != lo.res) return false;
      out.push_back(hi);
      ++i;
      ++j;
    }
  }
  return true;
}

struct UnionSearch {
  std::vector<std::vector<Progression>> groups;  // one list of classes per b
  mpz_class L;                                   // common multiple of all moduli
  mpz_class acc;                                 // sum of +-L / modulus
  u64 nodes = 0;
  u64 budget = 0;
  std::vector<Progression> scratch;

  void dfs(std::size_t from, const Progression& cur, unsigned depth) {
    for (std::size_t g = from; g < groups.size(); ++g) {
      for (const auto& cls : groups[g]) {
        Progression& next = scratch[depth];
        if (!meet(cur, cls, next)) continue;
        if (++nodes > budget) throw CapacityError("union_density: inclusion-exclusion node budget exhausted");
        mpz_class m = 1;
        for (const auto& c : next) m *= z(c.pe);
        if (depth % 2 == 0) acc += L / m;
        else acc -= L / m;
        dfs(g + 1, next, depth + 1);
      }
    }
  }
};

}  // namespace

ExactRational union_density(u64 k, bool skip_imprimitive) {
  if (k < 2) throw DomainError("union_density: k must be at least 2");
  if (k > kUnionMaxK) throw CapacityError("union_density: k exceeds 30");
  UnionSearch s;
  s.L = 1;
  for (u64 b = 2; b <= k; ++b) {
    if (skip_imprimitive && is_imprimitive(b)) continue;
    std::vector<Progression> cls;
    for (const auto& c : sb_class_system(b).classes) {
      cls.push_back(to_components(c));
      mpz_lcm(s.L.get_mpz_t(), s.L.get_mpz_t(), z(c.m).get_mpz_t());
    }
    s.groups.push_back(std::move(cls));
  }
  s.acc = 0;
  s.budget = u64{200'000'000};
  s.scratch.resize(s.groups.size() + 1);
  s.dfs(0, Progression{}, 0);
  return ExactRational(s.acc, s.L);
}

namespace {

// Number of proper divisors a of n = f.value() with a^n == a (mod n),
// stopping at the first when `first_only`. Such a has gcd(a, n/a) = 1, so
// only unitary splits are tried, with the test a^(n-1) == 1 (mod n/a).
u64 unitary_witnesses(const Factorization& f, bool first_only) {
  const std::size_t w = f.size();
  if (w < 2) return 0;
  const u64 n = f.value();
  std::array<u64, Factorization::kMaxDistinct> q{};
  std::size_t i = 0;
  for (const auto& pp : f) {
    u64 pe = 1;
    for (unsigned e = 0; e < pp.exponent; ++e) pe *= pp.prime;
    q[i++] = pe;
  }
  u64 count = 0;
  const u64 full = (u64{1} << w) - 1;
  for (u64 mask = 1; mask < full; ++mask) {
    u64 b = 1;
    for (std::size_t t = 0; t < w; ++t) {
      if (mask >> t & 1) b *= q[t];
    }
    const u64 a = n / b;
    if (powmod(a % b, n - 1, b) == 1) {
      ++count;
      if (first_only) return count;
    }
  }
  return count;
}

}  // namespace

bool in_S(u64 n) {
  if (n < 2) return false;
  return unitary_witnesses(factor(n), true) > 0;
}

SCount count_S(u64 limit) {
  if (limit > kCountSMaxLimit) throw CapacityError("count_S: limit exceeds 10^8");
  SCount out;
  if (limit < 2) return out;
  factor_range(2, limit + 1, [&](u64, const Factorization& f) {
    const u64 d = unitary_witnesses(f, false);
    out.divisor_sum += d;
    out.members += d > 0;
  });
  return out;
}

ExactRational c1_partial(u64 b_max) {
  if (b_max > kC1MaxB) throw CapacityError("c1_partial: b_max exceeds 10^5");
  return parallel_sum(1, std::max<u64>(b_max, 1), [](u64 s, u64 e, BalancedSum& acc) {
    for (u64 b = s + 1; b <= e; ++b) acc.add(sb_density(b));
  });
}

namespace {

mpq_class tail_term(const Factorization& f) {
  const u64 b = f.value();
  const u64 lam0 = coprime_part(carmichael_lambda(f), b);
  const u64 phi0 = coprime_part(euler_phi(f), b);
  const u64 t = tau(factor_positive(lam0));
  mpq_class q(z(t) * z(phi0), z(lam0) * z(b) * z(b));
  q.canonicalize();
  return q;
}

}  // namespace

ExactRational tail_bound_term(u64 b) {
  require_b(b, "tail_bound_term");
  return ExactRational(tail_term(factor(b)));
}

ExactRational tail_bound(u64 lo, u64 hi) {
  if (hi > kTailMaxB) throw CapacityError("tail_bound: upper end exceeds 2*10^7");
  lo = std::max<u64>(lo, 1);
  return parallel_sum(lo, hi, [](u64 s, u64 e, BalancedSum& acc) {
    factor_range(s + 1, e + 1, [&](u64, const Factorization& f) { acc.add(tail_term(f)); });
  });
}

std::optional<u64> is_imprimitive(u64 b) {
  // a0 == 1 (mod b0) with a0 >= 2 forces a0 > b0, so b0 < sqrt(b).
  for (u64 b0 = 2; b0 * (b0 + 1) <= b; ++b0) {
    if (b % b0 == 0 && (b / b0) % b0 == 1) return b0;
  }
  return std::nullopt;
}

AbelianPGroup AbelianPGroup::make(u64 p, std::vector<unsigned> lambdas) {
  if (!is_prime(p)) throw DomainError("AbelianPGroup: p must be prime");
  for (unsigned l : lambdas) {
    if (l == 0) throw DomainError("AbelianPGroup: exponents must be positive");
  }
  std::sort(lambdas.begin(), lambdas.end());
  return AbelianPGroup{p, std::move(lambdas)};
}

unsigned AbelianPGroup::log_order() const noexcept {
  unsigned n = 0;
  for (unsigned l : lambdas) n += l;
  return n;
}

unsigned AbelianPGroup::log_exponent() const noexcept { return lambdas.empty() ? 0 : lambdas.back(); }

mpz_class AbelianPGroup::order() const { return zpow(p, log_order()); }

mpz_class group_order_count(unsigned j, const AbelianPGroup& g) {
  if (j == 0) return 1;
  // #{x : x^(p^j) = 1} = prod min(p^j, p^l_i)
  unsigned upto_j = 0, upto_prev = 0;
  for (unsigned l : g.lambdas) {
    upto_j += std::min(j, l);
    upto_prev += std::min(j - 1, l);
  }
  return zpow(g.p, upto_j) - zpow(g.p, upto_prev);
}

ExactRational group_N(const AbelianPGroup& g) {
  mpq_class sum;
  for (unsigned j = 0; j <= g.log_exponent(); ++j) sum += mpq_class(group_order_count(j, g), zpow(g.p, j));
  sum.canonicalize();
  return ExactRational(sum);
}

GroupBoundReport check_group_bounds(const AbelianPGroup& g) { return check_group_bounds(std::vector{g}); }

GroupBoundReport check_group_bounds(const std::vector<AbelianPGroup>& components) {
  for (std::size_t i = 0; i < components.size(); ++i) {
    for (std::size_t k = i + 1; k < components.size(); ++k) {
      if (components[i].p == components[k].p) throw DomainError("check_group_bounds: components need distinct primes");
    }
  }
  GroupBoundReport r;
  r.n_of_g = ExactRational(1);
  r.eq6_bound = ExactRational(1);
  bool have_margin = false;
  for (const auto& g : components) {
    const unsigned n = g.log_order(), lam = g.log_exponent();
    r.n_of_g *= group_N(g);
    r.eq6_bound *= ExactRational(static_cast<std::int64_t>(lam + 1)) * ExactRational(zpow(g.p, n - lam), 1);
    const ExactRational cap(zpow(g.p, n - lam), 1);
    for (unsigned j = 0; j <= lam; ++j) {
      const ExactRational margin = cap - ExactRational(group_order_count(j, g), zpow(g.p, j));
      if (!have_margin || margin < r.lemma3_min_margin) r.lemma3_min_margin = margin;
      have_margin = true;
    }
  }
  if (!have_margin) r.lemma3_min_margin = ExactRational(0);
  r.eq6_margin = r.eq6_bound - r.n_of_g;
  r.eq6_holds = r.eq6_margin >= ExactRational(0);
  r.lemma3_holds = r.lemma3_min_margin >= ExactRational(0);
  return r;
}

}  // namespace pspkit::ordowski
