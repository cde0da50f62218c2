#include "pspkit/cli.hpp"

#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pspkit/errors.hpp"
#include "pspkit/ordowski.hpp"
#include "pspkit/residue_sieve.hpp"

namespace pspkit::cli {

u64 parse_count(const std::string& text) {
  auto bad = [&text] { return DomainError("not a non-negative integer: '" + text + "'"); };
  std::size_t i = 0;
  std::string digits;
  int scale = 0;  // value = digits * 10^scale
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) digits += text[i++];
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      digits += text[i++];
      --scale;
    }
  }
  if (digits.empty()) throw bad();
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool neg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) neg = text[i++] == '-';
    if (i == text.size()) throw bad();
    int e = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      e = e * 10 + (text[i++] - '0');
      if (e > 40) throw bad();
    }
    scale += neg ? -e : e;
  }
  if (i != text.size()) throw bad();
  for (; scale < 0; ++scale) {
    if (digits.back() != '0') throw bad();
    digits.pop_back();
    if (digits.empty()) digits = "0";
  }
  u128 v = 0;
  for (char c : digits) {
    v = v * 10 + static_cast<unsigned>(c - '0');
    if (v >> 64) throw bad();
  }
  for (; scale > 0; --scale) {
    v *= 10;
    if (v >> 64) throw bad();
  }
  return static_cast<u64>(v);
}

namespace {

std::vector<u64> parse_list(const std::string& text) {
  std::vector<u64> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(parse_count(item));
  if (out.empty()) throw DomainError("empty list");
  return out;
}

std::string render(const ExactRational& q, bool decimal_only) {
  return decimal_only ? q.to_decimal(6) : q.to_string() + " " + q.to_decimal(6);
}

struct Options {
  std::string base = "2", mod, limit, cls, b, b_max, k, lo, hi, p, lambdas, input;
  std::string format = "csv", segments = "1", filter = "mod9";
  std::string jacobi_bound = std::to_string(sieve::kDefaultJacobiBound);
  bool decimal_only = false;
};

sieve::TableFormat table_format(const std::string& f) {
  return f == "json" ? sieve::TableFormat::json : sieve::TableFormat::csv;
}

u64 positive(const std::string& text, const char* flag) {
  if (text.empty()) throw DomainError(std::string("missing required flag ") + flag);
  const u64 v = parse_count(text);
  if (v == 0) throw DomainError(std::string(flag) + " must be positive");
  return v;
}

const char* flag_str(bool b) { return b ? "true" : "false"; }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fermat pseudoprimes in residue classes and the densities of the sets S_b", "pspkit"};
  app.require_subcommand(1);
  Options o;
  std::function<void()> action;

  auto fmt = [&o](CLI::App* c) {
    c->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  auto jac = [&o](CLI::App* c) { c->add_option("--jacobi-bound", o.jacobi_bound, "search bound for the Jacobi condition"); };
  auto dec = [&o](CLI::App* c) { c->add_flag("--decimal-only", o.decimal_only, "print only the 6-place decimal"); };

  auto* psp = app.add_subcommand("psp", "base-a pseudoprimes by residue class");
  psp->require_subcommand(1);

  auto* count = psp->add_subcommand("count", "count pseudoprimes per class r mod m");
  count->add_option("--base", o.base);
  count->add_option("--mod", o.mod)->required();
  count->add_option("--limit", o.limit, "inclusive limit, or a comma-separated list")->required();
  count->add_option("--segments", o.segments, "number of concurrently scanned segments");
  fmt(count);
  count->callback([&] {
    action = [&] {
      const u64 segments = positive(o.segments, "--segments");
      const u64 m = positive(o.mod, "--mod");
      auto limits = parse_list(o.limit);
      err << "psp count: base " << o.base << " mod " << m << ", " << segments << " segment(s)\n";
      const auto t = sieve::count_psp_in_classes(parse_count(o.base), m, limits, static_cast<unsigned>(segments));
      out << sieve::emit_table(t, table_format(o.format));
    };
  });

  auto* even = psp->add_subcommand("even", "even base-2 pseudoprimes up to a limit");
  even->add_option("--limit", o.limit)->required();
  even->add_option("--filter", o.filter, "candidate filter: none, mod9, gcd2145")
      ->check(CLI::IsMember({"none", "mod9", "gcd2145"}));
  fmt(even);
  even->callback([&] {
    action = [&] {
      const auto filter = o.filter == "none"   ? sieve::EvenFilter::none
                          : o.filter == "mod9" ? sieve::EvenFilter::multiples_of_9
                                               : sieve::EvenFilter::gcd_2145;
      const auto found = sieve::enumerate_even_psp(parse_count(o.limit), filter);
      if (o.format == "json") {
        out << nlohmann::json(found).dump() << "\n";
      } else {
        out << "n\n";
        for (u64 n : found) out << n << "\n";
      }
    };
  });

  auto* check = psp->add_subcommand("class-check", "necessary conditions for r mod m to hold pseudoprimes");
  check->add_option("--base", o.base);
  check->add_option("--mod", o.mod)->required();
  check->add_option("--class", o.cls)->required();
  fmt(check);
  jac(check);
  check->callback([&] {
    action = [&] {
      const auto r = sieve::class_conditions(parse_count(o.base), parse_count(o.cls), positive(o.mod, "--mod"),
                                             parse_count(o.jacobi_bound));
      if (o.format == "json") {
        nlohmann::json j = {{"base", r.a},
                            {"modulus", r.m},
                            {"class", r.r},
                            {"g", r.g},
                            {"g_a", r.g_a},
                            {"h", r.h},
                            {"h_divides_r_minus_1", r.cond_h_divides},
                            {"cofactor_divides_base", r.cond_u_divides},
                            {"jacobi", sieve::to_string(r.cond_jacobi)},
                            {"admissible", r.admissible},
                            {"reasons", r.reasons()}};
        out << j.dump(2) << "\n";
      } else {
        out << "base,modulus,class,g,g_a,h,h_divides_r_minus_1,cofactor_divides_base,jacobi,admissible,reasons\n";
        out << r.a << ',' << r.m << ',' << r.r << ',' << r.g << ',' << r.g_a << ',' << r.h << ','
            << flag_str(r.cond_h_divides) << ',' << flag_str(r.cond_u_divides) << ','
            << sieve::to_string(r.cond_jacobi) << ',' << (r.admissible ? "admissible" : "inadmissible") << ','
            << r.reasons() << "\n";
      }
    };
  });

  auto* empty = psp->add_subcommand("empty-classes", "classes r mod m (2 <= m <= --mod) without pseudoprimes");
  empty->add_option("--base", o.base);
  empty->add_option("--mod", o.mod, "largest modulus")->required();
  empty->add_option("--limit", o.limit);
  empty->add_option("--input", o.input, "ascending pseudoprime list instead of a scan ('-' for stdin)");
  fmt(empty);
  jac(empty);
  empty->callback([&] {
    action = [&] {
      const u64 a = parse_count(o.base), max_mod = positive(o.mod, "--mod"), bound = parse_count(o.jacobi_bound);
      std::vector<sieve::EmptyClass> rows;
      if (!o.input.empty()) {
        std::vector<u64> psps;
        std::ifstream file;
        if (o.input != "-") {
          file.open(o.input);
          if (!file) throw FormatError("cannot open " + o.input);
        }
        std::istream& in = o.input == "-" ? std::cin : file;
        for (std::string line; std::getline(in, line);) {
          if (!line.empty() && line.back() == '\r') line.pop_back();
          if (line.empty()) continue;
          psps.push_back(parse_count(line));
        }
        rows = sieve::empty_classes_from_list(a, max_mod, psps, bound);
      } else {
        rows = sieve::scan_empty_classes(a, max_mod, positive(o.limit, "--limit"), bound);
      }
      if (o.format == "json") {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& e : rows) {
          j.push_back({{"modulus", e.m}, {"class", e.r}, {"predicted_by_lemma", e.predicted_by_lemma},
                       {"jacobi", sieve::to_string(e.jacobi)}});
        }
        out << j.dump(2) << "\n";
      } else {
        out << "modulus,class,predicted_by_lemma,jacobi\n";
        for (const auto& e : rows) {
          out << e.m << ',' << e.r << ',' << flag_str(e.predicted_by_lemma) << ',' << sieve::to_string(e.jacobi) << "\n";
        }
      }
    };
  });

  auto* ingest = psp->add_subcommand("ingest", "count an external ascending pseudoprime list by class");
  ingest->add_option("--input", o.input, "file, or '-' for stdin")->required();
  ingest->add_option("--mod", o.mod)->required();
  ingest->add_option("--base", o.base);
  fmt(ingest);
  ingest->callback([&] {
    action = [&] {
      const u64 m = positive(o.mod, "--mod");
      auto table = [&](std::istream& in) { return sieve::ingest_psp_list(in, m, parse_count(o.base)); };
      if (o.input == "-") {
        out << sieve::emit_table(table(std::cin), table_format(o.format));
        return;
      }
      std::ifstream file(o.input);
      if (!file) throw FormatError("cannot open " + o.input);
      out << sieve::emit_table(table(file), table_format(o.format));
    };
  });

  auto* ord = app.add_subcommand("ordowski", "the sets S_b and their densities");
  ord->require_subcommand(1);

  auto* scount = ord->add_subcommand("count", "members of S up to a limit and the sum of D(n)");
  scount->add_option("--limit", o.limit)->required();
  fmt(scount);
  scount->callback([&] {
    action = [&] {
      const u64 limit = parse_count(o.limit);
      const auto s = ordowski::count_S(limit);
      if (o.format == "json") {
        out << nlohmann::json{{"limit", limit}, {"members", s.members}, {"divisor_sum", s.divisor_sum}}.dump(2) << "\n";
      } else {
        out << "limit,members,divisor_sum\n" << limit << ',' << s.members << ',' << s.divisor_sum << "\n";
      }
    };
  });

  auto* sbd = ord->add_subcommand("sb-density", "exact density of S_b");
  sbd->add_option("--b", o.b)->required();
  dec(sbd);
  sbd->callback([&] { action = [&] { out << render(ordowski::sb_density(parse_count(o.b)), o.decimal_only) << "\n"; }; });

  auto* uni = ord->add_subcommand("union-density", "exact density of S_2 u ... u S_k");
  uni->add_option("--k", o.k)->required();
  dec(uni);
  uni->callback([&] { action = [&] { out << render(ordowski::union_density(parse_count(o.k)), o.decimal_only) << "\n"; }; });

  auto* c1 = ord->add_subcommand("c1", "sum of delta(S_b) for 2 <= b <= b_max");
  c1->add_option("--b-max", o.b_max)->required();
  dec(c1);
  c1->callback([&] { action = [&] { out << render(ordowski::c1_partial(parse_count(o.b_max)), o.decimal_only) << "\n"; }; });

  auto* tail = ord->add_subcommand("tail-bound", "sum of the per-b density bound over lo < b <= hi");
  tail->add_option("--lo", o.lo)->required();
  tail->add_option("--hi", o.hi)->required();
  dec(tail);
  tail->callback([&] {
    action = [&] {
      const u64 lo = parse_count(o.lo), hi = parse_count(o.hi);
      err << "tail-bound: summing " << (hi > lo ? hi - lo : 0) << " terms\n";
      const auto q = ordowski::tail_bound(lo, hi);
      // The exact fraction here runs to millions of digits.
      out << (o.decimal_only ? q.to_decimal(6) : q.to_decimal(12)) << "\n";
    };
  });

  auto* grp = ord->add_subcommand("group-check", "N(G) against its bounds for an abelian group");
  grp->add_option("--p", o.p, "prime of a p-group");
  grp->add_option("--lambdas", o.lambdas, "cyclic factor exponents, comma-separated");
  grp->add_option("--b", o.b, "use the unit group of Z/bZ instead");
  fmt(grp);
  grp->callback([&] {
    action = [&] {
      std::vector<ordowski::AbelianPGroup> comps;
      if (!o.b.empty()) {
        if (!o.p.empty() || !o.lambdas.empty()) throw DomainError("--b excludes --p and --lambdas");
        comps = ordowski::unit_group_components(parse_count(o.b));
      } else {
        if (o.p.empty() || o.lambdas.empty()) throw DomainError("need --p and --lambdas, or --b");
        std::vector<unsigned> ls;
        for (u64 l : parse_list(o.lambdas)) ls.push_back(static_cast<unsigned>(l));
        comps.push_back(ordowski::AbelianPGroup::make(parse_count(o.p), ls));
      }
      const auto r = ordowski::check_group_bounds(comps);
      if (o.format == "json") {
        out << nlohmann::json{{"N", r.n_of_g.to_string()},
                              {"bound", r.eq6_bound.to_string()},
                              {"bound_margin", r.eq6_margin.to_string()},
                              {"lemma3_min_margin", r.lemma3_min_margin.to_string()},
                              {"bound_holds", r.eq6_holds},
                              {"lemma3_holds", r.lemma3_holds}}
                   .dump(2)
            << "\n";
      } else {
        out << "N,bound,bound_margin,lemma3_min_margin,bound_holds,lemma3_holds\n"
            << r.n_of_g.to_string() << ',' << r.eq6_bound.to_string() << ',' << r.eq6_margin.to_string() << ','
            << r.lemma3_min_margin.to_string() << ',' << flag_str(r.eq6_holds) << ',' << flag_str(r.lemma3_holds)
            << "\n";
      }
    };
  });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (action) action();
    return kOk;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << "\n";
    return kCapacityError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const ParseError& e) {
    err << "error: line " << e.line() << ": " << e.what() << "\n";
    return kRuntimeError;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
}

}  // namespace pspkit::cli
