#include "pspkit/rational.hpp"

#include <vector>

#include "pspkit/errors.hpp"

namespace pspkit {

namespace {

mpz_class to_mpz(std::uint64_t v) {
  mpz_class z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof v, 0, 0, &v);
  return z;
}

}  // namespace

ExactRational::ExactRational(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw DomainError("ExactRational: zero denominator");
  q_ = mpq_class(to_mpz(num), to_mpz(den));
  q_.canonicalize();
}

ExactRational::ExactRational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw DomainError("ExactRational: zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

ExactRational ExactRational::parse(const std::string& text) {
  mpq_class q;
  if (q.set_str(text, 10) != 0 || q.get_den() == 0) throw DomainError("ExactRational: cannot parse '" + text + "'");
  return ExactRational(std::move(q));
}

ExactRational& ExactRational::operator/=(const ExactRational& o) {
  if (o.q_ == 0) throw DomainError("ExactRational: division by zero");
  q_ /= o.q_;
  return *this;
}

std::string ExactRational::to_string() const { return q_.get_str(10); }

std::string ExactRational::to_decimal(unsigned places) const {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, places);
  const bool negative = sgn(q_) < 0;
  const mpz_class num = abs(q_.get_num()) * scale;
  const mpz_class& den = q_.get_den();
  mpz_class quot, rem;
  mpz_fdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  const int half = cmp(2 * rem, den);
  if (half > 0 || (half == 0 && mpz_odd_p(quot.get_mpz_t()))) ++quot;

  std::string digits = quot.get_str(10);
  if (digits.size() <= places) digits.insert(0, places + 1 - digits.size(), '0');
  std::string out = negative && quot != 0 ? "-" : "";
  out += digits.substr(0, digits.size() - places);
  if (places > 0) out += "." + digits.substr(digits.size() - places);
  return out;
}

void BalancedSum::add(const mpq_class& term) {
  stack_.emplace_back(1, term);
  ++count_;
  while (stack_.size() >= 2 && stack_[stack_.size() - 2].first == stack_.back().first) {
    auto top = std::move(stack_.back());
    stack_.pop_back();
    stack_.back().first += top.first;
    stack_.back().second += top.second;
  }
}

void BalancedSum::absorb(BalancedSum&& other) {
  BalancedSum merged;
  merged.stack_.emplace_back(count_ + other.count_, other.result().raw() + result().raw());
  merged.count_ = count_ + other.count_;
  *this = std::move(merged);
}

ExactRational BalancedSum::result() const {
  mpq_class total;
  for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) total += it->second;
  return ExactRational(std::move(total));
}

ExactRational sum_balanced(std::span<const ExactRational> terms) {
  BalancedSum acc;
  for (const auto& t : terms) acc.add(t);
  return acc.result();
}

}  // namespace pspkit
