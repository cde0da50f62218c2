#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pspkit {

// Exact fraction in lowest terms with a positive denominator. Thin value
// wrapper over GMP's mpq_class.
class ExactRational {
 public:
  ExactRational() = default;
  ExactRational(std::int64_t n) : q_(mpz_class(static_cast<long>(n))) {}  // NOLINT(implicit)
  ExactRational(std::uint64_t num, std::uint64_t den);
  ExactRational(const mpz_class& num, const mpz_class& den);
  explicit ExactRational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

  // Parses "num/den" or an integer.
  static ExactRational parse(const std::string& text);

  mpz_class numerator() const { return q_.get_num(); }
  mpz_class denominator() const { return q_.get_den(); }
  const mpq_class& raw() const noexcept { return q_; }

  // "num/den", or just "num" when the denominator is 1.
  std::string to_string() const;
  // Fixed-point rendering with `places` digits, rounding half to even.
  std::string to_decimal(unsigned places) const;
  double to_double() const { return q_.get_d(); }

  ExactRational& operator+=(const ExactRational& o) { q_ += o.q_; return *this; }
  ExactRational& operator-=(const ExactRational& o) { q_ -= o.q_; return *this; }
  ExactRational& operator*=(const ExactRational& o) { q_ *= o.q_; return *this; }
  ExactRational& operator/=(const ExactRational& o);

  friend ExactRational operator+(ExactRational a, const ExactRational& b) { return a += b; }
  friend ExactRational operator-(ExactRational a, const ExactRational& b) { return a -= b; }
  friend ExactRational operator*(ExactRational a, const ExactRational& b) { return a *= b; }
  friend ExactRational operator/(ExactRational a, const ExactRational& b) { return a /= b; }
  friend ExactRational operator-(const ExactRational& a) { return ExactRational(mpq_class(-a.q_)); }

  friend bool operator==(const ExactRational& a, const ExactRational& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const ExactRational& a, const ExactRational& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

 private:
  mpq_class q_;
};

// Streaming pairwise summation: partial sums of equal term counts are
// combined like carries in a binary counter, so operands stay balanced and
// memory is logarithmic in the number of terms.
class BalancedSum {
 public:
  void add(const mpq_class& term);
  void add(const ExactRational& term) { add(term.raw()); }
  // Folds another accumulator in (used to combine parallel partial sums).
  void absorb(BalancedSum&& other);
  ExactRational result() const;
  std::uint64_t size() const noexcept { return count_; }

 private:
  std::vector<std::pair<std::uint64_t, mpq_class>> stack_;  // (terms, partial sum)
  std::uint64_t count_ = 0;
};

ExactRational sum_balanced(std::span<const ExactRational> terms);

}  // namespace pspkit
