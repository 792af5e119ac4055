#include "sfebound/rational.hpp"

#include <numeric>
#include <ostream>
#include <stdexcept>

namespace sfebound {

namespace {
__extension__ using Int128 = __int128;
}  // namespace

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("integer overflow in multiplication");
  return out;
}

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("integer overflow in addition");
  return out;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_sub_overflow(a, b, &out)) throw std::overflow_error("integer overflow in subtraction");
  return out;
}

}  // namespace

Rational::Rational(std::int64_t num) : num_(num), den_(1) {}

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = checked_sub(0, num);
    den = checked_sub(0, den);
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

double Rational::to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

double Rational::reciprocal_double() const {
  if (num_ == 0) throw std::domain_error("reciprocal of zero");
  return static_cast<double>(den_) / static_cast<double>(num_);
}

Rational Rational::reciprocal() const {
  if (num_ == 0) throw std::domain_error("reciprocal of zero");
  return {den_, num_};
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(const std::string& text) {
  const auto slash = text.find('/');
  try {
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const auto n = std::stoll(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return {n};
    }
    const auto num_text = text.substr(0, slash);
    const auto den_text = text.substr(slash + 1);
    const auto n = std::stoll(num_text, &used);
    if (used != num_text.size()) throw std::invalid_argument(text);
    const auto d = std::stoll(den_text, &used);
    if (used != den_text.size()) throw std::invalid_argument(text);
    return {n, d};
  } catch (const std::logic_error&) {
    throw std::invalid_argument("not a rational: '" + text + "'");
  }
}

Rational operator+(const Rational& a, const Rational& b) {
  const std::int64_t g = std::gcd(a.den_, b.den_);
  const std::int64_t lhs = checked_mul(a.num_, b.den_ / g);
  const std::int64_t rhs = checked_mul(b.num_, a.den_ / g);
  return {checked_add(lhs, rhs), checked_mul(a.den_, b.den_ / g)};
}

Rational operator-(const Rational& a, const Rational& b) { return a + Rational(checked_sub(0, b.num_), b.den_); }

Rational operator*(const Rational& a, const Rational& b) {
  // cross-reduce first so products stay small
  const std::int64_t g1 = std::gcd(a.num_, b.den_);
  const std::int64_t g2 = std::gcd(b.num_, a.den_);
  const std::int64_t n1 = g1 == 0 ? a.num_ : a.num_ / g1;
  const std::int64_t d2 = g1 == 0 ? b.den_ : b.den_ / g1;
  const std::int64_t n2 = g2 == 0 ? b.num_ : b.num_ / g2;
  const std::int64_t d1 = g2 == 0 ? a.den_ : a.den_ / g2;
  return {checked_mul(n1, n2), checked_mul(d1, d2)};
}

Rational operator/(const Rational& a, const Rational& b) { return a * b.reciprocal(); }

bool operator<(const Rational& a, const Rational& b) {
  const auto lhs = static_cast<Int128>(a.num_) * b.den_;
  const auto rhs = static_cast<Int128>(b.num_) * a.den_;
  return lhs < rhs;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

std::int64_t checked_pow(std::int64_t base, std::int64_t exp) {
  if (exp < 0) throw std::domain_error("negative exponent");
  std::int64_t out = 1;
  for (std::int64_t i = 0; i < exp; ++i) out = checked_mul(out, base);
  return out;
}

std::int64_t checked_binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t out = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    // out * (n - k + i) / i is exact at every step
    const std::int64_t g = std::gcd(out, i);
    out = checked_mul(out / g, (n - k + i) / (i / g));
  }
  return out;
}

}  // namespace sfebound
