#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace sfebound {

/// Exact fraction over 64-bit integers. Always stored in lowest terms with a
/// positive denominator; every arithmetic step throws std::overflow_error
/// instead of wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num);  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const;
  /// 1/x as a double, computed as den/num so that 1/(1/4) is exactly 4.
  double reciprocal_double() const;
  Rational reciprocal() const;

  /// "3/8", or "1" for integers.
  std::string str() const;
  static Rational parse(const std::string& text);

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend bool operator<(const Rational& a, const Rational& b);
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }
  friend std::ostream& operator<<(std::ostream& os, const Rational& r);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// base^exp with overflow detection.
std::int64_t checked_pow(std::int64_t base, std::int64_t exp);
/// Binomial coefficient with overflow detection.
std::int64_t checked_binomial(std::int64_t n, std::int64_t k);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);

}  // namespace sfebound
