#pragma once

#include <compare>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace xdmev {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using RawInt = boost::multiprecision::checked_int256_t;

// Signed fixed-point decimal with 18 fractional digits.
//
// Addition and subtraction are exact. Multiplication, division and rational
// scaling round half-to-even at the 18th fractional digit. Overflow of the
// 256-bit backing raises ErrorCode::Overflow.
class Amount {
 public:
  static constexpr int kDecimals = 18;

  Amount() = default;

  static Amount from_raw(RawInt raw) { return Amount(std::move(raw)); }
  static Amount from_integer(long long units);
  // Exact when the rational has at most 18 fractional digits; rounds half-even otherwise.
  static Amount from_rational(const Rational& value);
  // Accepts an optional sign, digits, and up to 18 fractional digits.
  static Amount parse(std::string_view text);
  // Smallest positive amount (1e-18).
  static Amount ulp() { return Amount(RawInt(1)); }

  static const RawInt& scale();

  const RawInt& raw() const noexcept { return raw_; }
  Rational to_rational() const;
  long double to_long_double() const;

  // Canonical decimal form: no trailing fractional zeros, no "+" sign, "-0" never produced.
  std::string to_string() const;

  bool is_zero() const { return raw_ == 0; }
  bool is_negative() const { return raw_ < 0; }
  bool is_positive() const { return raw_ > 0; }

  Amount operator-() const { return Amount(-raw_); }
  Amount& operator+=(const Amount& other);
  Amount& operator-=(const Amount& other);

  friend Amount operator+(Amount lhs, const Amount& rhs) { return lhs += rhs; }
  friend Amount operator-(Amount lhs, const Amount& rhs) { return lhs -= rhs; }
  friend Amount operator*(const Amount& lhs, const Amount& rhs);
  // Division by zero raises ErrorCode::InvalidAmount.
  friend Amount operator/(const Amount& lhs, const Amount& rhs);

  Amount scaled(const Rational& factor) const;

  friend bool operator==(const Amount& lhs, const Amount& rhs) { return lhs.raw_ == rhs.raw_; }
  friend std::strong_ordering operator<=>(const Amount& lhs, const Amount& rhs) {
    if (lhs.raw_ < rhs.raw_) return std::strong_ordering::less;
    if (lhs.raw_ > rhs.raw_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  explicit Amount(RawInt raw) : raw_(std::move(raw)) {}

  RawInt raw_{0};
};

// Rounds numerator/denominator to the nearest integer, ties to even.
BigInt round_half_even(const BigInt& numerator, const BigInt& denominator);

// Rounds toward negative infinity.
BigInt floor_div(const BigInt& numerator, const BigInt& denominator);

}  // namespace xdmev
