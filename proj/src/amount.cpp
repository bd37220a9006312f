#include "xdmev/amount.hpp"

#include <cctype>

#include "xdmev/error.hpp"

namespace xdmev {

namespace {

const BigInt& big_scale() {
  static const BigInt value = boost::multiprecision::pow(BigInt(10), Amount::kDecimals);
  return value;
}

const BigInt& raw_limit() {
  static const BigInt value = BigInt(1) << 255;
  return value;
}

RawInt narrow(const BigInt& value) {
  if (boost::multiprecision::abs(value) >= raw_limit()) {
    throw Error(ErrorCode::Overflow, "amount exceeds 255-bit range");
  }
  return RawInt(value);
}

BigInt widen(const RawInt& value) { return BigInt(value); }

}  // namespace

BigInt floor_div(const BigInt& numerator, const BigInt& denominator) {
  BigInt n = numerator;
  BigInt d = denominator;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  BigInt q = n / d;  // truncates toward zero
  if (n < 0 && q * d != n) q -= 1;
  return q;
}

BigInt round_half_even(const BigInt& numerator, const BigInt& denominator) {
  BigInt n = numerator;
  BigInt d = denominator;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  BigInt q = floor_div(n, d);
  BigInt twice_rem = 2 * (n - q * d);
  if (twice_rem > d || (twice_rem == d && (q & 1) != 0)) q += 1;
  return q;
}

const RawInt& Amount::scale() {
  static const RawInt value = RawInt(big_scale());
  return value;
}

Amount Amount::from_integer(long long units) { return Amount(narrow(BigInt(units) * big_scale())); }

Amount Amount::from_rational(const Rational& value) {
  BigInt num = boost::multiprecision::numerator(value) * big_scale();
  return Amount(narrow(round_half_even(num, boost::multiprecision::denominator(value))));
}

Amount Amount::parse(std::string_view text) {
  auto fail = [&](const char* why) {
    return Error(ErrorCode::ParseError, "invalid amount \"" + std::string(text) + "\": " + why);
  };
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string int_digits;
  std::string frac_digits;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    int_digits += text[pos++];
  }
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      frac_digits += text[pos++];
    }
    if (frac_digits.empty()) throw fail("missing fractional digits");
  }
  if (pos != text.size()) throw fail("unexpected character");
  if (int_digits.empty()) throw fail("missing integer digits");
  if (frac_digits.size() > static_cast<std::size_t>(kDecimals)) throw fail("more than 18 fractional digits");
  if (int_digits.size() > 60) throw fail("too many digits");
  frac_digits.append(kDecimals - frac_digits.size(), '0');
  // A leading zero would make the string octal to the BigInt constructor.
  std::string digits = int_digits + frac_digits;
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
  BigInt raw(digits);
  if (negative) raw = -raw;
  return Amount(narrow(raw));
}

Rational Amount::to_rational() const { return Rational(widen(raw_), big_scale()); }

long double Amount::to_long_double() const {
  BigInt whole = widen(raw_) / big_scale();
  BigInt frac = widen(raw_) % big_scale();
  return static_cast<long double>(whole) + static_cast<long double>(frac) / 1e18L;
}

std::string Amount::to_string() const {
  BigInt magnitude = boost::multiprecision::abs(widen(raw_));
  std::string digits = magnitude.str();
  if (digits.size() <= static_cast<std::size_t>(kDecimals)) {
    digits.insert(0, kDecimals + 1 - digits.size(), '0');
  }
  std::string whole = digits.substr(0, digits.size() - kDecimals);
  std::string frac = digits.substr(digits.size() - kDecimals);
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  std::string out = raw_ < 0 ? "-" : "";
  out += whole;
  if (!frac.empty()) out += "." + frac;
  return out;
}

Amount& Amount::operator+=(const Amount& other) {
  raw_ = narrow(widen(raw_) + widen(other.raw_));
  return *this;
}

Amount& Amount::operator-=(const Amount& other) {
  raw_ = narrow(widen(raw_) - widen(other.raw_));
  return *this;
}

Amount operator*(const Amount& lhs, const Amount& rhs) {
  return Amount(narrow(round_half_even(widen(lhs.raw_) * widen(rhs.raw_), big_scale())));
}

Amount operator/(const Amount& lhs, const Amount& rhs) {
  if (rhs.is_zero()) throw Error(ErrorCode::InvalidAmount, "division by zero");
  return Amount(narrow(round_half_even(widen(lhs.raw_) * big_scale(), widen(rhs.raw_))));
}

Amount Amount::scaled(const Rational& factor) const {
  BigInt num = widen(raw_) * boost::multiprecision::numerator(factor);
  return Amount(narrow(round_half_even(num, boost::multiprecision::denominator(factor))));
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownId: return "UnknownId";
    case ErrorCode::MissingRate: return "MissingRate";
    case ErrorCode::InvalidAmount: return "InvalidAmount";
    case ErrorCode::InsufficientBalance: return "InsufficientBalance";
    case ErrorCode::InsufficientLiquidity: return "InsufficientLiquidity";
    case ErrorCode::FeeExceedsOutput: return "FeeExceedsOutput";
    case ErrorCode::PricesEqual: return "PricesEqual";
    case ErrorCode::UnknownPool: return "UnknownPool";
    case ErrorCode::AlreadyConsumed: return "AlreadyConsumed";
    case ErrorCode::NoOpportunity: return "NoOpportunity";
    case ErrorCode::ExplosionGuard: return "ExplosionGuard";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::Overflow: return "Overflow";
  }
  return "Unknown";
}

}  // namespace xdmev
