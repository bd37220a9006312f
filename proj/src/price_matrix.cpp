#include "xdmev/price_matrix.hpp"

#include <cctype>

#include "xdmev/error.hpp"

namespace xdmev {

bool is_valid_identifier(std::string_view text) {
  if (text.empty() || text.size() > kMaxIdentifierLength) return false;
  for (char c : text) {
    auto u = static_cast<unsigned char>(c);
    if (!std::isalnum(u) && c != '_' && c != '.' && c != '-') return false;
  }
  return true;
}

void PriceMatrix::declare(const AssetId& from, const AssetId& to, const Rational& rate) {
  std::string pair = from.str() + "->" + to.str();
  if (rate <= 0) throw Error(ErrorCode::ValidationError, "price " + pair + " must be positive");
  if (from == to) {
    if (rate != 1) throw Error(ErrorCode::ValidationError, "price " + pair + " must be 1 on the diagonal");
    return;
  }
  if (auto reverse = rates_.find({to, from}); reverse != rates_.end()) {
    if (reverse->second * rate != 1) {
      throw Error(ErrorCode::ValidationError, "price pair " + pair + " is not reciprocal: " +
                                                  format_rational(rate) + " x " +
                                                  format_rational(reverse->second) + " != 1");
    }
  }
  if (auto existing = rates_.find({from, to}); existing != rates_.end() && existing->second != rate) {
    throw Error(ErrorCode::ValidationError, "price " + pair + " declared twice with different rates");
  }
  rates_[{from, to}] = rate;
}

std::optional<Rational> PriceMatrix::rate(const AssetId& from, const AssetId& to) const {
  if (from == to) return Rational(1);
  if (auto it = rates_.find({from, to}); it != rates_.end()) return it->second;
  if (auto it = rates_.find({to, from}); it != rates_.end()) return Rational(1) / it->second;
  return std::nullopt;
}

std::vector<PriceMatrix::Entry> PriceMatrix::entries() const {
  std::vector<Entry> out;
  out.reserve(rates_.size());
  for (const auto& [key, rate] : rates_) out.push_back({key.first, key.second, rate});
  return out;
}

PriceMatrix PriceMatrix::rescaled_into(const AssetId& asset, const Rational& factor) const {
  PriceMatrix out;
  for (const auto& [key, rate] : rates_) {
    Rational r = rate;
    if (key.second == asset) r *= factor;
    if (key.first == asset) r /= factor;
    out.rates_[key] = r;
  }
  return out;
}

Amount convert(const PriceMatrix& prices, const AssetId& from, const AssetId& to, const Amount& amount) {
  if (from == to) return amount;
  auto rate = prices.rate(from, to);
  if (!rate) throw Error(ErrorCode::MissingRate, "no rate between " + from.str() + " and " + to.str());
  return amount.scaled(*rate);
}

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Amount::parse(text).to_rational();
  auto is_digits = [](std::string_view s) {
    if (s.empty() || s.size() > 80) return false;
    for (char c : s) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
  };
  std::string_view num = text.substr(0, slash);
  std::string_view den = text.substr(slash + 1);
  bool negative = !num.empty() && num.front() == '-';
  if (negative) num.remove_prefix(1);
  if (!is_digits(num) || !is_digits(den)) {
    throw Error(ErrorCode::ParseError, "invalid rational \"" + std::string(text) + "\"");
  }
  // Strip leading zeros so the digits are not read as octal.
  auto big = [](std::string_view s) {
    s.remove_prefix(std::min(s.find_first_not_of('0'), s.size() - 1));
    return BigInt(std::string{s});
  };
  BigInt d = big(den);
  if (d == 0) throw Error(ErrorCode::ParseError, "zero denominator in \"" + std::string(text) + "\"");
  BigInt n = big(num);
  if (negative) n = -n;
  return Rational(n, d);
}

std::string format_rational(const Rational& value) {
  return boost::multiprecision::numerator(value).str() + "/" + boost::multiprecision::denominator(value).str();
}

}  // namespace xdmev
