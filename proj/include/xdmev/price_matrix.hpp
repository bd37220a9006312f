#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "xdmev/amount.hpp"
#include "xdmev/ids.hpp"

namespace xdmev {

// Pairwise conversion rates between assets, stored as exact rationals.
//
// The diagonal is implicit (always 1) and never stored. A pair may be declared
// in one or both directions; when both are declared the two rates must be exact
// multiplicative inverses. Looking up the undeclared direction of a pair yields
// the reciprocal of the declared one.
class PriceMatrix {
 public:
  struct Entry {
    AssetId from;
    AssetId to;
    Rational rate;
  };

  // Throws ValidationError for a non-positive rate, a diagonal rate other than 1,
  // or a rate that is not the exact inverse of an already declared reverse rate.
  void declare(const AssetId& from, const AssetId& to, const Rational& rate);

  std::optional<Rational> rate(const AssetId& from, const AssetId& to) const;
  bool has_rate(const AssetId& from, const AssetId& to) const { return rate(from, to).has_value(); }

  // Declared entries in (from, to) order; diagonal entries are never listed.
  std::vector<Entry> entries() const;

  // Every declared rate into `asset` multiplied by `factor`, and every rate out of it
  // divided by it. Used to re-denominate a base asset.
  PriceMatrix rescaled_into(const AssetId& asset, const Rational& factor) const;

  friend bool operator==(const PriceMatrix&, const PriceMatrix&) = default;

 private:
  std::map<std::pair<AssetId, AssetId>, Rational> rates_;
};

// amount × rate(from, to), rounded half-to-even. convert(p, a, a, x) == x.
// Throws MissingRate when neither direction is declared.
Amount convert(const PriceMatrix& prices, const AssetId& from, const AssetId& to, const Amount& amount);

// "num/den" in lowest terms; accepts "num/den", an integer, or a decimal string.
Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& value);

}  // namespace xdmev
