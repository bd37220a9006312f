#pragma once

#include <compare>
#include <ostream>
#include <string>
#include <string_view>

namespace xdmev {

// Case-sensitive opaque identifier. Charset and length are checked by the
// scenario loader (see is_valid_identifier), not on construction.
template <class Tag>
class Identifier {
 public:
  Identifier() = default;
  explicit Identifier(std::string value) : value_(std::move(value)) {}
  explicit Identifier(const char* value) : value_(value) {}

  const std::string& str() const noexcept { return value_; }
  bool empty() const noexcept { return value_.empty(); }

  friend bool operator==(const Identifier&, const Identifier&) = default;
  friend auto operator<=>(const Identifier&, const Identifier&) = default;
  friend std::ostream& operator<<(std::ostream& os, const Identifier& id) { return os << id.value_; }

 private:
  std::string value_;
};

using DomainId = Identifier<struct DomainTag>;
using AssetId = Identifier<struct AssetTag>;
using PlayerId = Identifier<struct PlayerTag>;
using PoolId = Identifier<struct PoolTag>;
using ActionId = Identifier<struct ActionTag>;
using BridgeId = Identifier<struct BridgeTag>;

constexpr std::size_t kMaxIdentifierLength = 64;

// Nonempty, at most 64 chars, charset [A-Za-z0-9_.-].
bool is_valid_identifier(std::string_view text);

}  // namespace xdmev
