#pragma once

#include <variant>
#include <vector>

#include "xdmev/amount.hpp"
#include "xdmev/ids.hpp"

namespace xdmev {

enum class SwapDirection { XToY, YToX };

std::string_view to_string(SwapDirection direction);

// x·y = k pool with a single basis-point fee charged on the input.
struct ConstantProductPool {
  PoolId id;
  DomainId domain;
  AssetId asset_x;
  AssetId asset_y;
  Amount reserve_x;
  Amount reserve_y;
  int fee_bps = 0;

  // Marginal price of x in units of y, exact.
  Rational marginal_price() const { return reserve_y.to_rational() / reserve_x.to_rational(); }

  friend bool operator==(const ConstantProductPool&, const ConstantProductPool&) = default;
  friend auto operator<=>(const ConstantProductPool&, const ConstantProductPool&) = default;
};

// Pool that only tracks an indicated price (asset_y per asset_x). Arbitrage
// moves a pair of these to their midpoint and pays a declared profit.
struct StylizedMidpointPool {
  PoolId id;
  DomainId domain;
  AssetId asset_x;
  AssetId asset_y;
  Amount price;

  friend bool operator==(const StylizedMidpointPool&, const StylizedMidpointPool&) = default;
  friend auto operator<=>(const StylizedMidpointPool&, const StylizedMidpointPool&) = default;
};

using PoolState = std::variant<ConstantProductPool, StylizedMidpointPool>;

const PoolId& pool_id(const PoolState& pool);
const DomainId& pool_domain(const PoolState& pool);

struct StylizedArbSpec {
  ActionId id;
  PoolId pool_a;
  PoolId pool_b;
  Amount declared_profit;
  AssetId profit_asset;
  DomainId profit_domain;
  // Labels of the individual transactions the rebalancing is made of.
  std::vector<std::string> legs;
};

struct BridgeSpec {
  BridgeId id;
  DomainId from_domain;
  DomainId to_domain;
  AssetId from_asset;
  AssetId to_asset;
  Rational rate{1};
  Amount flat_fee;
};

// Effects a pending third-party transaction can wrap.
struct SwapEffect {
  PlayerId account;
  PoolId pool;
  SwapDirection direction = SwapDirection::XToY;
  Amount amount_in;
};

struct PricePushEffect {
  PoolId pool;
  Amount price;
};

struct TransferEffect {
  PlayerId from;
  PlayerId to;
  AssetId asset;
  Amount amount;
};

using PendingEffect = std::variant<SwapEffect, PricePushEffect, TransferEffect>;

struct PendingTx {
  ActionId id;
  DomainId domain;
  PendingEffect effect;
};

}  // namespace xdmev
