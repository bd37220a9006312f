#pragma once

#include <compare>
#include <map>
#include <set>

#include "xdmev/amount.hpp"
#include "xdmev/ids.hpp"
#include "xdmev/pools.hpp"

namespace xdmev {

struct BalanceKey {
  DomainId domain;
  PlayerId player;
  AssetId asset;

  friend bool operator==(const BalanceKey&, const BalanceKey&) = default;
  friend auto operator<=>(const BalanceKey&, const BalanceKey&) = default;
};

// Monolithic state shared by every domain.
//
// A value type: the venue functions take a state by const reference and return a
// new one. Zero balances are never stored, so two states holding the same
// balances compare equal regardless of how they were produced.
class WorldState {
 public:
  Amount balance(const DomainId& domain, const PlayerId& player, const AssetId& asset) const;
  void set_balance(const DomainId& domain, const PlayerId& player, const AssetId& asset, const Amount& amount);
  void credit(const DomainId& domain, const PlayerId& player, const AssetId& asset, const Amount& amount);
  // Throws InsufficientBalance when the result would be negative.
  void debit(const DomainId& domain, const PlayerId& player, const AssetId& asset, const Amount& amount);

  const std::map<BalanceKey, Amount>& balances() const noexcept { return balances_; }

  // Throws UnknownPool.
  const PoolState& pool(const PoolId& id) const;
  PoolState& pool(const PoolId& id);
  bool has_pool(const PoolId& id) const { return pools_.count(id) != 0; }
  void put_pool(PoolState pool);
  const std::map<PoolId, PoolState>& pools() const noexcept { return pools_; }

  bool consumed(const ActionId& id) const { return consumed_.count(id) != 0; }
  void mark_consumed(const ActionId& id) { consumed_.insert(id); }
  const std::set<ActionId>& consumed_actions() const noexcept { return consumed_; }

  friend bool operator==(const WorldState&, const WorldState&) = default;
  friend auto operator<=>(const WorldState&, const WorldState&) = default;

 private:
  std::map<BalanceKey, Amount> balances_;
  std::map<PoolId, PoolState> pools_;
  std::set<ActionId> consumed_;
};

// The ids a scenario declares; used to reject lookups of undeclared ids.
struct Universe {
  std::set<DomainId> domains;
  std::set<AssetId> assets;
  std::set<PlayerId> players;

  bool has(const DomainId& id) const { return domains.count(id) != 0; }
  bool has(const AssetId& id) const { return assets.count(id) != 0; }
  bool has(const PlayerId& id) const { return players.count(id) != 0; }
};

// Stored balance, or zero when absent. Throws UnknownId for undeclared ids.
Amount balance_of(const Universe& universe, const WorldState& state, const DomainId& domain,
                  const PlayerId& player, const AssetId& asset);

}  // namespace xdmev
