#include "xdmev/world_state.hpp"

#include "xdmev/error.hpp"

namespace xdmev {

std::string_view to_string(SwapDirection direction) {
  return direction == SwapDirection::XToY ? "x_to_y" : "y_to_x";
}

const PoolId& pool_id(const PoolState& pool) {
  return std::visit([](const auto& p) -> const PoolId& { return p.id; }, pool);
}

const DomainId& pool_domain(const PoolState& pool) {
  return std::visit([](const auto& p) -> const DomainId& { return p.domain; }, pool);
}

Amount WorldState::balance(const DomainId& domain, const PlayerId& player, const AssetId& asset) const {
  auto it = balances_.find(BalanceKey{domain, player, asset});
  return it == balances_.end() ? Amount{} : it->second;
}

void WorldState::set_balance(const DomainId& domain, const PlayerId& player, const AssetId& asset,
                             const Amount& amount) {
  if (amount.is_negative()) {
    throw Error(ErrorCode::InsufficientBalance, player.str() + " balance of " + asset.str() + " on " +
                                                    domain.str() + " would become negative");
  }
  BalanceKey key{domain, player, asset};
  if (amount.is_zero()) {
    balances_.erase(key);
  } else {
    balances_[key] = amount;
  }
}

void WorldState::credit(const DomainId& domain, const PlayerId& player, const AssetId& asset,
                        const Amount& amount) {
  set_balance(domain, player, asset, balance(domain, player, asset) + amount);
}

void WorldState::debit(const DomainId& domain, const PlayerId& player, const AssetId& asset,
                       const Amount& amount) {
  Amount current = balance(domain, player, asset);
  if (current < amount) {
    throw Error(ErrorCode::InsufficientBalance, player.str() + " holds " + current.to_string() + " " +
                                                    asset.str() + " on " + domain.str() + ", needs " +
                                                    amount.to_string());
  }
  set_balance(domain, player, asset, current - amount);
}

const PoolState& WorldState::pool(const PoolId& id) const {
  auto it = pools_.find(id);
  if (it == pools_.end()) throw Error(ErrorCode::UnknownPool, "pool " + id.str());
  return it->second;
}

PoolState& WorldState::pool(const PoolId& id) {
  auto it = pools_.find(id);
  if (it == pools_.end()) throw Error(ErrorCode::UnknownPool, "pool " + id.str());
  return it->second;
}

void WorldState::put_pool(PoolState pool) {
  PoolId id = pool_id(pool);
  pools_.insert_or_assign(std::move(id), std::move(pool));
}

Amount balance_of(const Universe& universe, const WorldState& state, const DomainId& domain,
                  const PlayerId& player, const AssetId& asset) {
  if (!universe.has(domain)) throw Error(ErrorCode::UnknownId, "domain " + domain.str());
  if (!universe.has(player)) throw Error(ErrorCode::UnknownId, "player " + player.str());
  if (!universe.has(asset)) throw Error(ErrorCode::UnknownId, "asset " + asset.str());
  return state.balance(domain, player, asset);
}

}  // namespace xdmev
