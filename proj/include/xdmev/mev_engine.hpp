#pragma once

#include <cstdint>
#include <vector>

#include "xdmev/action_space.hpp"
#include "xdmev/price_matrix.hpp"

namespace xdmev {

// mev^{action_domains}_{value_domains}(player, s), priced into base_asset.
struct MevQuery {
  PlayerId player;
  DomainSet action_domains;
  // Ordered; the first entry is the canonical base domain B_1.
  std::vector<DomainId> value_domains;
  DomainId base_domain;
  AssetId base_asset;
  PriceMatrix prices;
  int max_sequence_length = 8;
};

enum class SearchMethod { Exhaustive, Oracle };

std::string_view to_string(SearchMethod method);

struct MevResult {
  Amount value;
  ActionSequence witness;
  WorldState final_state;
  std::uint64_t explored = 0;
  SearchMethod method = SearchMethod::Exhaustive;
};

struct EngineOptions {
  std::uint64_t max_candidates = 10'000'000;
  // 0 = XDMEV_THREADS if set, else hardware concurrency.
  unsigned threads = 0;
  // Points per parametric interval when enumerating reachable states.
  int reachable_grid_points = 11;
};

unsigned resolve_thread_count(const EngineOptions& options);

// Throws UnknownId for undeclared ids and MissingRate when a value domain's
// native asset cannot be priced into the base asset.
void validate_query(const ActionSpace& space, const MevQuery& query);

// b(s', domain, player, asset) − b(s, domain, player, asset) with s' the state after `seq`.
Amount extractable_value(const ActionSpace& space, const WorldState& state, const PlayerId& player,
                         const ActionSequence& seq, const DomainId& domain, const AssetId& asset);

// Σ over value domains of the native-asset balance change from `before` to `after`, priced to base.
Amount priced_gain(const ActionSpace& space, const MevQuery& query, const WorldState& before,
                   const WorldState& after);

// Distinct states reachable with at most max_len actions (parametric amounts on
// the options' grid), including `state`. Sorted.
std::vector<WorldState> reachable_states(const ActionSpace& space, const WorldState& state, const PlayerId& player,
                                         const DomainSet& domains, int max_len, const EngineOptions& options = {});

// Exhaustive search over valid sequences; parametric amounts are optimized per
// sequence. Ties: shortest, then lexicographically smallest ids, then smallest amounts.
MevResult mev(const ActionSpace& space, const MevQuery& query, const WorldState& state,
              const EngineOptions& options = {});

// mev with action and value domains both {i, j}, priced into domain i's native asset.
MevResult mev_cross_two(const ActionSpace& space, const PlayerId& player, const DomainId& domain_i,
                        const DomainId& domain_j, const PriceMatrix& prices, const WorldState& state, int max_len,
                        const EngineOptions& options = {});

// Brute force over every ordered subset of the player's actions, with each
// parametric amount discretized to `grid_points` evenly spaced values.
MevResult mev_oracle(const ActionSpace& space, const MevQuery& query, const WorldState& state, int grid_points,
                     const EngineOptions& options = {});

// Round trip: pay asset_y into the pool where x is cheaper, sell the x received
// into the other pool. Profit is in asset_y.
struct CpArbitrage {
  PoolId buy_pool;
  PoolId sell_pool;
  AssetId input_asset;
  Amount amount_in;
  Amount profit;
};

// Closed form without fees, golden-section search otherwise.
// Throws NoOpportunity when marginal prices are equal.
CpArbitrage optimal_cp_arbitrage(const ConstantProductPool& pool_a, const ConstantProductPool& pool_b);

// Realized profit of the round trip for a given input (exact venue arithmetic).
Amount cp_round_trip_profit(const ConstantProductPool& buy_pool, const ConstantProductPool& sell_pool,
                            const Amount& amount_in);

}  // namespace xdmev
