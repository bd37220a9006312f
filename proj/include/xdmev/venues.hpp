#pragma once

#include "xdmev/pools.hpp"
#include "xdmev/world_state.hpp"

namespace xdmev {

// Output of a constant-product swap, rounded down:
//   out = R_out·in·(1 − fee) / (R_in + in·(1 − fee))
// Throws InvalidAmount for a non-positive input and InsufficientLiquidity when
// the output is zero or would drain the output reserve.
Amount quote_swap(const ConstantProductPool& pool, SwapDirection direction, const Amount& amount_in);

// Pool after a swap; reserves only.
ConstantProductPool swapped(const ConstantProductPool& pool, SwapDirection direction, const Amount& amount_in,
                            const Amount& amount_out);

const AssetId& input_asset(const ConstantProductPool& pool, SwapDirection direction);
const AssetId& output_asset(const ConstantProductPool& pool, SwapDirection direction);

WorldState apply_swap(const WorldState& state, const PlayerId& player, const PoolId& pool,
                      SwapDirection direction, const Amount& amount_in);

// Moves both pools to the midpoint price and pays the declared profit.
// Throws PricesEqual when the pools already agree.
WorldState apply_stylized_arb(const WorldState& state, const PlayerId& player, const StylizedArbSpec& spec);

// Throws AlreadyConsumed when the transaction was applied earlier in the sequence.
WorldState apply_pending_tx(const WorldState& state, const PendingTx& tx);

// Debits quantity on the source domain, credits quantity·rate − flat_fee on the
// destination. Throws FeeExceedsOutput when that would be negative.
WorldState apply_bridge(const WorldState& state, const PlayerId& player, const BridgeSpec& bridge,
                        const Amount& quantity);

Amount bridge_output(const BridgeSpec& bridge, const Amount& quantity);

}  // namespace xdmev
