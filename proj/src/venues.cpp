#include "xdmev/venues.hpp"

#include "xdmev/error.hpp"

namespace xdmev {

namespace {

const ConstantProductPool& as_constant_product(const PoolState& pool) {
  if (const auto* cp = std::get_if<ConstantProductPool>(&pool)) return *cp;
  throw Error(ErrorCode::UnknownPool, pool_id(pool).str() + " is not a constant-product pool");
}

const StylizedMidpointPool& as_stylized(const PoolState& pool) {
  if (const auto* sp = std::get_if<StylizedMidpointPool>(&pool)) return *sp;
  throw Error(ErrorCode::UnknownPool, pool_id(pool).str() + " is not a stylized pool");
}

void require_positive(const Amount& amount, const char* what) {
  if (!amount.is_positive()) {
    throw Error(ErrorCode::InvalidAmount, std::string(what) + " must be positive, got " + amount.to_string());
  }
}

}  // namespace

const AssetId& input_asset(const ConstantProductPool& pool, SwapDirection direction) {
  return direction == SwapDirection::XToY ? pool.asset_x : pool.asset_y;
}

const AssetId& output_asset(const ConstantProductPool& pool, SwapDirection direction) {
  return direction == SwapDirection::XToY ? pool.asset_y : pool.asset_x;
}

Amount quote_swap(const ConstantProductPool& pool, SwapDirection direction, const Amount& amount_in) {
  require_positive(amount_in, "swap input");
  const bool x_in = direction == SwapDirection::XToY;
  BigInt r_in(x_in ? pool.reserve_x.raw() : pool.reserve_y.raw());
  BigInt r_out(x_in ? pool.reserve_y.raw() : pool.reserve_x.raw());
  BigInt in(amount_in.raw());
  // Everything in raw units, fee applied as (10000 - bps) / 10000 on the input.
  BigInt in_after_fee = in * (10000 - pool.fee_bps);
  BigInt numerator = r_out * in_after_fee;
  BigInt denominator = r_in * 10000 + in_after_fee;
  BigInt out = numerator / denominator;  // all terms positive: truncation is floor
  if (out <= 0 || out >= r_out) {
    throw Error(ErrorCode::InsufficientLiquidity,
                "pool " + pool.id.str() + " cannot pay out for input " + amount_in.to_string());
  }
  return Amount::from_raw(RawInt(out));
}

ConstantProductPool swapped(const ConstantProductPool& pool, SwapDirection direction, const Amount& amount_in,
                            const Amount& amount_out) {
  ConstantProductPool next = pool;
  if (direction == SwapDirection::XToY) {
    next.reserve_x += amount_in;
    next.reserve_y -= amount_out;
  } else {
    next.reserve_y += amount_in;
    next.reserve_x -= amount_out;
  }
  return next;
}

WorldState apply_swap(const WorldState& state, const PlayerId& player, const PoolId& pool_id,
                      SwapDirection direction, const Amount& amount_in) {
  const auto& pool = as_constant_product(state.pool(pool_id));
  require_positive(amount_in, "swap input");
  Amount out = quote_swap(pool, direction, amount_in);
  WorldState next = state;
  next.debit(pool.domain, player, input_asset(pool, direction), amount_in);
  next.credit(pool.domain, player, output_asset(pool, direction), out);
  next.put_pool(swapped(pool, direction, amount_in, out));
  return next;
}

WorldState apply_stylized_arb(const WorldState& state, const PlayerId& player, const StylizedArbSpec& spec) {
  const auto& a = as_stylized(state.pool(spec.pool_a));
  const auto& b = as_stylized(state.pool(spec.pool_b));
  if (a.price == b.price) {
    throw Error(ErrorCode::PricesEqual, spec.pool_a.str() + " and " + spec.pool_b.str() + " both at " +
                                            a.price.to_string());
  }
  // (p_a + p_b) / 2 is exact whenever p_a + p_b has an even raw value; half-even otherwise.
  Amount mid = (a.price + b.price).scaled(Rational(1, 2));
  WorldState next = state;
  StylizedMidpointPool na = a;
  StylizedMidpointPool nb = b;
  na.price = mid;
  nb.price = mid;
  next.put_pool(na);
  next.put_pool(nb);
  next.credit(spec.profit_domain, player, spec.profit_asset, spec.declared_profit);
  return next;
}

WorldState apply_pending_tx(const WorldState& state, const PendingTx& tx) {
  if (state.consumed(tx.id)) throw Error(ErrorCode::AlreadyConsumed, "transaction " + tx.id.str());
  WorldState next = std::visit(
      [&](const auto& effect) -> WorldState {
        using T = std::decay_t<decltype(effect)>;
        if constexpr (std::is_same_v<T, SwapEffect>) {
          return apply_swap(state, effect.account, effect.pool, effect.direction, effect.amount_in);
        } else if constexpr (std::is_same_v<T, PricePushEffect>) {
          require_positive(effect.price, "pushed price");
          WorldState out = state;
          StylizedMidpointPool pool = as_stylized(state.pool(effect.pool));
          pool.price = effect.price;
          out.put_pool(pool);
          return out;
        } else {
          require_positive(effect.amount, "transfer amount");
          WorldState out = state;
          out.debit(tx.domain, effect.from, effect.asset, effect.amount);
          out.credit(tx.domain, effect.to, effect.asset, effect.amount);
          return out;
        }
      },
      tx.effect);
  next.mark_consumed(tx.id);
  return next;
}

Amount bridge_output(const BridgeSpec& bridge, const Amount& quantity) {
  return quantity.scaled(bridge.rate) - bridge.flat_fee;
}

WorldState apply_bridge(const WorldState& state, const PlayerId& player, const BridgeSpec& bridge,
                        const Amount& quantity) {
  require_positive(quantity, "bridge quantity");
  Amount arriving = bridge_output(bridge, quantity);
  if (arriving.is_negative()) {
    throw Error(ErrorCode::FeeExceedsOutput, "bridge " + bridge.id.str() + " fee " + bridge.flat_fee.to_string() +
                                                 " exceeds converted quantity");
  }
  WorldState next = state;
  next.debit(bridge.from_domain, player, bridge.from_asset, quantity);
  next.credit(bridge.to_domain, player, bridge.to_asset, arriving);
  return next;
}

}  // namespace xdmev
