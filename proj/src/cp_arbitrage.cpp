#include <optional>

#include "xdmev/error.hpp"
#include "xdmev/mev_engine.hpp"
#include "xdmev/venues.hpp"

namespace xdmev {

namespace {

ConstantProductPool flipped(const ConstantProductPool& pool) {
  ConstantProductPool out = pool;
  std::swap(out.asset_x, out.asset_y);
  std::swap(out.reserve_x, out.reserve_y);
  return out;
}

std::optional<Amount> try_profit(const ConstantProductPool& buy, const ConstantProductPool& sell, const Amount& in) {
  try {
    return cp_round_trip_profit(buy, sell, in);
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

Amount cp_round_trip_profit(const ConstantProductPool& buy_pool, const ConstantProductPool& sell_pool,
                            const Amount& amount_in) {
  Amount x_out = quote_swap(buy_pool, SwapDirection::YToX, amount_in);
  Amount y_out = quote_swap(sell_pool, SwapDirection::XToY, x_out);
  return y_out - amount_in;
}

CpArbitrage optimal_cp_arbitrage(const ConstantProductPool& pool_a, const ConstantProductPool& pool_b) {
  ConstantProductPool b = pool_b;
  if (b.asset_x == pool_a.asset_y && b.asset_y == pool_a.asset_x) b = flipped(b);
  if (b.asset_x != pool_a.asset_x || b.asset_y != pool_a.asset_y) {
    throw Error(ErrorCode::ValidationError, pool_a.id.str() + " and " + pool_b.id.str() + " trade different pairs");
  }
  const Rational price_a = pool_a.marginal_price();
  const Rational price_b = b.marginal_price();
  if (price_a == price_b) {
    throw Error(ErrorCode::NoOpportunity, pool_a.id.str() + " and " + pool_b.id.str() + " quote the same price");
  }
  const ConstantProductPool& cheap = price_a < price_b ? pool_a : b;
  const ConstantProductPool& dear = price_a < price_b ? b : pool_a;

  CpArbitrage out{cheap.id, dear.id, cheap.asset_y, Amount{}, Amount{}};

  if (cheap.fee_bps == 0 && dear.fee_bps == 0) {
    // The two hops compose into a single x·y=k curve with reserves
    //   X = ya·xb / (xa + xb),  Y = yb·xa / (xa + xb)
    // whose optimal input is sqrt(X·Y) − X.
    BigInt xa(cheap.reserve_x.raw());
    BigInt ya(cheap.reserve_y.raw());
    BigInt xb(dear.reserve_x.raw());
    BigInt yb(dear.reserve_y.raw());
    BigInt product = xa * ya * xb * yb;
    BigInt root = boost::multiprecision::sqrt(product);
    BigInt d = (root - ya * xb) / (xa + xb);
    if (d <= 0) throw Error(ErrorCode::NoOpportunity, "price gap below one unit");
    out.amount_in = Amount::from_raw(RawInt(d));
    out.profit = cp_round_trip_profit(cheap, dear, out.amount_in);
    return out;
  }

  // Profit is concave in the input and positive only below the dear pool's y reserve.
  static const Amount inv_phi = Amount::parse("0.618033988749894848");
  const Amount hi = dear.reserve_y;
  const Amount tol = hi.scaled(Rational(1, 1'000'000'000'000LL));
  Amount lo_edge;
  Amount hi_edge = hi;
  Amount c = hi_edge - (hi_edge - lo_edge) * inv_phi;
  Amount d = lo_edge + (hi_edge - lo_edge) * inv_phi;
  auto fc = try_profit(cheap, dear, c);
  auto fd = try_profit(cheap, dear, d);
  std::optional<Amount> best_profit;
  Amount best_in;
  auto keep = [&](const Amount& in, const std::optional<Amount>& p) {
    if (p && (!best_profit || *p > *best_profit)) {
      best_profit = p;
      best_in = in;
    }
  };
  keep(c, fc);
  keep(d, fd);
  while (hi_edge - lo_edge >= tol) {
    // Infeasible probes sit at the extremes (dust in, or a drained reserve); move away from them.
    bool keep_left = fc && fd ? *fc >= *fd : fc.has_value() ? true : !fd.has_value() && c > hi.scaled(Rational(1, 2));
    if (keep_left) {
      hi_edge = d;
      d = c;
      fd = fc;
      c = hi_edge - (hi_edge - lo_edge) * inv_phi;
      fc = try_profit(cheap, dear, c);
      keep(c, fc);
    } else {
      lo_edge = c;
      c = d;
      fc = fd;
      d = lo_edge + (hi_edge - lo_edge) * inv_phi;
      fd = try_profit(cheap, dear, d);
      keep(d, fd);
    }
  }
  if (best_profit && best_profit->is_positive()) {
    out.amount_in = best_in;
    out.profit = *best_profit;
  }
  return out;
}

}  // namespace xdmev
