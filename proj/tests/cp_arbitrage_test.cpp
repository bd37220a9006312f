#include <gtest/gtest.h>

#include "xdmev/error.hpp"
#include "xdmev/mev_engine.hpp"
#include "xdmev/venues.hpp"

using namespace xdmev;

namespace {

Amount A(const char* s) { return Amount::parse(s); }

ConstantProductPool pool(const char* id, const char* eth, const char* dai, int fee = 0) {
  return {PoolId(id), DomainId("main"), AssetId("ETH"), AssetId("DAI"), A(eth), A(dai), fee};
}

Rational rel(const Amount& got, const Rational& want) { return abs(got.to_rational() - want) / want; }

const Rational kTol(1, 1'000'000'000);

// Brute force over `points` evenly spaced inputs in (0, hi].
Amount grid_best(const ConstantProductPool& buy, const ConstantProductPool& sell, const Amount& hi, int points) {
  Amount best;
  for (int k = 1; k <= points; ++k) {
    Amount in = hi.scaled(Rational(k, points));
    try {
      best = std::max(best, cp_round_trip_profit(buy, sell, in));
    } catch (const Error&) {
    }
  }
  return best;
}

}  // namespace

TEST(CpArbitrage, ClosedFormWithoutFees) {
  auto cheap = pool("cheap", "100", "2000");
  auto dear = pool("dear", "100", "3000");
  auto arb = optimal_cp_arbitrage(dear, cheap);
  EXPECT_EQ(arb.buy_pool, PoolId("cheap"));
  EXPECT_EQ(arb.sell_pool, PoolId("dear"));
  EXPECT_EQ(arb.input_asset, AssetId("DAI"));
  // sqrt(1000·1500) − 1000, floored at the 18th digit.
  EXPECT_EQ(arb.amount_in, A("224.744871391589049098"));
  EXPECT_EQ(arb.profit, A("50.510257216821901789"));
}

TEST(CpArbitrage, EqualizesMarginalPrices) {
  auto cheap = pool("cheap", "100", "2000");
  auto dear = pool("dear", "100", "3000");
  auto arb = optimal_cp_arbitrage(cheap, dear);
  Amount eth = quote_swap(cheap, SwapDirection::YToX, arb.amount_in);
  auto after_cheap = swapped(cheap, SwapDirection::YToX, arb.amount_in, eth);
  auto after_dear = swapped(dear, SwapDirection::XToY, eth, quote_swap(dear, SwapDirection::XToY, eth));
  Rational a = after_cheap.marginal_price();
  Rational b = after_dear.marginal_price();
  EXPECT_LT(abs(a - b) / b, kTol);
}

TEST(CpArbitrage, MatchesMillionPointGrid) {
  auto cheap = pool("cheap", "100", "2000");
  auto dear = pool("dear", "100", "3000");
  auto arb = optimal_cp_arbitrage(cheap, dear);
  Amount grid = grid_best(cheap, dear, A("1000"), 1'000'000);
  EXPECT_LE(grid, arb.profit + Amount::ulp() * A("100"));
  EXPECT_LT(rel(arb.profit, grid.to_rational()), kTol);
}

TEST(CpArbitrage, GoldenSectionWithFees) {
  auto cheap = pool("cheap", "100", "2000", 30);
  auto dear = pool("dear", "100", "3000", 30);
  auto arb = optimal_cp_arbitrage(cheap, dear);
  // Stationary point of the fee-adjusted profit, solved to 60 digits with mpmath.
  EXPECT_LT(rel(arb.profit, A("49.092923683591019526").to_rational()), kTol);
  EXPECT_NEAR(static_cast<double>(arb.amount_in.to_long_double()), 222.068947731943, 1e-3);
}

TEST(CpArbitrage, AcceptsReversedPairOrientation) {
  auto cheap = pool("cheap", "100", "2000");
  ConstantProductPool flipped{PoolId("dear"), DomainId("main"), AssetId("DAI"), AssetId("ETH"), A("3000"), A("100"), 0};
  EXPECT_EQ(optimal_cp_arbitrage(cheap, flipped).profit, A("50.510257216821901789"));
}

TEST(CpArbitrage, Errors) {
  auto a = pool("a", "100", "2000");
  auto b = pool("b", "50", "1000");
  try {
    (void)optimal_cp_arbitrage(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoOpportunity);
  }
  ConstantProductPool other{PoolId("c"), DomainId("main"), AssetId("ETH"), AssetId("USDC"), A("1"), A("1"), 0};
  EXPECT_THROW((void)optimal_cp_arbitrage(a, other), Error);
}

TEST(CpArbitrage, FeesCanEatTheWholeGap) {
  // A 0.1% price gap cannot pay two 1% fees.
  auto arb = optimal_cp_arbitrage(pool("a", "100", "2000", 100), pool("b", "100", "2002", 100));
  EXPECT_EQ(arb.profit, A("0"));
  EXPECT_EQ(arb.amount_in, A("0"));
}
