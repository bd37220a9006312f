#include "xdmev/price_matrix.hpp"

#include <gtest/gtest.h>

#include "xdmev/error.hpp"

using namespace xdmev;

namespace {

AssetId id(const char* s) { return AssetId(s); }

}  // namespace

TEST(PriceMatrix, DiagonalIsImplicit) {
  PriceMatrix p;
  EXPECT_EQ(p.rate(id("ETH"), id("ETH")), Rational(1));
  EXPECT_EQ(convert(p, id("ETH"), id("ETH"), Amount::parse("3.25")), Amount::parse("3.25"));
  EXPECT_THROW(p.declare(id("ETH"), id("ETH"), Rational(2)), Error);
}

TEST(PriceMatrix, ReverseLookupIsReciprocal) {
  PriceMatrix p;
  p.declare(id("WMATIC"), id("MATIC"), Rational(9, 10));
  EXPECT_EQ(p.rate(id("MATIC"), id("WMATIC")), Rational(10, 9));
  EXPECT_EQ(convert(p, id("WMATIC"), id("MATIC"), Amount::parse("288033.14")), Amount::parse("259229.826"));
}

TEST(PriceMatrix, RejectsNonReciprocalPair) {
  PriceMatrix p;
  p.declare(id("a"), id("b"), Rational(2));
  EXPECT_NO_THROW(p.declare(id("b"), id("a"), Rational(1, 2)));
  try {
    p.declare(id("b"), id("a"), Rational(3, 5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ValidationError);
    EXPECT_NE(std::string(e.what()).find("b"), std::string::npos);
  }
}

TEST(PriceMatrix, MissingRate) {
  PriceMatrix p;
  try {
    (void)convert(p, id("DAI"), id("ETH"), Amount::parse("1"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingRate);
  }
}

TEST(PriceMatrix, RejectsNonPositiveRate) {
  PriceMatrix p;
  EXPECT_THROW(p.declare(id("a"), id("b"), Rational(0)), Error);
  EXPECT_THROW(p.declare(id("a"), id("b"), Rational(-1, 2)), Error);
}

TEST(PriceMatrix, RoundTripThroughReciprocalIsExactOnRationals) {
  PriceMatrix p;
  p.declare(id("x"), id("y"), Rational(7, 3));
  EXPECT_EQ(*p.rate(id("x"), id("y")) * *p.rate(id("y"), id("x")), Rational(1));
}

TEST(PriceMatrix, ParseRational) {
  EXPECT_EQ(parse_rational("9/10"), Rational(9, 10));
  EXPECT_EQ(parse_rational("018/020"), Rational(9, 10));
  EXPECT_EQ(parse_rational("2500"), Rational(2500));
  EXPECT_EQ(parse_rational("0.9"), Rational(9, 10));
  EXPECT_EQ(format_rational(Rational(18, 20)), "9/10");
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("a/b"), Error);
}

TEST(PriceMatrix, RescaledInto) {
  PriceMatrix p;
  p.declare(id("WETH"), id("USDC"), Rational(2500));
  PriceMatrix q = p.rescaled_into(id("USDC"), Rational(2));
  EXPECT_EQ(q.rate(id("WETH"), id("USDC")), Rational(5000));
}
