#include "xdmev/collusion.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "xdmev/error.hpp"

using namespace xdmev;
using xdmev::testing::A;

namespace {

const PlayerId kP{"P"};
const std::vector<DomainId> kIJ{DomainId("i"), DomainId("j")};

}  // namespace

TEST(Collusion, TrichotomyOnTwoAmm) {
  auto s = load_scenario("section3_2amm");
  auto zero = classify_collusion(s, kP, kIJ, A("0"), 8);
  EXPECT_EQ(zero.verdict, Verdict::Profitable);
  EXPECT_EQ(zero.margin, A("1"));
  EXPECT_EQ(classify_collusion(s, kP, kIJ, A("1"), 8).verdict, Verdict::Indifferent);
  auto two = classify_collusion(s, kP, kIJ, A("2"), 8);
  EXPECT_EQ(two.verdict, Verdict::Unprofitable);
  EXPECT_EQ(two.margin, A("-1"));
  EXPECT_EQ(alpha_breakeven(s, kP, kIJ, 8), A("1"));
}

TEST(Collusion, FourAmm) {
  auto s = load_scenario("appendix_b_4amm");
  auto r = classify_collusion(s, kP, kIJ, A("0"), 8);
  EXPECT_EQ(r.solo_values.at(DomainId("i")), A("1"));
  EXPECT_EQ(r.solo_values.at(DomainId("j")), A("0"));
  EXPECT_EQ(r.joint_value, A("1.6"));
  EXPECT_EQ(r.margin, A("0.6"));
  EXPECT_EQ(r.verdict, Verdict::Profitable);
  EXPECT_EQ(r.breakeven(), A("0.6"));
}

TEST(Collusion, SeparableDomainsGainNothing) {
  auto s = load_scenario("separable_pair");
  EXPECT_EQ(alpha_breakeven(s, kP, kIJ, 8), A("0"));
  EXPECT_EQ(classify_collusion(s, kP, kIJ, A("0"), 8).verdict, Verdict::Indifferent);
}

TEST(Collusion, ThreeMemberCoalition) {
  auto s = load_scenario("figure2_3domain");
  std::vector<DomainId> all{DomainId("ethereum"), DomainId("bsc"), DomainId("polygon")};
  auto r = classify_collusion(s, kP, all, A("100"), 8);
  EXPECT_EQ(r.joint_value, A("3018.56"));
  EXPECT_EQ(r.margin, A("2918.56"));
}

TEST(Collusion, MarginIdentity) {
  auto s = load_scenario("appendix_b_4amm");
  Amount breakeven = alpha_breakeven(s, kP, kIJ, 8);
  for (const char* alpha : {"0", "0.1", "0.6", "0.600000000000000001", "5"}) {
    EXPECT_EQ(classify_collusion(s, kP, kIJ, A(alpha), 8).margin, breakeven - A(alpha)) << alpha;
  }
}

TEST(Collusion, InputChecks) {
  auto s = load_scenario("section3_2amm");
  EXPECT_THROW((void)classify_collusion(s, kP, {DomainId("i")}, A("0"), 8), Error);
  EXPECT_THROW((void)classify_collusion(s, kP, {DomainId("i"), DomainId("i")}, A("0"), 8), Error);
  EXPECT_THROW((void)classify_collusion(s, kP, kIJ, A("-1"), 8), Error);
  EXPECT_EQ(verdict_for(A("-0.000000000000000001")), Verdict::Unprofitable);
}
