#include "xdmev/mev_engine.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "xdmev/error.hpp"

using namespace xdmev;
using xdmev::testing::A;
using xdmev::testing::ids;
using xdmev::testing::run;

namespace {

const Scenario& bundled(const char* name) {
  static std::map<std::string, Scenario> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, load_scenario(name)).first;
  return it->second;
}

using Ids = std::vector<std::string>;

}  // namespace

TEST(Mev, TwoAmmNeedsBothDomains) {
  const auto& s = bundled("section3_2amm");
  EXPECT_EQ(run(s, {"i"}, {"i"}).value, A("0"));
  EXPECT_EQ(run(s, {"j"}, {"j"}).value, A("0"));
  auto joint = run(s, {"i", "j"}, {"i", "j"});
  EXPECT_EQ(joint.value, A("1"));
  EXPECT_EQ(ids(joint.witness), (Ids{"tx1_i", "arb_uni_toro"}));
}

TEST(Mev, EmptyWitnessWhenNothingPays) {
  const auto& s = bundled("section3_2amm");
  auto r = run(s, {"i"}, {"i"});
  EXPECT_TRUE(r.witness.empty());
  EXPECT_EQ(r.final_state, initial_state(s));
}

TEST(Mev, FourAmmWitnessAndTieBreak) {
  const auto& s = bundled("appendix_b_4amm");
  EXPECT_EQ(run(s, {"i"}, {"i"}).value, A("1"));
  EXPECT_EQ(run(s, {"j"}, {"j"}).value, A("0"));
  auto joint = run(s, {"i", "j"}, {"i", "j"});
  EXPECT_EQ(joint.value, A("1.6"));
  // Two orders of the three arbitrages reach 1.6; ids break the tie.
  EXPECT_EQ(ids(joint.witness), (Ids{"tx1_i", "arb_uni_sushi", "arb_sushi_toro", "arb_uni_unagi"}));
}

TEST(Mev, SequenceLengthCapBindsTheSearch) {
  const auto& s = bundled("appendix_b_4amm");
  auto q = xdmev::testing::query_for(s, {"i", "j"}, {"i", "j"});
  q.max_sequence_length = 2;
  EXPECT_EQ(mev(s.space, q, initial_state(s)).value, A("1"));
  q.max_sequence_length = 3;
  EXPECT_EQ(mev(s.space, q, initial_state(s)).value, A("1.3"));
}

TEST(Mev, ValueMeasuredOnlyInValueDomains) {
  const auto& s = bundled("separable_pair");
  EXPECT_EQ(run(s, {"i"}, {"i"}).value, A("1"));
  EXPECT_EQ(run(s, {"j"}, {"j"}).value, A("0.5"));
  EXPECT_EQ(run(s, {"i", "j"}, {"i", "j"}).value, A("1.5"));
  // Actions in j cannot move i's state.
  EXPECT_EQ(run(s, {"j"}, {"i"}).value, A("0"));
  EXPECT_EQ(run(s, {"i", "j"}, {"i"}).value, A("1"));
}

TEST(Mev, BridgeLoopFigureOne) {
  auto r = run(bundled("figure1_bridge"), {"ethereum", "polygon"}, {"ethereum", "polygon"});
  EXPECT_EQ(r.value, A("49860.96"));
  EXPECT_EQ(ids(r.witness), (Ids{"a1_sell_matic", "a2_bridge_weth", "a3_buy_wmatic"}));
  EXPECT_EQ(run(bundled("figure1_bridge_discount"), {"ethereum", "polygon"}, {"ethereum", "polygon"}).value,
            A("21057.646"));
  // Without Polygon the MATIC sale only loses value, so nothing is done.
  EXPECT_EQ(run(bundled("figure1_bridge"), {"ethereum"}, {"ethereum"}).value, A("0"));
}

TEST(Mev, ThreeDomainLoop) {
  const auto& s = bundled("figure2_3domain");
  auto r = run(s, {"ethereum", "bsc", "polygon"}, {"ethereum", "bsc", "polygon"});
  EXPECT_EQ(r.value, A("3018.56"));
  EXPECT_EQ(r.witness.size(), 5u);
  EXPECT_EQ(run(s, {"ethereum", "bsc"}, {"ethereum", "bsc"}).value, A("1400"));
}

TEST(Mev, ParametricAmountIsOptimized) {
  const auto& s = bundled("cp_arbitrage_small");
  auto r = run(s, {"main"}, {"main"});
  // Continuous optimum (sqrt(1500) − sqrt(1000))² = 50.51025721682190180271…
  Rational target = A("50.510257216821901803").to_rational();
  EXPECT_LT(abs(r.value.to_rational() - target) / target, Rational(1, 1'000'000'000));
  ASSERT_EQ(r.witness.size(), 2u);
  ASSERT_TRUE(r.witness[0].amount.has_value());
  EXPECT_NEAR(static_cast<double>(r.witness[0].amount->to_long_double()), 224.7448713915890, 1e-6);
}

TEST(Mev, ExtractableValueReplaysWitness) {
  const auto& s = bundled("appendix_b_4amm");
  auto r = run(s, {"i", "j"}, {"i", "j"});
  EXPECT_EQ(extractable_value(s.space, initial_state(s), PlayerId("P"), r.witness, DomainId("i"), AssetId("ETH")),
            A("1.6"));
  EXPECT_EQ(apply_sequence(s.space, initial_state(s), PlayerId("P"), r.witness), r.final_state);
}

TEST(Mev, DeterministicAcrossThreadCounts) {
  for (const char* name : {"appendix_b_4amm", "cp_arbitrage_small", "figure2_3domain"}) {
    const auto& s = bundled(name);
    EngineOptions one;
    one.threads = 1;
    EngineOptions many;
    many.threads = 8;
    auto a = mev(s.space, default_query(s), initial_state(s), one);
    auto b = mev(s.space, default_query(s), initial_state(s), many);
    EXPECT_EQ(a.value, b.value) << name;
    EXPECT_EQ(a.witness, b.witness) << name;
    EXPECT_EQ(a.explored, b.explored) << name;
  }
}

TEST(Mev, ExplosionGuard) {
  const auto& s = bundled("appendix_b_4amm");
  EngineOptions tight;
  tight.max_candidates = 3;
  try {
    (void)mev(s.space, default_query(s), initial_state(s), tight);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ExplosionGuard);
  }
}

TEST(Mev, QueryValidation) {
  const auto& s = bundled("section3_2amm");
  auto q = default_query(s);
  q.player = PlayerId("nobody");
  EXPECT_THROW((void)mev(s.space, q, initial_state(s)), Error);
  q = default_query(s);
  q.value_domains = {DomainId("k")};
  EXPECT_THROW(validate_query(s.space, q), Error);
  q = default_query(s);
  q.base_asset = AssetId("DAI");
  try {
    validate_query(s.space, q);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingRate);
  }
}

TEST(Mev, CrossTwoMatchesGeneralQuery) {
  const auto& s = bundled("appendix_b_4amm");
  auto r = mev_cross_two(s.space, PlayerId("P"), DomainId("i"), DomainId("j"), s.prices, initial_state(s), 8);
  EXPECT_EQ(r.value, A("1.6"));
}

TEST(Mev, OracleAgreesOnDiscreteScenarios) {
  for (const char* name : {"section3_2amm", "appendix_b_4amm", "figure1_bridge", "figure2_3domain", "separable_pair"}) {
    const auto& s = bundled(name);
    auto engine = mev(s.space, default_query(s), initial_state(s));
    auto oracle = mev_oracle(s.space, default_query(s), initial_state(s), 101);
    EXPECT_EQ(engine.value, oracle.value) << name;
    EXPECT_EQ(engine.witness, oracle.witness) << name;
    EXPECT_EQ(oracle.method, SearchMethod::Oracle);
  }
}

TEST(Mev, CoarseOracleIsALowerBound) {
  const auto& s = bundled("cp_arbitrage_small");
  auto engine = mev(s.space, default_query(s), initial_state(s));
  auto coarse = mev_oracle(s.space, default_query(s), initial_state(s), 11);
  EXPECT_EQ(coarse.value, A("49.999999999999999997"));
  EXPECT_LT(coarse.value, engine.value);
}

TEST(ReachableStates, CountsDistinctStates) {
  const auto& s = bundled("section3_2amm");
  auto solo = reachable_states(s.space, initial_state(s), PlayerId("P"), xdmev::testing::domains({"i"}), 8);
  EXPECT_EQ(solo.size(), 2u);
  auto joint = reachable_states(s.space, initial_state(s), PlayerId("P"), xdmev::testing::domains({"i", "j"}), 8);
  EXPECT_EQ(joint.size(), 3u);
  EXPECT_TRUE(std::is_sorted(joint.begin(), joint.end()));
}
