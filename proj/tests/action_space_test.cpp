#include "xdmev/action_space.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "xdmev/error.hpp"

using namespace xdmev;
using xdmev::testing::A;
using xdmev::testing::domains;

namespace {

const PlayerId kP{"P"};

Scenario cp_small() { return load_scenario("cp_arbitrage_small"); }

}  // namespace

TEST(ActionSpace, ActionsSortedAndDomainsAttached) {
  auto s = load_scenario("appendix_b_4amm");
  const auto& acts = s.space.actions();
  ASSERT_EQ(acts.size(), 4u);
  EXPECT_TRUE(std::is_sorted(acts.begin(), acts.end(), [](const Action& a, const Action& b) { return a.id < b.id; }));
  const Action& cross = s.space.action(ActionId("arb_uni_unagi"));
  EXPECT_EQ(cross.domains, (std::vector<DomainId>{DomainId("i"), DomainId("j")}));
  EXPECT_EQ(s.space.action(ActionId("arb_uni_sushi")).domains, (std::vector<DomainId>{DomainId("i")}));
}

TEST(ActionSpace, PlayerActionsFollowDomains) {
  auto s = load_scenario("appendix_b_4amm");
  EXPECT_EQ(s.space.player_actions(kP, domains({"i"})).size(), 2u);
  EXPECT_EQ(s.space.player_actions(kP, domains({"j"})).size(), 0u);
  EXPECT_EQ(s.space.player_actions(kP, domains({"i", "j"})).size(), 4u);
  EXPECT_THROW((void)s.space.player_actions(PlayerId("Q"), domains({"i"})), Error);
  EXPECT_THROW((void)s.space.player_actions(kP, domains({"k"})), Error);
}

TEST(ActionSpace, CapabilitiesRestrictKinds) {
  auto text = R"({
    "schema_version": 1, "name": "caps",
    "domains": [{"id": "i", "native_asset": "ETH"}],
    "assets": ["DAI", "ETH"],
    "players": [{"id": "P", "capabilities": {"i": ["Swap"]}}],
    "pools": [{"id": "u", "type": "stylized_midpoint", "domain": "i", "asset_x": "ETH", "asset_y": "DAI", "price": "20"}],
    "mempool": [{"id": "tx", "domain": "i", "effect": {"type": "price_push", "pool": "u", "price": "30"}}],
    "defaults": {"player": "P", "base_domain": "i", "base_asset": "ETH", "action_domains": ["i"], "value_domains": ["i"]}
  })";
  auto s = load_scenario_text(text);
  EXPECT_TRUE(s.space.player_actions(kP, domains({"i"})).empty());
  auto check = validate_sequence(s.space, kP, domains({"i"}), initial_state(s), {{ActionId("tx"), std::nullopt}});
  EXPECT_FALSE(check);
  EXPECT_EQ(check.index, 0u);
}

TEST(ActionSpace, ResolveAmount) {
  auto s = cp_small();
  WorldState st = initial_state(s);
  const Action& buy = s.space.action(ActionId("buy_cheap"));
  const Action& sell = s.space.action(ActionId("sell_dear"));
  EXPECT_TRUE(buy.parametric());
  EXPECT_FALSE(sell.parametric());
  EXPECT_EQ(resolve_amount(st, kP, buy, A("5")), A("5"));
  EXPECT_THROW((void)resolve_amount(st, kP, buy, std::nullopt), Error);
  EXPECT_THROW((void)resolve_amount(st, kP, buy, A("1000.1")), Error);
  EXPECT_EQ(resolve_amount(st, kP, sell, std::nullopt), A("0"));
  EXPECT_THROW((void)resolve_amount(st, kP, sell, A("1")), Error);
}

TEST(ActionSpace, AvailableActionsTrackState) {
  auto s = cp_small();
  WorldState st = initial_state(s);
  auto before = available_actions(s.space, kP, domains({"main"}), st);
  ASSERT_EQ(before.size(), 1u);
  EXPECT_EQ(before[0].id, ActionId("buy_cheap"));
  WorldState after = apply_action(st, kP, before[0], A("100"));
  EXPECT_EQ(available_actions(s.space, kP, domains({"main"}), after).size(), 2u);
}

TEST(ActionSpace, ValidateSequenceReportsFirstBadStep) {
  auto s = load_scenario("section3_2amm");
  WorldState st = initial_state(s);
  auto all = domains({"i", "j"});
  ActionSequence good{{ActionId("tx1_i"), std::nullopt}, {ActionId("arb_uni_toro"), std::nullopt}};
  EXPECT_TRUE(validate_sequence(s.space, kP, all, st, good));
  ActionSequence early{{ActionId("arb_uni_toro"), std::nullopt}};
  auto c = validate_sequence(s.space, kP, all, st, early);
  EXPECT_FALSE(c);
  EXPECT_NE(c.cause.find("PricesEqual"), std::string::npos);
  ActionSequence twice{{ActionId("tx1_i"), std::nullopt}, {ActionId("tx1_i"), std::nullopt}};
  EXPECT_EQ(validate_sequence(s.space, kP, all, st, twice).index, 1u);
  ActionSequence outside{{ActionId("tx1_i"), std::nullopt}, {ActionId("arb_uni_toro"), std::nullopt}};
  EXPECT_EQ(validate_sequence(s.space, kP, domains({"i"}), st, outside).index, 1u);
  EXPECT_FALSE(validate_sequence(s.space, kP, all, st, {{ActionId("ghost"), std::nullopt}}));
}

TEST(ActionSpace, ApplySequenceTagsFailingStep) {
  auto s = load_scenario("section3_2amm");
  ActionSequence seq{{ActionId("tx1_i"), std::nullopt}, {ActionId("tx1_i"), std::nullopt}};
  try {
    (void)apply_sequence(s.space, initial_state(s), kP, seq);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AlreadyConsumed);
    ASSERT_TRUE(e.step().has_value());
    EXPECT_EQ(*e.step(), 1u);
  }
}
