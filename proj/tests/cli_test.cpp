#include <gtest/gtest.h>

#include "json.hpp"

#include "cli_runner.hpp"

using nlohmann::json;
using xdmev::testing::run_cli;

TEST(Cli, MevDefaultsFromScenario) {
  auto r = run_cli("mev --scenario section3_2amm --format json");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  auto doc = json::parse(r.out);
  EXPECT_EQ(doc["result"]["value"], "1");
  ASSERT_EQ(doc["result"]["witness"].size(), 2u);
  EXPECT_EQ(doc["result"]["witness"][0]["id"], "tx1_i");
  EXPECT_EQ(doc["result"]["witness"][1]["id"], "arb_uni_toro");
  EXPECT_EQ(doc["result"]["witness"][1]["deltas"][0]["delta"], "1");
}

TEST(Cli, MevDomainFlags) {
  auto solo = run_cli("mev --scenario section3_2amm --action-domains i --value-domains i --format json");
  ASSERT_EQ(solo.exit_code, 0);
  EXPECT_EQ(json::parse(solo.out)["result"]["value"], "0");
  auto cross = run_cli("mev --scenario separable_pair --action-domains j --value-domains i --format json");
  ASSERT_EQ(cross.exit_code, 0);
  EXPECT_EQ(json::parse(cross.out)["result"]["value"], "0");
}

TEST(Cli, MevBaseFlagRepricesValue) {
  auto r = run_cli("mev --scenario figure1_bridge --base polygon:WMATIC --format json");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["result"]["value"], "49860.96");
  EXPECT_EQ(json::parse(r.out)["query"]["base"], "polygon:WMATIC");
}

TEST(Cli, TextReportListsEveryStep) {
  auto r = run_cli("mev --scenario figure1_bridge");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("value:    49860.96 MATIC"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("a2_bridge_weth [Bridge @ ethereum,polygon] amount=116.97"), std::string::npos);
  EXPECT_NE(r.out.find("polygon/WMATIC +288033.14"), std::string::npos);
}

TEST(Cli, Collusion) {
  auto r = run_cli("collusion --scenario appendix_b_4amm --alpha 0 --format json");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  auto doc = json::parse(r.out);
  EXPECT_EQ(doc["result"]["verdict"], "Profitable");
  EXPECT_EQ(doc["result"]["margin"], "0.6");
  EXPECT_EQ(doc["result"]["alpha_breakeven"], "0.6");
  auto one = run_cli("collusion --scenario section3_2amm --alpha 1 --format json");
  EXPECT_EQ(json::parse(one.out)["result"]["verdict"], "Indifferent");
  auto two = run_cli("collusion --scenario section3_2amm --domains i,j --alpha 2 --format json");
  EXPECT_EQ(json::parse(two.out)["result"]["verdict"], "Unprofitable");
  EXPECT_EQ(json::parse(two.out)["result"]["margin"], "-1");
}

TEST(Cli, OracleCheck) {
  EXPECT_EQ(run_cli("oracle-check --scenario appendix_b_4amm").exit_code, 0);
  auto coarse = run_cli("oracle-check --scenario cp_arbitrage_small --grid-points 11 --format json");
  EXPECT_EQ(coarse.exit_code, 4);
  auto doc = json::parse(coarse.out);
  EXPECT_EQ(doc["result"]["agree"], false);
  EXPECT_TRUE(doc["result"].contains("note"));
  EXPECT_EQ(doc["result"]["difference"].get<std::string>().front() != '-', true);
}

TEST(Cli, Validate) {
  auto ok = run_cli("validate --scenario section3_2amm");
  EXPECT_EQ(ok.exit_code, 0);
  EXPECT_EQ(ok.out, "ok: section3_2amm (2 domains, 2 actions)\n");
  std::string bad = std::string(::testing::TempDir()) + "bad_prices.json";
  {
    std::ofstream f(bad);
    f << R"({"schema_version": 1, "name": "bad", "domains": [{"id": "i", "native_asset": "a"}], "assets": ["a", "b"],
             "players": [{"id": "P"}], "prices": [{"from": "a", "to": "b", "rate": "2"}, {"from": "b", "to": "a", "rate": "0.6"}],
             "pools": [], "mempool": [{"id": "t", "domain": "i", "effect": {"type": "price_push", "pool": "ghost", "price": "1"}}],
             "defaults": {"player": "P", "base_domain": "i", "base_asset": "a", "action_domains": ["i"], "value_domains": ["i"]}})";
  }
  auto r = run_cli("validate --scenario " + bad);
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.err.find("b->a"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("ghost"), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("mev --scenario appendix_b_4amm --max-candidates 3").exit_code, 3);
  EXPECT_EQ(run_cli("mev --scenario section3_2amm --player nobody").exit_code, 2);
  EXPECT_EQ(run_cli("mev --scenario section3_2amm --base i").exit_code, 2);
  EXPECT_EQ(run_cli("mev").exit_code, 2);
  EXPECT_EQ(run_cli("frobnicate").exit_code, 2);
  EXPECT_EQ(run_cli("mev --scenario section3_2amm --format yaml").exit_code, 2);
}

TEST(Cli, JsonIsByteStableAcrossThreadCounts) {
  for (const char* args : {"mev --scenario appendix_b_4amm --format json",
                           "mev --scenario cp_arbitrage_small --format json",
                           "collusion --scenario section3_2amm --format json"}) {
    auto a = run_cli(args, "XDMEV_THREADS=1");
    auto b = run_cli(args, "XDMEV_THREADS=8");
    EXPECT_EQ(a.exit_code, 0);
    EXPECT_EQ(a.out, b.out) << args;
  }
}
