#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "xdmev/action_space.hpp"
#include "xdmev/mev_engine.hpp"
#include "xdmev/price_matrix.hpp"

namespace xdmev {

inline constexpr int kSchemaVersion = 1;

struct DomainDecl {
  DomainId id;
  AssetId native_asset;
};

struct BalanceDecl {
  DomainId domain;
  AssetId asset;
  Amount amount;
};

struct PlayerDecl {
  PlayerId id;
  std::vector<BalanceDecl> balances;
  std::map<DomainId, std::set<ActionKind>> capabilities;
};

// A player-initiated swap or bridge with its amount rule.
struct ActionTemplate {
  ActionId id;
  ActionKind kind = ActionKind::Swap;
  PoolId pool;  // swaps
  SwapDirection direction = SwapDirection::XToY;
  BridgeId bridge;  // bridges
  AmountSpec amount;
};

struct ScenarioDefaults {
  PlayerId player;
  DomainId base_domain;
  AssetId base_asset;
  std::vector<DomainId> action_domains;
  std::vector<DomainId> value_domains;
  int max_sequence_length = 8;
  Amount alpha;
  int grid_points = 101;
};

struct Scenario {
  int schema_version = kSchemaVersion;
  std::string name;
  std::string description;
  std::vector<DomainDecl> domains;
  std::vector<AssetId> assets;
  std::vector<PlayerDecl> players;
  std::vector<PoolState> pools;
  std::vector<BridgeSpec> bridges;
  std::vector<PendingTx> mempool;
  std::vector<StylizedArbSpec> stylized_arbs;
  std::vector<ActionTemplate> actions;
  PriceMatrix prices;
  ScenarioDefaults defaults;

  // Built by the loader from the declarations above.
  ActionSpace space;
};

// Throws ParseError (malformed JSON, with line and column) or ValidationFailure
// (every problem found, each naming the offending field).
Scenario load_scenario_text(std::string_view text);
Scenario load_scenario_file(const std::filesystem::path& path);
// A file path, or the name of a bundled scenario.
Scenario load_scenario(std::string_view path_or_name);

// Canonical JSON: sorted keys, 2-space indent, LF endings, trailing newline.
std::string serialize_scenario(const Scenario& scenario);

WorldState initial_state(const Scenario& scenario);

std::filesystem::path bundled_scenario_dir();
std::vector<std::string> bundled_scenario_names();

// The query described by the scenario's defaults.
MevQuery default_query(const Scenario& scenario);

}  // namespace xdmev
