#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "xdmev/collusion.hpp"
#include "xdmev/mev_engine.hpp"
#include "xdmev/scenario.hpp"

namespace xdmev {

struct BalanceDelta {
  DomainId domain;
  AssetId asset;
  Amount delta;
};

struct TraceStep {
  ActionId id;
  ActionKind kind = ActionKind::ExecutePendingTx;
  std::vector<DomainId> domains;
  // The amount the step actually moved, when it carries one.
  std::optional<Amount> amount;
  // The player's non-zero balance changes caused by this step.
  std::vector<BalanceDelta> deltas;
};

std::vector<TraceStep> trace_witness(const ActionSpace& space, const WorldState& state, const PlayerId& player,
                                     const ActionSequence& witness);

struct OracleCheck {
  MevResult engine;
  MevResult oracle;
  int grid_points = 0;
  bool discrete_only = true;
  Amount tolerance;
  // engine.value − oracle.value
  Amount difference;
  bool agree = false;
};

// Exact agreement when every usable action is discrete, otherwise within 1e-6 base units.
OracleCheck run_oracle_check(const Scenario& scenario, const MevQuery& query, int grid_points,
                             const EngineOptions& options = {});

nlohmann::json mev_report_json(const Scenario& scenario, const MevQuery& query, const MevResult& result);
std::string mev_report_text(const Scenario& scenario, const MevQuery& query, const MevResult& result);

nlohmann::json collusion_report_json(const Scenario& scenario, const PlayerId& player, int max_len,
                                     const CollusionReport& report);
std::string collusion_report_text(const Scenario& scenario, const PlayerId& player, int max_len,
                                  const CollusionReport& report);

nlohmann::json oracle_report_json(const Scenario& scenario, const MevQuery& query, const OracleCheck& check);
std::string oracle_report_text(const Scenario& scenario, const MevQuery& query, const OracleCheck& check);

// Sorted keys, 2-space indent, trailing newline.
std::string render_json(const nlohmann::json& doc);

}  // namespace xdmev
