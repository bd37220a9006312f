#pragma once

#include <map>
#include <vector>

#include "xdmev/mev_engine.hpp"
#include "xdmev/scenario.hpp"

namespace xdmev {

enum class Verdict { Profitable, Indifferent, Unprofitable };

std::string_view to_string(Verdict verdict);

// Sign of the margin, compared exactly.
Verdict verdict_for(const Amount& margin);

struct CollusionReport {
  std::vector<DomainId> domains;
  AssetId base_asset;
  Amount alpha;
  // mev_d^d for each member, priced to the base asset.
  std::map<DomainId, Amount> solo_values;
  // mev over the union of all members.
  Amount joint_value;
  // joint − (Σ solo + alpha)
  Amount margin;
  Verdict verdict = Verdict::Indifferent;
  MevResult joint;
  std::map<DomainId, MevResult> solo;

  Amount breakeven() const { return margin + alpha; }
};

// Requires at least two distinct domains and alpha >= 0. Prices and base asset
// come from the scenario.
CollusionReport classify_collusion(const Scenario& scenario, const PlayerId& player,
                                   const std::vector<DomainId>& domains, const Amount& alpha, int max_len,
                                   const EngineOptions& options = {});

// joint − Σ solo: the alpha at which colluding and not colluding are worth the same.
Amount alpha_breakeven(const Scenario& scenario, const PlayerId& player, const std::vector<DomainId>& domains,
                       int max_len, const EngineOptions& options = {});

}  // namespace xdmev
