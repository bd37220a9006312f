#include "xdmev/collusion.hpp"

#include "xdmev/error.hpp"

namespace xdmev {

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Profitable: return "Profitable";
    case Verdict::Indifferent: return "Indifferent";
    case Verdict::Unprofitable: return "Unprofitable";
  }
  return "?";
}

Verdict verdict_for(const Amount& margin) {
  if (margin.is_positive()) return Verdict::Profitable;
  if (margin.is_zero()) return Verdict::Indifferent;
  return Verdict::Unprofitable;
}

namespace {

MevQuery query_for(const Scenario& scenario, const PlayerId& player, const std::vector<DomainId>& domains,
                   int max_len) {
  MevQuery q;
  q.player = player;
  q.action_domains = DomainSet(domains.begin(), domains.end());
  q.value_domains = domains;
  q.base_domain = scenario.defaults.base_domain;
  q.base_asset = scenario.defaults.base_asset;
  q.prices = scenario.prices;
  q.max_sequence_length = max_len;
  return q;
}

}  // namespace

CollusionReport classify_collusion(const Scenario& scenario, const PlayerId& player,
                                   const std::vector<DomainId>& domains, const Amount& alpha, int max_len,
                                   const EngineOptions& options) {
  if (DomainSet(domains.begin(), domains.end()).size() != domains.size() || domains.size() < 2) {
    throw Error(ErrorCode::InvalidAmount, "collusion needs at least two distinct domains");
  }
  if (alpha.is_negative()) throw Error(ErrorCode::InvalidAmount, "alpha must be >= 0");

  const WorldState state = initial_state(scenario);
  CollusionReport report;
  report.domains = domains;
  report.base_asset = scenario.defaults.base_asset;
  report.alpha = alpha;

  Amount solo_total;
  for (const auto& domain : domains) {
    MevResult solo = mev(scenario.space, query_for(scenario, player, {domain}, max_len), state, options);
    report.solo_values[domain] = solo.value;
    solo_total += solo.value;
    report.solo.emplace(domain, std::move(solo));
  }
  report.joint = mev(scenario.space, query_for(scenario, player, domains, max_len), state, options);
  report.joint_value = report.joint.value;
  report.margin = report.joint_value - (solo_total + alpha);
  report.verdict = verdict_for(report.margin);
  return report;
}

Amount alpha_breakeven(const Scenario& scenario, const PlayerId& player, const std::vector<DomainId>& domains,
                       int max_len, const EngineOptions& options) {
  return classify_collusion(scenario, player, domains, Amount{}, max_len, options).margin;
}

}  // namespace xdmev
