#include "xdmev/report.hpp"

#include <algorithm>
#include <sstream>

#include "xdmev/error.hpp"

namespace xdmev {

using nlohmann::json;

std::vector<TraceStep> trace_witness(const ActionSpace& space, const WorldState& state, const PlayerId& player,
                                     const ActionSequence& witness) {
  std::vector<TraceStep> steps;
  WorldState current = state;
  for (std::size_t i = 0; i < witness.size(); ++i) {
    const Action& action = space.action(witness[i].id);
    TraceStep step{action.id, action.kind, action.domains, std::nullopt, {}};
    WorldState next;
    try {
      step.amount = resolve_amount(current, player, action, witness[i].amount);
      next = apply_action(current, player, action, witness[i].amount);
    } catch (const Error& e) {
      throw e.at_step(i);
    }
    std::set<std::pair<DomainId, AssetId>> keys;
    for (const auto* s : {&current, &next}) {
      for (const auto& [key, amount] : s->balances()) {
        if (key.player == player) keys.insert({key.domain, key.asset});
      }
    }
    for (const auto& [domain, asset] : keys) {
      Amount delta = next.balance(domain, player, asset) - current.balance(domain, player, asset);
      if (!delta.is_zero()) step.deltas.push_back({domain, asset, delta});
    }
    steps.push_back(std::move(step));
    current = std::move(next);
  }
  return steps;
}

OracleCheck run_oracle_check(const Scenario& scenario, const MevQuery& query, int grid_points,
                             const EngineOptions& options) {
  OracleCheck check;
  const WorldState state = initial_state(scenario);
  check.grid_points = grid_points;
  auto acts = scenario.space.player_actions(query.player, query.action_domains);
  check.discrete_only = std::none_of(acts.begin(), acts.end(), [](const Action* a) { return a->parametric(); });
  check.tolerance = check.discrete_only ? Amount{} : Amount::parse("0.000001");
  check.engine = mev(scenario.space, query, state, options);
  check.oracle = mev_oracle(scenario.space, query, state, grid_points, options);
  check.difference = check.engine.value - check.oracle.value;
  Amount gap = check.difference.is_negative() ? -check.difference : check.difference;
  check.agree = check.discrete_only ? (gap.is_zero() && check.engine.witness == check.oracle.witness)
                                    : gap <= check.tolerance;
  return check;
}

namespace {

std::string join(const std::vector<DomainId>& ids, const char* sep = ",") {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += sep;
    out += id.str();
  }
  return out;
}

std::string signed_amount(const Amount& a) { return a.is_negative() ? a.to_string() : "+" + a.to_string(); }

json query_json(const Scenario& scenario, const MevQuery& query) {
  std::vector<DomainId> action(query.action_domains.begin(), query.action_domains.end());
  json a = json::array();
  for (const auto& d : action) a.push_back(d.str());
  json v = json::array();
  for (const auto& d : query.value_domains) v.push_back(d.str());
  return {{"scenario", scenario.name},
          {"player", query.player.str()},
          {"action_domains", a},
          {"value_domains", v},
          {"base", query.base_domain.str() + ":" + query.base_asset.str()},
          {"max_sequence_length", query.max_sequence_length}};
}

json trace_json(const std::vector<TraceStep>& steps) {
  json out = json::array();
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& s = steps[i];
    json domains = json::array();
    for (const auto& d : s.domains) domains.push_back(d.str());
    json deltas = json::array();
    for (const auto& d : s.deltas) {
      deltas.push_back({{"domain", d.domain.str()}, {"asset", d.asset.str()}, {"delta", d.delta.to_string()}});
    }
    out.push_back({{"index", i},
                   {"id", s.id.str()},
                   {"kind", std::string(to_string(s.kind))},
                   {"domains", domains},
                   {"amount", s.amount ? json(s.amount->to_string()) : json(nullptr)},
                   {"deltas", deltas}});
  }
  return out;
}

json result_json(const Scenario& scenario, const MevQuery& query, const MevResult& result) {
  auto steps = trace_witness(scenario.space, initial_state(scenario), query.player, result.witness);
  return {{"value", result.value.to_string()},
          {"base_asset", query.base_asset.str()},
          {"explored", result.explored},
          {"method", std::string(to_string(result.method))},
          {"witness", trace_json(steps)}};
}

void write_trace(std::ostringstream& os, const std::vector<TraceStep>& steps, const std::string& indent) {
  if (steps.empty()) {
    os << indent << "(empty sequence)\n";
    return;
  }
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& s = steps[i];
    os << indent << i + 1 << ". " << s.id << " [" << to_string(s.kind) << " @ " << join(s.domains) << "]";
    if (s.amount) os << " amount=" << s.amount->to_string();
    if (!s.deltas.empty()) {
      os << " deltas:";
      for (const auto& d : s.deltas) os << " " << d.domain << "/" << d.asset << " " << signed_amount(d.delta);
    }
    os << "\n";
  }
}

std::string query_line(const MevQuery& query) {
  std::vector<DomainId> action(query.action_domains.begin(), query.action_domains.end());
  std::ostringstream os;
  os << "mev^{" << join(action) << "}_{" << join(query.value_domains) << "} player=" << query.player
     << " base=" << query.base_domain << ":" << query.base_asset << " max_len=" << query.max_sequence_length;
  return os.str();
}

}  // namespace

std::string render_json(const json& doc) { return doc.dump(2) + "\n"; }

json mev_report_json(const Scenario& scenario, const MevQuery& query, const MevResult& result) {
  return {{"command", "mev"}, {"query", query_json(scenario, query)}, {"result", result_json(scenario, query, result)}};
}

std::string mev_report_text(const Scenario& scenario, const MevQuery& query, const MevResult& result) {
  std::ostringstream os;
  os << "scenario: " << scenario.name << "\n";
  os << "query:    " << query_line(query) << "\n";
  os << "value:    " << result.value.to_string() << " " << query.base_asset << "\n";
  os << "explored: " << result.explored << " candidate sequences (" << to_string(result.method) << ")\n";
  os << "witness:\n";
  write_trace(os, trace_witness(scenario.space, initial_state(scenario), query.player, result.witness), "  ");
  return os.str();
}

json collusion_report_json(const Scenario& scenario, const PlayerId& player, int max_len,
                           const CollusionReport& report) {
  json domains = json::array();
  for (const auto& d : report.domains) domains.push_back(d.str());
  json solo = json::object();
  for (const auto& [domain, value] : report.solo_values) solo[domain.str()] = value.to_string();
  const WorldState state = initial_state(scenario);
  return {{"command", "collusion"},
          {"query",
           {{"scenario", scenario.name},
            {"player", player.str()},
            {"domains", domains},
            {"alpha", report.alpha.to_string()},
            {"base_asset", report.base_asset.str()},
            {"max_sequence_length", max_len}}},
          {"result",
           {{"solo_values", solo},
            {"joint_value", report.joint_value.to_string()},
            {"margin", report.margin.to_string()},
            {"alpha_breakeven", report.breakeven().to_string()},
            {"verdict", std::string(to_string(report.verdict))},
            {"joint_witness", trace_json(trace_witness(scenario.space, state, player, report.joint.witness))}}}};
}

std::string collusion_report_text(const Scenario& scenario, const PlayerId& player, int max_len,
                                  const CollusionReport& report) {
  std::ostringstream os;
  const auto& base = report.base_asset;
  os << "scenario:  " << scenario.name << "\n";
  os << "domains:   " << join(report.domains) << " player=" << player << " max_len=" << max_len << "\n";
  for (const auto& [domain, value] : report.solo_values) {
    os << "solo mev^{" << domain << "}_{" << domain << "}: " << value.to_string() << " " << base << "\n";
  }
  os << "joint mev: " << report.joint_value.to_string() << " " << base << "\n";
  os << "alpha:     " << report.alpha.to_string() << " " << base << "\n";
  os << "margin:    " << report.margin.to_string() << " " << base << "\n";
  os << "breakeven: " << report.breakeven().to_string() << " " << base << "\n";
  os << "verdict:   " << to_string(report.verdict) << "\n";
  os << "joint witness:\n";
  write_trace(os, trace_witness(scenario.space, initial_state(scenario), player, report.joint.witness), "  ");
  return os.str();
}

json oracle_report_json(const Scenario& scenario, const MevQuery& query, const OracleCheck& check) {
  json result = {{"engine", result_json(scenario, query, check.engine)},
                 {"oracle", result_json(scenario, query, check.oracle)},
                 {"grid_points", check.grid_points},
                 {"discrete_only", check.discrete_only},
                 {"tolerance", check.tolerance.to_string()},
                 {"difference", check.difference.to_string()},
                 {"agree", check.agree}};
  if (!check.agree && !check.discrete_only && !check.difference.is_negative()) {
    result["note"] = "oracle below engine; grid of " + std::to_string(check.grid_points) +
                     " points is too coarse to resolve the continuous optimum";
  }
  return {{"command", "oracle-check"}, {"query", query_json(scenario, query)}, {"result", result}};
}

std::string oracle_report_text(const Scenario& scenario, const MevQuery& query, const OracleCheck& check) {
  std::ostringstream os;
  os << "scenario:   " << scenario.name << "\n";
  os << "query:      " << query_line(query) << "\n";
  os << "engine:     " << check.engine.value.to_string() << " " << query.base_asset << " (" << check.engine.explored
     << " candidates)\n";
  os << "oracle:     " << check.oracle.value.to_string() << " " << query.base_asset << " (" << check.oracle.explored
     << " candidates, " << check.grid_points << " grid points)\n";
  os << "difference: " << check.difference.to_string() << " (tolerance "
     << (check.discrete_only ? std::string("exact") : check.tolerance.to_string()) << ")\n";
  os << "agreement:  " << (check.agree ? "yes" : "NO") << "\n";
  if (!check.agree && !check.discrete_only && !check.difference.is_negative()) {
    os << "note:       oracle below engine; the grid is too coarse to resolve the continuous optimum\n";
  }
  os << "engine witness:\n";
  const WorldState state = initial_state(scenario);
  write_trace(os, trace_witness(scenario.space, state, query.player, check.engine.witness), "  ");
  os << "oracle witness:\n";
  write_trace(os, trace_witness(scenario.space, state, query.player, check.oracle.witness), "  ");
  return os.str();
}

}  // namespace xdmev
