// xdmev: command-line front end for the cross-domain MEV engine.
//
// Exit codes: 0 ok, 2 invalid input, 3 search too large, 4 oracle disagreement.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "xdmev/collusion.hpp"
#include "xdmev/error.hpp"
#include "xdmev/report.hpp"
#include "xdmev/scenario.hpp"

namespace {

using namespace xdmev;

constexpr int kOk = 0;
constexpr int kInvalid = 2;
constexpr int kExplosion = 3;
constexpr int kDisagree = 4;

std::vector<DomainId> parse_domains(const std::string& csv) {
  std::vector<DomainId> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (!is_valid_identifier(item)) throw Error(ErrorCode::ValidationError, "bad domain id \"" + item + "\"");
    out.emplace_back(item);
  }
  if (out.empty()) throw Error(ErrorCode::ValidationError, "empty domain list \"" + csv + "\"");
  return out;
}

struct QueryFlags {
  std::string scenario;
  std::string player;
  std::string action_domains;
  std::string value_domains;
  std::string base;
  int max_len = 0;
  std::string format = "text";
  std::uint64_t max_candidates = 0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--scenario", scenario, "scenario file or bundled name")->required();
    cmd->add_option("--player", player, "player id");
    cmd->add_option("--action-domains", action_domains, "comma-separated domains whose actions are usable");
    cmd->add_option("--value-domains", value_domains, "comma-separated domains where value is measured");
    cmd->add_option("--base", base, "base domain and asset as domain:asset");
    cmd->add_option("--max-len", max_len, "maximum sequence length")->check(CLI::PositiveNumber);
    add_common(cmd);
  }

  void add_common(CLI::App* cmd) {
    cmd->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("--max-candidates", max_candidates, "cap on candidate sequences before giving up");
  }

  EngineOptions options() const {
    EngineOptions opts;
    if (max_candidates > 0) opts.max_candidates = max_candidates;
    return opts;
  }

  MevQuery query(const Scenario& s) const {
    MevQuery q = default_query(s);
    if (!player.empty()) q.player = PlayerId(player);
    if (!action_domains.empty()) {
      auto ds = parse_domains(action_domains);
      q.action_domains = DomainSet(ds.begin(), ds.end());
    }
    if (!value_domains.empty()) q.value_domains = parse_domains(value_domains);
    if (!base.empty()) {
      auto colon = base.find(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 == base.size()) {
        throw Error(ErrorCode::ValidationError, "--base expects domain:asset, got \"" + base + "\"");
      }
      q.base_domain = DomainId(base.substr(0, colon));
      q.base_asset = AssetId(base.substr(colon + 1));
    }
    if (max_len > 0) q.max_sequence_length = max_len;
    return q;
  }
};

void emit(const std::string& format, const nlohmann::json& doc, const std::string& text) {
  std::cout << (format == "json" ? render_json(doc) : text);
}

int report_error(const Error& e) {
  if (const auto* failure = dynamic_cast<const ValidationFailure*>(&e)) {
    std::cerr << "xdmev: " << failure->issues().size() << " validation error(s)\n";
    for (const auto& issue : failure->issues()) std::cerr << "  " << issue << "\n";
  } else {
    std::cerr << "xdmev: " << e.what() << "\n";
  }
  return e.code() == ErrorCode::ExplosionGuard ? kExplosion : kInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-domain MEV engine"};
  app.require_subcommand(1);

  QueryFlags mev_flags;
  auto* mev_cmd = app.add_subcommand("mev", "compute mev^{action domains}_{value domains} for a player");
  mev_flags.add_to(mev_cmd);

  QueryFlags col_flags;
  std::string col_domains;
  std::string col_alpha;
  auto* col_cmd = app.add_subcommand("collusion", "compare joint and solo MEV against a collusion cost");
  col_cmd->add_option("--scenario", col_flags.scenario, "scenario file or bundled name")->required();
  col_cmd->add_option("--player", col_flags.player, "player id");
  col_cmd->add_option("--domains", col_domains, "comma-separated coalition domains");
  col_cmd->add_option("--alpha", col_alpha, "collusion cost in the base asset");
  col_cmd->add_option("--max-len", col_flags.max_len, "maximum sequence length")->check(CLI::PositiveNumber);
  col_flags.add_common(col_cmd);

  QueryFlags oracle_flags;
  int grid_points = 0;
  auto* oracle_cmd = app.add_subcommand("oracle-check", "cross-check the engine against brute force");
  oracle_flags.add_to(oracle_cmd);
  oracle_cmd->add_option("--grid-points", grid_points, "grid size per parametric amount")
      ->check(CLI::Range(2, 10'000'000));

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "check a scenario file");
  validate_cmd->add_option("--scenario", validate_path, "scenario file or bundled name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalid;
  }

  try {
    if (*mev_cmd) {
      Scenario s = load_scenario(mev_flags.scenario);
      MevQuery q = mev_flags.query(s);
      MevResult r = mev(s.space, q, initial_state(s), mev_flags.options());
      emit(mev_flags.format, mev_report_json(s, q, r), mev_report_text(s, q, r));
      return kOk;
    }
    if (*col_cmd) {
      Scenario s = load_scenario(col_flags.scenario);
      PlayerId player = col_flags.player.empty() ? s.defaults.player : PlayerId(col_flags.player);
      std::vector<DomainId> domains =
          col_domains.empty() ? s.defaults.action_domains : parse_domains(col_domains);
      Amount alpha = col_alpha.empty() ? s.defaults.alpha : Amount::parse(col_alpha);
      int max_len = col_flags.max_len > 0 ? col_flags.max_len : s.defaults.max_sequence_length;
      CollusionReport r = classify_collusion(s, player, domains, alpha, max_len, col_flags.options());
      emit(col_flags.format, collusion_report_json(s, player, max_len, r),
           collusion_report_text(s, player, max_len, r));
      return kOk;
    }
    if (*oracle_cmd) {
      Scenario s = load_scenario(oracle_flags.scenario);
      MevQuery q = oracle_flags.query(s);
      int grid = grid_points > 0 ? grid_points : s.defaults.grid_points;
      OracleCheck c = run_oracle_check(s, q, grid, oracle_flags.options());
      emit(oracle_flags.format, oracle_report_json(s, q, c), oracle_report_text(s, q, c));
      return c.agree ? kOk : kDisagree;
    }
    if (*validate_cmd) {
      Scenario s = load_scenario(validate_path);
      std::cout << "ok: " << s.name << " (" << s.domains.size() << " domains, " << s.space.actions().size()
                << " actions)\n";
      return kOk;
    }
  } catch (const Error& e) {
    return report_error(e);
  } catch (const std::exception& e) {
    std::cerr << "xdmev: " << e.what() << "\n";
    return kInvalid;
  }
  return kInvalid;
}
