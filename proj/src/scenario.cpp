#include "xdmev/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "xdmev/error.hpp"

#ifndef XDMEV_SCENARIO_DIR
#define XDMEV_SCENARIO_DIR "scenarios"
#endif

namespace xdmev {

using nlohmann::json;

namespace {

// Collects every problem in a document instead of stopping at the first.
class Reader {
 public:
  std::vector<std::string> issues;

  void issue(const std::string& path, const std::string& message) { issues.push_back(path + ": " + message); }

  bool expect_object(const json& node, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!node.is_object()) {
      issue(path, "expected an object");
      return false;
    }
    for (const auto& [key, value] : node.items()) {
      if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) { return key == k; }) == allowed.end()) {
        issue(path + "." + key, "unknown field");
      }
    }
    return true;
  }

  const json* field(const json& obj, const std::string& path, const char* key, bool required = true) {
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) issue(path + "." + key, "missing");
      return nullptr;
    }
    return &*it;
  }

  std::optional<std::string> string(const json& obj, const std::string& path, const char* key,
                                    bool required = true) {
    const json* node = field(obj, path, key, required);
    if (node == nullptr) return std::nullopt;
    if (!node->is_string()) {
      issue(path + "." + key, "expected a string");
      return std::nullopt;
    }
    return node->get<std::string>();
  }

  template <class Id>
  std::optional<Id> id(const json& obj, const std::string& path, const char* key, bool required = true) {
    auto text = string(obj, path, key, required);
    if (!text) return std::nullopt;
    return checked<Id>(*text, path + "." + key);
  }

  template <class Id>
  std::optional<Id> checked(const std::string& text, const std::string& path) {
    if (!is_valid_identifier(text)) {
      issue(path, "invalid identifier \"" + text + "\" (1-64 chars of [A-Za-z0-9_.-])");
      return std::nullopt;
    }
    return Id(text);
  }

  std::optional<Amount> amount(const json& obj, const std::string& path, const char* key, bool required = true) {
    auto text = string(obj, path, key, required);
    if (!text) return std::nullopt;
    try {
      return Amount::parse(*text);
    } catch (const Error& e) {
      issue(path + "." + key, e.detail());
      return std::nullopt;
    }
  }

  std::optional<Rational> rational(const json& obj, const std::string& path, const char* key) {
    auto text = string(obj, path, key);
    if (!text) return std::nullopt;
    try {
      return parse_rational(*text);
    } catch (const Error& e) {
      issue(path + "." + key, e.detail());
      return std::nullopt;
    }
  }

  std::optional<long long> integer(const json& obj, const std::string& path, const char* key,
                                   bool required = true) {
    const json* node = field(obj, path, key, required);
    if (node == nullptr) return std::nullopt;
    if (!node->is_number_integer()) {
      issue(path + "." + key, "expected an integer");
      return std::nullopt;
    }
    return node->get<long long>();
  }

  const json* array(const json& obj, const std::string& path, const char* key, bool required = true) {
    const json* node = field(obj, path, key, required);
    if (node == nullptr) return nullptr;
    if (!node->is_array()) {
      issue(path + "." + key, "expected an array");
      return nullptr;
    }
    return node;
  }
};

std::string at(const std::string& path, std::size_t index) { return path + "[" + std::to_string(index) + "]"; }

std::optional<SwapDirection> parse_direction(const std::string& text) {
  if (text == "x_to_y") return SwapDirection::XToY;
  if (text == "y_to_x") return SwapDirection::YToX;
  return std::nullopt;
}

std::optional<AmountSpec> read_amount_spec(Reader& r, const json& obj, const std::string& path) {
  const json* node = r.field(obj, path, "amount");
  if (node == nullptr) return std::nullopt;
  const std::string p = path + ".amount";
  if (node->is_string()) {
    if (node->get<std::string>() == "all") return AmountSpec{AllBalance{}};
    auto fixed = r.amount(obj, path, "amount");
    if (!fixed) return std::nullopt;
    if (!fixed->is_positive()) {
      r.issue(p, "fixed amount must be positive");
      return std::nullopt;
    }
    return AmountSpec{*fixed};
  }
  if (node->is_object()) {
    if (!r.expect_object(*node, p, {"lo", "hi"})) return std::nullopt;
    auto lo = r.amount(*node, p, "lo");
    auto hi = r.amount(*node, p, "hi");
    if (!lo || !hi) return std::nullopt;
    if (lo->is_negative()) r.issue(p + ".lo", "must be >= 0");
    if (!(*hi > *lo)) r.issue(p + ".hi", "must exceed lo");
    return AmountSpec{AmountRange{*lo, *hi}};
  }
  r.issue(p, "expected \"all\", a decimal string, or {\"lo\", \"hi\"}");
  return std::nullopt;
}

// Position of a byte offset as 1-based line and column.
std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

json parse_document(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    auto [line, column] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + e.what());
  }
}

template <class T, class Key>
void check_unique(Reader& r, const std::vector<T>& items, const std::string& path, Key key,
                  std::set<std::string>& namespace_ids) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    const std::string& id = key(items[i]);
    if (!namespace_ids.insert(id).second) r.issue(at(path, i) + ".id", "duplicate id \"" + id + "\"");
  }
}

void parse_document_into(Reader& r, const json& doc, Scenario& s) {
  if (!r.expect_object(doc, "$",
                       {"schema_version", "name", "description", "domains", "assets", "players", "pools", "bridges",
                        "mempool", "stylized_arbs", "actions", "prices", "defaults"})) {
    return;
  }
  if (auto v = r.integer(doc, "$", "schema_version")) {
    if (*v != kSchemaVersion) {
      r.issue("$.schema_version", "unsupported version " + std::to_string(*v) + " (expected " +
                                      std::to_string(kSchemaVersion) + ")");
    }
    s.schema_version = static_cast<int>(*v);
  }
  s.name = r.string(doc, "$", "name", false).value_or("");
  s.description = r.string(doc, "$", "description", false).value_or("");

  if (const json* arr = r.array(doc, "$", "domains")) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto& node = (*arr)[i];
      const auto p = at("$.domains", i);
      if (!r.expect_object(node, p, {"id", "native_asset"})) continue;
      auto id = r.id<DomainId>(node, p, "id");
      auto native = r.id<AssetId>(node, p, "native_asset");
      if (id && native) s.domains.push_back({*id, *native});
    }
  }

  if (const json* arr = r.array(doc, "$", "assets")) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto& node = (*arr)[i];
      if (!node.is_string()) {
        r.issue(at("$.assets", i), "expected a string");
        continue;
      }
      if (auto id = r.checked<AssetId>(node.get<std::string>(), at("$.assets", i))) {
        s.assets.push_back(*id);
      }
    }
  }

  if (const json* arr = r.array(doc, "$", "players")) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto& node = (*arr)[i];
      const auto p = at("$.players", i);
      if (!r.expect_object(node, p, {"id", "balances", "capabilities"})) continue;
      PlayerDecl player;
      auto id = r.id<PlayerId>(node, p, "id");
      if (!id) continue;
      player.id = *id;
      if (const json* balances = r.array(node, p, "balances", false)) {
        for (std::size_t b = 0; b < balances->size(); ++b) {
          const auto& bn = (*balances)[b];
          const auto bp = at(p + ".balances", b);
          if (!r.expect_object(bn, bp, {"domain", "asset", "amount"})) continue;
          auto domain = r.id<DomainId>(bn, bp, "domain");
          auto asset = r.id<AssetId>(bn, bp, "asset");
          auto amount = r.amount(bn, bp, "amount");
          if (amount && amount->is_negative()) r.issue(bp + ".amount", "negative balance " + amount->to_string());
          if (domain && asset && amount) player.balances.push_back({*domain, *asset, *amount});
        }
      }
      if (const json* caps = r.field(node, p, "capabilities", false)) {
        if (!caps->is_object()) {
          r.issue(p + ".capabilities", "expected an object of domain -> kinds");
        } else {
          for (const auto& [domain, kinds] : caps->items()) {
            const auto cp = p + ".capabilities." + domain;
            auto domain_id = r.checked<DomainId>(domain, cp);
            if (!domain_id) continue;
            auto& set = player.capabilities[*domain_id];
            if (!kinds.is_array()) {
              r.issue(cp, "expected an array of action kinds");
              continue;
            }
            for (const auto& kind : kinds) {
              auto parsed = kind.is_string() ? parse_action_kind(kind.get<std::string>()) : std::nullopt;
              if (!parsed) {
                r.issue(cp, "unknown action kind " + kind.dump());
                continue;
              }
              set.insert(*parsed);
            }
          }
        }
      } else {
        player.capabilities[DomainId{}];  // marker: filled with every kind once domains are known
      }
      s.players.push_back(std::move(player));
    }
  }

  if (const json* arr = r.array(doc, "$", "pools", false)) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto& node = (*arr)[i];
      const auto p = at("$.pools", i);
      auto type = node.is_object() ? r.string(node, p, "type") : std::nullopt;
      if (!node.is_object()) {
        r.issue(p, "expected an object");
        continue;
      }
      if (!type) continue;
      if (*type == "constant_product") {
        r.expect_object(node, p,
                        {"id", "type", "domain", "asset_x", "asset_y", "reserve_x", "reserve_y", "fee_bps"});
        ConstantProductPool pool;
        auto id = r.id<PoolId>(node, p, "id");
        auto domain = r.id<DomainId>(node, p, "domain");
        auto ax = r.id<AssetId>(node, p, "asset_x");
        auto ay = r.id<AssetId>(node, p, "asset_y");
        auto rx = r.amount(node, p, "reserve_x");
        auto ry = r.amount(node, p, "reserve_y");
        auto fee = r.integer(node, p, "fee_bps", false).value_or(0);
        if (rx && !rx->is_positive()) r.issue(p + ".reserve_x", "must be positive");
        if (ry && !ry->is_positive()) r.issue(p + ".reserve_y", "must be positive");
        if (fee < 0 || fee >= 10000) r.issue(p + ".fee_bps", "must lie in [0, 10000)");
        if (ax && ay && *ax == *ay) r.issue(p + ".asset_y", "must differ from asset_x");
        if (!(id && domain && ax && ay && rx && ry)) continue;
        pool = {*id, *domain, *ax, *ay, *rx, *ry, static_cast<int>(fee)};
        s.pools.emplace_back(pool);
      } else if (*type == "stylized_midpoint") {
        r.expect_object(node, p, {"id", "type", "domain", "asset_x", "asset_y", "price"});
        auto id = r.id<PoolId>(node, p, "id");
        auto domain = r.id<DomainId>(node, p, "domain");
        auto ax = r.id<AssetId>(node, p, "asset_x");
        auto ay = r.id<AssetId>(node, p, "asset_y");
        auto price = r.amount(node, p, "price");
        if (price && !price->is_positive()) r.issue(p + ".price", "must be positive");
        if (ax && ay && *ax == *ay) r.issue(p + ".asset_y", "must differ from asset_x");
        if (!(id && domain && ax && ay && price)) continue;
        s.pools.emplace_back(StylizedMidpointPool{*id, *domain, *ax, *ay, *price});
      } else {
        r.issue(p + ".type", "unknown pool type \"" + *type + "\"");
      }
    }
  }

  if (const json* arr = r.array(doc, "$", "bridges", false)) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto& node = (*arr)[i];
      const auto p = at("$.bridges", i);
      if (!r.expect_object(node, p, {"id", "from_domain", "to_domain", "from_asset", "to_asset", "rate", "flat_fee"})) {
        continue;
      }
      auto id = r.id<BridgeId>(node, p, "id");
      auto fd = r.id<DomainId>(node, p, "from_domain");
      auto td = r.id<DomainId>(node, p, "to_domain");
      auto fa = r.id<AssetId>(node, p, "from_asset");
      auto ta = r.id<AssetId>(node, p, "to_asset");
      auto rate = r.rational(node, p, "rate");
      auto fee = r.amount(node, p, "flat_fee", false).value_or(Amount{});
      if (rate && *rate <= 0) r.issue(p + ".rate", "must be positive");
      if (fee.is_negative()) r.issue(p + ".flat_fee", "must be >= 0");
      if (fd && td && *fd == *td) r.issue(p + ".to_domain", "must differ from from_domain");
      if (!(id && fd && td && fa && ta && rate)) continue;
      s.bridges.push_back({*id, *fd, *td, *fa, *ta, *rate, fee});
    }
  }

  if (const json* arr = r.array(doc, "$", "mempool", false)) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto& node = (*arr)[i];
      const auto p = at("$.mempool", i);
      if (!r.expect_object(node, p, {"id", "domain", "effect"})) continue;
      auto id = r.id<ActionId>(node, p, "id");
      auto domain = r.id<DomainId>(node, p, "domain");
      const json* effect = r.field(node, p, "effect");
      if (effect == nullptr) continue;
      const auto ep = p + ".effect";
      if (!effect->is_object()) {
        r.issue(ep, "expected an object");
        continue;
      }
      auto type = r.string(*effect, ep, "type");
      if (!type) continue;
      std::optional<PendingEffect> parsed;
      if (*type == "price_push") {
        r.expect_object(*effect, ep, {"type", "pool", "price"});
        auto pool = r.id<PoolId>(*effect, ep, "pool");
        auto price = r.amount(*effect, ep, "price");
        if (price && !price->is_positive()) r.issue(ep + ".price", "must be positive");
        if (pool && price) parsed = PricePushEffect{*pool, *price};
      } else if (*type == "swap") {
        r.expect_object(*effect, ep, {"type", "account", "pool", "direction", "amount_in"});
        auto account = r.id<PlayerId>(*effect, ep, "account");
        auto pool = r.id<PoolId>(*effect, ep, "pool");
        auto dir_text = r.string(*effect, ep, "direction");
        auto amount = r.amount(*effect, ep, "amount_in");
        auto dir = dir_text ? parse_direction(*dir_text) : std::nullopt;
        if (dir_text && !dir) r.issue(ep + ".direction", "expected x_to_y or y_to_x");
        if (amount && !amount->is_positive()) r.issue(ep + ".amount_in", "must be positive");
        if (account && pool && dir && amount) parsed = SwapEffect{*account, *pool, *dir, *amount};
      } else if (*type == "transfer") {
        r.expect_object(*effect, ep, {"type", "from", "to", "asset", "amount"});
        auto from = r.id<PlayerId>(*effect, ep, "from");
        auto to = r.id<PlayerId>(*effect, ep, "to");
        auto asset = r.id<AssetId>(*effect, ep, "asset");
        auto amount = r.amount(*effect, ep, "amount");
        if (amount && !amount->is_positive()) r.issue(ep + ".amount", "must be positive");
        if (from && to && asset && amount) parsed = TransferEffect{*from, *to, *asset, *amount};
      } else {
        r.issue(ep + ".type", "unknown effect type \"" + *type + "\"");
      }
      if (id && domain && parsed) s.mempool.push_back({*id, *domain, *parsed});
    }
  }

  if (const json* arr = r.array(doc, "$", "stylized_arbs", false)) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto& node = (*arr)[i];
      const auto p = at("$.stylized_arbs", i);
      if (!r.expect_object(node, p,
                           {"id", "pool_a", "pool_b", "declared_profit", "profit_asset", "profit_domain", "legs"})) {
        continue;
      }
      auto id = r.id<ActionId>(node, p, "id");
      auto a = r.id<PoolId>(node, p, "pool_a");
      auto b = r.id<PoolId>(node, p, "pool_b");
      auto profit = r.amount(node, p, "declared_profit");
      auto asset = r.id<AssetId>(node, p, "profit_asset");
      auto domain = r.id<DomainId>(node, p, "profit_domain");
      if (profit && profit->is_negative()) r.issue(p + ".declared_profit", "must be >= 0");
      std::vector<std::string> legs;
      if (const json* legs_node = r.array(node, p, "legs", false)) {
        for (std::size_t l = 0; l < legs_node->size(); ++l) {
          const auto& leg = (*legs_node)[l];
          if (!leg.is_string() || !is_valid_identifier(leg.get<std::string>())) {
            r.issue(at(p + ".legs", l), "expected an identifier string");
            continue;
          }
          legs.push_back(leg.get<std::string>());
        }
      }
      if (a && b && *a == *b) r.issue(p + ".pool_b", "must differ from pool_a");
      if (id && a && b && profit && asset && domain) {
        s.stylized_arbs.push_back({*id, *a, *b, *profit, *asset, *domain, std::move(legs)});
      }
    }
  }

  if (const json* arr = r.array(doc, "$", "actions", false)) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto& node = (*arr)[i];
      const auto p = at("$.actions", i);
      if (!node.is_object()) {
        r.issue(p, "expected an object");
        continue;
      }
      auto type = r.string(node, p, "type");
      auto id = r.id<ActionId>(node, p, "id");
      if (!type) continue;
      ActionTemplate t;
      if (*type == "swap") {
        r.expect_object(node, p, {"id", "type", "pool", "direction", "amount"});
        t.kind = ActionKind::Swap;
        auto pool = r.id<PoolId>(node, p, "pool");
        auto dir_text = r.string(node, p, "direction");
        auto dir = dir_text ? parse_direction(*dir_text) : std::nullopt;
        if (dir_text && !dir) r.issue(p + ".direction", "expected x_to_y or y_to_x");
        auto amount = read_amount_spec(r, node, p);
        if (!(id && pool && dir && amount)) continue;
        t.id = *id;
        t.pool = *pool;
        t.direction = *dir;
        t.amount = *amount;
      } else if (*type == "bridge") {
        r.expect_object(node, p, {"id", "type", "bridge", "amount"});
        t.kind = ActionKind::Bridge;
        auto bridge = r.id<BridgeId>(node, p, "bridge");
        auto amount = read_amount_spec(r, node, p);
        if (!(id && bridge && amount)) continue;
        t.id = *id;
        t.bridge = *bridge;
        t.amount = *amount;
      } else {
        r.issue(p + ".type", "unknown action type \"" + *type + "\" (expected swap or bridge)");
        continue;
      }
      s.actions.push_back(std::move(t));
    }
  }

  if (const json* arr = r.array(doc, "$", "prices", false)) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto& node = (*arr)[i];
      const auto p = at("$.prices", i);
      if (!r.expect_object(node, p, {"from", "to", "rate"})) continue;
      auto from = r.id<AssetId>(node, p, "from");
      auto to = r.id<AssetId>(node, p, "to");
      auto rate = r.rational(node, p, "rate");
      if (!(from && to && rate)) continue;
      try {
        s.prices.declare(*from, *to, *rate);
      } catch (const Error& e) {
        r.issue(p, e.detail());
      }
    }
  }

  if (const json* defaults = r.field(doc, "$", "defaults")) {
    const std::string p = "$.defaults";
    if (r.expect_object(*defaults, p,
                        {"player", "base_domain", "base_asset", "action_domains", "value_domains",
                         "max_sequence_length", "alpha", "grid_points"})) {
      auto& d = s.defaults;
      if (auto v = r.id<PlayerId>(*defaults, p, "player")) d.player = *v;
      if (auto v = r.id<DomainId>(*defaults, p, "base_domain")) d.base_domain = *v;
      if (auto v = r.id<AssetId>(*defaults, p, "base_asset")) d.base_asset = *v;
      for (const char* key : {"action_domains", "value_domains"}) {
        auto& target = std::string(key) == "action_domains" ? d.action_domains : d.value_domains;
        if (const json* arr = r.array(*defaults, p, key)) {
          for (std::size_t i = 0; i < arr->size(); ++i) {
            const auto& node = (*arr)[i];
            if (!node.is_string()) {
              r.issue(at(p + "." + key, i), "expected a string");
              continue;
            }
            if (auto id = r.checked<DomainId>(node.get<std::string>(), at(p + "." + key, i))) {
              target.push_back(*id);
            }
          }
          if (target.empty()) r.issue(p + "." + key, "must not be empty");
        }
      }
      if (auto v = r.integer(*defaults, p, "max_sequence_length", false)) {
        if (*v < 1 || *v > 64) r.issue(p + ".max_sequence_length", "must lie in [1, 64]");
        d.max_sequence_length = static_cast<int>(*v);
      }
      if (auto v = r.amount(*defaults, p, "alpha", false)) {
        if (v->is_negative()) r.issue(p + ".alpha", "must be >= 0");
        d.alpha = *v;
      }
      if (auto v = r.integer(*defaults, p, "grid_points", false)) {
        if (*v < 2 || *v > 10'000'000) r.issue(p + ".grid_points", "must lie in [2, 10000000]");
        d.grid_points = static_cast<int>(*v);
      }
    }
  }
}

// Cross-reference and invariant checks over a parsed scenario.
void check_references(Reader& r, Scenario& s) {
  std::set<std::string> domain_ids;
  std::set<std::string> asset_ids;
  std::set<std::string> player_ids;
  std::set<std::string> pool_ids;
  std::set<std::string> bridge_ids;
  std::set<std::string> action_ids;
  check_unique(r, s.domains, "$.domains", [](const DomainDecl& d) -> const std::string& { return d.id.str(); },
               domain_ids);
  for (std::size_t i = 0; i < s.assets.size(); ++i) {
    if (!asset_ids.insert(s.assets[i].str()).second) {
      r.issue(at("$.assets", i), "duplicate asset \"" + s.assets[i].str() + "\"");
    }
  }
  check_unique(r, s.players, "$.players", [](const PlayerDecl& p) -> const std::string& { return p.id.str(); },
               player_ids);
  check_unique(r, s.pools, "$.pools", [](const PoolState& p) -> const std::string& { return pool_id(p).str(); },
               pool_ids);
  check_unique(r, s.bridges, "$.bridges", [](const BridgeSpec& b) -> const std::string& { return b.id.str(); },
               bridge_ids);
  check_unique(r, s.mempool, "$.mempool", [](const PendingTx& t) -> const std::string& { return t.id.str(); },
               action_ids);
  check_unique(r, s.stylized_arbs, "$.stylized_arbs",
               [](const StylizedArbSpec& a) -> const std::string& { return a.id.str(); }, action_ids);
  check_unique(r, s.actions, "$.actions", [](const ActionTemplate& a) -> const std::string& { return a.id.str(); },
               action_ids);

  auto need_domain = [&](const DomainId& id, const std::string& path) {
    if (!domain_ids.count(id.str())) r.issue(path, "unknown domain \"" + id.str() + "\"");
  };
  auto need_asset = [&](const AssetId& id, const std::string& path) {
    if (!asset_ids.count(id.str())) r.issue(path, "unknown asset \"" + id.str() + "\"");
  };
  auto need_player = [&](const PlayerId& id, const std::string& path) {
    if (!player_ids.count(id.str())) r.issue(path, "unknown player \"" + id.str() + "\"");
  };
  std::map<PoolId, const PoolState*> pools;
  for (const auto& pool : s.pools) pools[pool_id(pool)] = &pool;
  auto find_pool = [&](const PoolId& id, const std::string& path) -> const PoolState* {
    auto it = pools.find(id);
    if (it == pools.end()) {
      r.issue(path, "unknown pool \"" + id.str() + "\"");
      return nullptr;
    }
    return it->second;
  };

  for (std::size_t i = 0; i < s.domains.size(); ++i) need_asset(s.domains[i].native_asset, at("$.domains", i) + ".native_asset");

  for (std::size_t i = 0; i < s.players.size(); ++i) {
    auto& player = s.players[i];
    const auto p = at("$.players", i);
    std::set<std::pair<DomainId, AssetId>> seen;
    for (std::size_t b = 0; b < player.balances.size(); ++b) {
      const auto& bal = player.balances[b];
      need_domain(bal.domain, at(p + ".balances", b) + ".domain");
      need_asset(bal.asset, at(p + ".balances", b) + ".asset");
      if (!seen.insert({bal.domain, bal.asset}).second) {
        r.issue(at(p + ".balances", b), "duplicate balance entry for " + bal.domain.str() + "/" + bal.asset.str());
      }
    }
    if (player.capabilities.count(DomainId{}) != 0) {
      player.capabilities.clear();
      for (const auto& d : s.domains) {
        player.capabilities[d.id] = {ActionKind::ExecutePendingTx, ActionKind::Swap, ActionKind::StylizedArb,
                                     ActionKind::Bridge};
      }
    } else {
      for (const auto& [domain, kinds] : player.capabilities) need_domain(domain, p + ".capabilities." + domain.str());
    }
  }

  for (std::size_t i = 0; i < s.pools.size(); ++i) {
    const auto p = at("$.pools", i);
    std::visit(
        [&](const auto& pool) {
          need_domain(pool.domain, p + ".domain");
          need_asset(pool.asset_x, p + ".asset_x");
          need_asset(pool.asset_y, p + ".asset_y");
        },
        s.pools[i]);
  }

  std::map<BridgeId, const BridgeSpec*> bridges;
  for (std::size_t i = 0; i < s.bridges.size(); ++i) {
    const auto& b = s.bridges[i];
    const auto p = at("$.bridges", i);
    need_domain(b.from_domain, p + ".from_domain");
    need_domain(b.to_domain, p + ".to_domain");
    need_asset(b.from_asset, p + ".from_asset");
    need_asset(b.to_asset, p + ".to_asset");
    bridges[b.id] = &b;
  }

  for (std::size_t i = 0; i < s.mempool.size(); ++i) {
    const auto& tx = s.mempool[i];
    const auto p = at("$.mempool", i);
    need_domain(tx.domain, p + ".domain");
    const auto ep = p + ".effect";
    std::visit(
        [&](const auto& effect) {
          using T = std::decay_t<decltype(effect)>;
          if constexpr (std::is_same_v<T, SwapEffect>) {
            need_player(effect.account, ep + ".account");
            if (const auto* pool = find_pool(effect.pool, ep + ".pool")) {
              if (!std::holds_alternative<ConstantProductPool>(*pool)) {
                r.issue(ep + ".pool", "swap effect needs a constant_product pool");
              }
              if (pool_domain(*pool) != tx.domain) r.issue(ep + ".pool", "pool lies outside the transaction's domain");
            }
          } else if constexpr (std::is_same_v<T, PricePushEffect>) {
            if (const auto* pool = find_pool(effect.pool, ep + ".pool")) {
              if (!std::holds_alternative<StylizedMidpointPool>(*pool)) {
                r.issue(ep + ".pool", "price_push needs a stylized_midpoint pool");
              }
              if (pool_domain(*pool) != tx.domain) r.issue(ep + ".pool", "pool lies outside the transaction's domain");
            }
          } else {
            need_player(effect.from, ep + ".from");
            need_player(effect.to, ep + ".to");
            need_asset(effect.asset, ep + ".asset");
          }
        },
        tx.effect);
  }

  for (std::size_t i = 0; i < s.stylized_arbs.size(); ++i) {
    const auto& arb = s.stylized_arbs[i];
    const auto p = at("$.stylized_arbs", i);
    need_asset(arb.profit_asset, p + ".profit_asset");
    need_domain(arb.profit_domain, p + ".profit_domain");
    const auto* a = find_pool(arb.pool_a, p + ".pool_a");
    const auto* b = find_pool(arb.pool_b, p + ".pool_b");
    if (a == nullptr || b == nullptr) continue;
    const auto* sa = std::get_if<StylizedMidpointPool>(a);
    const auto* sb = std::get_if<StylizedMidpointPool>(b);
    if (sa == nullptr) r.issue(p + ".pool_a", "must be a stylized_midpoint pool");
    if (sb == nullptr) r.issue(p + ".pool_b", "must be a stylized_midpoint pool");
    if (sa == nullptr || sb == nullptr) continue;
    if (sa->asset_x != sb->asset_x || sa->asset_y != sb->asset_y) {
      r.issue(p + ".pool_b", "pools do not share the same asset pair");
    }
    if (arb.profit_domain != sa->domain && arb.profit_domain != sb->domain) {
      r.issue(p + ".profit_domain", "must be the domain of pool_a or pool_b");
    }
  }

  for (std::size_t i = 0; i < s.actions.size(); ++i) {
    const auto& t = s.actions[i];
    const auto p = at("$.actions", i);
    if (t.kind == ActionKind::Swap) {
      if (const auto* pool = find_pool(t.pool, p + ".pool")) {
        if (!std::holds_alternative<ConstantProductPool>(*pool)) r.issue(p + ".pool", "swap needs a constant_product pool");
      }
    } else if (bridges.count(t.bridge) == 0) {
      r.issue(p + ".bridge", "unknown bridge \"" + t.bridge.str() + "\"");
    }
  }

  for (const auto& entry : s.prices.entries()) {
    need_asset(entry.from, "$.prices[" + entry.from.str() + "->" + entry.to.str() + "].from");
    need_asset(entry.to, "$.prices[" + entry.from.str() + "->" + entry.to.str() + "].to");
  }

  const auto& d = s.defaults;
  need_player(d.player, "$.defaults.player");
  need_domain(d.base_domain, "$.defaults.base_domain");
  need_asset(d.base_asset, "$.defaults.base_asset");
  std::set<DomainId> value_seen;
  for (const auto& v : d.value_domains) {
    need_domain(v, "$.defaults.value_domains");
    if (!value_seen.insert(v).second) r.issue("$.defaults.value_domains", "domain \"" + v.str() + "\" listed twice");
  }
  for (const auto& v : d.action_domains) need_domain(v, "$.defaults.action_domains");

  // Every domain's native asset and every balance asset must be priceable into the base asset.
  if (asset_ids.count(d.base_asset.str())) {
    std::set<AssetId> to_price;
    for (const auto& dom : s.domains) to_price.insert(dom.native_asset);
    for (const auto& player : s.players) {
      for (const auto& bal : player.balances) to_price.insert(bal.asset);
    }
    for (const auto& asset : to_price) {
      if (asset_ids.count(asset.str()) && !s.prices.has_rate(asset, d.base_asset)) {
        r.issue("$.prices", "no rate from " + asset.str() + " to base asset " + d.base_asset.str());
      }
    }
  }
}

ActionSpace build_space(const Scenario& s) {
  Universe universe;
  std::map<DomainId, AssetId> natives;
  for (const auto& d : s.domains) {
    universe.domains.insert(d.id);
    natives[d.id] = d.native_asset;
  }
  universe.assets.insert(s.assets.begin(), s.assets.end());
  Capabilities caps;
  for (const auto& p : s.players) {
    universe.players.insert(p.id);
    caps[p.id] = p.capabilities;
  }

  std::map<PoolId, DomainId> pool_domains;
  for (const auto& pool : s.pools) pool_domains[pool_id(pool)] = pool_domain(pool);
  auto sorted_unique = [](std::vector<DomainId> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };

  std::vector<Action> actions;
  for (const auto& tx : s.mempool) {
    actions.push_back({tx.id, ActionKind::ExecutePendingTx, {tx.domain}, tx, std::monostate{}});
  }
  for (const auto& arb : s.stylized_arbs) {
    actions.push_back({arb.id, ActionKind::StylizedArb,
                       sorted_unique({pool_domains.at(arb.pool_a), pool_domains.at(arb.pool_b)}), arb,
                       std::monostate{}});
  }
  for (const auto& t : s.actions) {
    if (t.kind == ActionKind::Swap) {
      actions.push_back({t.id, ActionKind::Swap, {pool_domains.at(t.pool)}, SwapTemplate{t.pool, t.direction}, t.amount});
    } else {
      auto it = std::find_if(s.bridges.begin(), s.bridges.end(), [&](const BridgeSpec& b) { return b.id == t.bridge; });
      actions.push_back({t.id, ActionKind::Bridge, sorted_unique({it->from_domain, it->to_domain}), *it, t.amount});
    }
  }
  return ActionSpace(std::move(universe), std::move(natives), std::move(actions), std::move(caps));
}

// ---------------------------------------------------------------------------
// Canonical serialization.

json amount_spec_json(const AmountSpec& spec) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, Amount>) {
          return v.to_string();
        } else if constexpr (std::is_same_v<T, AllBalance>) {
          return "all";
        } else {
          return json{{"lo", v.lo.to_string()}, {"hi", v.hi.to_string()}};
        }
      },
      spec);
}

template <class T, class Key>
std::vector<T> sorted_by(std::vector<T> items, Key key) {
  std::stable_sort(items.begin(), items.end(), [&](const T& a, const T& b) { return key(a) < key(b); });
  return items;
}

}  // namespace

Scenario load_scenario_text(std::string_view text) {
  json doc = parse_document(text);
  Reader reader;
  Scenario scenario;
  parse_document_into(reader, doc, scenario);
  check_references(reader, scenario);
  if (!reader.issues.empty()) throw ValidationFailure(std::move(reader.issues));
  scenario.space = build_space(scenario);
  return scenario;
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationFailure({path.string() + ": cannot open file"});
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_scenario_text(buffer.str());
}

std::filesystem::path bundled_scenario_dir() {
  if (const char* env = std::getenv("XDMEV_SCENARIO_DIR")) return env;
  return XDMEV_SCENARIO_DIR;
}

std::vector<std::string> bundled_scenario_names() {
  std::vector<std::string> names;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(bundled_scenario_dir(), ec)) {
    if (entry.path().extension() == ".json") names.push_back(entry.path().stem().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

Scenario load_scenario(std::string_view path_or_name) {
  std::filesystem::path path(path_or_name);
  std::error_code ec;
  if (std::filesystem::is_regular_file(path, ec)) return load_scenario_file(path);
  std::string name(path_or_name);
  if (name.size() > 5 && name.ends_with(".json")) name.resize(name.size() - 5);
  auto bundled = bundled_scenario_dir() / (name + ".json");
  if (is_valid_identifier(name) && std::filesystem::is_regular_file(bundled, ec)) return load_scenario_file(bundled);
  throw ValidationFailure({std::string(path_or_name) + ": no such file or bundled scenario"});
}

std::string serialize_scenario(const Scenario& s) {
  json doc = json::object();
  doc["schema_version"] = s.schema_version;
  doc["name"] = s.name;
  doc["description"] = s.description;

  json domains = json::array();
  for (const auto& d : sorted_by(s.domains, [](const DomainDecl& d) { return d.id; })) {
    domains.push_back({{"id", d.id.str()}, {"native_asset", d.native_asset.str()}});
  }
  doc["domains"] = domains;

  json assets = json::array();
  for (const auto& a : sorted_by(s.assets, [](const AssetId& a) { return a; })) assets.push_back(a.str());
  doc["assets"] = assets;

  json players = json::array();
  for (const auto& p : sorted_by(s.players, [](const PlayerDecl& p) { return p.id; })) {
    json balances = json::array();
    for (const auto& b : sorted_by(p.balances, [](const BalanceDecl& b) { return std::pair(b.domain, b.asset); })) {
      balances.push_back({{"domain", b.domain.str()}, {"asset", b.asset.str()}, {"amount", b.amount.to_string()}});
    }
    json caps = json::object();
    for (const auto& [domain, kinds] : p.capabilities) {
      json list = json::array();
      for (auto kind : kinds) list.push_back(std::string(to_string(kind)));
      caps[domain.str()] = list;
    }
    players.push_back({{"id", p.id.str()}, {"balances", balances}, {"capabilities", caps}});
  }
  doc["players"] = players;

  json pools = json::array();
  for (const auto& pool : sorted_by(s.pools, [](const PoolState& p) { return pool_id(p); })) {
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          json node{{"id", p.id.str()},
                    {"domain", p.domain.str()},
                    {"asset_x", p.asset_x.str()},
                    {"asset_y", p.asset_y.str()}};
          if constexpr (std::is_same_v<T, ConstantProductPool>) {
            node["type"] = "constant_product";
            node["reserve_x"] = p.reserve_x.to_string();
            node["reserve_y"] = p.reserve_y.to_string();
            node["fee_bps"] = p.fee_bps;
          } else {
            node["type"] = "stylized_midpoint";
            node["price"] = p.price.to_string();
          }
          pools.push_back(node);
        },
        pool);
  }
  doc["pools"] = pools;

  json bridges = json::array();
  for (const auto& b : sorted_by(s.bridges, [](const BridgeSpec& b) { return b.id; })) {
    bridges.push_back({{"id", b.id.str()},
                       {"from_domain", b.from_domain.str()},
                       {"to_domain", b.to_domain.str()},
                       {"from_asset", b.from_asset.str()},
                       {"to_asset", b.to_asset.str()},
                       {"rate", format_rational(b.rate)},
                       {"flat_fee", b.flat_fee.to_string()}});
  }
  doc["bridges"] = bridges;

  json mempool = json::array();
  for (const auto& tx : sorted_by(s.mempool, [](const PendingTx& t) { return t.id; })) {
    json effect = std::visit(
        [](const auto& e) -> json {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, SwapEffect>) {
            return {{"type", "swap"},
                    {"account", e.account.str()},
                    {"pool", e.pool.str()},
                    {"direction", std::string(to_string(e.direction))},
                    {"amount_in", e.amount_in.to_string()}};
          } else if constexpr (std::is_same_v<T, PricePushEffect>) {
            return {{"type", "price_push"}, {"pool", e.pool.str()}, {"price", e.price.to_string()}};
          } else {
            return {{"type", "transfer"},
                    {"from", e.from.str()},
                    {"to", e.to.str()},
                    {"asset", e.asset.str()},
                    {"amount", e.amount.to_string()}};
          }
        },
        tx.effect);
    mempool.push_back({{"id", tx.id.str()}, {"domain", tx.domain.str()}, {"effect", effect}});
  }
  doc["mempool"] = mempool;

  json arbs = json::array();
  for (const auto& a : sorted_by(s.stylized_arbs, [](const StylizedArbSpec& a) { return a.id; })) {
    arbs.push_back({{"id", a.id.str()},
                    {"pool_a", a.pool_a.str()},
                    {"pool_b", a.pool_b.str()},
                    {"declared_profit", a.declared_profit.to_string()},
                    {"profit_asset", a.profit_asset.str()},
                    {"profit_domain", a.profit_domain.str()},
                    {"legs", a.legs}});
  }
  doc["stylized_arbs"] = arbs;

  json actions = json::array();
  for (const auto& t : sorted_by(s.actions, [](const ActionTemplate& t) { return t.id; })) {
    json node{{"id", t.id.str()}, {"amount", amount_spec_json(t.amount)}};
    if (t.kind == ActionKind::Swap) {
      node["type"] = "swap";
      node["pool"] = t.pool.str();
      node["direction"] = std::string(to_string(t.direction));
    } else {
      node["type"] = "bridge";
      node["bridge"] = t.bridge.str();
    }
    actions.push_back(node);
  }
  doc["actions"] = actions;

  json prices = json::array();
  for (const auto& e : s.prices.entries()) {
    prices.push_back({{"from", e.from.str()}, {"to", e.to.str()}, {"rate", format_rational(e.rate)}});
  }
  doc["prices"] = prices;

  const auto& d = s.defaults;
  json action_domains = json::array();
  for (const auto& a : d.action_domains) action_domains.push_back(a.str());
  json value_domains = json::array();
  for (const auto& v : d.value_domains) value_domains.push_back(v.str());
  doc["defaults"] = {{"player", d.player.str()},
                     {"base_domain", d.base_domain.str()},
                     {"base_asset", d.base_asset.str()},
                     {"action_domains", action_domains},
                     {"value_domains", value_domains},
                     {"max_sequence_length", d.max_sequence_length},
                     {"alpha", d.alpha.to_string()},
                     {"grid_points", d.grid_points}};
  return doc.dump(2) + "\n";
}

WorldState initial_state(const Scenario& scenario) {
  WorldState state;
  for (const auto& player : scenario.players) {
    for (const auto& b : player.balances) state.set_balance(b.domain, player.id, b.asset, b.amount);
  }
  for (const auto& pool : scenario.pools) state.put_pool(pool);
  return state;
}

MevQuery default_query(const Scenario& scenario) {
  const auto& d = scenario.defaults;
  MevQuery q;
  q.player = d.player;
  q.action_domains = DomainSet(d.action_domains.begin(), d.action_domains.end());
  q.value_domains = d.value_domains;
  q.base_domain = d.base_domain;
  q.base_asset = d.base_asset;
  q.prices = scenario.prices;
  q.max_sequence_length = d.max_sequence_length;
  return q;
}

}  // namespace xdmev
