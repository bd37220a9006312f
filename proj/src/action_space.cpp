#include "xdmev/action_space.hpp"

#include <algorithm>

#include "xdmev/error.hpp"
#include "xdmev/venues.hpp"

namespace xdmev {

std::string_view to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::ExecutePendingTx: return "ExecutePendingTx";
    case ActionKind::Swap: return "Swap";
    case ActionKind::StylizedArb: return "StylizedArb";
    case ActionKind::Bridge: return "Bridge";
  }
  return "?";
}

std::optional<ActionKind> parse_action_kind(std::string_view text) {
  for (auto kind : {ActionKind::ExecutePendingTx, ActionKind::Swap, ActionKind::StylizedArb, ActionKind::Bridge}) {
    if (to_string(kind) == text) return kind;
  }
  return std::nullopt;
}

ActionSpace::ActionSpace(Universe universe, std::map<DomainId, AssetId> native_assets, std::vector<Action> actions,
                         Capabilities capabilities)
    : universe_(std::move(universe)),
      native_assets_(std::move(native_assets)),
      actions_(std::move(actions)),
      capabilities_(std::move(capabilities)) {
  std::sort(actions_.begin(), actions_.end(), [](const Action& a, const Action& b) { return a.id < b.id; });
}

const AssetId& ActionSpace::native_asset(const DomainId& domain) const {
  auto it = native_assets_.find(domain);
  if (it == native_assets_.end()) throw Error(ErrorCode::UnknownId, "domain " + domain.str());
  return it->second;
}

const Action* ActionSpace::find(const ActionId& id) const {
  auto it = std::lower_bound(actions_.begin(), actions_.end(), id,
                             [](const Action& a, const ActionId& key) { return a.id < key; });
  return it != actions_.end() && it->id == id ? &*it : nullptr;
}

const Action& ActionSpace::action(const ActionId& id) const {
  if (const auto* found = find(id)) return *found;
  throw Error(ErrorCode::UnknownId, "action " + id.str());
}

bool ActionSpace::permits(const PlayerId& player, const Action& action, const DomainSet& domains) const {
  auto player_caps = capabilities_.find(player);
  if (player_caps == capabilities_.end()) return false;
  for (const auto& domain : action.domains) {
    if (domains.count(domain) == 0) return false;
    auto kinds = player_caps->second.find(domain);
    if (kinds == player_caps->second.end() || kinds->second.count(action.kind) == 0) return false;
  }
  return true;
}

std::vector<const Action*> ActionSpace::player_actions(const PlayerId& player, const DomainSet& domains) const {
  if (!universe_.has(player)) throw Error(ErrorCode::UnknownId, "player " + player.str());
  for (const auto& domain : domains) {
    if (!universe_.has(domain)) throw Error(ErrorCode::UnknownId, "domain " + domain.str());
  }
  std::vector<const Action*> out;
  for (const auto& action : actions_) {
    if (permits(player, action, domains)) out.push_back(&action);
  }
  return out;
}

namespace {

Amount input_balance(const WorldState& state, const PlayerId& player, const Action& action) {
  if (const auto* swap = std::get_if<SwapTemplate>(&action.payload)) {
    const auto& pool = state.pool(swap->pool);
    const auto* cp = std::get_if<ConstantProductPool>(&pool);
    if (cp == nullptr) throw Error(ErrorCode::UnknownPool, swap->pool.str() + " is not a constant-product pool");
    return state.balance(cp->domain, player, input_asset(*cp, swap->direction));
  }
  if (const auto* bridge = std::get_if<BridgeSpec>(&action.payload)) {
    return state.balance(bridge->from_domain, player, bridge->from_asset);
  }
  return Amount{};
}

}  // namespace

std::optional<Amount> resolve_amount(const WorldState& state, const PlayerId& player, const Action& action,
                                     const std::optional<Amount>& supplied) {
  return std::visit(
      [&](const auto& spec) -> std::optional<Amount> {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          if (supplied) throw Error(ErrorCode::InvalidAmount, "action " + action.id.str() + " takes no amount");
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, Amount>) {
          if (supplied) throw Error(ErrorCode::InvalidAmount, "action " + action.id.str() + " has a fixed amount");
          return spec;
        } else if constexpr (std::is_same_v<T, AllBalance>) {
          if (supplied) throw Error(ErrorCode::InvalidAmount, "action " + action.id.str() + " spends the full balance");
          return input_balance(state, player, action);
        } else {
          if (!supplied) throw Error(ErrorCode::InvalidAmount, "action " + action.id.str() + " needs an amount");
          if (*supplied < spec.lo || *supplied > spec.hi) {
            throw Error(ErrorCode::InvalidAmount, "amount " + supplied->to_string() + " outside [" +
                                                      spec.lo.to_string() + ", " + spec.hi.to_string() + "] for " +
                                                      action.id.str());
          }
          return *supplied;
        }
      },
      action.amount);
}

WorldState apply_action(const WorldState& state, const PlayerId& player, const Action& action,
                        const std::optional<Amount>& supplied) {
  std::optional<Amount> amount = resolve_amount(state, player, action, supplied);
  return std::visit(
      [&](const auto& payload) -> WorldState {
        using T = std::decay_t<decltype(payload)>;
        if constexpr (std::is_same_v<T, PendingTx>) {
          return apply_pending_tx(state, payload);
        } else if constexpr (std::is_same_v<T, SwapTemplate>) {
          return apply_swap(state, player, payload.pool, payload.direction, *amount);
        } else if constexpr (std::is_same_v<T, StylizedArbSpec>) {
          return apply_stylized_arb(state, player, payload);
        } else {
          return apply_bridge(state, player, payload, *amount);
        }
      },
      action.payload);
}

namespace {

// Amounts worth trying when probing whether a parametric action can apply at all.
std::vector<Amount> probe_amounts(const AmountRange& range, const Amount& balance) {
  std::vector<Amount> out;
  Amount top = std::min(range.hi, balance);
  if (top < range.lo) return out;
  constexpr int kProbes = 16;
  Amount span = top - range.lo;
  for (int k = kProbes; k >= 0; --k) {
    out.push_back(range.lo + span.scaled(Rational(k, kProbes)));
  }
  return out;
}

bool applies(const WorldState& state, const PlayerId& player, const Action& action,
             const std::optional<Amount>& amount) {
  try {
    (void)apply_action(state, player, action, amount);
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

std::vector<Action> available_actions(const ActionSpace& space, const PlayerId& player, const DomainSet& domains,
                                      const WorldState& state) {
  std::vector<Action> out;
  for (const Action* action : space.player_actions(player, domains)) {
    bool usable = false;
    if (const auto* range = action->range()) {
      Amount balance;
      try {
        balance = input_balance(state, player, *action);
      } catch (const Error&) {
        continue;
      }
      for (const auto& amount : probe_amounts(*range, balance)) {
        if (applies(state, player, *action, amount)) {
          usable = true;
          break;
        }
      }
    } else {
      usable = applies(state, player, *action, std::nullopt);
    }
    if (usable) out.push_back(*action);
  }
  return out;
}

SequenceCheck validate_sequence(const ActionSpace& space, const PlayerId& player, const DomainSet& domains,
                                const WorldState& state, const ActionSequence& seq) {
  std::set<ActionId> seen;
  WorldState current = state;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const auto& step = seq[i];
    const Action* action = space.find(step.id);
    if (action == nullptr) return {false, i, "unknown action " + step.id.str()};
    if (!seen.insert(step.id).second) return {false, i, "action " + step.id.str() + " repeated"};
    if (!space.universe().has(player) || !space.permits(player, *action, domains)) {
      return {false, i, "action " + step.id.str() + " is not in the player's space for these domains"};
    }
    try {
      current = apply_action(current, player, *action, step.amount);
    } catch (const Error& e) {
      return {false, i, e.what()};
    }
  }
  return {};
}

WorldState apply_sequence(const ActionSpace& space, const WorldState& state, const PlayerId& player,
                          const ActionSequence& seq) {
  WorldState current = state;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    try {
      current = apply_action(current, player, space.action(seq[i].id), seq[i].amount);
    } catch (const Error& e) {
      throw e.at_step(i);
    }
  }
  return current;
}

}  // namespace xdmev
