#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "xdmev/pools.hpp"
#include "xdmev/world_state.hpp"

namespace xdmev {

enum class ActionKind { ExecutePendingTx, Swap, StylizedArb, Bridge };

std::string_view to_string(ActionKind kind);
std::optional<ActionKind> parse_action_kind(std::string_view text);

struct AmountRange {
  Amount lo;
  Amount hi;
};

// The whole balance of the input asset at the moment the action runs.
struct AllBalance {};

// monostate: the action takes no amount (pending tx, stylized arb).
using AmountSpec = std::variant<std::monostate, Amount, AllBalance, AmountRange>;

struct SwapTemplate {
  PoolId pool;
  SwapDirection direction = SwapDirection::XToY;
};

using ActionPayload = std::variant<PendingTx, SwapTemplate, StylizedArbSpec, BridgeSpec>;

struct Action {
  ActionId id;
  ActionKind kind = ActionKind::ExecutePendingTx;
  // Domains whose sequencers must all be in play for the action to be usable.
  std::vector<DomainId> domains;
  ActionPayload payload;
  AmountSpec amount;

  bool parametric() const { return std::holds_alternative<AmountRange>(amount); }
  const AmountRange* range() const { return std::get_if<AmountRange>(&amount); }
};

struct SequenceStep {
  ActionId id;
  // Present exactly for parametric actions.
  std::optional<Amount> amount;

  friend bool operator==(const SequenceStep&, const SequenceStep&) = default;
};

using ActionSequence = std::vector<SequenceStep>;
using DomainSet = std::set<DomainId>;
using Capabilities = std::map<PlayerId, std::map<DomainId, std::set<ActionKind>>>;

// Every action template of a scenario plus who may use what where.
class ActionSpace {
 public:
  ActionSpace() = default;
  ActionSpace(Universe universe, std::map<DomainId, AssetId> native_assets, std::vector<Action> actions,
              Capabilities capabilities);

  const Universe& universe() const noexcept { return universe_; }
  const std::map<DomainId, AssetId>& native_assets() const noexcept { return native_assets_; }
  const AssetId& native_asset(const DomainId& domain) const;

  // Sorted by id.
  const std::vector<Action>& actions() const noexcept { return actions_; }
  const Action* find(const ActionId& id) const;
  const Action& action(const ActionId& id) const;

  const Capabilities& capabilities() const noexcept { return capabilities_; }

  // The action's domains all lie in `domains` and the player may use its kind in each of them.
  bool permits(const PlayerId& player, const Action& action, const DomainSet& domains) const;

  // The player's space for the union of `domains`, ordered by id. Throws UnknownId.
  std::vector<const Action*> player_actions(const PlayerId& player, const DomainSet& domains) const;

 private:
  Universe universe_;
  std::map<DomainId, AssetId> native_assets_;
  std::vector<Action> actions_;
  Capabilities capabilities_;
};

// The amount an action moves when applied now: the fixed amount, the current
// balance for AllBalance, or the supplied in-range amount for parametric actions.
// Returns nullopt for actions without an amount.
std::optional<Amount> resolve_amount(const WorldState& state, const PlayerId& player, const Action& action,
                                     const std::optional<Amount>& supplied);

WorldState apply_action(const WorldState& state, const PlayerId& player, const Action& action,
                        const std::optional<Amount>& supplied);

// Templates usable from `state`: pending transactions not yet consumed, pools
// present, stylized pairs with a price gap, and for amount-carrying actions some
// amount that applies cleanly. Ordered by id.
std::vector<Action> available_actions(const ActionSpace& space, const PlayerId& player, const DomainSet& domains,
                                      const WorldState& state);

struct SequenceCheck {
  bool ok = true;
  std::size_t index = 0;
  std::string cause;

  explicit operator bool() const noexcept { return ok; }
};

SequenceCheck validate_sequence(const ActionSpace& space, const PlayerId& player, const DomainSet& domains,
                                const WorldState& state, const ActionSequence& seq);

// Left fold of apply_action. Errors carry the index of the failing step.
WorldState apply_sequence(const ActionSpace& space, const WorldState& state, const PlayerId& player,
                          const ActionSequence& seq);

}  // namespace xdmev
