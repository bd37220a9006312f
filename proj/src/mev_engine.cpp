#include "xdmev/mev_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "xdmev/error.hpp"
#include "xdmev/venues.hpp"

namespace xdmev {

std::string_view to_string(SearchMethod method) {
  return method == SearchMethod::Exhaustive ? "exhaustive" : "oracle";
}

unsigned resolve_thread_count(const EngineOptions& options) {
  if (options.threads > 0) return options.threads;
  if (const char* env = std::getenv("XDMEV_THREADS")) {
    char* end = nullptr;
    long parsed = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && parsed > 0) return static_cast<unsigned>(std::min<long>(parsed, 1024));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void validate_query(const ActionSpace& space, const MevQuery& query) {
  const auto& universe = space.universe();
  if (!universe.has(query.player)) throw Error(ErrorCode::UnknownId, "player " + query.player.str());
  if (query.action_domains.empty()) throw Error(ErrorCode::InvalidAmount, "action domain set is empty");
  if (query.value_domains.empty()) throw Error(ErrorCode::InvalidAmount, "value domain set is empty");
  if (query.max_sequence_length < 1) throw Error(ErrorCode::InvalidAmount, "max sequence length must be positive");
  for (const auto& d : query.action_domains) {
    if (!universe.has(d)) throw Error(ErrorCode::UnknownId, "domain " + d.str());
  }
  DomainSet seen;
  for (const auto& d : query.value_domains) {
    if (!universe.has(d)) throw Error(ErrorCode::UnknownId, "domain " + d.str());
    if (!seen.insert(d).second) throw Error(ErrorCode::InvalidAmount, "value domain " + d.str() + " listed twice");
    const auto& asset = space.native_asset(d);
    if (!query.prices.has_rate(asset, query.base_asset)) {
      throw Error(ErrorCode::MissingRate, "no rate from " + asset.str() + " to base " + query.base_asset.str());
    }
  }
  if (!universe.has(query.base_domain)) throw Error(ErrorCode::UnknownId, "domain " + query.base_domain.str());
  if (!universe.has(query.base_asset)) throw Error(ErrorCode::UnknownId, "asset " + query.base_asset.str());
}

Amount extractable_value(const ActionSpace& space, const WorldState& state, const PlayerId& player,
                         const ActionSequence& seq, const DomainId& domain, const AssetId& asset) {
  WorldState after = apply_sequence(space, state, player, seq);
  return balance_of(space.universe(), after, domain, player, asset) -
         balance_of(space.universe(), state, domain, player, asset);
}

Amount priced_gain(const ActionSpace& space, const MevQuery& query, const WorldState& before,
                   const WorldState& after) {
  Amount total;
  for (const auto& domain : query.value_domains) {
    const auto& asset = space.native_asset(domain);
    Amount ev = after.balance(domain, query.player, asset) - before.balance(domain, query.player, asset);
    total += convert(query.prices, asset, query.base_asset, ev);
  }
  return total;
}

namespace {

// A scored sequence. `plan` indexes the id-sorted action list, so index order is id order.
struct Candidate {
  Amount value;
  std::vector<std::size_t> plan;
  std::vector<std::optional<Amount>> amounts;
  WorldState final_state;
};

// Strict "a is preferred over b": higher value, then shorter, then smaller ids, then smaller amounts.
bool preferred(const Candidate& a, const Candidate& b) {
  if (a.value != b.value) return a.value > b.value;
  if (a.plan.size() != b.plan.size()) return a.plan.size() < b.plan.size();
  if (a.plan != b.plan) return a.plan < b.plan;
  return a.amounts < b.amounts;
}

ActionSequence to_sequence(const std::vector<const Action*>& acts, const Candidate& c) {
  ActionSequence seq;
  seq.reserve(c.plan.size());
  for (std::size_t i = 0; i < c.plan.size(); ++i) seq.push_back({acts[c.plan[i]]->id, c.amounts[i]});
  return seq;
}

MevResult to_result(const std::vector<const Action*>& acts, Candidate best, std::uint64_t explored,
                    SearchMethod method) {
  MevResult out;
  out.value = best.value;
  out.witness = to_sequence(acts, best);
  out.final_state = std::move(best.final_state);
  out.explored = explored;
  out.method = method;
  return out;
}

class CandidateBudget {
 public:
  explicit CandidateBudget(std::uint64_t cap) : cap_(cap) {}

  // False once the cap has been exceeded.
  bool take() {
    if (exceeded_.load(std::memory_order_relaxed)) return false;
    if (used_.fetch_add(1, std::memory_order_relaxed) + 1 > cap_) {
      exceeded_.store(true, std::memory_order_relaxed);
      return false;
    }
    return true;
  }
  bool exceeded() const { return exceeded_.load(std::memory_order_relaxed); }
  std::uint64_t cap() const { return cap_; }

 private:
  std::uint64_t cap_;
  std::atomic<std::uint64_t> used_{0};
  std::atomic<bool> exceeded_{false};
};

[[noreturn]] void throw_explosion(std::uint64_t cap) {
  throw Error(ErrorCode::ExplosionGuard, "more than " + std::to_string(cap) + " candidate sequences");
}

// Runs `count` independent tasks on up to `threads` workers. Results land in
// task order, so the caller's reduction does not depend on scheduling.
template <class Result, class Task>
std::vector<Result> run_tasks(std::size_t count, unsigned threads, Task task) {
  std::vector<Result> results(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        results[i] = task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned n = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

// ---------------------------------------------------------------------------
// Amount optimization for one ordered sequence.

struct Scored {
  Amount value;
  WorldState state;
};

// golden ratio conjugate, 18 digits
const Amount& inv_phi() {
  static const Amount value = Amount::parse("0.618033988749894848");
  return value;
}

class SequenceOptimizer {
 public:
  SequenceOptimizer(const ActionSpace& space, const MevQuery& query, const WorldState& initial,
                    const std::vector<const Action*>& acts)
      : space_(space), query_(query), initial_(initial), acts_(acts) {}

  // Best amounts for `plan` applied from `start`, which is the state after
  // plan[0 .. first) (all of those are non-parametric). nullopt when no amount
  // assignment tried makes the whole plan apply.
  std::optional<Candidate> optimize(const WorldState& start, std::size_t first,
                                    const std::vector<std::size_t>& plan) const {
    std::vector<std::size_t> params;
    for (std::size_t i = first; i < plan.size(); ++i) {
      if (acts_[plan[i]]->parametric()) params.push_back(i);
    }
    std::vector<std::optional<Amount>> amounts(plan.size());
    auto evaluate = [&](const std::vector<std::optional<Amount>>& trial) -> std::optional<Scored> {
      return run(start, first, plan, trial);
    };

    std::optional<Scored> best;
    std::vector<std::optional<Amount>> best_amounts;
    auto consider = [&](const std::vector<std::optional<Amount>>& trial, std::optional<Scored> scored) {
      if (!scored) return;
      if (!best || scored->value > best->value ||
          (scored->value == best->value && trial < best_amounts)) {
        best = std::move(scored);
        best_amounts = trial;
      }
    };

    if (params.empty()) {
      consider(amounts, evaluate(amounts));
    } else {
      // Coarse joint grid for a feasible starting point.
      const int per_axis = params.size() == 1 ? 33 : params.size() == 2 ? 9 : params.size() == 3 ? 5 : 3;
      std::vector<int> idx(params.size(), 0);
      while (true) {
        auto trial = amounts;
        for (std::size_t k = 0; k < params.size(); ++k) {
          trial[params[k]] = grid_point(*acts_[plan[params[k]]]->range(), idx[k], per_axis);
        }
        consider(trial, evaluate(trial));
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == per_axis) idx[k++] = 0;
        if (k == idx.size()) break;
      }
      if (!best) return std::nullopt;

      // Cyclic coordinate ascent, one golden-section line search per coordinate.
      constexpr int kMaxSweeps = 40;
      static const Amount kSweepGain = Amount::parse("0.000000000001");
      for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        Amount before = best->value;
        auto before_amounts = best_amounts;
        for (std::size_t k = 0; k < params.size(); ++k) {
          const std::size_t pos = params[k];
          const AmountRange& range = *acts_[plan[pos]]->range();
          auto line = [&](const Amount& x) {
            auto trial = best_amounts;
            trial[pos] = x;
            auto scored = evaluate(trial);
            consider(trial, scored);
            return scored ? std::optional<Amount>(scored->value) : std::nullopt;
          };
          // Later sweeps only refine around the current point.
          line_search(range, *best_amounts[pos], params.size() == 1 || sweep > 0 ? 1 : 33, line);
        }
        if (best_amounts == before_amounts || best->value - before < kSweepGain) break;
      }
    }
    if (!best) return std::nullopt;
    return Candidate{best->value, plan, best_amounts, std::move(best->state)};
  }

  std::optional<Scored> run(const WorldState& start, std::size_t first, const std::vector<std::size_t>& plan,
                            const std::vector<std::optional<Amount>>& amounts) const {
    try {
      WorldState state = start;
      for (std::size_t i = first; i < plan.size(); ++i) {
        state = apply_action(state, query_.player, *acts_[plan[i]], amounts[i]);
      }
      Amount value = priced_gain(space_, query_, initial_, state);
      return Scored{value, std::move(state)};
    } catch (const Error& e) {
      if (e.code() == ErrorCode::MissingRate || e.code() == ErrorCode::Overflow) throw;
      return std::nullopt;
    }
  }

  static Amount grid_point(const AmountRange& range, int index, int points) {
    if (points <= 1) return range.lo;
    return range.lo + (range.hi - range.lo).scaled(Rational(index, points - 1));
  }

 private:
  // Golden-section search for the maximum of `f` on [range.lo, range.hi].
  // With `grid` > 1 the bracket is first narrowed to the neighbours of the best
  // point on an evenly spaced grid; otherwise it is centred on `anchor`'s grid
  // cell from the caller's coarse grid. Infeasible points count as -inf; on a
  // tie between two infeasible probes the bracket moves toward `anchor`.
  template <class F>
  static void line_search(const AmountRange& range, Amount anchor, int grid, F& f) {
    Amount lo = range.lo;
    Amount hi = range.hi;
    const Amount width = hi - lo;
    if (!width.is_positive()) return;
    if (grid > 1) {
      std::optional<Amount> best_value;
      int best_index = -1;
      for (int g = 0; g < grid; ++g) {
        auto v = f(grid_point(range, g, grid));
        if (v && (!best_value || *v > *best_value)) {
          best_value = v;
          best_index = g;
        }
      }
      if (best_index < 0) return;
      anchor = grid_point(range, best_index, grid);
      lo = grid_point(range, std::max(0, best_index - 1), grid);
      hi = grid_point(range, std::min(grid - 1, best_index + 1), grid);
    } else {
      const Amount cell = width.scaled(Rational(1, 32));
      lo = std::max(range.lo, anchor - cell);
      hi = std::min(range.hi, anchor + cell);
    }
    const Amount tol = std::max(width.scaled(Rational(1, 1'000'000'000'000LL)), Amount::from_raw(RawInt(1000)));
    Amount a = lo;
    Amount b = hi;
    Amount c = b - (b - a) * inv_phi();
    Amount d = a + (b - a) * inv_phi();
    auto fc = f(c);
    auto fd = f(d);
    for (int iter = 0; iter < 200 && (b - a) > tol; ++iter) {
      bool keep_left;
      if (fc && fd) {
        keep_left = *fc >= *fd;
      } else if (fc || fd) {
        keep_left = fc.has_value();
      } else {
        keep_left = anchor <= c;
      }
      if (keep_left) {
        b = d;
        d = c;
        fd = fc;
        c = b - (b - a) * inv_phi();
        fc = f(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + (b - a) * inv_phi();
        fd = f(d);
      }
    }
    f(a);
    f(b);
  }

  const ActionSpace& space_;
  const MevQuery& query_;
  const WorldState& initial_;
  const std::vector<const Action*>& acts_;
};

// ---------------------------------------------------------------------------
// Exhaustive search.

class ExhaustiveSearch {
 public:
  ExhaustiveSearch(const ActionSpace& space, const MevQuery& query, const WorldState& initial,
                   std::vector<const Action*> acts, CandidateBudget& budget)
      : space_(space),
        initial_(initial),
        acts_(std::move(acts)),
        query_(query),
        optimizer_(space, query, initial, acts_),
        budget_(budget) {}

  const std::vector<const Action*>& actions() const { return acts_; }

  struct BranchResult {
    std::optional<Candidate> best;
    std::uint64_t explored = 0;
  };

  // Every valid sequence starting with acts[first].
  BranchResult branch(std::size_t first) const {
    BranchResult out;
    std::vector<bool> used(acts_.size(), false);
    Node root;
    root.state = initial_;
    root.prefix_state = initial_;
    visit(root, first, used, out);
    return out;
  }

 private:
  struct Node {
    std::vector<std::size_t> plan;
    std::vector<std::optional<Amount>> amounts;
    // State after the whole plan; only set while the plan has no parametric action.
    std::optional<WorldState> state;
    // State after plan[0 .. discrete_prefix) and that prefix's length.
    WorldState prefix_state;
    std::size_t discrete_prefix = 0;
  };

  void visit(const Node& parent, std::size_t next, std::vector<bool>& used, BranchResult& out) const {
    if (!budget_.take()) return;
    ++out.explored;
    const Action& action = *acts_[next];
    Node child;
    child.plan = parent.plan;
    child.plan.push_back(next);
    std::optional<Candidate> scored;
    if (parent.state && !action.parametric()) {
      try {
        WorldState state = apply_action(*parent.state, query_.player, action, std::nullopt);
        Amount value = priced_gain(space_, query_, initial_, state);
        child.amounts = parent.amounts;
        child.amounts.push_back(std::nullopt);
        child.state = state;
        child.prefix_state = state;
        child.discrete_prefix = child.plan.size();
        scored = Candidate{value, child.plan, child.amounts, std::move(state)};
      } catch (const Error& e) {
        if (e.code() == ErrorCode::MissingRate || e.code() == ErrorCode::Overflow) throw;
        return;
      }
    } else {
      child.prefix_state = parent.prefix_state;
      child.discrete_prefix = parent.discrete_prefix;
      scored = optimizer_.optimize(child.prefix_state, child.discrete_prefix, child.plan);
      if (!scored) return;
      child.amounts = scored->amounts;
    }
    if (!out.best || preferred(*scored, *out.best)) out.best = std::move(scored);
    if (static_cast<int>(child.plan.size()) >= query_.max_sequence_length) return;
    used[next] = true;
    for (std::size_t i = 0; i < acts_.size(); ++i) {
      if (!used[i]) visit(child, i, used, out);
    }
    used[next] = false;
  }

  const ActionSpace& space_;
  const WorldState& initial_;
  std::vector<const Action*> acts_;
  const MevQuery& query_;
  SequenceOptimizer optimizer_;
  CandidateBudget& budget_;
};

Candidate empty_candidate(const WorldState& state) { return Candidate{Amount{}, {}, {}, state}; }

}  // namespace

MevResult mev(const ActionSpace& space, const MevQuery& query, const WorldState& state,
              const EngineOptions& options) {
  validate_query(space, query);
  CandidateBudget budget(options.max_candidates);
  if (!budget.take()) throw_explosion(budget.cap());
  ExhaustiveSearch search(space, query, state, space.player_actions(query.player, query.action_domains), budget);
  const auto& acts = search.actions();
  auto branches = run_tasks<ExhaustiveSearch::BranchResult>(
      acts.size(), resolve_thread_count(options), [&](std::size_t i) { return search.branch(i); });
  if (budget.exceeded()) throw_explosion(budget.cap());

  Candidate best = empty_candidate(state);
  std::uint64_t explored = 1;
  for (auto& branch : branches) {
    explored += branch.explored;
    if (branch.best && preferred(*branch.best, best)) best = std::move(*branch.best);
  }
  return to_result(acts, std::move(best), explored, SearchMethod::Exhaustive);
}

MevResult mev_cross_two(const ActionSpace& space, const PlayerId& player, const DomainId& domain_i,
                        const DomainId& domain_j, const PriceMatrix& prices, const WorldState& state, int max_len,
                        const EngineOptions& options) {
  MevQuery query;
  query.player = player;
  query.action_domains = {domain_i, domain_j};
  query.value_domains = {domain_i};
  if (domain_j != domain_i) query.value_domains.push_back(domain_j);
  query.base_domain = domain_i;
  query.base_asset = space.native_asset(domain_i);
  query.prices = prices;
  query.max_sequence_length = max_len;
  return mev(space, query, state, options);
}

// ---------------------------------------------------------------------------
// Oracle: no pruning, no incremental state, no continuous optimization.

namespace {

// Ordered subsets of length ≤ max_len, weighted by grid^(#parametric).
BigInt oracle_candidate_count(std::size_t discrete, std::size_t parametric, int max_len, int grid_points) {
  auto choose = [](std::size_t n, std::size_t k) {
    BigInt r = 1;
    for (std::size_t i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
  };
  BigInt total = 0;
  for (std::size_t p = 0; p <= parametric; ++p) {
    for (std::size_t d = 0; d <= discrete; ++d) {
      std::size_t len = p + d;
      if (len > static_cast<std::size_t>(max_len)) continue;
      BigInt orderings = 1;
      for (std::size_t i = 2; i <= len; ++i) orderings *= i;
      total += choose(parametric, p) * choose(discrete, d) * orderings *
               boost::multiprecision::pow(BigInt(grid_points), static_cast<unsigned>(p));
    }
  }
  return total;
}

}  // namespace

MevResult mev_oracle(const ActionSpace& space, const MevQuery& query, const WorldState& state, int grid_points,
                     const EngineOptions& options) {
  validate_query(space, query);
  if (grid_points < 2) throw Error(ErrorCode::InvalidAmount, "oracle needs at least 2 grid points");
  auto acts = space.player_actions(query.player, query.action_domains);
  std::size_t parametric = std::count_if(acts.begin(), acts.end(), [](const Action* a) { return a->parametric(); });
  BigInt count = oracle_candidate_count(acts.size() - parametric, parametric, query.max_sequence_length, grid_points);
  if (count > BigInt(options.max_candidates)) throw_explosion(options.max_candidates);

  const auto& universe = space.universe();
  auto score = [&](const ActionSequence& seq) -> std::optional<Amount> {
    if (!validate_sequence(space, query.player, query.action_domains, state, seq)) return std::nullopt;
    Amount total;
    for (const auto& domain : query.value_domains) {
      const AssetId& asset = space.native_asset(domain);
      total += convert(query.prices, asset, query.base_asset,
                       extractable_value(space, state, query.player, seq, domain, asset));
    }
    (void)universe;
    return total;
  };

  struct Partial {
    std::optional<Candidate> best;
    std::uint64_t explored = 0;
  };

  // One task per first action; each enumerates its subtree of orderings and amount grids.
  auto task = [&](std::size_t first) {
    Partial out;
    std::vector<std::size_t> plan{first};
    std::vector<bool> used(acts.size(), false);
    used[first] = true;
    auto enumerate_amounts = [&](auto&& self_amounts, std::vector<std::optional<Amount>>& amounts,
                                 std::size_t pos) -> void {
      if (pos == plan.size()) {
        ActionSequence seq;
        for (std::size_t i = 0; i < plan.size(); ++i) seq.push_back({acts[plan[i]]->id, amounts[i]});
        ++out.explored;
        if (auto value = score(seq)) {
          Candidate c{*value, plan, amounts, {}};
          if (!out.best || preferred(c, *out.best)) {
            c.final_state = apply_sequence(space, state, query.player, seq);
            out.best = std::move(c);
          }
        }
        return;
      }
      if (const auto* range = acts[plan[pos]]->range()) {
        for (int g = 0; g < grid_points; ++g) {
          amounts[pos] = SequenceOptimizer::grid_point(*range, g, grid_points);
          self_amounts(self_amounts, amounts, pos + 1);
        }
        amounts[pos].reset();
      } else {
        self_amounts(self_amounts, amounts, pos + 1);
      }
    };
    auto enumerate_orders = [&](auto&& self_orders) -> void {
      std::vector<std::optional<Amount>> amounts(plan.size());
      enumerate_amounts(enumerate_amounts, amounts, 0);
      if (static_cast<int>(plan.size()) >= query.max_sequence_length) return;
      for (std::size_t i = 0; i < acts.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        plan.push_back(i);
        self_orders(self_orders);
        plan.pop_back();
        used[i] = false;
      }
    };
    enumerate_orders(enumerate_orders);
    return out;
  };

  auto partials = run_tasks<Partial>(acts.size(), resolve_thread_count(options), task);
  Candidate best = empty_candidate(state);
  std::uint64_t explored = 1;
  for (auto& p : partials) {
    explored += p.explored;
    if (p.best && preferred(*p.best, best)) best = std::move(*p.best);
  }
  return to_result(acts, std::move(best), explored, SearchMethod::Oracle);
}

// ---------------------------------------------------------------------------

std::vector<WorldState> reachable_states(const ActionSpace& space, const WorldState& state, const PlayerId& player,
                                         const DomainSet& domains, int max_len, const EngineOptions& options) {
  if (max_len < 0) throw Error(ErrorCode::InvalidAmount, "max_len must be non-negative");
  auto acts = space.player_actions(player, domains);
  const int grid = std::max(2, options.reachable_grid_points);
  std::set<WorldState> seen{state};
  std::uint64_t candidates = 1;
  std::vector<bool> used(acts.size(), false);
  auto dfs = [&](auto&& self, const WorldState& current, int depth) -> void {
    if (depth >= max_len) return;
    for (std::size_t i = 0; i < acts.size(); ++i) {
      if (used[i]) continue;
      std::vector<std::optional<Amount>> options_for_step;
      if (const auto* range = acts[i]->range()) {
        for (int g = 0; g < grid; ++g) options_for_step.push_back(SequenceOptimizer::grid_point(*range, g, grid));
      } else {
        options_for_step.push_back(std::nullopt);
      }
      for (const auto& amount : options_for_step) {
        if (++candidates > options.max_candidates) throw_explosion(options.max_candidates);
        WorldState next;
        try {
          next = apply_action(current, player, *acts[i], amount);
        } catch (const Error&) {
          continue;
        }
        seen.insert(next);
        used[i] = true;
        self(self, next, depth + 1);
        used[i] = false;
      }
    }
  };
  dfs(dfs, state, 0);
  return {seen.begin(), seen.end()};
}

}  // namespace xdmev
