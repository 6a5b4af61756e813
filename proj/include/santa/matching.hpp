#pragma once

#include "santa/core.hpp"
#include "santa/error.hpp"
#include "santa/rational.hpp"

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace santa {

enum class EdgeKind { Fat, Thin };

/// Hyperedge of the bipartite hypergraph: a player plus either one fat
/// resource or a minimal thin bundle of value >= lambda.
struct Edge {
    PlayerIndex player = 0;
    ResourceSet bundle;
    EdgeKind kind = EdgeKind::Fat;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Set of edges sharing no player and no resource, indexed both ways.
class Matching {
public:
    Matching() = default;
    Matching(std::size_t players, std::size_t resources)
        : by_player_(players)
        , owner_(resources)
    {
    }

    [[nodiscard]] std::size_t player_count() const noexcept { return by_player_.size(); }
    [[nodiscard]] std::size_t resource_count() const noexcept { return owner_.size(); }
    [[nodiscard]] std::size_t size() const noexcept { return size_; }

    [[nodiscard]] bool matched(PlayerIndex p) const { return by_player_.at(p).has_value(); }
    [[nodiscard]] const std::optional<Edge>& edge_of(PlayerIndex p) const { return by_player_.at(p); }
    [[nodiscard]] std::optional<PlayerIndex> owner(ResourceIndex r) const { return owner_.at(r); }

    [[nodiscard]] bool contains(const Edge& e) const
    {
        return e.player < by_player_.size() && by_player_[e.player] && *by_player_[e.player] == e;
    }

    /// Throws if the edge would share a player or resource with the matching.
    void insert(Edge e)
    {
        if (e.player >= by_player_.size()) {
            throw Error(ErrorCode::UnknownPlayer, "index " + std::to_string(e.player));
        }
        if (by_player_[e.player]) {
            throw Error(ErrorCode::InvalidArgument, "player " + std::to_string(e.player) + " already matched");
        }
        for (ResourceIndex r : e.bundle) {
            if (r >= owner_.size()) {
                throw Error(ErrorCode::UnknownResource, "index " + std::to_string(r));
            }
            if (owner_[r]) {
                throw Error(ErrorCode::InvalidArgument, "resource " + std::to_string(r) + " already matched");
            }
        }
        for (ResourceIndex r : e.bundle) {
            owner_[r] = e.player;
        }
        by_player_[e.player] = std::move(e);
        ++size_;
    }

    Edge erase(PlayerIndex p)
    {
        if (!by_player_.at(p)) {
            throw Error(ErrorCode::InvalidArgument, "player " + std::to_string(p) + " is not matched");
        }
        Edge e = std::move(*by_player_[p]);
        by_player_[p].reset();
        for (ResourceIndex r : e.bundle) {
            owner_[r].reset();
        }
        --size_;
        return e;
    }

    /// Edges in player order.
    [[nodiscard]] std::vector<Edge> edges() const
    {
        std::vector<Edge> out;
        for (const auto& e : by_player_) {
            if (e) {
                out.push_back(*e);
            }
        }
        return out;
    }

    /// Matching edges that share a resource with `bundle`, in player order.
    [[nodiscard]] std::vector<Edge> blocking(const ResourceSet& bundle) const
    {
        std::vector<PlayerIndex> players;
        for (ResourceIndex r : bundle) {
            if (owner_.at(r)) {
                players.push_back(*owner_[r]);
            }
        }
        std::sort(players.begin(), players.end());
        players.erase(std::unique(players.begin(), players.end()), players.end());
        std::vector<Edge> out;
        for (PlayerIndex p : players) {
            out.push_back(*by_player_[p]);
        }
        return out;
    }

    friend bool operator==(const Matching& a, const Matching& b) { return a.by_player_ == b.by_player_; }

private:
    std::vector<std::optional<Edge>> by_player_;
    std::vector<std::optional<PlayerIndex>> owner_;
    std::size_t size_ = 0;
};

/// (x, Y): an edge we want in the matching and the matching edges in its way.
struct Blocker {
    Edge x;
    std::vector<Edge> blocking;

    [[nodiscard]] bool removable() const noexcept { return blocking.empty(); }
};

/// Local-search state for inserting one unmatched player p0.
///
/// `covered` and `active` are derived from the blocker sequence and kept in
/// step with it; `recompute_derived` rebuilds them from scratch.
struct SearchState {
    Matching matching;
    PlayerIndex p0 = 0;
    std::vector<Blocker> blockers;
    /// Per resource: covered by some x_i or some edge of some Y_i.
    std::vector<bool> covered;
    /// p0 first, then players of Y_1, Y_2, ... in player order within each.
    std::vector<PlayerIndex> active;
    std::vector<bool> is_active;
};

struct DerivedSets {
    std::vector<bool> covered;
    std::vector<PlayerIndex> active;
    std::vector<bool> is_active;
};

inline DerivedSets recompute_derived(const SearchState& state)
{
    DerivedSets d;
    d.covered.assign(state.matching.resource_count(), false);
    d.is_active.assign(state.matching.player_count(), false);
    d.active.push_back(state.p0);
    d.is_active[state.p0] = true;
    for (const auto& b : state.blockers) {
        for (ResourceIndex r : b.x.bundle) {
            d.covered[r] = true;
        }
        for (const auto& e : b.blocking) {
            for (ResourceIndex r : e.bundle) {
                d.covered[r] = true;
            }
            if (!d.is_active[e.player]) {
                d.is_active[e.player] = true;
                d.active.push_back(e.player);
            }
        }
    }
    return d;
}

inline void refresh_derived(SearchState& state)
{
    DerivedSets d = recompute_derived(state);
    state.covered = std::move(d.covered);
    state.active = std::move(d.active);
    state.is_active = std::move(d.is_active);
}

inline SearchState start_search(Matching matching, PlayerIndex p0)
{
    if (p0 >= matching.player_count()) {
        throw Error(ErrorCode::UnknownPlayer, "index " + std::to_string(p0));
    }
    if (matching.matched(p0)) {
        throw Error(ErrorCode::AlreadyMatched, "player " + std::to_string(p0));
    }
    SearchState state;
    state.matching = std::move(matching);
    state.p0 = p0;
    refresh_derived(state);
    return state;
}

/// True iff the bundle is a set of thin resources desired by the player with
/// value >= lambda that drops below lambda when any one resource is removed.
inline bool is_minimal_thin_edge(const NormalizedInstance& ni, PlayerIndex player, ResourceSet bundle)
{
    if (player >= ni.player_count()) {
        throw Error(ErrorCode::UnknownPlayer, "index " + std::to_string(player));
    }
    for (ResourceIndex r : bundle) {
        if (r >= ni.resource_count()) {
            throw Error(ErrorCode::UnknownResource, "index " + std::to_string(r));
        }
    }
    std::sort(bundle.begin(), bundle.end());
    if (std::adjacent_find(bundle.begin(), bundle.end()) != bundle.end()) {
        return false;
    }
    const ResourceSet& thin = ni.thin(player);
    Rational total = 0;
    for (ResourceIndex r : bundle) {
        if (!std::binary_search(thin.begin(), thin.end(), r)) {
            return false;
        }
        total += ni.value(r);
    }
    if (total < ni.lambda()) {
        return false;
    }
    return std::all_of(bundle.begin(), bundle.end(), [&](ResourceIndex r) { return total - ni.value(r) < ni.lambda(); });
}

/// Fat edges must be a single fat desired resource; thin edges must be minimal.
inline bool is_valid_edge(const NormalizedInstance& ni, const Edge& e)
{
    if (e.player >= ni.player_count()) {
        return false;
    }
    if (e.kind == EdgeKind::Fat) {
        const ResourceSet& fat = ni.fat(e.player);
        return e.bundle.size() == 1 && std::binary_search(fat.begin(), fat.end(), e.bundle.front());
    }
    return is_minimal_thin_edge(ni, e.player, e.bundle);
}

struct AddablePolicy {
    enum class Kind { Deterministic, Randomized };
    Kind kind = Kind::Deterministic;
    std::uint64_t seed = 0;
};

namespace detail {

/// Takes thin resources in `order` until lambda is reached, then drops
/// resources, smallest value first, while the rest still reaches lambda.
inline std::optional<ResourceSet> thin_bundle(const NormalizedInstance& ni, const std::vector<ResourceIndex>& order)
{
    std::vector<ResourceIndex> chosen;
    Rational total = 0;
    for (ResourceIndex r : order) {
        chosen.push_back(r);
        total += ni.value(r);
        if (total >= ni.lambda()) {
            break;
        }
    }
    if (total < ni.lambda()) {
        return std::nullopt;
    }
    std::vector<ResourceIndex> trim = chosen;
    std::stable_sort(trim.begin(), trim.end(), [&](ResourceIndex a, ResourceIndex b) { return ni.value(a) < ni.value(b); });
    for (ResourceIndex r : trim) {
        if (total - ni.value(r) >= ni.lambda()) {
            total -= ni.value(r);
            chosen.erase(std::find(chosen.begin(), chosen.end(), r));
        }
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

inline std::vector<ResourceIndex> by_descending_value(const NormalizedInstance& ni, std::vector<ResourceIndex> rs)
{
    std::stable_sort(rs.begin(), rs.end(), [&](ResourceIndex a, ResourceIndex b) { return ni.value(a) > ni.value(b); });
    return rs;
}

/// Candidate addable edge for one active player. Resources not used by the
/// matching are preferred (fat, then thin); otherwise any uncovered resource.
inline std::optional<Edge> addable_for(const NormalizedInstance& ni, const SearchState& state, PlayerIndex q,
                                       std::mt19937_64* rng)
{
    for (bool free_only : {true, false}) {
        std::vector<ResourceIndex> fat;
        for (ResourceIndex r : ni.fat(q)) {
            if (!state.covered[r] && (!free_only || !state.matching.owner(r))) {
                fat.push_back(r);
            }
        }
        if (!fat.empty()) {
            ResourceIndex pick = fat.front();
            if (rng) {
                pick = fat[std::uniform_int_distribution<std::size_t>(0, fat.size() - 1)(*rng)];
            }
            return Edge{q, {pick}, EdgeKind::Fat};
        }
        std::vector<ResourceIndex> thin;
        for (ResourceIndex r : ni.thin(q)) {
            if (!state.covered[r] && (!free_only || !state.matching.owner(r))) {
                thin.push_back(r);
            }
        }
        if (rng) {
            std::shuffle(thin.begin(), thin.end(), *rng);
        } else {
            thin = by_descending_value(ni, std::move(thin));
        }
        if (auto bundle = thin_bundle(ni, thin)) {
            return Edge{q, std::move(*bundle), EdgeKind::Thin};
        }
    }
    return std::nullopt;
}

} // namespace detail

/// An edge of an active player avoiding every covered resource, or nullopt.
/// Active players are scanned in activation order (random order when `rng`
/// is given).
inline std::optional<Edge> find_addable_edge(const NormalizedInstance& ni, const SearchState& state,
                                             std::mt19937_64* rng = nullptr)
{
    std::vector<PlayerIndex> order = state.active;
    if (rng) {
        std::shuffle(order.begin(), order.end(), *rng);
    }
    for (PlayerIndex q : order) {
        if (auto e = detail::addable_for(ni, state, q, rng)) {
            return e;
        }
    }
    return std::nullopt;
}

/// Build: append (edge, matching edges sharing a resource with it).
/// Returns the 1-based index of the new blocker.
inline std::size_t build_step(SearchState& state, Edge edge)
{
    if (edge.player >= state.is_active.size() || !state.is_active[edge.player]) {
        throw Error(ErrorCode::NotAddable, "player " + std::to_string(edge.player) + " is not active");
    }
    for (ResourceIndex r : edge.bundle) {
        if (r >= state.covered.size() || state.covered[r]) {
            throw Error(ErrorCode::NotAddable, "resource " + std::to_string(r) + " is already covered");
        }
    }
    Blocker b{std::move(edge), {}};
    b.blocking = state.matching.blocking(b.x.bundle);
    for (ResourceIndex r : b.x.bundle) {
        state.covered[r] = true;
    }
    for (const auto& e : b.blocking) {
        for (ResourceIndex r : e.bundle) {
            state.covered[r] = true;
        }
        if (!state.is_active[e.player]) {
            state.is_active[e.player] = true;
            state.active.push_back(e.player);
        }
    }
    state.blockers.push_back(std::move(b));
    return state.blockers.size();
}

struct ContractResult {
    bool terminated = false;
    /// 1-based index k of the removable blocker whose edge entered the matching.
    std::size_t removed = 0;
    /// 1-based index j of the blocker that activated x_k's player (0 on termination).
    std::size_t activating = 0;
    Edge added;
    std::optional<Edge> released;
};

/// Contract on the smallest-index removable blocker B_k. If x_k belongs to
/// p0 the matching gains x_k and the search ends; otherwise x_k replaces the
/// edge e of its player, e leaves Y_j, and blockers after B_j are dropped.
inline ContractResult contract_step(SearchState& state)
{
    auto it = std::find_if(state.blockers.begin(), state.blockers.end(), [](const Blocker& b) { return b.removable(); });
    if (it == state.blockers.end()) {
        throw Error(ErrorCode::NoRemovableBlocker, "every blocker has blocking edges");
    }
    const std::size_t k = static_cast<std::size_t>(it - state.blockers.begin());
    ContractResult result;
    result.removed = k + 1;
    result.added = it->x;
    const PlayerIndex q = it->x.player;

    if (q == state.p0) {
        state.matching.insert(it->x);
        state.blockers.clear();
        result.terminated = true;
        refresh_derived(state);
        return result;
    }

    std::optional<std::size_t> j;
    for (std::size_t i = 0; i < state.blockers.size(); ++i) {
        for (const auto& e : state.blockers[i].blocking) {
            if (e.player == q) {
                if (j) {
                    throw std::logic_error("player activated by more than one blocker");
                }
                j = i;
            }
        }
    }
    if (!j || *j >= k) {
        throw std::logic_error("removable blocker has no earlier activating blocker");
    }
    auto& y = state.blockers[*j].blocking;
    auto e_it = std::find_if(y.begin(), y.end(), [&](const Edge& e) { return e.player == q; });
    Edge released = state.matching.erase(q);
    if (released != *e_it) {
        throw std::logic_error("blocking edge disagrees with the matching");
    }
    state.matching.insert(result.added);
    y.erase(e_it);
    state.blockers.resize(*j + 1);
    refresh_derived(state);

    result.activating = *j + 1;
    result.released = std::move(released);
    return result;
}

/// (|Y_1|, ..., |Y_l|, inf), ordered lexicographically with inf above every natural.
struct Signature {
    std::vector<std::size_t> finite;

    friend bool operator==(const Signature&, const Signature&) = default;

    friend std::strong_ordering operator<=>(const Signature& a, const Signature& b)
    {
        const std::size_t common = std::min(a.finite.size(), b.finite.size());
        for (std::size_t i = 0; i < common; ++i) {
            if (auto c = a.finite[i] <=> b.finite[i]; c != 0) {
                return c;
            }
        }
        // The shorter vector has inf where the longer one has a natural.
        return b.finite.size() <=> a.finite.size();
    }

    [[nodiscard]] std::string to_string() const
    {
        std::string s = "(";
        for (std::size_t v : finite) {
            s += std::to_string(v) + ", ";
        }
        return s + "inf)";
    }
};

inline Signature signature(const SearchState& state)
{
    Signature s;
    for (const auto& b : state.blockers) {
        s.finite.push_back(b.blocking.size());
    }
    return s;
}

/// Upper bound on the number of distinct signatures a single insertion can
/// visit with at most `m` matching edges: sequences whose entries before the
/// last are >= 1, the last >= 0, summing to at most m, plus the empty one.
inline std::uint64_t signature_count_bound(std::size_t m)
{
    // prefixes[s] = number of sequences of positive entries with sum s
    std::vector<std::uint64_t> prefixes(m + 1, 0);
    prefixes[0] = 1;
    for (std::size_t s = 1; s <= m; ++s) {
        for (std::size_t part = 1; part <= s; ++part) {
            prefixes[s] += prefixes[s - part];
        }
    }
    std::uint64_t total = 1;
    for (std::size_t s = 0; s <= m; ++s) {
        // one more entry (the last, >= 0) bringing the sum to at most m
        total += prefixes[s] * (m - s + 1);
    }
    return total;
}

enum class StepKind { Build, Contract, Terminate, Stuck };

inline const char* step_kind_name(StepKind k)
{
    switch (k) {
    case StepKind::Build: return "build";
    case StepKind::Contract: return "contract";
    case StepKind::Terminate: return "terminate";
    case StepKind::Stuck: return "stuck";
    }
    return "?";
}

struct TraceEvent {
    std::size_t step = 0;
    /// Which insertion (0-based) within a perfect-matching run.
    std::size_t run = 0;
    PlayerIndex p0 = 0;
    StepKind kind = StepKind::Build;
    std::optional<Edge> edge;
    /// Build: the new blocker; Contract/Terminate: the removed blocker k.
    std::size_t blocker = 0;
    /// Contract: the activating blocker j kept as the new last blocker.
    std::size_t activating = 0;
    /// Signature after the step.
    Signature signature;
};

using StepObserver = std::function<void(const TraceEvent&, const SearchState&)>;

struct SearchOptions {
    AddablePolicy policy;
    /// Recompute covered/active after every step and compare with the
    /// incrementally maintained sets.
    bool debug_recompute = false;
    StepObserver observer;
};

struct SearchStats {
    std::size_t builds = 0;
    std::size_t contracts = 0;

    [[nodiscard]] std::size_t steps() const noexcept { return builds + contracts; }
};

struct Extended {
    Matching matching;
};

struct Stuck {
    SearchState state;
};

struct ExtendResult {
    std::variant<Extended, Stuck> outcome;
    SearchStats stats;
    /// Signature of the initial state and after every non-terminal step.
    std::vector<Signature> signatures;

    [[nodiscard]] bool extended() const noexcept { return std::holds_alternative<Extended>(outcome); }
};

namespace detail {

inline void audit_derived(const SearchState& state)
{
    DerivedSets d = recompute_derived(state);
    if (d.covered != state.covered || d.active != state.active || d.is_active != state.is_active) {
        throw std::logic_error("incremental covered/active sets diverged from recomputation");
    }
}

inline ExtendResult extend_matching(const NormalizedInstance& ni, Matching m, PlayerIndex p0,
                                    const SearchOptions& options, std::mt19937_64* rng, std::size_t run)
{
    if (m.player_count() != ni.player_count() || m.resource_count() != ni.resource_count()) {
        throw Error(ErrorCode::DimensionMismatch, "matching does not fit the instance");
    }
    ExtendResult result{Extended{}, {}, {}};
    SearchState state = start_search(std::move(m), p0);
    result.signatures.push_back(signature(state));

    std::size_t step = 0;
    auto emit = [&](StepKind kind, std::optional<Edge> edge, std::size_t blocker, std::size_t activating) {
        if (options.debug_recompute) {
            audit_derived(state);
        }
        if (options.observer) {
            options.observer(TraceEvent{step, run, p0, kind, std::move(edge), blocker, activating, signature(state)}, state);
        }
        ++step;
    };

    for (;;) {
        const bool has_removable = std::any_of(state.blockers.begin(), state.blockers.end(),
                                               [](const Blocker& b) { return b.removable(); });
        if (has_removable) {
            ContractResult c = contract_step(state);
            ++result.stats.contracts;
            if (c.terminated) {
                emit(StepKind::Terminate, c.added, c.removed, 0);
                result.outcome = Extended{std::move(state.matching)};
                return result;
            }
            result.signatures.push_back(signature(state));
            emit(StepKind::Contract, c.added, c.removed, c.activating);
            continue;
        }
        if (auto edge = find_addable_edge(ni, state, rng)) {
            Edge copy = *edge;
            const std::size_t index = build_step(state, std::move(*edge));
            ++result.stats.builds;
            result.signatures.push_back(signature(state));
            emit(StepKind::Build, std::move(copy), index, 0);
            continue;
        }
        emit(StepKind::Stuck, std::nullopt, 0, 0);
        result.outcome = Stuck{std::move(state)};
        return result;
    }
}

} // namespace detail

/// Inserts the unmatched player p0 by alternating Build and Contract
/// (contract whenever a removable blocker exists). Returns the enlarged
/// matching, or the state in which neither move applies.
inline ExtendResult extend_matching(const NormalizedInstance& ni, Matching m, PlayerIndex p0,
                                    const SearchOptions& options = {})
{
    std::optional<std::mt19937_64> rng;
    if (options.policy.kind == AddablePolicy::Kind::Randomized) {
        rng.emplace(options.policy.seed);
    }
    return detail::extend_matching(ni, std::move(m), p0, options, rng ? &*rng : nullptr, 0);
}

struct Perfect {
    Matching matching;
};

struct PerfectResult {
    std::variant<Perfect, Stuck> outcome;
    SearchStats stats;
    std::size_t runs = 0;
    /// Longest single insertion, in Build + Contract steps.
    std::size_t max_run_steps = 0;

    [[nodiscard]] bool perfect() const noexcept { return std::holds_alternative<Perfect>(outcome); }
};

/// Inserts unmatched players in index order until the matching is perfect
/// or an insertion gets stuck.
inline PerfectResult find_perfect_matching(const NormalizedInstance& ni, const SearchOptions& options = {})
{
    std::optional<std::mt19937_64> rng;
    if (options.policy.kind == AddablePolicy::Kind::Randomized) {
        rng.emplace(options.policy.seed);
    }
    PerfectResult result{Perfect{Matching(ni.player_count(), ni.resource_count())}, {}, 0, 0};
    Matching current(ni.player_count(), ni.resource_count());
    for (PlayerIndex p = 0; p < ni.player_count(); ++p) {
        if (current.matched(p)) {
            continue;
        }
        ExtendResult r = detail::extend_matching(ni, std::move(current), p, options, rng ? &*rng : nullptr, result.runs);
        ++result.runs;
        result.stats.builds += r.stats.builds;
        result.stats.contracts += r.stats.contracts;
        result.max_run_steps = std::max(result.max_run_steps, r.stats.steps());
        if (auto* stuck = std::get_if<Stuck>(&r.outcome)) {
            result.outcome = std::move(*stuck);
            return result;
        }
        current = std::move(std::get<Extended>(r.outcome).matching);
    }
    result.outcome = Perfect{std::move(current)};
    return result;
}

/// Bundle per player, indexed by player.
using Allocation = std::vector<ResourceSet>;

/// Lowest-index player desiring r, or the first player when nobody does.
inline PlayerIndex leftover_owner(const Instance& instance, ResourceIndex r)
{
    for (PlayerIndex p = 0; p < instance.player_count(); ++p) {
        if (instance.desires(p, r)) {
            return p;
        }
    }
    return 0;
}

/// Turns a perfect matching into a partition of all resources: matched
/// bundles first, then each leftover resource to the lowest-index player
/// desiring it, or to the first player when nobody does. `target` is the
/// scale the matching was found at; every matched bundle must be worth at
/// least lambda * target in the original instance.
inline Allocation complete_allocation(const Instance& instance, const Matching& m, const Rational& target)
{
    if (m.player_count() != instance.player_count() || m.resource_count() != instance.resource_count()) {
        throw Error(ErrorCode::DimensionMismatch, "matching does not fit the instance");
    }
    if (m.size() != instance.player_count()) {
        throw Error(ErrorCode::NotPerfect,
                    std::to_string(m.size()) + " of " + std::to_string(instance.player_count()) + " players matched");
    }
    Allocation allocation(instance.player_count());
    for (PlayerIndex p = 0; p < instance.player_count(); ++p) {
        allocation[p] = m.edge_of(p)->bundle;
        if (bundle_value(instance, p, allocation[p]) < lambda() * target) {
            throw std::logic_error("matched bundle of " + instance.player_id(p) + " is worth less than lambda * target");
        }
    }
    for (ResourceIndex r = 0; r < instance.resource_count(); ++r) {
        if (m.owner(r)) {
            continue;
        }
        allocation[leftover_owner(instance, r)].push_back(r);
    }
    for (auto& bundle : allocation) {
        std::sort(bundle.begin(), bundle.end());
    }
    return allocation;
}

} // namespace santa
