#pragma once

#include "santa/core.hpp"
#include "santa/error.hpp"
#include "santa/lp.hpp"
#include "santa/matching.hpp"
#include "santa/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

namespace santa::oracle {

struct Violation {
    std::string invariant;
    std::string detail;
    std::vector<std::size_t> indices;
};

struct AuditReport {
    std::vector<Violation> violations;

    [[nodiscard]] bool passed() const noexcept { return violations.empty(); }

    void add(std::string invariant, std::string detail, std::vector<std::size_t> indices = {})
    {
        violations.push_back({std::move(invariant), std::move(detail), std::move(indices)});
    }
};

struct BruteForceBudget {
    std::size_t max_players = 6;
    std::size_t max_resources = 12;
};

/// Best integral allocation value by exhaustive search. Each resource goes
/// to one of the players valuing it, or is discarded when nobody does;
/// branches whose optimistic bound cannot beat the incumbent are cut.
inline Rational brute_force_opt(const Instance& instance, BruteForceBudget budget = {})
{
    const std::size_t m = instance.player_count();
    const std::size_t n = instance.resource_count();
    if (m > budget.max_players || n > budget.max_resources) {
        throw Error(ErrorCode::BudgetExceeded, "brute force limited to " + std::to_string(budget.max_players)
                                                   + " players and " + std::to_string(budget.max_resources) + " resources");
    }
    std::vector<ResourceIndex> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](ResourceIndex a, ResourceIndex b) { return instance.value(a) > instance.value(b); });

    std::vector<std::vector<PlayerIndex>> takers(n);
    std::vector<Rational> remaining(m);
    for (ResourceIndex r = 0; r < n; ++r) {
        if (instance.value(r) == 0) {
            continue;
        }
        for (PlayerIndex p = 0; p < m; ++p) {
            if (instance.desires(p, r)) {
                takers[r].push_back(p);
                remaining[p] += instance.value(r);
            }
        }
    }

    std::vector<Rational> have(m);
    Rational best = 0;
    auto search = [&](auto&& self, std::size_t depth) -> void {
        Rational bound = have[0] + remaining[0];
        for (PlayerIndex p = 1; p < m; ++p) {
            bound = std::min(bound, Rational(have[p] + remaining[p]));
        }
        if (bound <= best) {
            return;
        }
        if (depth == n) {
            best = bound; // remaining is all zero here
            return;
        }
        const ResourceIndex r = order[depth];
        const Rational& v = instance.value(r);
        if (takers[r].empty()) {
            self(self, depth + 1);
            return;
        }
        for (PlayerIndex p : takers[r]) {
            remaining[p] -= v;
        }
        for (PlayerIndex p : takers[r]) {
            have[p] += v;
            self(self, depth + 1);
            have[p] -= v;
        }
        for (PlayerIndex p : takers[r]) {
            remaining[p] += v;
        }
    };
    search(search, 0);
    return best;
}

/// T* from the explicitly enumerated configuration LP: every subset of every
/// player's valuable desires becomes a column, and the largest subset-sum
/// breakpoint at which the full primal is feasible is returned.
inline Rational exact_t_star_enumerated(const Instance& instance, std::uint64_t budget = 4096)
{
    struct Config {
        PlayerIndex player;
        ResourceSet bundle;
        Rational value;
    };
    std::vector<Config> configs;
    std::uint64_t total = 0;
    for (PlayerIndex p = 0; p < instance.player_count(); ++p) {
        const ResourceSet mine = instance.valuable_desires(p);
        if (mine.size() >= 63 || (total += std::uint64_t{1} << mine.size()) > budget) {
            throw Error(ErrorCode::BudgetExceeded, "configuration enumeration exceeds " + std::to_string(budget));
        }
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << mine.size()); ++mask) {
            Config c{p, {}, Rational(0)};
            for (std::size_t i = 0; i < mine.size(); ++i) {
                if (mask >> i & 1U) {
                    c.bundle.push_back(mine[i]);
                    c.value += instance.value(mine[i]);
                }
            }
            configs.push_back(std::move(c));
        }
    }
    std::vector<Rational> breakpoints;
    for (const auto& c : configs) {
        breakpoints.push_back(c.value);
    }
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());

    auto feasible = [&](const Rational& t) {
        std::vector<const Config*> columns;
        for (const auto& c : configs) {
            if (c.value >= t) {
                columns.push_back(&c);
            }
        }
        lp::LinearProgram primal;
        primal.objective.assign(columns.size(), Rational(0));
        for (PlayerIndex p = 0; p < instance.player_count(); ++p) {
            lp::Constraint row{std::vector<Rational>(columns.size()), lp::Relation::GreaterEqual, Rational(1)};
            for (std::size_t j = 0; j < columns.size(); ++j) {
                if (columns[j]->player == p) row.coefficients[j] = 1;
            }
            primal.constraints.push_back(std::move(row));
        }
        for (ResourceIndex r = 0; r < instance.resource_count(); ++r) {
            lp::Constraint row{std::vector<Rational>(columns.size()), lp::Relation::LessEqual, Rational(1)};
            for (std::size_t j = 0; j < columns.size(); ++j) {
                const auto& b = columns[j]->bundle;
                if (std::binary_search(b.begin(), b.end(), r)) row.coefficients[j] = 1;
            }
            primal.constraints.push_back(std::move(row));
        }
        return lp::solve(primal).status == lp::Status::Optimal;
    };

    std::size_t lo = 0; // t = 0 admits the empty configuration for everyone
    std::size_t hi = breakpoints.size();
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (feasible(breakpoints[mid])) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return breakpoints[lo];
}

/// Direct set-based audit of a search state: the three blocker invariants,
/// matching validity, edge validity (thin minimality), the derived
/// covered/active sets, and unique activation of every active player.
inline AuditReport check_state_invariants(const NormalizedInstance& ni, const SearchState& state)
{
    AuditReport report;
    const std::vector<Edge> matched = state.matching.edges();
    const std::size_t l = state.blockers.size();

    // Matching: edges share neither players nor resources; p0 is unmatched.
    {
        std::vector<int> player_uses(ni.player_count(), 0);
        std::vector<int> resource_uses(ni.resource_count(), 0);
        for (const auto& e : matched) {
            if (++player_uses[e.player] > 1) {
                report.add("matching", "player matched twice", {e.player});
            }
            for (ResourceIndex r : e.bundle) {
                if (++resource_uses[r] > 1) {
                    report.add("matching", "resource matched twice", {r});
                }
            }
            if (!is_valid_edge(ni, e)) {
                report.add("edge", "matching edge of player " + ni.base().player_id(e.player) + " is not an edge of G",
                           {e.player});
            }
        }
        if (state.matching.matched(state.p0)) {
            report.add("matching", "p0 is already matched", {state.p0});
        }
    }

    for (std::size_t i = 0; i < l; ++i) {
        if (!is_valid_edge(ni, state.blockers[i].x)) {
            report.add("edge", "x_" + std::to_string(i + 1) + " is not an edge of G", {i + 1});
        }
    }

    // (i) the x_i are pairwise resource-disjoint.
    for (std::size_t a = 0; a < l; ++a) {
        for (std::size_t b = a + 1; b < l; ++b) {
            if (intersects(state.blockers[a].x.bundle, state.blockers[b].x.bundle)) {
                report.add("x-disjoint", "x_" + std::to_string(a + 1) + " and x_" + std::to_string(b + 1) + " share a resource",
                           {a + 1, b + 1});
            }
        }
    }

    // (ii) x_i is blocked by every edge of Y_i and by no other matching edge.
    for (std::size_t i = 0; i < l; ++i) {
        const Blocker& b = state.blockers[i];
        for (const auto& e : b.blocking) {
            if (!intersects(e.bundle, b.x.bundle)) {
                report.add("y-blocks-x", "edge of Y_" + std::to_string(i + 1) + " does not block x_" + std::to_string(i + 1),
                           {i + 1, e.player});
            }
        }
        for (const auto& e : matched) {
            const bool listed = std::find(b.blocking.begin(), b.blocking.end(), e) != b.blocking.end();
            if (!listed && intersects(e.bundle, b.x.bundle)) {
                report.add("y-blocks-x", "matching edge outside Y_" + std::to_string(i + 1) + " blocks x_" + std::to_string(i + 1),
                           {i + 1, e.player});
            }
        }
    }

    // (iii) Y_1..Y_l are mutually disjoint subsets of M.
    for (std::size_t i = 0; i < l; ++i) {
        for (const auto& e : state.blockers[i].blocking) {
            if (!state.matching.contains(e)) {
                report.add("y-disjoint", "edge of Y_" + std::to_string(i + 1) + " is not in M", {i + 1, e.player});
            }
            for (std::size_t k = i + 1; k < l; ++k) {
                const auto& other = state.blockers[k].blocking;
                if (std::find(other.begin(), other.end(), e) != other.end()) {
                    report.add("y-disjoint", "edge shared by Y_" + std::to_string(i + 1) + " and Y_" + std::to_string(k + 1),
                               {i + 1, k + 1, e.player});
                }
            }
        }
    }

    // Derived sets.
    DerivedSets d = recompute_derived(state);
    if (d.covered != state.covered) {
        report.add("derived", "covered resources differ from recomputation");
    }
    if (d.active != state.active || d.is_active != state.is_active) {
        report.add("derived", "active players differ from recomputation");
    }

    // Every active player other than p0 is activated by exactly one blocker.
    for (PlayerIndex p : d.active) {
        std::size_t activators = 0;
        for (const auto& b : state.blockers) {
            activators += static_cast<std::size_t>(std::count_if(
                b.blocking.begin(), b.blocking.end(), [&](const Edge& e) { return e.player == p; }));
        }
        const std::size_t expected = p == state.p0 ? 0 : 1;
        if (activators != expected) {
            report.add("activation",
                       "player " + ni.base().player_id(p) + " activated by " + std::to_string(activators) + " blockers", {p});
        }
    }
    return report;
}

/// Signatures of one insertion must strictly decrease and every finite part
/// must sum to at most `players`.
inline AuditReport monitor_signatures(const std::vector<Signature>& trace, std::size_t players)
{
    AuditReport report;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const auto& s = trace[i].finite;
        const std::size_t sum = std::accumulate(s.begin(), s.end(), std::size_t{0});
        if (sum > players) {
            report.add("signature.sum", "sum of |Y_i| is " + std::to_string(sum) + " > " + std::to_string(players), {i});
        }
        if (i > 0 && !(trace[i] < trace[i - 1])) {
            report.add("signature.decrease",
                       trace[i - 1].to_string() + " -> " + trace[i].to_string() + " is not a strict decrease", {i - 1, i});
        }
    }
    return report;
}

/// Minimum bundle value of an allocation that must partition all resources.
inline Rational verify_allocation(const Instance& instance, const Allocation& allocation)
{
    if (allocation.size() != instance.player_count()) {
        throw Error(ErrorCode::NotAPartition, "allocation lists " + std::to_string(allocation.size()) + " players, instance has "
                                                  + std::to_string(instance.player_count()));
    }
    std::vector<int> uses(instance.resource_count(), 0);
    for (const auto& bundle : allocation) {
        for (ResourceIndex r : bundle) {
            if (r >= instance.resource_count()) {
                throw Error(ErrorCode::UnknownResource, "index " + std::to_string(r));
            }
            if (++uses[r] > 1) {
                throw Error(ErrorCode::NotAPartition, "resource " + instance.resource_id(r) + " assigned twice");
            }
        }
    }
    for (ResourceIndex r = 0; r < instance.resource_count(); ++r) {
        if (uses[r] == 0) {
            throw Error(ErrorCode::NotAPartition, "resource " + instance.resource_id(r) + " is not assigned");
        }
    }
    Rational worst = bundle_value(instance, 0, allocation[0]);
    for (PlayerIndex p = 1; p < instance.player_count(); ++p) {
        worst = std::min(worst, bundle_value(instance, p, allocation[p]));
    }
    return worst;
}

} // namespace santa::oracle
