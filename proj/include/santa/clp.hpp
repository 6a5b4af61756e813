#pragma once

#include "santa/core.hpp"
#include "santa/error.hpp"
#include "santa/lp.hpp"
#include "santa/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace santa {

/// A configuration chosen by pricing: the bundle and its total price.
struct PricedConfiguration {
    Rational cost;
    ResourceSet bundle;
};

namespace detail {

struct CoverItem {
    ResourceIndex resource;
    Rational value;
    Rational cost;
};

/// Cheapest subset of `items` whose value reaches `need` (costs >= 0).
/// Branch and bound over items sorted by descending value, pruned when the
/// remaining value cannot reach `need` or the running cost is no better than
/// the incumbent.
inline std::optional<Rational> min_cover_cost(std::vector<CoverItem> items, const Rational& need)
{
    if (need <= 0) {
        return Rational(0);
    }
    std::stable_sort(items.begin(), items.end(), [](const CoverItem& a, const CoverItem& b) { return a.value > b.value; });
    std::vector<Rational> suffix(items.size() + 1);
    for (std::size_t i = items.size(); i-- > 0;) {
        suffix[i] = suffix[i + 1] + items[i].value;
    }
    if (suffix[0] < need) {
        return std::nullopt;
    }
    std::optional<Rational> best;
    auto search = [&](auto&& self, std::size_t i, const Rational& value, const Rational& cost) -> void {
        if (best && cost >= *best) {
            return;
        }
        if (value >= need) {
            best = cost;
            return;
        }
        if (i == items.size() || value + suffix[i] < need) {
            return;
        }
        self(self, i + 1, value + items[i].value, cost + items[i].cost);
        self(self, i + 1, value, cost);
    };
    search(search, 0, Rational(0), Rational(0));
    return best;
}

} // namespace detail

/// Cheapest configuration of `player` at target `target` under resource
/// prices, or nullopt when the player's desired value cannot reach the target.
/// Among equally cheap bundles the lexicographically smallest sorted index
/// sequence wins. Zero-value resources never enter a bundle.
inline std::optional<PricedConfiguration> min_cost_configuration(const Instance& instance, PlayerIndex player,
                                                                 const std::vector<Rational>& prices,
                                                                 const Rational& target)
{
    if (player >= instance.player_count()) {
        throw Error(ErrorCode::UnknownPlayer, "index " + std::to_string(player));
    }
    if (prices.size() != instance.resource_count()) {
        throw Error(ErrorCode::DimensionMismatch, "one price per resource required");
    }
    for (ResourceIndex r = 0; r < prices.size(); ++r) {
        if (prices[r] < 0) {
            throw Error(ErrorCode::NegativePrice, instance.resource_id(r) + " priced at " + to_string(prices[r]));
        }
    }
    if (target < 0) {
        throw Error(ErrorCode::InvalidTarget, "target must be non-negative");
    }

    std::vector<detail::CoverItem> items;
    for (ResourceIndex r : instance.valuable_desires(player)) {
        items.push_back({r, instance.value(r), prices[r]});
    }
    const auto optimum = detail::min_cover_cost(items, target);
    if (!optimum) {
        return std::nullopt;
    }

    // Rebuild the lexicographically smallest optimal bundle one index at a time.
    PricedConfiguration result{*optimum, {}};
    Rational value = 0;
    Rational cost = 0;
    std::size_t next = 0;
    while (value < target) {
        bool extended = false;
        for (std::size_t j = next; j < items.size(); ++j) {
            Rational with_value = value + items[j].value;
            Rational with_cost = cost + items[j].cost;
            if (with_cost > *optimum) {
                continue;
            }
            std::vector<detail::CoverItem> rest(items.begin() + static_cast<std::ptrdiff_t>(j) + 1, items.end());
            auto completion = detail::min_cover_cost(std::move(rest), target - with_value);
            if (completion && with_cost + *completion == *optimum) {
                result.bundle.push_back(items[j].resource);
                value = std::move(with_value);
                cost = std::move(with_cost);
                next = j + 1;
                extended = true;
                break;
            }
        }
        if (!extended) {
            throw std::logic_error("min_cost_configuration: failed to rebuild optimal bundle");
        }
    }
    return result;
}

/// Primal variable x_{p,C}: player and a configuration C of value >= T.
struct ConfigColumn {
    PlayerIndex player = 0;
    ResourceSet bundle;
    Rational value;

    friend bool operator==(const ConfigColumn&, const ConfigColumn&) = default;
};

/// Dual prices: y per player, z per resource.
struct DualPrices {
    std::vector<Rational> y;
    std::vector<Rational> z;

    [[nodiscard]] Rational objective() const
    {
        Rational total = 0;
        for (const auto& v : y) total += v;
        for (const auto& v : z) total -= v;
        return total;
    }
};

/// Checks y_p <= sum_{r in C} z_r for every configuration C of every player
/// at target `target`, plus non-negativity, using exact pricing.
inline bool dual_prices_feasible(const Instance& instance, const DualPrices& prices, const Rational& target)
{
    if (prices.y.size() != instance.player_count() || prices.z.size() != instance.resource_count()) {
        return false;
    }
    for (const auto& v : prices.y) {
        if (v < 0) return false;
    }
    for (const auto& v : prices.z) {
        if (v < 0) return false;
    }
    for (PlayerIndex p = 0; p < instance.player_count(); ++p) {
        auto cheapest = min_cost_configuration(instance, p, prices.z, target);
        if (cheapest && cheapest->cost < prices.y[p]) {
            return false;
        }
    }
    return true;
}

enum class ClpStatus { Feasible, Infeasible };

struct AddedColumn {
    PlayerIndex player = 0;
    ResourceSet bundle;
    Rational cost;
};

/// One round of column generation: master objective before pricing, and the
/// columns that pricing found improving.
struct ColumnGenerationRound {
    std::size_t iteration = 0;
    Rational master_objective;
    std::vector<AddedColumn> added;
};

struct ClpVerdict {
    ClpStatus status = ClpStatus::Infeasible;
    Rational target;
    /// Positive-weight columns of the final master (Feasible only).
    std::vector<std::pair<ConfigColumn, Rational>> solution;
    /// Certificate of infeasibility with positive objective (Infeasible only).
    std::optional<DualPrices> prices;
    /// Optimal total shortfall of the final master.
    Rational shortfall;
    std::vector<ColumnGenerationRound> transcript;
};

/// Line-oriented transcript: one line per added column, one closing line per round without columns.
inline std::string format_transcript(const Instance& instance, const std::vector<ColumnGenerationRound>& rounds)
{
    std::ostringstream out;
    for (const auto& round : rounds) {
        if (round.added.empty()) {
            out << "iter " << round.iteration << " objective " << to_string(round.master_objective) << " done\n";
        }
        for (const auto& col : round.added) {
            out << "iter " << round.iteration << " objective " << to_string(round.master_objective) << " add "
                << instance.player_id(col.player) << " {";
            for (std::size_t i = 0; i < col.bundle.size(); ++i) {
                out << (i ? "," : "") << instance.resource_id(col.bundle[i]);
            }
            out << "} cost " << to_string(col.cost) << "\n";
        }
    }
    return out.str();
}

/// Decides CLP(T) exactly by column generation on the phase-1 master
///   min sum_p s_p  s.t.  sum_C x_{p,C} + s_p >= 1 (each p),
///                        sum_{(p,C) : r in C} x_{p,C} <= 1 (each r).
/// The column pool starts empty; each round adds, in (player, bundle)
/// order, every column whose price is below the player's dual.
inline ClpVerdict clp_feasible(const Instance& instance, const Rational& target)
{
    if (target < 0) {
        throw Error(ErrorCode::InvalidTarget, "target must be non-negative");
    }
    const std::size_t m = instance.player_count();
    const std::size_t n = instance.resource_count();
    std::vector<ConfigColumn> pool;

    ClpVerdict verdict;
    verdict.target = target;
    for (std::size_t iteration = 0;; ++iteration) {
        lp::LinearProgram master;
        master.sense = lp::Sense::Minimize;
        const std::size_t columns = m + pool.size();
        master.objective.assign(columns, Rational(0));
        for (std::size_t p = 0; p < m; ++p) {
            master.objective[p] = 1;
        }
        for (std::size_t p = 0; p < m; ++p) {
            lp::Constraint row{std::vector<Rational>(columns), lp::Relation::GreaterEqual, Rational(1)};
            row.coefficients[p] = 1;
            for (std::size_t c = 0; c < pool.size(); ++c) {
                if (pool[c].player == p) {
                    row.coefficients[m + c] = 1;
                }
            }
            master.constraints.push_back(std::move(row));
        }
        for (std::size_t r = 0; r < n; ++r) {
            lp::Constraint row{std::vector<Rational>(columns), lp::Relation::LessEqual, Rational(1)};
            for (std::size_t c = 0; c < pool.size(); ++c) {
                if (std::binary_search(pool[c].bundle.begin(), pool[c].bundle.end(), r)) {
                    row.coefficients[m + c] = 1;
                }
            }
            master.constraints.push_back(std::move(row));
        }

        const lp::Outcome out = lp::solve(master);
        if (out.status != lp::Status::Optimal) {
            throw std::logic_error("clp master must be feasible and bounded");
        }

        DualPrices prices;
        prices.y.assign(out.dual.begin(), out.dual.begin() + static_cast<std::ptrdiff_t>(m));
        prices.z.resize(n);
        for (std::size_t r = 0; r < n; ++r) {
            prices.z[r] = -out.dual[m + r];
        }

        ColumnGenerationRound round{iteration, out.objective, {}};
        for (PlayerIndex p = 0; p < m; ++p) {
            auto cheapest = min_cost_configuration(instance, p, prices.z, target);
            if (cheapest && cheapest->cost < prices.y[p]) {
                round.added.push_back({p, cheapest->bundle, cheapest->cost});
            }
        }
        verdict.transcript.push_back(round);

        if (round.added.empty()) {
            verdict.shortfall = out.objective;
            if (out.objective == 0) {
                verdict.status = ClpStatus::Feasible;
                for (std::size_t c = 0; c < pool.size(); ++c) {
                    if (out.primal[m + c] > 0) {
                        verdict.solution.emplace_back(pool[c], out.primal[m + c]);
                    }
                }
            } else {
                verdict.status = ClpStatus::Infeasible;
                verdict.prices = std::move(prices);
            }
            return verdict;
        }
        for (const auto& col : round.added) {
            pool.push_back({col.player, col.bundle, set_value(instance, col.bundle)});
        }
    }
}

struct ExactMode {
    /// Cap on the total number of subset sums enumerated across players.
    std::uint64_t budget = std::uint64_t{1} << 20;
};

struct BisectMode {
    Rational delta;
};

using TStarMode = std::variant<ExactMode, BisectMode>;

struct TStarProbe {
    Rational target;
    ClpStatus status = ClpStatus::Infeasible;
    std::size_t rounds = 0;
};

struct TStarResult {
    Rational value;
    bool exact = true;
    std::vector<TStarProbe> transcript;
};

/// Sum over players of 2^|valuable desires|, saturating at `cap + 1`.
inline std::uint64_t subset_sum_count(const Instance& instance, std::uint64_t cap)
{
    std::uint64_t total = 0;
    for (PlayerIndex p = 0; p < instance.player_count(); ++p) {
        const std::size_t k = instance.valuable_desires(p).size();
        if (k >= 63) {
            return cap + 1;
        }
        total += std::uint64_t{1} << k;
        if (total > cap) {
            return cap + 1;
        }
    }
    return total;
}

/// Sorted, distinct subset sums of every player's valuable desires.
inline std::vector<Rational> configuration_breakpoints(const Instance& instance, std::uint64_t budget)
{
    if (subset_sum_count(instance, budget) > budget) {
        throw Error(ErrorCode::BudgetExceeded,
                    "subset-sum enumeration exceeds budget of " + std::to_string(budget) + " values");
    }
    std::vector<Rational> sums;
    for (PlayerIndex p = 0; p < instance.player_count(); ++p) {
        std::vector<Rational> mine{Rational(0)};
        for (ResourceIndex r : instance.valuable_desires(p)) {
            const std::size_t size = mine.size();
            for (std::size_t i = 0; i < size; ++i) {
                mine.push_back(mine[i] + instance.value(r));
            }
        }
        sums.insert(sums.end(), mine.begin(), mine.end());
    }
    std::sort(sums.begin(), sums.end());
    sums.erase(std::unique(sums.begin(), sums.end()), sums.end());
    return sums;
}

/// Largest T with CLP(T) feasible.
///
/// Exact: feasibility only changes at subset-sum breakpoints, so binary
/// search over them finds T* itself. Bisect: returns k*delta with CLP(k*delta)
/// feasible and CLP((k+1)*delta) infeasible.
inline TStarResult compute_t_star(const Instance& instance, const TStarMode& mode)
{
    TStarResult result;
    auto probe = [&](const Rational& t) {
        ClpVerdict v = clp_feasible(instance, t);
        result.transcript.push_back({t, v.status, v.transcript.size()});
        return v.status == ClpStatus::Feasible;
    };

    if (const auto* exact = std::get_if<ExactMode>(&mode)) {
        const std::vector<Rational> breakpoints = configuration_breakpoints(instance, exact->budget);
        // breakpoints[0] == 0 is always feasible
        std::size_t lo = 0;
        std::size_t hi = breakpoints.size();
        while (hi - lo > 1) {
            const std::size_t mid = lo + (hi - lo) / 2;
            if (probe(breakpoints[mid])) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        result.value = breakpoints[lo];
        result.exact = true;
        return result;
    }

    const Rational& delta = std::get<BisectMode>(mode).delta;
    if (delta <= 0) {
        throw Error(ErrorCode::InvalidArgument, "delta must be positive");
    }
    Rational cap;
    for (PlayerIndex p = 0; p < instance.player_count(); ++p) {
        Rational total = set_value(instance, instance.valuable_desires(p));
        if (p == 0 || total < cap) {
            cap = total;
        }
    }
    // (cap + delta) is infeasible: some player cannot reach it at all.
    Integer lo = 0;
    const Rational steps = cap / delta;
    Integer hi = Integer(boost::multiprecision::numerator(steps) / boost::multiprecision::denominator(steps)) + 1;
    while (hi - lo > 1) {
        Integer mid = (lo + hi) / 2;
        if (probe(Rational(mid) * delta)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    result.value = Rational(lo) * delta;
    result.exact = false;
    return result;
}

} // namespace santa
