#pragma once

#include "santa/certify.hpp"
#include "santa/clp.hpp"
#include "santa/core.hpp"
#include "santa/error.hpp"
#include "santa/generate.hpp"
#include "santa/io.hpp"
#include "santa/matching.hpp"
#include "santa/oracle.hpp"
#include "santa/rational.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace santa {

enum class SolveOutcome { Allocated, CertifiedInfeasible };

struct SolveOptions {
    /// nullopt means "auto": use T* as the target.
    std::optional<Rational> target;
    /// Bisection accuracy used when exact T* exceeds the budget.
    std::optional<Rational> delta = Rational(1, 1000);
    std::uint64_t budget = std::uint64_t{1} << 20;
    SearchOptions search;
};

struct RunReport {
    std::size_t players = 0;
    std::size_t resources = 0;
    std::optional<Rational> t_star;
    bool t_star_exact = false;
    /// Bisect only: the infeasible end of the bracket.
    std::optional<Rational> t_star_upper;
    Rational target;
    SolveOutcome outcome = SolveOutcome::Allocated;
    std::vector<Rational> values;
    Rational min_value;
    std::optional<Rational> ratio;
    SearchStats stats;
    std::size_t insertions = 0;
    double wall_seconds = 0;
};

struct SolveResult {
    RunReport report;
    std::optional<Allocation> allocation;
    std::optional<NormalizedInstance> normalized;
    std::optional<SearchState> stuck_state;
    std::optional<DualCertificate> certificate;
    std::optional<FeasibilityReport> feasibility;
    std::optional<BalanceReport> balances;
};

/// End-to-end run: T*, normalization, perfect matching, allocation; or a
/// verified dual certificate when the search gets stuck.
inline SolveResult solve_instance(const Instance& instance, const SolveOptions& options = {})
{
    const auto started = std::chrono::steady_clock::now();
    SolveResult result;
    RunReport& report = result.report;
    report.players = instance.player_count();
    report.resources = instance.resource_count();

    const bool within_budget = subset_sum_count(instance, options.budget) <= options.budget;
    if (within_budget) {
        report.t_star = compute_t_star(instance, ExactMode{options.budget}).value;
        report.t_star_exact = true;
    } else if (options.delta) {
        report.t_star = compute_t_star(instance, BisectMode{*options.delta}).value;
        report.t_star_upper = *report.t_star + *options.delta;
    } else if (!options.target) {
        throw Error(ErrorCode::BudgetExceeded, "exact T* exceeds the budget and no delta was given");
    }

    report.target = options.target ? *options.target : *report.t_star;
    if (report.target < 0) {
        throw Error(ErrorCode::InvalidTarget, "target must be non-negative");
    }

    if (report.target == 0) {
        // Nothing to guarantee; every player trivially reaches 0.
        Allocation allocation(instance.player_count());
        for (ResourceIndex r = 0; r < instance.resource_count(); ++r) {
            allocation[leftover_owner(instance, r)].push_back(r);
        }
        result.allocation = std::move(allocation);
        report.outcome = SolveOutcome::Allocated;
    } else {
        NormalizedInstance ni = normalize(instance, report.target);
        PerfectResult search = find_perfect_matching(ni, options.search);
        report.stats = search.stats;
        report.insertions = search.runs;
        if (auto* perfect = std::get_if<Perfect>(&search.outcome)) {
            result.allocation = complete_allocation(instance, perfect->matching, report.target);
            report.outcome = SolveOutcome::Allocated;
        } else {
            SearchState& state = std::get<Stuck>(search.outcome).state;
            DualCertificate cert = construct_dual_certificate(ni, state);
            FeasibilityReport feasibility = verify_certificate_feasibility(ni, cert);
            BalanceReport balances = check_blocker_balances(ni, state, cert);
            if (!feasibility.passed || !balances.passed) {
                throw std::logic_error("constructed dual certificate failed verification");
            }
            report.outcome = SolveOutcome::CertifiedInfeasible;
            result.certificate = std::move(cert);
            result.feasibility = std::move(feasibility);
            result.balances = std::move(balances);
            result.stuck_state = std::move(state);
        }
        result.normalized = std::move(ni);
    }

    if (result.allocation) {
        const Allocation& allocation = *result.allocation;
        for (PlayerIndex p = 0; p < instance.player_count(); ++p) {
            report.values.push_back(bundle_value(instance, p, allocation[p]));
        }
        // Self-audit through the independent checker before reporting.
        report.min_value = oracle::verify_allocation(instance, allocation);
        if (report.min_value < lambda() * report.target) {
            throw std::logic_error("allocation misses the lambda * target guarantee");
        }
        if (report.t_star && *report.t_star > 0) {
            report.ratio = report.min_value / *report.t_star;
        }
    }
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

inline io::json report_to_json(const Instance& instance, const SolveResult& result)
{
    const RunReport& r = result.report;
    io::json j;
    j["players"] = r.players;
    j["resources"] = r.resources;
    if (r.t_star) {
        j["t_star"] = io::rational_to_json(*r.t_star);
        j["t_star_mode"] = r.t_star_exact ? "exact" : "bisect";
        if (r.t_star_upper) {
            j["t_star_upper"] = io::rational_to_json(*r.t_star_upper);
        }
    } else {
        j["t_star"] = nullptr;
    }
    j["target"] = io::rational_to_json(r.target);
    j["outcome"] = r.outcome == SolveOutcome::Allocated ? "Allocated" : "Certified-Infeasible";
    if (r.outcome == SolveOutcome::Allocated) {
        io::json values = io::json::object();
        for (PlayerIndex p = 0; p < r.values.size(); ++p) {
            values[instance.player_id(p)] = io::rational_to_json(r.values[p]);
        }
        j["values"] = values;
        j["min_value"] = io::rational_to_json(r.min_value);
        j["guarantee"] = io::rational_to_json(lambda() * r.target);
        j["ratio"] = r.ratio ? io::rational_to_json(*r.ratio) : io::json(nullptr);
    }
    if (result.certificate && result.normalized) {
        j["certificate"] = io::certificate_to_json(*result.normalized, *result.certificate,
                                                   result.balances ? &*result.balances : nullptr);
    }
    j["builds"] = r.stats.builds;
    j["contracts"] = r.stats.contracts;
    j["insertions"] = r.insertions;
    j["wall_seconds"] = r.wall_seconds;
    return j;
}

/// One row of an integrality-gap experiment.
struct GapRow {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::size_t players = 0;
    std::size_t resources = 0;
    Rational t_star;
    Rational opt;
    /// T*/OPT; nullopt when OPT = 0 (degenerate row).
    std::optional<Rational> gap;
    Rational min_value;
    std::optional<Rational> ratio;
};

inline GapRow run_gap_trial(const Instance& instance, std::size_t trial, std::uint64_t seed)
{
    GapRow row;
    row.trial = trial;
    row.seed = seed;
    row.players = instance.player_count();
    row.resources = instance.resource_count();
    SolveResult solved = solve_instance(instance);
    if (!solved.report.t_star_exact) {
        throw Error(ErrorCode::BudgetExceeded, "gap trials need exact T*");
    }
    row.t_star = *solved.report.t_star;
    row.opt = oracle::brute_force_opt(instance);
    if (row.opt > 0) {
        row.gap = row.t_star / row.opt;
    }
    row.min_value = solved.report.min_value;
    row.ratio = solved.report.ratio;
    return row;
}

inline io::json gap_row_to_json(const GapRow& row)
{
    io::json j{{"trial", row.trial},
               {"seed", row.seed},
               {"players", row.players},
               {"resources", row.resources},
               {"t_star", io::rational_to_json(row.t_star)},
               {"opt", io::rational_to_json(row.opt)},
               {"min_value", io::rational_to_json(row.min_value)}};
    j["gap"] = row.gap ? io::rational_to_json(*row.gap) : io::json("degenerate");
    j["ratio"] = row.ratio ? io::rational_to_json(*row.ratio) : io::json(nullptr);
    return j;
}

} // namespace santa
