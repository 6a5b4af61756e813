// Command-line front end: solve, gap, gen, verify.
//
// Exit codes: 0 success / Allocated, 1 verify below threshold,
// 2 Certified-Infeasible, 3 input error, 4 budget error.

#include "santa/santa.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int kExitAllocated = 0;
constexpr int kExitBelowThreshold = 1;
constexpr int kExitCertified = 2;
constexpr int kExitInput = 3;
constexpr int kExitBudget = 4;

void emit(const santa::io::json& j, const std::string& out_path)
{
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        santa::io::write_text_file(out_path, j.dump(2) + "\n");
    }
}

int run_solve(const std::string& instance_path, const std::string& target, const std::string& delta,
              const std::string& trace_path, const std::string& out_path, std::uint64_t budget, bool random_policy,
              std::uint64_t seed)
{
    const santa::Instance instance = santa::io::instance_from_json(santa::io::read_json_file(instance_path));

    santa::SolveOptions options;
    options.budget = budget;
    if (delta == "none") {
        options.delta.reset();
    } else {
        options.delta = santa::parse_rational(delta);
    }
    if (target != "auto") {
        options.target = santa::parse_rational(target);
    }
    if (random_policy) {
        options.search.policy = {santa::AddablePolicy::Kind::Randomized, seed};
    }

    std::ofstream trace;
    if (!trace_path.empty()) {
        trace.open(trace_path);
        if (!trace) {
            throw santa::Error(santa::ErrorCode::Parse, "cannot write '" + trace_path + "'");
        }
        options.search.observer = [&](const santa::TraceEvent& event, const santa::SearchState&) {
            trace << santa::io::trace_event_to_json(instance, event).dump() << "\n";
        };
    }

    const santa::SolveResult result = santa::solve_instance(instance, options);
    std::cout << santa::report_to_json(instance, result).dump(2) << "\n";
    if (result.allocation && !out_path.empty()) {
        santa::io::write_text_file(out_path, santa::io::allocation_to_json(instance, *result.allocation).dump(2) + "\n");
    }
    return result.report.outcome == santa::SolveOutcome::Allocated ? kExitAllocated : kExitCertified;
}

int run_gap(santa::GeneratorKind kind, std::size_t players, std::size_t resources, std::size_t trials,
            std::uint64_t seed, const std::string& out_path)
{
    santa::io::json rows = santa::io::json::array();
    std::optional<santa::Rational> max_gap;
    std::size_t degenerate = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const std::uint64_t trial_seed = seed + t;
        const santa::Instance instance = santa::generate_instance(kind, players, resources, trial_seed);
        const santa::GapRow row = santa::run_gap_trial(instance, t, trial_seed);
        if (row.gap) {
            if (!max_gap || *row.gap > *max_gap) {
                max_gap = *row.gap;
            }
        } else {
            ++degenerate;
        }
        rows.push_back(santa::gap_row_to_json(row));
    }
    santa::io::json summary{{"trials", trials},
                            {"degenerate", degenerate},
                            {"max_gap", max_gap ? santa::io::rational_to_json(*max_gap) : santa::io::json(nullptr)},
                            {"bound", "23/6"}};
    emit({{"kind", santa::generator_kind_name(kind)}, {"rows", rows}, {"summary", summary}}, out_path);
    return kExitAllocated;
}

int run_verify(const std::string& instance_path, const std::string& allocation_path, const std::string& threshold)
{
    const santa::Instance instance = santa::io::instance_from_json(santa::io::read_json_file(instance_path));
    const santa::Allocation allocation =
        santa::io::allocation_from_json(instance, santa::io::read_json_file(allocation_path));
    const santa::Rational bar = santa::parse_rational(threshold);
    const santa::Rational min_value = santa::oracle::verify_allocation(instance, allocation);
    const bool pass = min_value >= bar;
    std::cout << santa::io::json{{"min_value", santa::io::rational_to_json(min_value)},
                                 {"threshold", santa::io::rational_to_json(bar)},
                                 {"pass", pass}}
                     .dump(2)
              << "\n";
    return pass ? kExitAllocated : kExitBelowThreshold;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Restricted max-min fair allocation: configuration LP, local-search matching, dual certificates"};
    app.require_subcommand(1);

    std::string instance_path;
    std::string allocation_path;
    std::string target = "auto";
    std::string delta = "1/1000";
    std::string trace_path;
    std::string out_path;
    std::string threshold = "0";
    std::string kind_name = "uniform";
    std::uint64_t seed = 1;
    std::uint64_t budget = std::uint64_t{1} << 20;
    std::size_t trials = 10;
    std::size_t players = 4;
    std::size_t resources = 8;
    bool random_policy = false;

    auto* solve = app.add_subcommand("solve", "compute T*, then an allocation or an infeasibility certificate");
    solve->add_option("--instance", instance_path, "instance JSON")->required();
    solve->add_option("--target", target, "auto or a rational");
    solve->add_option("--delta", delta, "bisection accuracy when exact T* is over budget, or none");
    solve->add_option("--trace", trace_path, "write one JSON line per search step");
    solve->add_option("--out", out_path, "write the allocation JSON here");
    solve->add_option("--budget", budget, "subset-sum enumeration budget for exact T*");
    solve->add_flag("--random-policy", random_policy, "pick addable edges at random (seeded by --seed)");
    solve->add_option("--seed", seed, "seed for --random-policy");

    auto* gap = app.add_subcommand("gap", "integrality-gap experiment on generated instances");
    gap->add_option("--kind", kind_name, "uniform | fat-thin-mix | clustered-desire");
    gap->add_option("--players", players, "players per instance");
    gap->add_option("--resources", resources, "resources per instance");
    gap->add_option("--trials", trials, "number of trials");
    gap->add_option("--seed", seed, "seed of the first trial (trial i uses seed + i)");
    gap->add_option("--out", out_path, "write the table here instead of stdout");

    auto* gen = app.add_subcommand("gen", "generate an instance");
    gen->add_option("--kind", kind_name, "uniform | fat-thin-mix | clustered-desire");
    gen->add_option("--players", players, "player count");
    gen->add_option("--resources", resources, "resource count");
    gen->add_option("--seed", seed, "generator seed");
    gen->add_option("--out", out_path, "write the instance here instead of stdout");

    auto* verify = app.add_subcommand("verify", "check an allocation and report its minimum value");
    verify->add_option("--instance", instance_path, "instance JSON")->required();
    verify->add_option("--allocation", allocation_path, "allocation JSON")->required();
    verify->add_option("--threshold", threshold, "pass iff the minimum value reaches this");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try {
        if (*solve) {
            return run_solve(instance_path, target, delta, trace_path, out_path, budget, random_policy, seed);
        }
        if (*gap) {
            return run_gap(santa::parse_generator_kind(kind_name), players, resources, trials, seed, out_path);
        }
        if (*gen) {
            const santa::Instance instance = santa::generate_instance(santa::parse_generator_kind(kind_name), players, resources, seed);
            emit(santa::io::instance_to_json(instance), out_path);
            return kExitAllocated;
        }
        if (*verify) {
            return run_verify(instance_path, allocation_path, threshold);
        }
    } catch (const santa::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == santa::ErrorCode::BudgetExceeded ? kExitBudget : kExitInput;
    }
    return kExitInput;
}
