// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include "santa/santa.hpp"
#include "support/fixtures.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace santa;

namespace {

constexpr std::size_t kCorpusSize = 500;
constexpr std::size_t kStuckCases = 100;
constexpr std::uint64_t kEnumerationBudget = 4096;

struct Tally {
    std::size_t checked = 0;
    std::vector<std::string> failures;

    void fail(std::string why)
    {
        if (failures.size() < 5) failures.push_back(std::move(why));
        else if (failures.size() == 5) failures.push_back("...");
    }
    [[nodiscard]] bool ok() const { return failures.empty(); }
};

bool report(int id, const std::string& what, bool ok, const std::string& detail, const std::vector<std::string>& failures = {})
{
    std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << id << ": " << what << " (" << detail << ")\n";
    for (const auto& f : failures) std::cout << "      " << f << "\n";
    return ok;
}

std::string label(std::size_t index, const Instance& inst)
{
    return "instance #" + std::to_string(index) + " m=" + std::to_string(inst.player_count())
        + " n=" + std::to_string(inst.resource_count());
}

// Values on the 1/20 grid, m <= 5, n <= 10, T* > 0.
std::vector<Instance> build_corpus(std::size_t& zero_t_star)
{
    std::mt19937_64 rng(20260101);
    std::vector<Instance> corpus;
    zero_t_star = 0;
    while (corpus.size() < kCorpusSize) {
        const std::size_t m = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 10)(rng);
        const auto kind = rng() % 2 ? GeneratorKind::Uniform : GeneratorKind::ClusteredDesire;
        Instance inst = generate_instance(kind, m, n, rng());
        if (compute_t_star(inst, ExactMode{}).value == 0) {
            ++zero_t_star;
            continue;
        }
        corpus.push_back(std::move(inst));
    }
    return corpus;
}

/// Observer that audits every step and records each run's signatures.
struct Monitor {
    const NormalizedInstance* ni = nullptr;
    Tally* invariants = nullptr;
    std::string where;
    std::vector<std::vector<Signature>> runs;
    std::size_t steps = 0;

    SearchOptions options(AddablePolicy policy = {})
    {
        SearchOptions o;
        o.policy = policy;
        o.debug_recompute = true;
        o.observer = [this](const TraceEvent& ev, const SearchState& s) {
            ++steps;
            // After Terminate p0 is matched and there is no search state left to audit.
            if (ev.kind == StepKind::Terminate) return;
            ++invariants->checked;
            const oracle::AuditReport audit = oracle::check_state_invariants(*ni, s);
            if (!audit.passed()) {
                invariants->fail(where + " step " + std::to_string(ev.step) + ": " + audit.violations.front().invariant
                                 + " " + audit.violations.front().detail);
            }
            if (runs.size() <= ev.run) runs.resize(ev.run + 1, {Signature{}});
            if (ev.kind == StepKind::Build || ev.kind == StepKind::Contract) runs[ev.run].push_back(ev.signature);
        };
        return o;
    }

    void check_signatures(std::size_t players, Tally& termination) const
    {
        const std::uint64_t bound = signature_count_bound(players);
        for (const auto& run : runs) {
            ++termination.checked;
            const oracle::AuditReport audit = oracle::monitor_signatures(run, players);
            if (!audit.passed()) {
                termination.fail(where + ": " + audit.violations.front().detail);
            }
            const std::set<std::vector<std::size_t>> distinct = [&] {
                std::set<std::vector<std::size_t>> s;
                for (const auto& sig : run) s.insert(sig.finite);
                return s;
            }();
            if (distinct.size() > bound) {
                termination.fail(where + ": " + std::to_string(distinct.size()) + " signatures > bound "
                                 + std::to_string(bound));
            }
        }
    }
};

bool criterion_constants()
{
    const Rational l = lambda();
    const Rational active = 1 - 4 * l / 3;
    const bool ok = l == Rational(6, 23) && active == Rational(15, 23) && 3 * (5 * l / 6) == Rational(15, 23)
        && 5 * l / 2 == Rational(15, 23) && 2 * l <= active && active_price() == active
        && thin_price_cap() == 5 * l / 6;
    return report(1, "constants 1-4l/3 = 3(5l/6) = 5l/2 = 15/23, 2l <= 15/23", ok, "lambda = " + to_string(l));
}

/// Three players, resources a, b, c of value 1; M = {(p1,a), (p2,b)}, p0 = p3,
/// after building (p3,a) then (p1,b).
struct PlantedState {
    Instance inst = santa::testing::make_instance(
        {"p1", "p2", "p3"}, {{"a", Rational(1)}, {"b", Rational(1)}, {"c", Rational(1)}},
        {{"p1", {"a", "b"}}, {"p2", {"b"}}, {"p3", {"a", "c"}}});
    NormalizedInstance ni = normalize(inst, Rational(1));
    SearchState state;

    PlantedState()
    {
        Matching m(3, 3);
        m.insert({0, {0}, EdgeKind::Fat});
        m.insert({1, {1}, EdgeKind::Fat});
        state = start_search(std::move(m), 2);
        build_step(state, {2, {0}, EdgeKind::Fat});
        build_step(state, {0, {1}, EdgeKind::Fat});
    }

    bool detects(const std::string& invariant) const
    {
        for (const auto& v : oracle::check_state_invariants(ni, state).violations) {
            if (v.invariant == invariant) return true;
        }
        return false;
    }
};

std::size_t planted_detections()
{
    std::size_t found = 0;
    {
        PlantedState f;
        f.state.blockers[1].blocking.push_back(f.state.blockers[0].blocking.front());
        found += f.detects("y-disjoint");
    }
    {
        PlantedState f;
        f.state.blockers[1].x = {0, {0}, EdgeKind::Fat};
        found += f.detects("x-disjoint");
    }
    {
        PlantedState f;
        f.state.blockers[0].blocking.clear();
        found += f.detects("y-blocks-x");
    }
    return found;
}

struct ExpectedEvent {
    StepKind kind;
    std::string player;
    std::vector<std::string> bundle;
    std::size_t blocker;
    std::size_t activating;
    std::string signature;
};

std::string describe(const Instance& inst, const TraceEvent& ev)
{
    std::ostringstream os;
    os << step_kind_name(ev.kind);
    if (ev.edge) {
        os << " " << inst.player_id(ev.edge->player) << "{";
        for (std::size_t i = 0; i < ev.edge->bundle.size(); ++i) {
            os << (i ? "," : "") << inst.resource_id(ev.edge->bundle[i]);
        }
        os << "}";
    }
    os << " k=" << ev.blocker << " j=" << ev.activating << " " << ev.signature.to_string();
    return os.str();
}

std::string describe(const ExpectedEvent& e)
{
    std::ostringstream os;
    os << step_kind_name(e.kind);
    if (!e.player.empty()) {
        os << " " << e.player << "{";
        for (std::size_t i = 0; i < e.bundle.size(); ++i) os << (i ? "," : "") << e.bundle[i];
        os << "}";
    }
    os << " k=" << e.blocker << " j=" << e.activating << " " << e.signature;
    return os.str();
}

/// Runs extend_matching from `matched` and compares every step with `expected`.
bool trace_matches(const Instance& inst, const std::vector<Edge>& matched, PlayerIndex p0,
                   const std::vector<ExpectedEvent>& expected, std::vector<std::string>& failures,
                   std::optional<ExtendResult>* keep = nullptr)
{
    const NormalizedInstance ni = normalize(inst, Rational(1));
    Matching m(inst.player_count(), inst.resource_count());
    for (const auto& e : matched) m.insert(e);
    std::vector<std::string> got;
    SearchOptions options;
    options.observer = [&](const TraceEvent& ev, const SearchState&) { got.push_back(describe(inst, ev)); };
    ExtendResult result = extend_matching(ni, std::move(m), p0, options);
    std::vector<std::string> want;
    for (const auto& e : expected) want.push_back(describe(e));
    if (got != want) {
        std::string g;
        for (const auto& s : got) g += "[" + s + "] ";
        failures.push_back("got " + g);
        return false;
    }
    if (keep) keep->emplace(std::move(result));
    return true;
}

bool criterion_micro_traces()
{
    std::vector<std::string> failures;
    std::size_t passed = 0;

    // Two-player fat extension.
    passed += trace_matches(santa::testing::two_fat(), {{0, {0}, EdgeKind::Fat}}, 1,
                            {{StepKind::Build, "p2", {"b"}, 1, 0, "(0, inf)"},
                             {StepKind::Terminate, "p2", {"b"}, 1, 0, "(inf)"}},
                            failures);

    // Two-player thin chain with one truncating contract.
    passed += trace_matches(santa::testing::thin_chain(), {{0, {0, 1}, EdgeKind::Thin}}, 1,
                            {{StepKind::Build, "p2", {"t1", "t2"}, 1, 0, "(1, inf)"},
                             {StepKind::Build, "p1", {"t3", "t4"}, 2, 0, "(1, 0, inf)"},
                             {StepKind::Contract, "p1", {"t3", "t4"}, 2, 1, "(0, inf)"},
                             {StepKind::Terminate, "p2", {"t1", "t2"}, 1, 0, "(inf)"}},
                            failures);

    // Shared single resource: stuck, then the 15/23 certificate.
    std::optional<ExtendResult> stuck;
    const Instance shared = santa::testing::shared_single();
    if (trace_matches(shared, {{0, {0}, EdgeKind::Fat}}, 1,
                      {{StepKind::Build, "p2", {"r"}, 1, 0, "(1, inf)"}, {StepKind::Stuck, "", {}, 0, 0, "(1, inf)"}},
                      failures, &stuck)) {
        const NormalizedInstance ni = normalize(shared, Rational(1));
        const SearchState& state = std::get<Stuck>(stuck->outcome).state;
        const DualCertificate cert = construct_dual_certificate(ni, state);
        const Rational p(15, 23);
        if (cert.y == std::vector<Rational>{p, p} && cert.z == std::vector<Rational>{p} && cert.objective == p
            && verify_certificate_feasibility(ni, cert).passed && check_blocker_balances(ni, state, cert).passed) {
            ++passed;
        } else {
            failures.push_back("stuck certificate differs from y = (15/23, 15/23), z_r = 15/23");
        }
    }
    return report(8, "worked micro-traces reproduce exactly", passed == 3, std::to_string(passed) + "/3 traces", failures);
}

} // namespace

int main()
{
    const auto started = std::chrono::steady_clock::now();
    bool all = criterion_constants();

    std::size_t zero_t_star = 0;
    const std::vector<Instance> corpus = build_corpus(zero_t_star);

    Tally pipeline;     // 2
    Tally never_stuck;  // 3
    Tally certificates; // 4
    Tally invariants;   // 5
    Tally termination;  // 6
    Tally agreement;    // 7
    std::size_t tractable = 0;
    std::size_t positive_opt = 0;
    Rational max_gap = 0;
    std::size_t max_run_steps = 0;

    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const Instance& inst = corpus[i];
        const std::string where = label(i, inst);
        const Rational t_star = compute_t_star(inst, ExactMode{}).value;

        // 2, 3, 5, 6: full pipeline at T*, audited step by step.
        {
            Monitor mon;
            const NormalizedInstance ni = normalize(inst, t_star);
            mon.ni = &ni;
            mon.invariants = &invariants;
            mon.where = where + " target T*";
            SolveOptions options;
            options.search = mon.options();
            const SolveResult r = solve_instance(inst, options);
            ++pipeline.checked;
            ++never_stuck.checked;
            if (r.report.outcome != SolveOutcome::Allocated || !r.allocation) {
                pipeline.fail(where + ": not Allocated at T* = " + to_string(t_star));
                never_stuck.fail(where + ": Stuck at target T* = " + to_string(t_star));
            } else {
                const Rational min_value = oracle::verify_allocation(inst, *r.allocation);
                if (min_value < lambda() * t_star) {
                    pipeline.fail(where + ": min value " + to_string(min_value) + " < (6/23) T*");
                }
            }
            mon.check_signatures(inst.player_count(), termination);
        }

        // 3, 5, 6: targets below T* and the randomized policy.
        for (int variant = 0; variant < 2; ++variant) {
            const Rational target = variant == 0 ? Rational(t_star / 2) : t_star;
            const NormalizedInstance ni = normalize(inst, target);
            Monitor mon;
            mon.ni = &ni;
            mon.invariants = &invariants;
            mon.where = where + (variant == 0 ? " target T*/2" : " randomized");
            const AddablePolicy policy = variant == 0 ? AddablePolicy{}
                                                      : AddablePolicy{AddablePolicy::Kind::Randomized, 1000 + i};
            const PerfectResult r = find_perfect_matching(ni, mon.options(policy));
            ++never_stuck.checked;
            if (!r.perfect()) {
                never_stuck.fail(mon.where + ": Stuck at target " + to_string(target) + " <= T*");
            }
            max_run_steps = std::max(max_run_steps, r.max_run_steps);
            mon.check_signatures(inst.player_count(), termination);
        }

        // 7: oracle agreement.
        const bool is_tractable = subset_sum_count(inst, kEnumerationBudget) <= kEnumerationBudget;
        ++agreement.checked;
        if (is_tractable) {
            ++tractable;
            const Rational enumerated = oracle::exact_t_star_enumerated(inst, kEnumerationBudget);
            if (enumerated != t_star) {
                agreement.fail(where + ": T* " + to_string(t_star) + " vs enumerated " + to_string(enumerated));
            }
        }
        const Rational opt = oracle::brute_force_opt(inst);
        if (opt > t_star) {
            agreement.fail(where + ": OPT " + to_string(opt) + " > T* " + to_string(t_star));
        }
        if (opt > 0) {
            ++positive_opt;
            const Rational gap = t_star / opt;
            max_gap = std::max(max_gap, gap);
            if (gap > Rational(23, 6)) {
                agreement.fail(where + ": gap " + to_string(gap) + " > 23/6");
            }
        }

        // 4: certificates above T*, escalating the target until the search gets stuck.
        if (certificates.checked < kStuckCases && is_tractable) {
            const Rational enumerated = oracle::exact_t_star_enumerated(inst, kEnumerationBudget);
            for (const Rational& target : {Rational(t_star + Rational(1, 10)), Rational(2 * t_star), Rational(3 * t_star),
                                           Rational(t_star + 2)}) {
                const NormalizedInstance ni = normalize(inst, target);
                Monitor mon;
                mon.ni = &ni;
                mon.invariants = &invariants;
                mon.where = where + " target " + to_string(target);
                PerfectResult r = find_perfect_matching(ni, mon.options());
                mon.check_signatures(inst.player_count(), termination);
                if (r.perfect()) continue;
                ++certificates.checked;
                const SearchState& state = std::get<Stuck>(r.outcome).state;
                const DualCertificate cert = construct_dual_certificate(ni, state);
                if (!verify_certificate_feasibility(ni, cert).passed) {
                    certificates.fail(mon.where + ": certificate infeasible");
                }
                if (!check_blocker_balances(ni, state, cert).passed) {
                    certificates.fail(mon.where + ": blocker balances fail");
                }
                if (cert.objective < active_price()) {
                    certificates.fail(mon.where + ": objective " + to_string(cert.objective) + " < 15/23");
                }
                if (!(target > enumerated)) {
                    certificates.fail(mon.where + ": stuck although enumerated T* = " + to_string(enumerated));
                }
                break;
            }
        }
    }
    if (certificates.checked < kStuckCases) {
        certificates.fail("only " + std::to_string(certificates.checked) + " stuck cases found");
    }

    all &= report(2, "pipeline at T* is Allocated with min value >= (6/23) T*", pipeline.ok(),
                  std::to_string(pipeline.checked) + " instances, " + std::to_string(zero_t_star) + " with T* = 0 skipped",
                  pipeline.failures);
    all &= report(3, "never stuck at target <= T*", never_stuck.ok(),
                  std::to_string(never_stuck.checked) + " searches at T*, T*/2 and randomized", never_stuck.failures);
    all &= report(4, "stuck states yield verified certificates with objective >= 15/23", certificates.ok(),
                  std::to_string(certificates.checked) + " stuck cases", certificates.failures);
    const std::size_t planted = planted_detections();
    if (planted != 3) invariants.fail(std::to_string(planted) + "/3 planted violations detected");
    all &= report(5, "state invariants hold after every step; planted violations detected", invariants.ok(),
                  std::to_string(invariants.checked) + " audited steps, " + std::to_string(planted) + "/3 planted",
                  invariants.failures);
    all &= report(6, "signatures strictly decrease, sum <= m, within the count bound", termination.ok(),
                  std::to_string(termination.checked) + " runs, longest insertion " + std::to_string(max_run_steps)
                      + " steps",
                  termination.failures);
    all &= report(7, "T* equals the enumeration oracle; OPT <= T*; T*/OPT <= 23/6", agreement.ok(),
                  std::to_string(tractable) + " tractable of " + std::to_string(agreement.checked) + ", "
                      + std::to_string(positive_opt) + " with OPT > 0, max gap " + to_string(max_gap),
                  agreement.failures);
    all &= criterion_micro_traces();

    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::printf("%s in %.1f s\n", all ? "all criteria passed" : "some criteria failed", seconds);
    return all ? 0 : 1;
}
