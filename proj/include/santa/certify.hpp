#pragma once

#include "santa/clp.hpp"
#include "santa/core.hpp"
#include "santa/error.hpp"
#include "santa/matching.hpp"
#include "santa/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace santa {

/// 1 - 4*lambda/3 = 15/23: the price of an active player and of a covered fat resource.
inline Rational active_price()
{
    return Rational(1) - Rational(4, 3) * lambda();
}

/// 5*lambda/6 = 5/23: cap on the price of a covered thin resource.
inline Rational thin_price_cap()
{
    return Rational(5, 6) * lambda();
}

struct BlockerGroup {
    /// Players activated by the blocker (covered by its Y).
    std::vector<PlayerIndex> players;
    /// Resources covered by x together with Y.
    ResourceSet resources;
};

/// Dual solution of the normalized configuration LP built from a stuck
/// search state: y = 15/23 on active players; z = 15/23 on covered fat
/// resources, min(v, 5/23) on covered thin ones, 0 elsewhere.
struct DualCertificate {
    std::vector<Rational> y;
    std::vector<Rational> z;
    Rational objective;
    std::vector<BlockerGroup> groups;

    [[nodiscard]] DualCertificate scaled(const Rational& alpha) const
    {
        DualCertificate out = *this;
        for (auto& v : out.y) v *= alpha;
        for (auto& v : out.z) v *= alpha;
        out.objective *= alpha;
        return out;
    }
};

/// Neither a removable blocker nor an addable edge.
inline bool is_stuck(const NormalizedInstance& ni, const SearchState& state)
{
    const bool removable = std::any_of(state.blockers.begin(), state.blockers.end(),
                                       [](const Blocker& b) { return b.removable(); });
    return !removable && !find_addable_edge(ni, state);
}

inline DualCertificate construct_dual_certificate(const NormalizedInstance& ni, const SearchState& state)
{
    if (!is_stuck(ni, state)) {
        throw Error(ErrorCode::NotStuck, "a removable blocker or an addable edge still exists");
    }
    DualCertificate cert;
    cert.y.assign(ni.player_count(), Rational(0));
    cert.z.assign(ni.resource_count(), Rational(0));
    for (PlayerIndex p : state.active) {
        cert.y[p] = active_price();
    }
    for (ResourceIndex r = 0; r < ni.resource_count(); ++r) {
        if (!state.covered[r]) {
            continue;
        }
        cert.z[r] = ni.is_fat(r) ? active_price() : std::min(ni.value(r), thin_price_cap());
    }
    cert.objective = 0;
    for (const auto& v : cert.y) cert.objective += v;
    for (const auto& v : cert.z) cert.objective -= v;

    for (const auto& b : state.blockers) {
        BlockerGroup g;
        g.resources = b.x.bundle;
        for (const auto& e : b.blocking) {
            g.players.push_back(e.player);
            g.resources.insert(g.resources.end(), e.bundle.begin(), e.bundle.end());
        }
        std::sort(g.resources.begin(), g.resources.end());
        g.resources.erase(std::unique(g.resources.begin(), g.resources.end()), g.resources.end());
        cert.groups.push_back(std::move(g));
    }
    return cert;
}

struct PlayerMargin {
    PlayerIndex player = 0;
    Rational y;
    /// Cheapest configuration price at target 1; nullopt when the player has none.
    std::optional<Rational> min_cost;
    std::optional<Rational> margin;
};

struct FeasibilityReport {
    bool passed = true;
    std::vector<PlayerMargin> margins;
    std::vector<std::string> failures;
};

/// Checks y_p <= sum_{r in C} z_r for every player and every configuration C
/// of normalized value >= 1 by exact minimization over C.
inline FeasibilityReport verify_certificate_feasibility(const NormalizedInstance& ni, const DualCertificate& cert)
{
    FeasibilityReport report;
    if (cert.y.size() != ni.player_count() || cert.z.size() != ni.resource_count()) {
        report.passed = false;
        report.failures.emplace_back("certificate dimensions do not match the instance");
        return report;
    }
    for (std::size_t i = 0; i < cert.y.size(); ++i) {
        if (cert.y[i] < 0) {
            report.passed = false;
            report.failures.push_back("y of " + ni.base().player_id(i) + " is negative");
        }
    }
    for (std::size_t i = 0; i < cert.z.size(); ++i) {
        if (cert.z[i] < 0) {
            report.passed = false;
            report.failures.push_back("z of " + ni.base().resource_id(i) + " is negative");
        }
    }
    if (!report.passed) {
        return report;
    }
    for (PlayerIndex p = 0; p < ni.player_count(); ++p) {
        PlayerMargin pm{p, cert.y[p], std::nullopt, std::nullopt};
        if (auto cheapest = min_cost_configuration(ni.base(), p, cert.z, Rational(1))) {
            pm.min_cost = cheapest->cost;
            pm.margin = cheapest->cost - cert.y[p];
            if (*pm.margin < 0) {
                report.passed = false;
                report.failures.push_back("player " + ni.base().player_id(p) + " has margin " + to_string(*pm.margin));
            }
        }
        report.margins.push_back(std::move(pm));
    }
    return report;
}

struct BlockerBalance {
    /// 1-based blocker index.
    std::size_t index = 0;
    std::string accounting_case;
    Rational player_sum;
    Rational resource_sum;
    Rational balance;
};

struct BalanceReport {
    bool passed = true;
    std::vector<BlockerBalance> balances;
    Rational p0_price;
    Rational objective;
    std::vector<std::string> failures;
};

/// Per-blocker accounting: sum of y over the players a blocker activates
/// must cover sum of z over the resources of x and Y; the objective must
/// equal y(p0) plus all balances and be at least y(p0) > 0.
inline BalanceReport check_blocker_balances(const NormalizedInstance& ni, const SearchState& state,
                                            const DualCertificate& cert)
{
    BalanceReport report;
    auto fail = [&](std::string why) {
        report.passed = false;
        report.failures.push_back(std::move(why));
    };
    if (cert.groups.size() != state.blockers.size()) {
        fail("certificate groups do not match the blocker sequence");
        return report;
    }

    std::vector<bool> seen_player(ni.player_count(), false);
    std::vector<bool> seen_resource(ni.resource_count(), false);
    Rational balance_total = 0;
    for (std::size_t i = 0; i < state.blockers.size(); ++i) {
        const Blocker& b = state.blockers[i];
        const BlockerGroup& g = cert.groups[i];
        BlockerBalance bal;
        bal.index = i + 1;
        if (b.x.kind == EdgeKind::Fat) {
            bal.accounting_case = "fat";
        } else if (b.blocking.size() >= 2) {
            bal.accounting_case = "thin, |Y| >= 2";
        } else {
            bal.accounting_case = "thin, |Y| = 1";
        }
        for (PlayerIndex p : g.players) {
            if (seen_player[p]) {
                fail("player " + ni.base().player_id(p) + " appears in two blocker groups");
            }
            seen_player[p] = true;
            bal.player_sum += cert.y[p];
        }
        for (ResourceIndex r : g.resources) {
            if (seen_resource[r]) {
                fail("resource " + ni.base().resource_id(r) + " appears in two blocker groups");
            }
            seen_resource[r] = true;
            bal.resource_sum += cert.z[r];
        }
        bal.balance = bal.player_sum - bal.resource_sum;
        if (bal.balance < 0) {
            fail("blocker " + std::to_string(i + 1) + " (" + bal.accounting_case + ") has balance " + to_string(bal.balance));
        }
        balance_total += bal.balance;
        report.balances.push_back(std::move(bal));
    }

    report.p0_price = cert.y.at(state.p0);
    report.objective = cert.objective;
    if (cert.objective != report.p0_price + balance_total) {
        fail("objective " + to_string(cert.objective) + " differs from y(p0) + balances = "
             + to_string(report.p0_price + balance_total));
    }
    if (report.p0_price != active_price()) {
        fail("y(p0) is " + to_string(report.p0_price) + ", expected 15/23");
    }
    if (cert.objective < report.p0_price || cert.objective <= 0) {
        fail("objective " + to_string(cert.objective) + " is below y(p0)");
    }
    return report;
}

} // namespace santa
