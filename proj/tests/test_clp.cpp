#include "santa/clp.hpp"
#include "santa/oracle.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace santa;
using santa::testing::make_instance;
using santa::testing::q;

namespace {

Instance pricing_instance()
{
    return make_instance({"p1"}, {{"r1", q("1/2")}, {"r2", q("2/5")}, {"r3", q("3/10")}, {"r4", q("1/5")}},
                         {{"p1", {"r1", "r2", "r3", "r4"}}});
}

bool primal_feasible(const Instance& inst, const ClpVerdict& v)
{
    std::vector<Rational> player_load(inst.player_count());
    std::vector<Rational> resource_load(inst.resource_count());
    for (const auto& [col, x] : v.solution) {
        if (x < 0 || bundle_value(inst, col.player, col.bundle) < v.target) return false;
        player_load[col.player] += x;
        for (ResourceIndex r : col.bundle) resource_load[r] += x;
    }
    for (const auto& l : player_load) {
        if (l < 1) return false;
    }
    for (const auto& l : resource_load) {
        if (l > 1) return false;
    }
    return true;
}

} // namespace

TEST(Pricing, WorkedExample)
{
    const Instance inst = pricing_instance();
    const std::vector<Rational> prices{q("1/10"), q("1/20"), q("1/5"), Rational(0)};
    const auto best = min_cost_configuration(inst, 0, prices, Rational(1));
    ASSERT_TRUE(best);
    EXPECT_EQ(best->cost, q("3/20"));
    EXPECT_EQ(best->bundle, (ResourceSet{0, 1, 3}));
    const auto brute = santa::testing::brute_min_cost(inst, 0, prices, Rational(1));
    ASSERT_TRUE(brute);
    EXPECT_EQ(brute->cost, best->cost);
    EXPECT_EQ(brute->bundle, best->bundle);
}

TEST(Pricing, ZeroTargetTakesEmptyBundle)
{
    const Instance inst = pricing_instance();
    const auto best = min_cost_configuration(inst, 0, {Rational(1), Rational(2), Rational(3), Rational(4)}, Rational(0));
    ASSERT_TRUE(best);
    EXPECT_EQ(best->cost, Rational(0));
    EXPECT_TRUE(best->bundle.empty());
}

TEST(Pricing, NoConfiguration)
{
    const Instance inst = make_instance({"p1"}, {{"a", q("1/2")}, {"b", q("1/4")}}, {{"p1", {"a", "b"}}});
    EXPECT_FALSE(min_cost_configuration(inst, 0, {Rational(0), Rational(0)}, Rational(1)));
}

TEST(Pricing, Errors)
{
    const Instance inst = pricing_instance();
    auto code = [&](auto&& f) {
        try {
            f();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::InvalidArgument;
    };
    const std::vector<Rational> ok(4, Rational(0));
    EXPECT_EQ(code([&] { min_cost_configuration(inst, 0, {Rational(-1), 0, 0, 0}, Rational(1)); }), ErrorCode::NegativePrice);
    EXPECT_EQ(code([&] { min_cost_configuration(inst, 0, {Rational(0)}, Rational(1)); }), ErrorCode::DimensionMismatch);
    EXPECT_EQ(code([&] { min_cost_configuration(inst, 5, ok, Rational(1)); }), ErrorCode::UnknownPlayer);
    EXPECT_EQ(code([&] { min_cost_configuration(inst, 0, ok, Rational(-1)); }), ErrorCode::InvalidTarget);
}

TEST(Pricing, AgreesWithSubsetEnumeration)
{
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 300; ++trial) {
        const Instance inst = santa::testing::random_instance(rng, 3, 10);
        std::vector<Rational> prices;
        for (ResourceIndex r = 0; r < inst.resource_count(); ++r) {
            // Small grid so that ties between bundles are common.
            prices.emplace_back(static_cast<long>(rng() % 4), 4);
        }
        const Rational target(static_cast<long>(rng() % 30), 20);
        for (PlayerIndex p = 0; p < inst.player_count(); ++p) {
            const auto got = min_cost_configuration(inst, p, prices, target);
            const auto want = santa::testing::brute_min_cost(inst, p, prices, target);
            ASSERT_EQ(got.has_value(), want.has_value());
            if (got) {
                EXPECT_EQ(got->cost, want->cost);
                EXPECT_EQ(got->bundle, want->bundle);
            }
        }
    }
}

TEST(Clp, TwoFatFeasibleAtOne)
{
    const Instance inst = santa::testing::two_fat();
    const ClpVerdict v = clp_feasible(inst, Rational(1));
    ASSERT_EQ(v.status, ClpStatus::Feasible);
    EXPECT_TRUE(primal_feasible(inst, v));
    EXPECT_EQ(v.shortfall, Rational(0));
}

TEST(Clp, TwoFatInfeasibleAtThreeHalves)
{
    const Instance inst = santa::testing::two_fat();
    const ClpVerdict v = clp_feasible(inst, q("3/2"));
    ASSERT_EQ(v.status, ClpStatus::Infeasible);
    ASSERT_TRUE(v.prices);
    EXPECT_TRUE(dual_prices_feasible(inst, *v.prices, q("3/2")));
    EXPECT_GT(v.prices->objective(), 0);

    const DualPrices hand{{Rational(1), Rational(1)}, {q("1/2"), q("1/2")}};
    EXPECT_TRUE(dual_prices_feasible(inst, hand, q("3/2")));
    EXPECT_EQ(hand.objective(), Rational(1));
    const DualPrices bad{{Rational(1), Rational(1)}, {q("1/4"), q("1/2")}};
    EXPECT_FALSE(dual_prices_feasible(inst, bad, q("3/2")));
}

TEST(Clp, ZeroTargetAlwaysFeasible)
{
    EXPECT_EQ(clp_feasible(santa::testing::shared_single(), Rational(0)).status, ClpStatus::Feasible);
    EXPECT_EQ(clp_feasible(santa::testing::two_fat(), Rational(0)).status, ClpStatus::Feasible);
}

TEST(Clp, TranscriptListsColumns)
{
    const Instance inst = santa::testing::two_fat();
    const ClpVerdict v = clp_feasible(inst, Rational(1));
    ASSERT_GE(v.transcript.size(), 2u);
    EXPECT_FALSE(v.transcript.front().added.empty());
    EXPECT_TRUE(v.transcript.back().added.empty());
    EXPECT_FALSE(format_transcript(inst, v.transcript).empty());
}

TEST(TStar, Examples)
{
    EXPECT_EQ(compute_t_star(santa::testing::two_fat(), ExactMode{}).value, Rational(1));
    EXPECT_EQ(compute_t_star(santa::testing::ten_thin(), ExactMode{}).value, Rational(1));
    EXPECT_EQ(compute_t_star(santa::testing::shared_single(), ExactMode{}).value, Rational(0));
    EXPECT_EQ(configuration_breakpoints(santa::testing::two_fat(), 1 << 10),
              (std::vector<Rational>{Rational(0), Rational(1), Rational(2)}));
}

TEST(TStar, BudgetExceeded)
{
    try {
        compute_t_star(santa::testing::ten_thin(), ExactMode{100});
        FAIL() << "expected BudgetExceeded";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BudgetExceeded);
    }
}

TEST(TStar, BisectBracketsExactValue)
{
    std::mt19937_64 rng(31);
    const Rational delta(1, 64);
    for (int trial = 0; trial < 40; ++trial) {
        const Instance inst = santa::testing::random_instance(rng, 3, 6);
        const Rational exact = compute_t_star(inst, ExactMode{}).value;
        const TStarResult b = compute_t_star(inst, BisectMode{delta});
        EXPECT_FALSE(b.exact);
        EXPECT_LE(b.value, exact);
        EXPECT_LT(exact, b.value + delta);
        EXPECT_EQ(clp_feasible(inst, b.value).status, ClpStatus::Feasible);
    }
}

TEST(TStar, MatchesEnumerationOracle)
{
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 150; ++trial) {
        const Instance inst = santa::testing::random_instance(rng, 4, 8);
        if (subset_sum_count(inst, 4096) > 4096) continue;
        EXPECT_EQ(compute_t_star(inst, ExactMode{}).value, oracle::exact_t_star_enumerated(inst));
    }
}

TEST(ClpProperties, AntiMonotoneAndCertified)
{
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 60; ++trial) {
        const Instance inst = santa::testing::random_instance(rng, 4, 8);
        const Rational t_star = compute_t_star(inst, ExactMode{}).value;
        for (long k = 0; k <= 8; ++k) {
            const Rational t(k, 4);
            const ClpVerdict v = clp_feasible(inst, t);
            EXPECT_EQ(v.status == ClpStatus::Feasible, t <= t_star);
            if (v.status == ClpStatus::Feasible) {
                EXPECT_TRUE(primal_feasible(inst, v));
            } else {
                ASSERT_TRUE(v.prices);
                EXPECT_TRUE(dual_prices_feasible(inst, *v.prices, t));
                EXPECT_GT(v.prices->objective(), 0);
            }
        }
    }
}

TEST(ClpProperties, ScalingCovariance)
{
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 40; ++trial) {
        const Instance inst = santa::testing::random_instance(rng, 4, 7);
        const Rational c(static_cast<long>(rng() % 9 + 1), static_cast<long>(rng() % 5 + 1));
        EXPECT_EQ(compute_t_star(inst.scaled(c), ExactMode{}).value, c * compute_t_star(inst, ExactMode{}).value);
    }
}
