#pragma once

#include "santa/core.hpp"
#include "santa/generate.hpp"
#include "santa/rational.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace santa::testing {

inline Rational q(const char* text)
{
    return parse_rational(text);
}

/// Builds an instance from (id, value) pairs and per-player desire lists.
inline Instance make_instance(std::vector<std::string> players,
                              std::vector<std::pair<std::string, Rational>> resources,
                              std::map<std::string, std::vector<std::string>> desires)
{
    return validate_instance(RawInstance{std::move(players), std::move(resources), std::move(desires)});
}

/// p1, p2 both desire a:1 and b:1.
inline Instance two_fat()
{
    return make_instance({"p1", "p2"}, {{"a", Rational(1)}, {"b", Rational(1)}},
                         {{"p1", {"a", "b"}}, {"p2", {"a", "b"}}});
}

/// p1, p2 both desire only r:1.
inline Instance shared_single()
{
    return make_instance({"p1", "p2"}, {{"r", Rational(1)}}, {{"p1", {"r"}}, {"p2", {"r"}}});
}

/// One player, ten resources of value 1/10.
inline Instance ten_thin()
{
    std::vector<std::pair<std::string, Rational>> resources;
    std::vector<std::string> all;
    for (int i = 1; i <= 10; ++i) {
        resources.emplace_back("r" + std::to_string(i), Rational(1, 10));
        all.push_back("r" + std::to_string(i));
    }
    return make_instance({"p1"}, resources, {{"p1", all}});
}

/// p1 desires t1..t4, p2 desires t1, t2; every value is 3/23.
inline Instance thin_chain()
{
    const Rational v(3, 23);
    return make_instance({"p1", "p2"}, {{"t1", v}, {"t2", v}, {"t3", v}, {"t4", v}},
                         {{"p1", {"t1", "t2", "t3", "t4"}}, {"p2", {"t1", "t2"}}});
}

/// Random small instance: m in [1, max_players], n in [1, max_resources],
/// any of the three generator kinds.
inline Instance random_instance(std::mt19937_64& rng, std::size_t max_players = 5, std::size_t max_resources = 10)
{
    const std::size_t m = std::uniform_int_distribution<std::size_t>(1, max_players)(rng);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, max_resources)(rng);
    const auto kind = static_cast<GeneratorKind>(std::uniform_int_distribution<int>(0, 2)(rng));
    return generate_instance(kind, m, n, rng());
}

} // namespace santa::testing
