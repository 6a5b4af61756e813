#pragma once

#include "santa/core.hpp"
#include "santa/error.hpp"
#include "santa/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace santa {

enum class GeneratorKind { Uniform, FatThinMix, ClusteredDesire };

inline GeneratorKind parse_generator_kind(std::string_view name)
{
    if (name == "uniform") return GeneratorKind::Uniform;
    if (name == "fat-thin-mix") return GeneratorKind::FatThinMix;
    if (name == "clustered-desire") return GeneratorKind::ClusteredDesire;
    throw Error(ErrorCode::InvalidArgument, "unknown generator kind '" + std::string(name) + "'");
}

inline const char* generator_kind_name(GeneratorKind k)
{
    switch (k) {
    case GeneratorKind::Uniform: return "uniform";
    case GeneratorKind::FatThinMix: return "fat-thin-mix";
    case GeneratorKind::ClusteredDesire: return "clustered-desire";
    }
    return "?";
}

/// Random instance, a pure function of (kind, players, resources, seed).
///
/// uniform: values k/20 for k in 1..20, each desire with probability 1/2.
/// fat-thin-mix: about a quarter of the resources worth 1, the rest 1/k for
/// k in 2..8, each desire with probability 1/2.
/// clustered-desire: players split into groups, each group owning a pool of
/// resources its members desire with probability 3/4; values as uniform.
/// Every player desires at least one resource.
inline Instance generate_instance(GeneratorKind kind, std::size_t players, std::size_t resources, std::uint64_t seed)
{
    if (players == 0 || resources == 0) {
        throw Error(ErrorCode::InvalidArgument, "player and resource counts must be at least 1");
    }
    std::mt19937_64 rng(seed);
    auto draw = [&](std::uint64_t lo, std::uint64_t hi) { return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng); };
    auto coin = [&](std::uint64_t num, std::uint64_t den) { return draw(1, den) <= num; };

    std::vector<std::string> player_ids;
    std::vector<std::string> resource_ids;
    for (std::size_t p = 0; p < players; ++p) player_ids.push_back("p" + std::to_string(p + 1));
    for (std::size_t r = 0; r < resources; ++r) resource_ids.push_back("r" + std::to_string(r + 1));

    std::vector<Rational> values(resources);
    std::vector<ResourceSet> desires(players);

    const std::size_t fat_count = (resources + 3) / 4;
    for (std::size_t r = 0; r < resources; ++r) {
        if (kind == GeneratorKind::FatThinMix) {
            values[r] = r < fat_count ? Rational(1) : Rational(1, static_cast<long>(draw(2, 8)));
        } else {
            values[r] = Rational(static_cast<long>(draw(1, 20)), 20);
        }
    }

    const std::size_t groups = kind == GeneratorKind::ClusteredDesire ? (players + 1) / 2 : 1;
    for (std::size_t p = 0; p < players; ++p) {
        const std::size_t group = p % groups;
        std::vector<ResourceIndex> pool;
        for (std::size_t r = 0; r < resources; ++r) {
            if (groups == 1 || r % groups == group) {
                pool.push_back(r);
            }
        }
        if (pool.empty()) {
            for (std::size_t r = 0; r < resources; ++r) pool.push_back(r);
        }
        // redraw until non-empty
        do {
            desires[p].clear();
            for (ResourceIndex r : pool) {
                const bool take = kind == GeneratorKind::ClusteredDesire ? coin(3, 4) : coin(1, 2);
                if (take) {
                    desires[p].push_back(r);
                }
            }
        } while (desires[p].empty());
    }
    return Instance(std::move(player_ids), std::move(resource_ids), std::move(values), std::move(desires));
}

} // namespace santa
