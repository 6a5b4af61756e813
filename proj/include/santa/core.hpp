#pragma once

#include "santa/error.hpp"
#include "santa/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace santa {

using PlayerIndex = std::size_t;
using ResourceIndex = std::size_t;

/// Sorted, duplicate-free list of resource indices.
using ResourceSet = std::vector<ResourceIndex>;

/// Untyped instance description as read from a file or built by hand.
struct RawInstance {
    std::vector<std::string> players;
    std::vector<std::pair<std::string, Rational>> resources;
    std::map<std::string, std::vector<std::string>> desires;
};

/// Restricted max-min allocation instance: resource r is worth value(r) to
/// every player desiring it and nothing to anyone else.
///
/// Ids keep their input order; that order is the tie-breaking order for
/// every deterministic choice made downstream.
class Instance {
public:
    Instance(std::vector<std::string> players, std::vector<std::string> resources, std::vector<Rational> values,
             std::vector<ResourceSet> desires)
        : players_(std::move(players))
        , resources_(std::move(resources))
        , values_(std::move(values))
        , desires_(std::move(desires))
    {
        if (players_.empty()) {
            throw Error(ErrorCode::EmptyPlayers, "instance has no players");
        }
        if (values_.size() != resources_.size() || desires_.size() != players_.size()) {
            throw Error(ErrorCode::DimensionMismatch, "instance tables disagree in size");
        }
        for (std::size_t p = 0; p < players_.size(); ++p) {
            if (!player_lookup_.emplace(players_[p], p).second) {
                throw Error(ErrorCode::DuplicateId, "player '" + players_[p] + "'");
            }
        }
        for (std::size_t r = 0; r < resources_.size(); ++r) {
            if (!resource_lookup_.emplace(resources_[r], r).second) {
                throw Error(ErrorCode::DuplicateId, "resource '" + resources_[r] + "'");
            }
            if (values_[r] < 0) {
                throw Error(ErrorCode::NegativeValue, "resource '" + resources_[r] + "' has value " + to_string(values_[r]));
            }
        }
        desire_matrix_.assign(players_.size(), std::vector<bool>(resources_.size(), false));
        for (std::size_t p = 0; p < desires_.size(); ++p) {
            auto& set = desires_[p];
            std::sort(set.begin(), set.end());
            set.erase(std::unique(set.begin(), set.end()), set.end());
            for (ResourceIndex r : set) {
                if (r >= resources_.size()) {
                    throw Error(ErrorCode::UnknownResource, "index " + std::to_string(r));
                }
                desire_matrix_[p][r] = true;
            }
        }
    }

    [[nodiscard]] std::size_t player_count() const noexcept { return players_.size(); }
    [[nodiscard]] std::size_t resource_count() const noexcept { return resources_.size(); }

    [[nodiscard]] const std::string& player_id(PlayerIndex p) const { return players_.at(p); }
    [[nodiscard]] const std::string& resource_id(ResourceIndex r) const { return resources_.at(r); }
    [[nodiscard]] const std::vector<std::string>& player_ids() const noexcept { return players_; }
    [[nodiscard]] const std::vector<std::string>& resource_ids() const noexcept { return resources_; }

    [[nodiscard]] const Rational& value(ResourceIndex r) const { return values_.at(r); }
    [[nodiscard]] const std::vector<Rational>& values() const noexcept { return values_; }

    /// R_p, including zero-value resources the player listed.
    [[nodiscard]] const ResourceSet& desires(PlayerIndex p) const { return desires_.at(p); }
    [[nodiscard]] bool desires(PlayerIndex p, ResourceIndex r) const { return desire_matrix_.at(p).at(r); }

    [[nodiscard]] PlayerIndex player_index(const std::string& id) const
    {
        auto it = player_lookup_.find(id);
        if (it == player_lookup_.end()) {
            throw Error(ErrorCode::UnknownPlayer, id);
        }
        return it->second;
    }

    [[nodiscard]] ResourceIndex resource_index(const std::string& id) const
    {
        auto it = resource_lookup_.find(id);
        if (it == resource_lookup_.end()) {
            throw Error(ErrorCode::UnknownResource, id);
        }
        return it->second;
    }

    /// Desired resources with strictly positive value, in resource order.
    [[nodiscard]] ResourceSet valuable_desires(PlayerIndex p) const
    {
        ResourceSet out;
        for (ResourceIndex r : desires(p)) {
            if (values_[r] > 0) {
                out.push_back(r);
            }
        }
        return out;
    }

    /// Same players, resources and desires with every value multiplied by `factor`.
    [[nodiscard]] Instance scaled(const Rational& factor) const
    {
        if (factor < 0) {
            throw Error(ErrorCode::InvalidArgument, "negative scale factor");
        }
        std::vector<Rational> scaled_values = values_;
        for (auto& v : scaled_values) {
            v *= factor;
        }
        return Instance(players_, resources_, std::move(scaled_values), desires_);
    }

    friend bool operator==(const Instance& a, const Instance& b)
    {
        return a.players_ == b.players_ && a.resources_ == b.resources_ && a.values_ == b.values_
            && a.desires_ == b.desires_;
    }

private:
    std::vector<std::string> players_;
    std::vector<std::string> resources_;
    std::vector<Rational> values_;
    std::vector<ResourceSet> desires_;
    std::vector<std::vector<bool>> desire_matrix_;
    std::unordered_map<std::string, PlayerIndex> player_lookup_;
    std::unordered_map<std::string, ResourceIndex> resource_lookup_;
};

/// Checks a raw description and resolves ids to indices.
inline Instance validate_instance(const RawInstance& raw)
{
    if (raw.players.empty()) {
        throw Error(ErrorCode::EmptyPlayers, "instance has no players");
    }
    std::unordered_map<std::string, ResourceIndex> resource_lookup;
    std::vector<std::string> resource_ids;
    std::vector<Rational> values;
    for (const auto& [id, value] : raw.resources) {
        if (!resource_lookup.emplace(id, resource_ids.size()).second) {
            throw Error(ErrorCode::DuplicateId, "resource '" + id + "'");
        }
        if (value < 0) {
            throw Error(ErrorCode::NegativeValue, "resource '" + id + "' has value " + to_string(value));
        }
        resource_ids.push_back(id);
        values.push_back(value);
    }

    std::unordered_map<std::string, PlayerIndex> player_lookup;
    for (std::size_t p = 0; p < raw.players.size(); ++p) {
        if (!player_lookup.emplace(raw.players[p], p).second) {
            throw Error(ErrorCode::DuplicateId, "player '" + raw.players[p] + "'");
        }
    }

    std::vector<ResourceSet> desires(raw.players.size());
    for (const auto& [player, wanted] : raw.desires) {
        auto pit = player_lookup.find(player);
        if (pit == player_lookup.end()) {
            throw Error(ErrorCode::UnknownPlayer, player);
        }
        for (const auto& rid : wanted) {
            auto rit = resource_lookup.find(rid);
            if (rit == resource_lookup.end()) {
                throw Error(ErrorCode::UnknownResource, rid);
            }
            desires[pit->second].push_back(rit->second);
        }
    }
    return Instance(raw.players, std::move(resource_ids), std::move(values), std::move(desires));
}

/// Instance with values divided by a target, so the target becomes 1, and
/// each player's desired resources split into fat (>= lambda) and thin
/// (0 < v < lambda). Zero-value resources are in neither class.
class NormalizedInstance {
public:
    NormalizedInstance(const Instance& original, const Rational& target)
        : base_(checked_scale(original, target))
        , target_(target)
        , lambda_(santa::lambda())
        , fat_(base_.player_count())
        , thin_(base_.player_count())
    {
        for (PlayerIndex p = 0; p < base_.player_count(); ++p) {
            for (ResourceIndex r : base_.desires(p)) {
                const Rational& v = base_.value(r);
                if (v >= lambda_) {
                    fat_[p].push_back(r);
                } else if (v > 0) {
                    thin_[p].push_back(r);
                }
            }
        }
    }

    [[nodiscard]] const Instance& base() const noexcept { return base_; }
    [[nodiscard]] const Rational& target() const noexcept { return target_; }
    [[nodiscard]] const Rational& lambda() const noexcept { return lambda_; }
    [[nodiscard]] std::size_t player_count() const noexcept { return base_.player_count(); }
    [[nodiscard]] std::size_t resource_count() const noexcept { return base_.resource_count(); }

    /// Scaled value.
    [[nodiscard]] const Rational& value(ResourceIndex r) const { return base_.value(r); }
    [[nodiscard]] bool is_fat(ResourceIndex r) const { return base_.value(r) >= lambda_; }
    [[nodiscard]] bool is_thin(ResourceIndex r) const
    {
        const Rational& v = base_.value(r);
        return v > 0 && v < lambda_;
    }

    [[nodiscard]] const ResourceSet& fat(PlayerIndex p) const { return fat_.at(p); }
    [[nodiscard]] const ResourceSet& thin(PlayerIndex p) const { return thin_.at(p); }

private:
    static Instance checked_scale(const Instance& original, const Rational& target)
    {
        if (target <= 0) {
            throw Error(ErrorCode::InvalidTarget, "target must be positive, got " + to_string(target));
        }
        return original.scaled(Rational(1) / target);
    }

    Instance base_;
    Rational target_;
    Rational lambda_;
    std::vector<ResourceSet> fat_;
    std::vector<ResourceSet> thin_;
};

inline NormalizedInstance normalize(const Instance& instance, const Rational& target)
{
    return NormalizedInstance(instance, target);
}

/// Sum of v_r over the bundle, counting only resources the player desires.
inline Rational bundle_value(const Instance& instance, PlayerIndex player, std::span<const ResourceIndex> bundle)
{
    if (player >= instance.player_count()) {
        throw Error(ErrorCode::UnknownPlayer, "index " + std::to_string(player));
    }
    Rational total = 0;
    for (ResourceIndex r : bundle) {
        if (r >= instance.resource_count()) {
            throw Error(ErrorCode::UnknownResource, "index " + std::to_string(r));
        }
        if (instance.desires(player, r)) {
            total += instance.value(r);
        }
    }
    return total;
}

/// Plain sum of values, ignoring who desires what.
inline Rational set_value(const Instance& instance, std::span<const ResourceIndex> bundle)
{
    Rational total = 0;
    for (ResourceIndex r : bundle) {
        total += instance.value(r);
    }
    return total;
}

inline bool intersects(std::span<const ResourceIndex> a, std::span<const ResourceIndex> b)
{
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            return true;
        }
    }
    return false;
}

} // namespace santa
