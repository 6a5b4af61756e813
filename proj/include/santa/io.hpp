#pragma once

#include "santa/certify.hpp"
#include "santa/core.hpp"
#include "santa/error.hpp"
#include "santa/matching.hpp"
#include "santa/oracle.hpp"
#include "santa/rational.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace santa::io {

using nlohmann::json;

inline Rational rational_from_json(const json& j)
{
    if (j.is_string()) {
        return parse_rational(j.get<std::string>());
    }
    if (j.is_number_integer()) {
        return Rational(j.get<long long>());
    }
    throw Error(ErrorCode::Parse, "rational must be a \"p/q\" or decimal string, got " + j.dump());
}

inline json rational_to_json(const Rational& q)
{
    return to_string(q);
}

inline json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Parse, "cannot open '" + path + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Parse, path + ": " + e.what());
    }
}

inline void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::Parse, "cannot write '" + path + "'");
    }
    out << text;
}

/// {"players": [id], "resources": [{"id", "value"}], "desires": {player: [resource]}}
inline RawInstance raw_instance_from_json(const json& j)
{
    try {
        RawInstance raw;
        if (!j.is_object()) {
            throw Error(ErrorCode::Parse, "instance must be a JSON object");
        }
        for (const auto& p : j.at("players")) {
            raw.players.push_back(p.get<std::string>());
        }
        for (const auto& r : j.at("resources")) {
            raw.resources.emplace_back(r.at("id").get<std::string>(), rational_from_json(r.at("value")));
        }
        if (j.contains("desires")) {
            for (const auto& [player, wanted] : j.at("desires").items()) {
                auto& list = raw.desires[player];
                for (const auto& rid : wanted) {
                    list.push_back(rid.get<std::string>());
                }
            }
        }
        return raw;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("malformed instance: ") + e.what());
    }
}

inline Instance instance_from_json(const json& j)
{
    return validate_instance(raw_instance_from_json(j));
}

inline json instance_to_json(const Instance& instance)
{
    json j;
    j["players"] = instance.player_ids();
    j["resources"] = json::array();
    for (ResourceIndex r = 0; r < instance.resource_count(); ++r) {
        j["resources"].push_back({{"id", instance.resource_id(r)}, {"value", rational_to_json(instance.value(r))}});
    }
    j["desires"] = json::object();
    for (PlayerIndex p = 0; p < instance.player_count(); ++p) {
        json list = json::array();
        for (ResourceIndex r : instance.desires(p)) {
            list.push_back(instance.resource_id(r));
        }
        j["desires"][instance.player_id(p)] = std::move(list);
    }
    return j;
}

inline json bundle_to_json(const Instance& instance, const ResourceSet& bundle)
{
    json list = json::array();
    for (ResourceIndex r : bundle) {
        list.push_back(instance.resource_id(r));
    }
    return list;
}

/// {"allocation": {player: [resource]}}
inline json allocation_to_json(const Instance& instance, const Allocation& allocation)
{
    json body = json::object();
    for (PlayerIndex p = 0; p < allocation.size(); ++p) {
        body[instance.player_id(p)] = bundle_to_json(instance, allocation[p]);
    }
    return {{"allocation", body}};
}

/// Players missing from the file receive an empty bundle.
inline Allocation allocation_from_json(const Instance& instance, const json& j)
{
    try {
        if (!j.is_object() || !j.contains("allocation") || !j.at("allocation").is_object()) {
            throw Error(ErrorCode::Parse, "allocation file needs an \"allocation\" object");
        }
        Allocation allocation(instance.player_count());
        for (const auto& [player, bundle] : j.at("allocation").items()) {
            const PlayerIndex p = instance.player_index(player);
            if (!bundle.is_array()) {
                throw Error(ErrorCode::Parse, "bundle of " + player + " must be an array");
            }
            for (const auto& rid : bundle) {
                allocation[p].push_back(instance.resource_index(rid.get<std::string>()));
            }
            std::sort(allocation[p].begin(), allocation[p].end());
        }
        return allocation;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("malformed allocation: ") + e.what());
    }
}

inline json edge_to_json(const Instance& instance, const Edge& e)
{
    return {{"player", instance.player_id(e.player)},
            {"bundle", bundle_to_json(instance, e.bundle)},
            {"kind", e.kind == EdgeKind::Fat ? "fat" : "thin"}};
}

inline json signature_to_json(const Signature& s)
{
    json entries = json::array();
    for (std::size_t v : s.finite) {
        entries.push_back(v);
    }
    entries.push_back("inf");
    return entries;
}

inline Signature signature_from_json(const json& j)
{
    Signature s;
    if (!j.is_array() || j.empty() || j.back() != "inf") {
        throw Error(ErrorCode::Parse, "signature must be an array ending in \"inf\"");
    }
    for (std::size_t i = 0; i + 1 < j.size(); ++i) {
        s.finite.push_back(j[i].get<std::size_t>());
    }
    return s;
}

/// One line of a trace file.
inline json trace_event_to_json(const Instance& instance, const TraceEvent& event)
{
    json j{{"step", event.step},
           {"run", event.run},
           {"p0", instance.player_id(event.p0)},
           {"kind", step_kind_name(event.kind)},
           {"signature", signature_to_json(event.signature)}};
    if (event.edge) {
        j["edge"] = edge_to_json(instance, *event.edge);
    }
    if (event.blocker != 0) {
        j["blocker"] = event.blocker;
    }
    if (event.activating != 0) {
        j["activating"] = event.activating;
    }
    return j;
}

/// Splits a trace file's signatures into one sequence per insertion run,
/// dropping the terminating step whose signature belongs to no search.
inline std::vector<std::vector<Signature>> signatures_by_run(std::istream& lines)
{
    std::vector<std::vector<Signature>> runs;
    std::string line;
    std::size_t current = static_cast<std::size_t>(-1);
    while (std::getline(lines, line)) {
        if (line.empty()) {
            continue;
        }
        json j = json::parse(line);
        const std::size_t run = j.at("run").get<std::size_t>();
        if (run != current) {
            runs.push_back({Signature{}});
            current = run;
        }
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "build" || kind == "contract") {
            runs.back().push_back(signature_from_json(j.at("signature")));
        }
    }
    return runs;
}

inline json certificate_to_json(const NormalizedInstance& ni, const DualCertificate& cert, const BalanceReport* balances = nullptr)
{
    const Instance& inst = ni.base();
    json y = json::object();
    json z = json::object();
    for (PlayerIndex p = 0; p < inst.player_count(); ++p) {
        y[inst.player_id(p)] = rational_to_json(cert.y[p]);
    }
    for (ResourceIndex r = 0; r < inst.resource_count(); ++r) {
        z[inst.resource_id(r)] = rational_to_json(cert.z[r]);
    }
    json j{{"target", rational_to_json(ni.target())}, {"y", y}, {"z", z}, {"objective", rational_to_json(cert.objective)}};
    json table = json::array();
    for (std::size_t i = 0; i < cert.groups.size(); ++i) {
        json players = json::array();
        for (PlayerIndex p : cert.groups[i].players) {
            players.push_back(inst.player_id(p));
        }
        json row{{"blocker", i + 1}, {"players", players}, {"resources", bundle_to_json(inst, cert.groups[i].resources)}};
        if (balances && i < balances->balances.size()) {
            const auto& b = balances->balances[i];
            row["case"] = b.accounting_case;
            row["player_sum"] = rational_to_json(b.player_sum);
            row["resource_sum"] = rational_to_json(b.resource_sum);
            row["balance"] = rational_to_json(b.balance);
        }
        table.push_back(std::move(row));
    }
    j["blockers"] = std::move(table);
    return j;
}

inline json audit_to_json(const oracle::AuditReport& report)
{
    json violations = json::array();
    for (const auto& v : report.violations) {
        violations.push_back({{"invariant", v.invariant}, {"detail", v.detail}, {"indices", v.indices}});
    }
    return {{"passed", report.passed()}, {"violations", violations}};
}

} // namespace santa::io
