#pragma once

// Machine-checkable record of what a text map communicates: per-feature
// landmark claims, per-pair survey claims, per-route claims and the
// interactive query capabilities of the representation.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "mapverba/error.hpp"

namespace mapverba {

enum class RepresentationKind { audio_description, mud_map, alt_grid, table, turn_by_turn, short_alt, nearby_search };

inline constexpr std::array<RepresentationKind, 7> all_representation_kinds = {
    RepresentationKind::audio_description, RepresentationKind::mud_map,      RepresentationKind::alt_grid,
    RepresentationKind::table,             RepresentationKind::turn_by_turn, RepresentationKind::short_alt,
    RepresentationKind::nearby_search};

inline const char* to_string(RepresentationKind k) {
    switch (k) {
        case RepresentationKind::audio_description: return "audio-description";
        case RepresentationKind::mud_map: return "mud-map";
        case RepresentationKind::alt_grid: return "alt-grid";
        case RepresentationKind::table: return "table";
        case RepresentationKind::turn_by_turn: return "turn-by-turn";
        case RepresentationKind::short_alt: return "short-alt";
        case RepresentationKind::nearby_search: return "nearby-search";
    }
    return "?";
}

inline std::optional<RepresentationKind> representation_kind_from_string(std::string_view s) {
    for (auto k : all_representation_kinds)
        if (s == to_string(k)) return k;
    return std::nullopt;
}

enum class LandmarkField { sensory, name, type, shape, orientation, size, temporal, overlaid, coordinates, query_distance };

inline constexpr std::array<LandmarkField, 10> all_landmark_fields = {
    LandmarkField::sensory,  LandmarkField::name,     LandmarkField::type,        LandmarkField::shape,
    LandmarkField::orientation, LandmarkField::size,  LandmarkField::temporal,    LandmarkField::overlaid,
    LandmarkField::coordinates, LandmarkField::query_distance};

inline const char* to_string(LandmarkField f) {
    static constexpr std::array<const char*, 10> names = {"sensory", "name",     "type",        "shape",
                                                          "orientation", "size", "temporal",    "overlaid",
                                                          "coordinates", "query_distance"};
    return names[static_cast<int>(f)];
}

enum class PairField { distance, direction, topology, relative_location };

inline constexpr std::array<PairField, 4> all_pair_fields = {PairField::distance, PairField::direction,
                                                             PairField::topology, PairField::relative_location};

inline const char* to_string(PairField f) {
    static constexpr std::array<const char*, 4> names = {"distance", "direction", "topology", "relative_location"};
    return names[static_cast<int>(f)];
}

enum class RouteField { landmark, survey, prominence };

inline constexpr std::array<RouteField, 3> all_route_fields = {RouteField::landmark, RouteField::survey,
                                                               RouteField::prominence};

inline const char* to_string(RouteField f) {
    static constexpr std::array<const char*, 3> names = {"landmark", "survey", "prominence"};
    return names[static_cast<int>(f)];
}

enum class CapabilityFlag { pairwise_distance, pairwise_direction, pairwise_topology, absolute_location, temporal_playback };

inline constexpr std::array<CapabilityFlag, 5> all_capability_flags = {
    CapabilityFlag::pairwise_distance, CapabilityFlag::pairwise_direction, CapabilityFlag::pairwise_topology,
    CapabilityFlag::absolute_location, CapabilityFlag::temporal_playback};

inline const char* to_string(CapabilityFlag f) {
    static constexpr std::array<const char*, 5> names = {"pairwise-distance", "pairwise-direction",
                                                         "pairwise-topology", "absolute-location",
                                                         "temporal-playback"};
    return names[static_cast<int>(f)];
}

namespace manifest_detail {

template <class E, std::size_t N>
std::optional<E> from_name(const std::array<E, N>& all, std::string_view s) {
    for (E e : all)
        if (s == to_string(e)) return e;
    return std::nullopt;
}

}  // namespace manifest_detail

/// Claimed landmark fields of one feature, each with its evidence text.
struct FeatureRecord {
    std::string id;
    std::map<LandmarkField, std::string> claims;
    bool addition = false;  // not a baseline feature
    bool has(LandmarkField f) const { return claims.count(f) > 0; }
    friend bool operator==(const FeatureRecord&, const FeatureRecord&) = default;
};

struct PairRecord {
    std::string a, b;
    std::map<PairField, std::string> claims;
    bool has(PairField f) const { return claims.count(f) > 0; }
    friend bool operator==(const PairRecord&, const PairRecord&) = default;
};

struct RouteRecord {
    std::string id;
    std::map<RouteField, std::string> claims;
    bool has(RouteField f) const { return claims.count(f) > 0; }
    friend bool operator==(const RouteRecord&, const RouteRecord&) = default;
};

struct RepresentationManifest {
    RepresentationKind kind = RepresentationKind::audio_description;
    std::string source;    // locator of the rendered artifact
    std::string baseline;  // locator of the baseline map, may be empty
    std::string label;     // display label for batch tables, may be empty
    std::vector<FeatureRecord> features;
    std::vector<PairRecord> pairs;
    std::vector<RouteRecord> routes;
    std::set<CapabilityFlag> capabilities;
    std::vector<std::string> summary;  // whole-map records not tied to a feature

    const FeatureRecord* find_feature(std::string_view id) const {
        for (const auto& f : features)
            if (f.id == id) return &f;
        return nullptr;
    }
    const RouteRecord* find_route(std::string_view id) const {
        for (const auto& r : routes)
            if (r.id == id) return &r;
        return nullptr;
    }
    bool has(CapabilityFlag f) const { return capabilities.count(f) > 0; }
    std::string display_label() const { return label.empty() ? to_string(kind) : label; }
    friend bool operator==(const RepresentationManifest&, const RepresentationManifest&) = default;
};

inline constexpr const char* manifest_schema = "mapverba.manifest/1";

inline nlohmann::ordered_json manifest_to_json(const RepresentationManifest& m) {
    using ojson = nlohmann::ordered_json;
    ojson j = ojson::object();
    j["schema"] = manifest_schema;
    j["kind"] = to_string(m.kind);
    j["source"] = m.source;
    if (!m.baseline.empty()) j["baseline"] = m.baseline;
    if (!m.label.empty()) j["label"] = m.label;
    ojson fs = ojson::array();
    for (const auto& f : m.features) {
        ojson claims = ojson::object();
        for (const auto& [k, v] : f.claims) claims[to_string(k)] = v;
        ojson jf = {{"id", f.id}, {"claims", std::move(claims)}};
        if (f.addition) jf["addition"] = true;
        fs.push_back(std::move(jf));
    }
    j["features"] = std::move(fs);
    ojson ps = ojson::array();
    for (const auto& p : m.pairs) {
        ojson jp = {{"a", p.a}, {"b", p.b}};
        for (const auto& [k, v] : p.claims) jp[to_string(k)] = v;
        ps.push_back(std::move(jp));
    }
    j["pairs"] = std::move(ps);
    ojson rs = ojson::array();
    for (const auto& r : m.routes) {
        ojson jr = {{"id", r.id}};
        for (const auto& [k, v] : r.claims) jr[to_string(k)] = v;
        rs.push_back(std::move(jr));
    }
    j["routes"] = std::move(rs);
    ojson caps = ojson::array();
    for (auto c : m.capabilities) caps.push_back(to_string(c));
    j["capabilities"] = std::move(caps);
    j["summary"] = m.summary;
    return j;
}

inline std::string serialize_manifest(const RepresentationManifest& m) { return manifest_to_json(m).dump(2) + "\n"; }

inline RepresentationManifest manifest_from_json(const nlohmann::ordered_json& j) {
    if (!j.is_object()) throw SemanticError("manifest must be a JSON object");
    RepresentationManifest m;
    const std::string kind = j.value("kind", "");
    auto k = representation_kind_from_string(kind);
    if (!k) throw SemanticError(fmt::format("unknown representation kind '{}'", kind));
    m.kind = *k;
    m.source = j.value("source", "");
    m.baseline = j.value("baseline", "");
    m.label = j.value("label", "");
    auto text_of = [](const nlohmann::ordered_json& v, const std::string& where) {
        if (!v.is_string() || v.get<std::string>().empty())
            throw SemanticError(where + ": claim evidence must be a non-empty string");
        return v.get<std::string>();
    };
    for (const auto& jf : j.value("features", nlohmann::ordered_json::array())) {
        FeatureRecord f;
        if (!jf.contains("id") || !jf["id"].is_string()) throw SemanticError("feature record needs a string 'id'");
        f.id = jf["id"].get<std::string>();
        f.addition = jf.value("addition", false);
        if (jf.contains("claims")) {
            for (auto it = jf["claims"].begin(); it != jf["claims"].end(); ++it) {
                auto field = manifest_detail::from_name(all_landmark_fields, it.key());
                if (!field) throw SemanticError(fmt::format("feature '{}': unknown claim '{}'", f.id, it.key()));
                f.claims[*field] = text_of(it.value(), fmt::format("feature '{}' claim '{}'", f.id, it.key()));
            }
        }
        m.features.push_back(std::move(f));
    }
    for (const auto& jp : j.value("pairs", nlohmann::ordered_json::array())) {
        PairRecord p;
        p.a = jp.value("a", "");
        p.b = jp.value("b", "");
        if (p.a.empty() || p.b.empty()) throw SemanticError("pair record needs 'a' and 'b'");
        for (auto fld : all_pair_fields)
            if (jp.contains(to_string(fld)))
                p.claims[fld] = text_of(jp[to_string(fld)], fmt::format("pair {}/{} claim '{}'", p.a, p.b, to_string(fld)));
        m.pairs.push_back(std::move(p));
    }
    for (const auto& jr : j.value("routes", nlohmann::ordered_json::array())) {
        RouteRecord r;
        r.id = jr.value("id", "");
        if (r.id.empty()) throw SemanticError("route record needs an 'id'");
        for (auto fld : all_route_fields)
            if (jr.contains(to_string(fld)))
                r.claims[fld] = text_of(jr[to_string(fld)], fmt::format("route '{}' claim '{}'", r.id, to_string(fld)));
        m.routes.push_back(std::move(r));
    }
    for (const auto& c : j.value("capabilities", nlohmann::ordered_json::array())) {
        auto flag = c.is_string() ? manifest_detail::from_name(all_capability_flags, c.get<std::string>()) : std::nullopt;
        if (!flag) throw SemanticError(fmt::format("unknown capability flag {}", c.dump()));
        m.capabilities.insert(*flag);
    }
    for (const auto& s : j.value("summary", nlohmann::ordered_json::array())) m.summary.push_back(s.get<std::string>());
    return m;
}

inline RepresentationManifest parse_manifest(std::string_view text) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text.begin(), text.end());
    } catch (const nlohmann::ordered_json::parse_error& e) {
        throw SyntaxError(fmt::format("manifest syntax error at byte {}: {}", e.byte, e.what()), e.byte);
    }
    try {
        return manifest_from_json(j);
    } catch (const nlohmann::ordered_json::exception& e) {
        throw SemanticError(fmt::format("malformed manifest: {}", e.what()));
    }
}

}  // namespace mapverba
