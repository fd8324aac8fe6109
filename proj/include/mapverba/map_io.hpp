#pragma once

// Reads and writes the baseline map format: an RFC 7946 FeatureCollection
// (Point, LineString and single-ring Polygon only) with foreign members for
// the legend, routes, graticules, capabilities, title and CRS.

#include <algorithm>
#include <string>
#include <string_view>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "mapverba/error.hpp"
#include "mapverba/map_model.hpp"

namespace mapverba {

namespace detail {

using ojson = nlohmann::ordered_json;

inline std::string require_string(const ojson& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw SemanticError(fmt::format("{}: missing '{}'", where, key));
    if (!j[key].is_string()) throw SemanticError(fmt::format("{}: '{}' must be a string", where, key));
    return j[key].get<std::string>();
}

inline std::optional<std::string> optional_string(const ojson& j, const char* key, const std::string& where) {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    if (!j[key].is_string()) throw SemanticError(fmt::format("{}: '{}' must be a string", where, key));
    return j[key].get<std::string>();
}

inline Coord parse_position(const ojson& j, const std::string& where) {
    if (!j.is_array() || j.size() < 2 || !j[0].is_number() || !j[1].is_number())
        throw SemanticError(fmt::format("{}: position must be an array of at least two numbers", where));
    return {j[0].get<double>(), j[1].get<double>()};
}

inline std::vector<Coord> parse_positions(const ojson& j, const std::string& where) {
    if (!j.is_array()) throw SemanticError(fmt::format("{}: expected an array of positions", where));
    std::vector<Coord> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_position(j[i], fmt::format("{}[{}]", where, i)));
    return out;
}

inline Geometry parse_geometry(const ojson& g, const std::string& where) {
    if (!g.is_object()) throw SemanticError(fmt::format("{}: geometry must be an object", where));
    const std::string type = require_string(g, "type", where);
    if (!g.contains("coordinates")) throw SemanticError(fmt::format("{}: missing 'coordinates'", where));
    const ojson& c = g["coordinates"];
    if (type == "Point") return Geometry::point(parse_position(c, where + ".coordinates"));
    if (type == "LineString") {
        auto pts = parse_positions(c, where + ".coordinates");
        if (pts.size() < 2) throw SemanticError(fmt::format("{}: degenerate line: fewer than 2 positions", where));
        return Geometry::polyline(std::move(pts));
    }
    if (type == "Polygon") {
        if (!c.is_array() || c.empty()) throw SemanticError(fmt::format("{}: polygon needs one ring", where));
        if (c.size() > 1) throw SemanticError(fmt::format("{}: polygon holes are not supported", where));
        Geometry poly = Geometry::polygon(parse_positions(c[0], where + ".coordinates[0]"));
        if (poly.vertices().size() < 3)
            throw SemanticError(fmt::format("{}: degenerate polygon: fewer than 3 distinct vertices", where));
        return poly;
    }
    throw SemanticError(fmt::format("{}: unsupported geometry kind '{}'", where, type));
}

inline ThematicValue parse_thematic(const ojson& v, const std::string& where) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return std::string(v.get<bool>() ? "Yes" : "No");
    throw SemanticError(fmt::format("{}: overlaid values must be numbers or strings", where));
}

inline ojson thematic_to_json(const ThematicValue& v) {
    if (const double* d = std::get_if<double>(&v)) return *d;
    return std::get<std::string>(v);
}

inline ojson geometry_to_json(const Geometry& g) {
    auto pos = [](Coord c) { return ojson::array({c.x, c.y}); };
    ojson coords = ojson::array();
    switch (g.kind) {
        case GeometryKind::point: return {{"type", "Point"}, {"coordinates", pos(g.coords.at(0))}};
        case GeometryKind::polyline:
            for (Coord c : g.coords) coords.push_back(pos(c));
            return {{"type", "LineString"}, {"coordinates", coords}};
        case GeometryKind::polygon: {
            ojson ring = ojson::array();
            for (Coord c : g.coords) ring.push_back(pos(c));
            coords.push_back(ring);
            return {{"type", "Polygon"}, {"coordinates", coords}};
        }
    }
    return nullptr;
}

inline bool get_bool(const ojson& j, const char* key, bool fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_boolean()) throw SemanticError(fmt::format("capabilities: '{}' must be a boolean", key));
    return j[key].get<bool>();
}

}  // namespace detail

/// Parses a map document. Throws SyntaxError (with byte position) for
/// malformed JSON and SemanticError for model violations that make the input
/// unusable: duplicate ids, unknown legend references, unsupported or
/// degenerate geometry. Remaining invariants are reported by validate().
inline MapDocument parse_map(std::string_view text) {
    using detail::ojson;
    ojson root;
    try {
        root = ojson::parse(text.begin(), text.end());
    } catch (const ojson::parse_error& e) {
        throw SyntaxError(fmt::format("syntax error at byte {}: {}", e.byte, e.what()), e.byte);
    }
    if (!root.is_object() || !root.contains("type") || root["type"] != "FeatureCollection")
        throw SemanticError("document must be a FeatureCollection");
    if (!root.contains("features") || !root["features"].is_array())
        throw SemanticError("FeatureCollection must have a 'features' array");

    MapDocument doc;
    if (root.contains("crs")) {
        if (root["crs"] == "planar") doc.crs = Crs::planar;
        else if (root["crs"] == "geographic") doc.crs = Crs::geographic;
        else throw SemanticError("'crs' must be \"planar\" or \"geographic\"");
    }
    if (auto t = detail::optional_string(root, "title", "document")) doc.title = *t;

    if (root.contains("legend")) {
        const ojson& legend = root["legend"];
        if (!legend.is_array()) throw SemanticError("'legend' must be an array");
        for (std::size_t i = 0; i < legend.size(); ++i) {
            const std::string where = fmt::format("legend[{}]", i);
            const ojson& s = legend[i];
            if (!s.is_object()) throw SemanticError(where + ": legend entry must be an object");
            SensoryStyle style{detail::require_string(s, "id", where), detail::require_string(s, "color", where),
                               detail::optional_string(s, "pattern", where),
                               detail::optional_string(s, "notes", where)};
            if (doc.find_style(style.id)) throw SemanticError(fmt::format("{}: duplicate legend id '{}'", where, style.id));
            doc.legend.push_back(std::move(style));
        }
    }

    std::set<std::string> ids;
    std::set<std::string> timestamps;
    bool any_overlaid = false;
    const ojson& features = root["features"];
    for (std::size_t i = 0; i < features.size(); ++i) {
        const std::string where = fmt::format("features[{}]", i);
        const ojson& jf = features[i];
        if (!jf.is_object() || jf.value("type", "") != "Feature")
            throw SemanticError(where + ": expected a Feature object");
        if (!jf.contains("geometry")) throw SemanticError(where + ": missing 'geometry'");
        Feature f;
        f.geometry = detail::parse_geometry(jf["geometry"], where + ".geometry");
        ojson props = jf.contains("properties") && jf["properties"].is_object() ? jf["properties"] : ojson::object();

        if (jf.contains("id") && !jf["id"].is_null())
            f.id = jf["id"].is_string() ? jf["id"].get<std::string>() : jf["id"].dump();
        else if (props.contains("id") && props["id"].is_string())
            f.id = props["id"].get<std::string>();
        else
            f.id = fmt::format("f{}", i + 1);
        props.erase("id");
        if (!ids.insert(f.id).second) throw SemanticError(fmt::format("{}: duplicate feature id '{}'", where, f.id));

        if (auto n = detail::optional_string(props, "name", where)) f.name = *n;
        if (auto t = detail::optional_string(props, "type", where)) f.type_label = *t;
        f.sensory = detail::optional_string(props, "style", where);
        if (f.sensory && !doc.find_style(*f.sensory))
            throw SemanticError(fmt::format("{}: unknown legend reference '{}'", where, *f.sensory));
        if (props.contains("overlaid")) {
            if (!props["overlaid"].is_object()) throw SemanticError(where + ": 'overlaid' must be an object");
            for (auto it = props["overlaid"].begin(); it != props["overlaid"].end(); ++it)
                f.overlaid.emplace_back(it.key(), detail::parse_thematic(it.value(), where + ".overlaid"));
            any_overlaid = any_overlaid || !f.overlaid.empty();
        }
        if (props.contains("temporal")) {
            if (!props["temporal"].is_object()) throw SemanticError(where + ": 'temporal' must be an object");
            std::vector<std::pair<std::string, double>> series;
            for (auto it = props["temporal"].begin(); it != props["temporal"].end(); ++it) {
                if (!it.value().is_number())
                    throw SemanticError(fmt::format("{}: temporal value for '{}' must be a number", where, it.key()));
                series.emplace_back(it.key(), it.value().get<double>());
                timestamps.insert(it.key());
            }
            f.temporal = std::move(series);
        }
        for (const char* k : {"name", "type", "style", "overlaid", "temporal"}) props.erase(k);
        f.extra_properties = std::move(props);
        doc.features.push_back(std::move(f));
    }

    if (root.contains("routes")) {
        const ojson& routes = root["routes"];
        if (!routes.is_array()) throw SemanticError("'routes' must be an array");
        for (std::size_t i = 0; i < routes.size(); ++i) {
            const std::string where = fmt::format("routes[{}]", i);
            const ojson& jr = routes[i];
            if (!jr.is_object()) throw SemanticError(where + ": route must be an object");
            Route r;
            r.id = jr.contains("id") ? detail::require_string(jr, "id", where) : fmt::format("r{}", i + 1);
            r.name = detail::optional_string(jr, "name", where).value_or("");
            if (!jr.contains("coordinates")) throw SemanticError(where + ": missing 'coordinates'");
            r.path = Geometry::polyline(detail::parse_positions(jr["coordinates"], where + ".coordinates"));
            if (r.path.coords.size() < 2) throw SemanticError(where + ": degenerate route: fewer than 2 positions");
            r.origin_label = detail::optional_string(jr, "origin", where).value_or("");
            r.destination_label = detail::optional_string(jr, "destination", where).value_or("");
            r.sensory = detail::optional_string(jr, "style", where);
            if (r.sensory && !doc.find_style(*r.sensory))
                throw SemanticError(fmt::format("{}: unknown legend reference '{}'", where, *r.sensory));
            if (jr.contains("markers")) {
                if (!jr["markers"].is_array()) throw SemanticError(where + ": 'markers' must be an array");
                for (const auto& m : jr["markers"]) {
                    if (!m.is_object() || !m.contains("distance") || !m["distance"].is_number())
                        throw SemanticError(where + ": marker needs a numeric 'distance'");
                    r.markers.push_back({m["distance"].get<double>(), m.value("label", std::string{})});
                }
            }
            doc.routes.push_back(std::move(r));
        }
    }

    if (root.contains("graticules")) {
        const ojson& gs = root["graticules"];
        if (!gs.is_array()) throw SemanticError("'graticules' must be an array");
        for (std::size_t i = 0; i < gs.size(); ++i) {
            const std::string where = fmt::format("graticules[{}]", i);
            const ojson& jg = gs[i];
            if (!jg.is_object() || !jg.contains("value") || !jg["value"].is_number())
                throw SemanticError(where + ": graticule needs a numeric 'value'");
            const std::string kind = detail::require_string(jg, "kind", where);
            Graticule g;
            if (kind == "meridian") g.kind = GraticuleKind::meridian;
            else if (kind == "parallel") g.kind = GraticuleKind::parallel;
            else throw SemanticError(fmt::format("{}: kind must be meridian or parallel", where));
            g.value = jg["value"].get<double>();
            g.label = detail::optional_string(jg, "label", where).value_or("");
            doc.graticules.push_back(std::move(g));
        }
    }

    if (root.contains("temporal_domain")) {
        if (!root["temporal_domain"].is_array()) throw SemanticError("'temporal_domain' must be an array");
        doc.temporal_domain = root["temporal_domain"].get<std::vector<std::string>>();
    } else if (!timestamps.empty()) {
        doc.temporal_domain = std::vector<std::string>(timestamps.begin(), timestamps.end());
    }

    // Capabilities default to what the document contains; explicit keys win.
    BaselineCapabilities& caps = doc.capabilities;
    caps.shows_legend = !doc.legend.empty();
    caps.has_routes = !doc.routes.empty();
    caps.shows_temporal = doc.temporal_domain.has_value();
    caps.shows_overlaid = any_overlaid;
    caps.shows_coordinates = false;
    if (root.contains("capabilities")) {
        const ojson& jc = root["capabilities"];
        if (!jc.is_object()) throw SemanticError("'capabilities' must be an object");
        caps.shows_coordinates = detail::get_bool(jc, "shows_coordinates", caps.shows_coordinates);
        caps.shows_temporal = detail::get_bool(jc, "shows_temporal", caps.shows_temporal);
        caps.shows_overlaid = detail::get_bool(jc, "shows_overlaid", caps.shows_overlaid);
        caps.has_routes = detail::get_bool(jc, "has_routes", caps.has_routes);
        caps.shows_legend = detail::get_bool(jc, "shows_legend", caps.shows_legend);
    }
    return doc;
}

/// Writes a document in the same format parse_map reads. For normalized
/// documents parse_map(serialize_map(d)) == d.
inline std::string serialize_map(const MapDocument& doc) {
    using detail::ojson;
    ojson root = ojson::object();
    root["type"] = "FeatureCollection";
    root["crs"] = to_string(doc.crs);
    root["title"] = doc.title;
    ojson legend = ojson::array();
    for (const auto& s : doc.legend) {
        ojson js = {{"id", s.id}, {"color", s.color_name}};
        if (s.pattern) js["pattern"] = *s.pattern;
        if (s.notes) js["notes"] = *s.notes;
        legend.push_back(std::move(js));
    }
    root["legend"] = std::move(legend);
    ojson features = ojson::array();
    for (const auto& f : doc.features) {
        ojson props = ojson::object();
        props["name"] = f.name;
        props["type"] = f.type_label;
        if (f.sensory) props["style"] = *f.sensory;
        if (!f.overlaid.empty()) {
            ojson ov = ojson::object();
            for (const auto& [k, v] : f.overlaid) ov[k] = detail::thematic_to_json(v);
            props["overlaid"] = std::move(ov);
        }
        if (f.temporal) {
            ojson t = ojson::object();
            for (const auto& [k, v] : *f.temporal) t[k] = v;
            props["temporal"] = std::move(t);
        }
        for (auto it = f.extra_properties.begin(); it != f.extra_properties.end(); ++it) props[it.key()] = it.value();
        features.push_back({{"type", "Feature"}, {"id", f.id}, {"geometry", detail::geometry_to_json(f.geometry)},
                            {"properties", std::move(props)}});
    }
    root["features"] = std::move(features);
    ojson routes = ojson::array();
    for (const auto& r : doc.routes) {
        ojson jr = {{"id", r.id}, {"name", r.name}};
        ojson coords = ojson::array();
        for (Coord c : r.path.coords) coords.push_back(ojson::array({c.x, c.y}));
        jr["coordinates"] = std::move(coords);
        jr["origin"] = r.origin_label;
        jr["destination"] = r.destination_label;
        if (r.sensory) jr["style"] = *r.sensory;
        ojson markers = ojson::array();
        for (const auto& m : r.markers) markers.push_back({{"distance", m.distance_m}, {"label", m.label}});
        jr["markers"] = std::move(markers);
        routes.push_back(std::move(jr));
    }
    root["routes"] = std::move(routes);
    ojson gs = ojson::array();
    for (const auto& g : doc.graticules)
        gs.push_back({{"kind", g.kind == GraticuleKind::meridian ? "meridian" : "parallel"},
                      {"value", g.value},
                      {"label", g.label}});
    root["graticules"] = std::move(gs);
    if (doc.temporal_domain) root["temporal_domain"] = *doc.temporal_domain;
    const auto& c = doc.capabilities;
    root["capabilities"] = {{"shows_coordinates", c.shows_coordinates}, {"shows_temporal", c.shows_temporal},
                            {"shows_overlaid", c.shows_overlaid},       {"has_routes", c.has_routes},
                            {"shows_legend", c.shows_legend}};
    return root.dump(2) + "\n";
}

}  // namespace mapverba
