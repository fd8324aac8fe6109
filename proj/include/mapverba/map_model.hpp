#pragma once

// Baseline map data model: the visual map a text representation is compared
// against. Parsing lives in map_io.hpp.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "mapverba/error.hpp"
#include "mapverba/geodesy.hpp"
#include "mapverba/planar.hpp"

namespace mapverba {

enum class GeometryKind { point, polyline, polygon };

inline const char* to_string(GeometryKind k) {
    switch (k) {
        case GeometryKind::point: return "point";
        case GeometryKind::polyline: return "polyline";
        case GeometryKind::polygon: return "polygon";
    }
    return "?";
}

inline const char* to_string(Crs c) { return c == Crs::planar ? "planar" : "geographic"; }

/// A point, polyline or polygon. Polygons are stored as a closed ring
/// (first vertex repeated at the end) wound counter-clockwise.
struct Geometry {
    GeometryKind kind = GeometryKind::point;
    std::vector<Coord> coords;

    static Geometry point(Coord c) { return {GeometryKind::point, {c}}; }
    static Geometry polyline(std::vector<Coord> cs) { return {GeometryKind::polyline, std::move(cs)}; }
    /// Builds a polygon and normalizes it (closed, CCW, no repeated vertices).
    static Geometry polygon(std::vector<Coord> ring);

    /// Polygon vertices without the closing duplicate; other kinds unchanged.
    std::vector<Coord> vertices() const {
        return kind == GeometryKind::polygon ? planar::open_ring(coords) : coords;
    }

    friend bool operator==(const Geometry&, const Geometry&) = default;
};

/// Closes the ring, drops consecutive duplicate vertices and winds it
/// counter-clockwise. Idempotent.
inline std::vector<Coord> normalize_ring(std::vector<Coord> ring) {
    std::vector<Coord> pts;
    pts.reserve(ring.size() + 1);
    for (Coord c : ring)
        if (pts.empty() || pts.back() != c) pts.push_back(c);
    while (pts.size() > 1 && pts.front() == pts.back()) pts.pop_back();
    if (pts.size() >= 3 && planar::signed_area(pts) < 0.0) {
        // Keep the first vertex in place so normalization is idempotent.
        std::reverse(pts.begin() + 1, pts.end());
    }
    if (!pts.empty()) pts.push_back(pts.front());
    return pts;
}

inline Geometry Geometry::polygon(std::vector<Coord> ring) {
    return {GeometryKind::polygon, normalize_ring(std::move(ring))};
}

struct SensoryStyle {
    std::string id;
    std::string color_name;
    std::optional<std::string> pattern;
    std::optional<std::string> notes;
    friend bool operator==(const SensoryStyle&, const SensoryStyle&) = default;
};

/// A thematic variable value: numeric or categorical.
using ThematicValue = std::variant<double, std::string>;

struct Feature {
    std::string id;
    std::string name;
    std::string type_label;
    Geometry geometry;
    std::optional<std::string> sensory;  // legend id
    std::vector<std::pair<std::string, ThematicValue>> overlaid;
    std::optional<std::vector<std::pair<std::string, double>>> temporal;  // timestamp -> value
    nlohmann::ordered_json extra_properties = nlohmann::ordered_json::object();
    friend bool operator==(const Feature&, const Feature&) = default;
};

struct RouteMarker {
    double distance_m = 0.0;
    std::string label;
    friend bool operator==(const RouteMarker&, const RouteMarker&) = default;
};

struct Route {
    std::string id;
    std::string name;
    Geometry path;  // polyline
    std::string origin_label;
    std::string destination_label;
    std::vector<RouteMarker> markers;
    std::optional<std::string> sensory;  // legend id of the route line
    friend bool operator==(const Route&, const Route&) = default;
};

enum class GraticuleKind { meridian, parallel };

/// A labeled meridian or parallel. Geographic maps give `value` in degrees;
/// planar maps give the x (meridian) or y (parallel) coordinate in meters.
struct Graticule {
    GraticuleKind kind = GraticuleKind::meridian;
    double value = 0.0;
    std::string label;
    friend bool operator==(const Graticule&, const Graticule&) = default;
};

struct BaselineCapabilities {
    bool shows_coordinates = false;
    bool shows_temporal = false;
    bool shows_overlaid = false;
    bool has_routes = false;
    bool shows_legend = false;
    friend bool operator==(const BaselineCapabilities&, const BaselineCapabilities&) = default;
};

struct MapDocument {
    Crs crs = Crs::planar;
    std::string title;
    std::vector<Feature> features;
    std::vector<Route> routes;
    std::vector<SensoryStyle> legend;
    std::vector<Graticule> graticules;
    std::optional<std::vector<std::string>> temporal_domain;
    BaselineCapabilities capabilities;

    const Feature* find_feature(std::string_view id) const {
        for (const auto& f : features)
            if (f.id == id) return &f;
        return nullptr;
    }
    const SensoryStyle* find_style(std::string_view id) const {
        for (const auto& s : legend)
            if (s.id == id) return &s;
        return nullptr;
    }
    friend bool operator==(const MapDocument&, const MapDocument&) = default;
};

struct Violation {
    std::string code;
    std::string path;
    std::string message;
    friend bool operator==(const Violation&, const Violation&) = default;
};

struct Box {
    double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
    double width() const { return max_x - min_x; }
    double height() const { return max_y - min_y; }
    Coord center() const { return {(min_x + max_x) / 2.0, (min_y + max_y) / 2.0}; }
    void expand(Coord c) {
        min_x = std::min(min_x, c.x);
        min_y = std::min(min_y, c.y);
        max_x = std::max(max_x, c.x);
        max_y = std::max(max_y, c.y);
    }
    static Box of(Coord c) { return {c.x, c.y, c.x, c.y}; }
    friend bool operator==(const Box&, const Box&) = default;
};

namespace detail {

inline void check_geometry(const Geometry& g, const std::string& path, std::vector<Violation>& out) {
    const auto& cs = g.coords;
    switch (g.kind) {
        case GeometryKind::point:
            if (cs.size() != 1)
                out.push_back({"point-arity", path, fmt::format("point must have exactly 1 coordinate, has {}", cs.size())});
            return;
        case GeometryKind::polyline:
            if (cs.size() < 2)
                out.push_back({"polyline-arity", path, fmt::format("polyline needs at least 2 coordinates, has {}", cs.size())});
            return;
        case GeometryKind::polygon: {
            if (cs.size() < 2 || cs.front() != cs.back()) {
                out.push_back({"polygon-not-closed", path, "polygon ring is not closed (first vertex must equal last)"});
                return;
            }
            const auto open = planar::open_ring(cs);
            std::set<std::pair<double, double>> distinct;
            for (Coord c : open) distinct.insert({c.x, c.y});
            if (distinct.size() < 3) {
                out.push_back({"degenerate-polygon", path, "degenerate polygon: fewer than 3 distinct vertices"});
                return;
            }
            if (!planar::ring_is_simple(cs)) {
                out.push_back({"non-simple-polygon", path, "non-simple polygon: boundary intersects itself"});
                return;
            }
            if (planar::signed_area(cs) <= 0.0)
                out.push_back({"polygon-winding", path, "polygon vertices are not counter-clockwise"});
            return;
        }
    }
}

inline double path_length_m(const Geometry& g, Crs crs) { return geodesy::crs_path_length(g.coords, crs); }

}  // namespace detail

/// Checks every data-model invariant. Empty result means the document is
/// valid. Feature violations come first in feature order, then legend,
/// routes, graticules and capability consistency.
inline std::vector<Violation> validate(const MapDocument& doc) {
    std::vector<Violation> out;
    std::set<std::string> seen_ids;
    for (std::size_t i = 0; i < doc.features.size(); ++i) {
        const Feature& f = doc.features[i];
        const std::string path = fmt::format("features[{}]", i);
        if (f.id.empty())
            out.push_back({"empty-id", path + ".id", "feature id is empty"});
        else if (!seen_ids.insert(f.id).second)
            out.push_back({"duplicate-id", path + ".id", fmt::format("duplicate feature id '{}'", f.id)});
        if (f.name.empty())
            out.push_back({"missing-name", path + ".name",
                           "feature has no name; every object on a text map needs a name"});
        detail::check_geometry(f.geometry, path + ".geometry", out);
        if (f.sensory && !doc.find_style(*f.sensory))
            out.push_back({"unknown-style", path + ".style", fmt::format("style '{}' is not in the legend", *f.sensory)});
        if (f.temporal) {
            if (!doc.temporal_domain) {
                out.push_back({"temporal-without-domain", path + ".temporal",
                               "feature carries a temporal series but the map has no temporal domain"});
            } else {
                for (const auto& [ts, v] : *f.temporal)
                    if (std::find(doc.temporal_domain->begin(), doc.temporal_domain->end(), ts) ==
                        doc.temporal_domain->end())
                        out.push_back({"temporal-outside-domain", path + ".temporal",
                                       fmt::format("timestamp '{}' is not in the temporal domain", ts)});
            }
        }
    }
    for (std::size_t i = 0; i < doc.legend.size(); ++i) {
        const auto& s = doc.legend[i];
        const std::string path = fmt::format("legend[{}]", i);
        if (s.id.empty()) out.push_back({"empty-style-id", path + ".id", "legend entry has no id"});
        if (s.color_name.empty()) out.push_back({"empty-color", path + ".color", "legend entry has no color name"});
    }
    std::set<std::string> route_ids;
    for (std::size_t i = 0; i < doc.routes.size(); ++i) {
        const Route& r = doc.routes[i];
        const std::string path = fmt::format("routes[{}]", i);
        if (r.id.empty())
            out.push_back({"empty-route-id", path + ".id", "route id is empty"});
        else if (!route_ids.insert(r.id).second)
            out.push_back({"duplicate-route-id", path + ".id", fmt::format("duplicate route id '{}'", r.id)});
        if (r.name.empty()) out.push_back({"missing-route-name", path + ".name", "route has no name"});
        if (r.path.kind != GeometryKind::polyline) {
            out.push_back({"route-not-polyline", path + ".path", "route path must be a polyline"});
            continue;
        }
        detail::check_geometry(r.path, path + ".path", out);
        const double len = detail::path_length_m(r.path, doc.crs);
        if (!(len > 0.0)) out.push_back({"route-zero-length", path + ".path", "route path has zero length"});
        double prev = -1.0;
        for (std::size_t m = 0; m < r.markers.size(); ++m) {
            const double d = r.markers[m].distance_m;
            if (d < 0.0 || d <= prev)
                out.push_back({"marker-order", fmt::format("{}.markers[{}]", path, m),
                               "marker distances must be non-negative and strictly increasing"});
            if (d > len + 1e-9)
                out.push_back({"marker-beyond-end", fmt::format("{}.markers[{}]", path, m),
                               fmt::format("marker at {} m lies beyond the route end ({} m)", d, len)});
            prev = d;
        }
        if (r.sensory && !doc.find_style(*r.sensory))
            out.push_back({"unknown-style", path + ".style", fmt::format("style '{}' is not in the legend", *r.sensory)});
    }
    for (std::size_t i = 0; i < doc.graticules.size(); ++i) {
        const auto& g = doc.graticules[i];
        if (doc.crs != Crs::geographic) continue;
        const double limit = g.kind == GraticuleKind::meridian ? 180.0 : 90.0;
        if (g.value < -limit || g.value > limit)
            out.push_back({"graticule-range", fmt::format("graticules[{}].value", i),
                           fmt::format("graticule value {} outside [-{}, {}]", g.value, limit, limit)});
    }
    if (doc.capabilities.has_routes != !doc.routes.empty())
        out.push_back({"capability-routes", "capabilities.has_routes",
                       "has_routes must be true exactly when the map defines routes"});
    if (doc.capabilities.shows_temporal != doc.temporal_domain.has_value())
        out.push_back({"capability-temporal", "capabilities.shows_temporal",
                       "shows_temporal must be true exactly when the map has a temporal domain"});
    return out;
}

/// Tight bounding box of every feature and route coordinate (CRS units).
inline Box extent(const MapDocument& doc) {
    if (doc.features.empty()) throw DomainError("extent of an empty document");
    std::optional<Box> box;
    auto add = [&](const Geometry& g) {
        for (Coord c : g.coords) {
            if (!box) box = Box::of(c);
            else box->expand(c);
        }
    };
    for (const auto& f : doc.features) add(f.geometry);
    for (const auto& r : doc.routes) add(r.path);
    if (!box) throw DomainError("extent of a document without coordinates");
    return *box;
}

/// Local metric frame centered on the document extent.
inline LocalFrame frame_for(const MapDocument& doc) {
    return LocalFrame(doc.crs, extent(doc).center());
}

}  // namespace mapverba
