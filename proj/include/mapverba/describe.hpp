#pragma once

// Templated English for the spatial facts a text map must state: landmark
// descriptions, pair statements, route narratives, absolute locations and
// boundary traces.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "mapverba/format.hpp"
#include "mapverba/map_model.hpp"
#include "mapverba/spatial.hpp"

namespace mapverba {

struct DescribeOptions {
    ClockResolution pair_clock = ClockResolution::hour;
    double corridor_m = 15.0;          // route buffer on each side
    double trace_tolerance = 0.02;     // fraction of the outline's bbox diagonal
};

struct LandmarkDescription {
    std::string feature_id;
    std::optional<std::string> sensory_text;  // absent when the map shows no legend
    std::string name_text;
    std::string type_text;
    std::string shape_text;
    std::optional<std::string> orientation_text;  // absent for points
    std::optional<std::string> size_text;         // absent for points
    std::optional<std::string> temporal_text;
    std::optional<std::string> overlaid_text;

    /// The fields as one paragraph in the fixed clause order.
    std::string paragraph() const {
        std::vector<std::string> parts;
        if (sensory_text) parts.push_back(*sensory_text);
        parts.push_back(name_text);
        parts.push_back(type_text);
        parts.push_back(shape_text);
        if (orientation_text) parts.push_back(*orientation_text);
        if (size_text) parts.push_back(*size_text);
        if (overlaid_text) parts.push_back(*overlaid_text);
        if (temporal_text) parts.push_back(*temporal_text);
        return text::join(parts, " ");
    }
};

struct PairStatement {
    std::string a_id, b_id;
    double distance_m = 0.0;
    std::optional<Bearing> bearing;  // from b's centroid to a's; absent when they coincide
    std::optional<ClockPhrase> clock;
    std::optional<Cardinal> cardinal;
    TopoRelation topo = TopoRelation::disjoint;
    std::string relation_text;  // "23 m south (6 o'clock)"
    std::string text;
};

struct TraceSegment {
    Coord from, to;  // CRS coordinates
    double length_m = 0.0;
    Bearing bearing;
    ClockPhrase clock;
    Cardinal cardinal = Cardinal::north;
};

enum class EncounterKind { alongside, crossing, through, passes };

struct RouteEncounter {
    std::string feature_id;
    EncounterKind kind = EncounterKind::alongside;
    double start_m = 0.0;   // along the path
    double length_m = 0.0;  // frontage or crossing length
    double gap_m = 0.0;     // nearest distance from the path
    bool left = false;
    std::string text;
};

struct RouteDescription {
    std::string route_id;
    std::string prominence_heading;  // "Route 1: <name>"
    std::string landmark_section;
    std::string survey_section;
    std::vector<std::string> marker_entries;
    std::vector<RouteEncounter> encounters;
};

namespace describe_detail {

inline std::string sentence(std::string s) {
    if (s.empty() || s.back() == '.' || s.back() == '!' || s.back() == '?') return s;
    return s + ".";
}

inline std::string direction_words(Bearing b, ClockResolution res) {
    return fmt::format("{} ({})", to_string(spatial::quantize_cardinal(b)), spatial::quantize_clock(b, res).text());
}

inline Bearing plus(Bearing b, double deg) {
    double d = std::fmod(b.degrees + deg, 360.0);
    if (d < 0.0) d += 360.0;
    return {d};
}

/// Douglas–Peucker over pts[lo..hi], marking kept vertices.
inline void simplify(const std::vector<Coord>& pts, std::size_t lo, std::size_t hi, double tol,
                     std::vector<bool>& keep) {
    if (hi <= lo + 1) return;
    double best = -1.0;
    std::size_t at = lo;
    for (std::size_t k = lo + 1; k < hi; ++k) {
        const double d = planar::point_segment_distance(pts[k], pts[lo], pts[hi]);
        if (d > best) {
            best = d;
            at = k;
        }
    }
    if (best <= tol) return;
    keep[at] = true;
    simplify(pts, lo, at, tol, keep);
    simplify(pts, at, hi, tol, keep);
}

inline std::string topo_clause(TopoRelation r, const std::string& a, const std::string& b) {
    switch (r) {
        case TopoRelation::disjoint: return "they do not touch";
        case TopoRelation::touches: return "they touch";
        case TopoRelation::overlaps: return "they overlap";
        case TopoRelation::crosses: return "they cross";
        case TopoRelation::contains: return fmt::format("they overlap, and {} contains {}", a, b);
        case TopoRelation::within: return fmt::format("they overlap, and {} lies within {}", a, b);
        case TopoRelation::equals: return "they coincide";
    }
    return "";
}

inline std::string shape_name(const ShapeClass& sc) {
    switch (sc.kind) {
        case ShapeKind::point: return "point";
        case ShapeKind::segment: return "straight line";
        case ShapeKind::triangle: return "triangle";
        case ShapeKind::rectangle: return "rectangle";
        case ShapeKind::square: return "square";
        case ShapeKind::regular_polygon: return fmt::format("regular {}-sided polygon", sc.vertex_count);
        case ShapeKind::circle_like: return "roughly circular shape";
        case ShapeKind::irregular: return "irregular shape";
    }
    return "";
}

}  // namespace describe_detail

/// Touch tolerance for a whole document: 1e-6 of its extent diagonal in meters.
inline double document_epsilon(const MapDocument& doc) {
    const Box b = extent(doc);
    return 1e-6 * geodesy::crs_distance({b.min_x, b.min_y}, {b.max_x, b.max_y}, doc.crs);
}

/// Simplified outline segments in order: polygons counter-clockwise from the
/// northernmost vertex (ties: westernmost), polylines from their first vertex.
inline std::vector<TraceSegment> trace_segments(const Geometry& g, Crs crs, double tolerance_fraction = 0.02) {
    std::vector<Coord> pts = g.vertices();
    if (g.kind == GeometryKind::point || pts.size() < 2) return {};
    if (g.kind == GeometryKind::polygon) {
        std::size_t start = 0;
        for (std::size_t i = 1; i < pts.size(); ++i)
            if (pts[i].y > pts[start].y || (pts[i].y == pts[start].y && pts[i].x < pts[start].x)) start = i;
        std::rotate(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(start), pts.end());
        pts.push_back(pts.front());
    }
    const LocalFrame frame(crs, spatial::detail::box_of(pts).center());
    const auto local = frame.to_local(pts);
    const Box lb = spatial::detail::box_of(local);
    const double tol = tolerance_fraction * std::hypot(lb.width(), lb.height());

    std::vector<bool> keep(local.size(), false);
    keep.front() = keep.back() = true;
    if (g.kind == GeometryKind::polygon) {
        std::size_t far = 0;
        double best = -1.0;
        for (std::size_t i = 1; i + 1 < local.size(); ++i) {
            const double d = planar::dist(local[0], local[i]);
            if (d > best) {
                best = d;
                far = i;
            }
        }
        keep[far] = true;
        describe_detail::simplify(local, 0, far, tol, keep);
        describe_detail::simplify(local, far, local.size() - 1, tol, keep);
    } else {
        describe_detail::simplify(local, 0, local.size() - 1, tol, keep);
    }

    std::vector<TraceSegment> out;
    std::size_t prev = 0;
    for (std::size_t i = 1; i < local.size(); ++i) {
        if (!keep[i]) continue;
        TraceSegment s;
        s.from = pts[prev];
        s.to = pts[i];
        s.length_m = geodesy::crs_distance(s.from, s.to, crs);
        if (s.length_m > 0.0) {
            s.bearing = spatial::bearing(s.from, s.to, crs);
            s.clock = spatial::quantize_clock(s.bearing, ClockResolution::half_hour);
            s.cardinal = spatial::quantize_cardinal(s.bearing);
            out.push_back(s);
        }
        prev = i;
    }
    return out;
}

/// One clause per simplified outline segment: length, half-hour clock slope
/// and compass trend.
inline std::string trace_boundary(const Geometry& g, Crs crs, double tolerance_fraction = 0.02) {
    const auto segs = trace_segments(g, crs, tolerance_fraction);
    std::vector<std::string> clauses;
    for (const auto& s : segs)
        clauses.push_back(fmt::format("{} toward {} ({})", text::length(s.length_m), s.clock.text(), to_string(s.cardinal)));
    const char* opening = g.kind == GeometryKind::polygon ? "Starting at its northernmost point, the border runs "
                                                          : "Starting at its first point, the line runs ";
    return opening + text::join(clauses, ", then ") + ".";
}

inline LandmarkDescription describe_landmark(const Feature& f, const MapDocument& doc, const DescribeOptions& opt = {}) {
    LandmarkDescription d;
    d.feature_id = f.id;
    const BaselineCapabilities& caps = doc.capabilities;

    if (caps.shows_legend) {
        const SensoryStyle* s = f.sensory ? doc.find_style(*f.sensory) : nullptr;
        if (s) {
            std::string t = fmt::format("{} is shown in {}", f.name, s->color_name);
            if (s->pattern) t += fmt::format(" with {}", *s->pattern);
            if (s->notes) t += fmt::format(" ({})", *s->notes);
            d.sensory_text = describe_detail::sentence(t);
        } else {
            d.sensory_text = fmt::format("{} has no legend style.", f.name);
        }
    }
    d.name_text = describe_detail::sentence("Name: " + f.name);
    d.type_text = describe_detail::sentence(
        "Type: " + (f.type_label.empty() ? std::string("unlabeled ") + to_string(f.geometry.kind) : f.type_label));

    const ShapeClass sc = spatial::classify_shape(f.geometry, doc.crs);
    if (sc.kind == ShapeKind::irregular) {
        d.shape_text = "Shape: irregular outline. " + trace_boundary(f.geometry, doc.crs, opt.trace_tolerance);
    } else {
        d.shape_text = "Shape: " + describe_detail::shape_name(sc) + ".";
    }

    if (f.geometry.kind != GeometryKind::point) {
        const OrientationInfo o = spatial::orientation(f.geometry, doc.crs);
        const Bearing axis = o.principal;
        std::string t;
        if (sc.aspect_ratio <= 1.05) {
            t = fmt::format("Orientation: no long axis; its sides run toward {} and {}.",
                            describe_detail::direction_words(axis, ClockResolution::hour),
                            describe_detail::direction_words(describe_detail::plus(axis, 90.0), ClockResolution::hour));
        } else {
            const Bearing back = describe_detail::plus(axis, 180.0);
            t = fmt::format("Orientation: its long axis runs {} to {} ({} to {}).",
                            to_string(spatial::quantize_cardinal(back)), to_string(spatial::quantize_cardinal(axis)),
                            spatial::quantize_clock(back, ClockResolution::hour).text(),
                            spatial::quantize_clock(axis, ClockResolution::hour).text());
        }
        if (o.facing)
            t += fmt::format(" The point of the triangle faces {} at {}.", to_string(spatial::quantize_cardinal(*o.facing)),
                             spatial::quantize_clock(*o.facing, ClockResolution::hour).text());
        d.orientation_text = t;

        const SizeMetrics m = spatial::size_metrics(f.geometry, doc.crs);
        std::vector<std::string> edges;
        for (double e : m.edge_lengths) edges.push_back(text::length(e));
        if (f.geometry.kind == GeometryKind::polygon) {
            d.size_text = fmt::format("Size: {} edges of {}; perimeter {}; area {}; {} wide and {} tall.",
                                      m.edge_lengths.size(), text::join_list(edges), text::length(m.perimeter),
                                      text::area(m.area), text::length(m.bbox_width), text::length(m.bbox_height));
        } else {
            d.size_text = fmt::format("Size: {} long, in {} segment{} of {}.", text::length(m.path_length),
                                      m.edge_lengths.size(), m.edge_lengths.size() == 1 ? "" : "s",
                                      text::join_list(edges));
        }
    }

    if (caps.shows_overlaid) {
        if (f.overlaid.empty()) {
            d.overlaid_text = fmt::format("{} has no overlaid data.", f.name);
        } else {
            std::vector<std::string> items;
            for (const auto& [var, v] : f.overlaid) {
                const std::string shown =
                    std::holds_alternative<double>(v) ? text::value(std::get<double>(v)) : std::get<std::string>(v);
                items.push_back(shown + " " + var);
            }
            d.overlaid_text = fmt::format("{}: {}.", f.name, text::join_list(items));
        }
    }
    if (caps.shows_temporal) {
        if (!f.temporal || f.temporal->empty()) {
            d.temporal_text = fmt::format("{} has no values over time.", f.name);
        } else {
            std::vector<std::string> items;
            for (const auto& [ts, v] : *f.temporal) items.push_back(text::date(ts) + ": " + text::value(v));
            d.temporal_text = fmt::format("{} over time: {}.", f.name, text::join(items, ", "));
        }
    }
    return d;
}

/// "<A> is <d> <cardinal> (<clock>) from <B>; they <clause>." Distance is
/// centroid to centroid; direction is from B's centroid to A's.
inline PairStatement describe_pair(const Feature& a, const Feature& b, const MapDocument& doc,
                                   const DescribeOptions& opt = {}) {
    PairStatement p;
    p.a_id = a.id;
    p.b_id = b.id;
    const Coord ca = spatial::centroid(a.geometry, doc.crs), cb = spatial::centroid(b.geometry, doc.crs);
    p.distance_m = geodesy::crs_distance(cb, ca, doc.crs);
    p.topo = spatial::topology(a.geometry, b.geometry, doc.crs, document_epsilon(doc));
    if (p.distance_m > 0.0) {
        p.bearing = spatial::bearing(cb, ca, doc.crs);
        p.clock = spatial::quantize_clock(*p.bearing, opt.pair_clock);
        p.cardinal = spatial::quantize_cardinal(*p.bearing);
        p.relation_text = fmt::format("{} {} ({})", text::length(p.distance_m), to_string(*p.cardinal), p.clock->text());
    } else {
        p.relation_text = "0 m";
    }
    p.text = fmt::format("{} is {} from {}; {}.", a.name, p.relation_text, b.name,
                         describe_detail::topo_clause(p.topo, a.name, b.name));
    return p;
}

/// Centroid coordinates plus offsets to every graticule. Requires a map that
/// shows coordinates.
inline std::string describe_absolute(const Feature& f, const MapDocument& doc) {
    if (!doc.capabilities.shows_coordinates) throw DomainError("the map does not show coordinates");
    const Coord c = spatial::centroid(f.geometry, doc.crs);
    const std::string where = doc.crs == Crs::geographic ? text::lat_lon(c.y, c.x) : text::planar_xy(c.x, c.y);
    std::string out = fmt::format("The center of {} is at {}.", f.name, where);
    if (!doc.graticules.empty()) {
        std::vector<std::string> parts;
        for (const auto& o : spatial::graticule_offsets(c, doc.graticules, doc.crs)) {
            if (o.offset_m == 0.0) parts.push_back("on " + o.label);
            else parts.push_back(fmt::format("{} {} of {}", text::length(o.offset_m), to_string(o.side), o.label));
        }
        out += fmt::format(" Its center is {}.", text::join_list(parts));
    }
    return out;
}

namespace describe_detail {

// Along-path position of the point on `path` nearest to p.
inline double along(const std::vector<Coord>& path, Coord p, Coord* foot = nullptr, Coord* dir = nullptr) {
    double best = std::numeric_limits<double>::infinity(), at = 0.0, offset = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const Coord q = planar::closest_on_segment(p, path[i], path[i + 1]);
        const double d = planar::dist(p, q);
        if (d < best) {
            best = d;
            at = offset + planar::dist(path[i], q);
            if (foot) *foot = q;
            if (dir) *dir = path[i + 1] - path[i];
        }
        offset += planar::dist(path[i], path[i + 1]);
    }
    return at;
}

}  // namespace describe_detail

/// Landmark section, survey walk and heading for one route. `index` is the
/// 1-based position of the route in the document.
inline RouteDescription describe_route(const Route& r, const MapDocument& doc, std::size_t index = 1,
                                       const DescribeOptions& opt = {}) {
    using describe_detail::sentence;
    RouteDescription d;
    d.route_id = r.id;
    d.prominence_heading = fmt::format("Route {}: {}", index, r.name);

    const double total = geodesy::crs_path_length(r.path.coords, doc.crs);
    const Coord start = r.path.coords.front(), end = r.path.coords.back();
    std::vector<std::string> landmark;
    if (r.sensory) {
        if (const SensoryStyle* s = doc.find_style(*r.sensory)) {
            std::string t = "The route is drawn as a " + s->color_name + " line";
            if (s->pattern) t += " with " + *s->pattern;
            landmark.push_back(t + ".");
        }
    }
    const ShapeClass sc = spatial::classify_shape(r.path, doc.crs);
    if (sc.kind == ShapeKind::segment) {
        landmark.push_back(fmt::format("It is a straight line {} long.", text::length(total)));
    } else {
        landmark.push_back(fmt::format("It is a path of {} segments, {} long. {}", sc.edge_lengths.size(),
                                       text::length(total), trace_boundary(r.path, doc.crs, opt.trace_tolerance)));
    }
    landmark.push_back(sentence(fmt::format("It starts at {} and ends at {}", r.origin_label, r.destination_label)));
    if (!(start == end) && geodesy::crs_distance(start, end, doc.crs) > 0.0) {
        const Bearing b = spatial::bearing(start, end, doc.crs);
        const Bearing back = describe_detail::plus(b, 180.0);
        landmark.push_back(fmt::format("Overall it runs from {} to {} at a {} angle.",
                                       to_string(spatial::quantize_cardinal(back)),
                                       to_string(spatial::quantize_cardinal(b)),
                                       spatial::quantize_clock(b, ClockResolution::hour).text()));
    }
    for (const auto& m : r.markers)
        d.marker_entries.push_back(m.label.empty() ? fmt::format("a marker at {}", text::length(m.distance_m))
                                                   : fmt::format("marker {} at {}", m.label, text::length(m.distance_m)));
    if (d.marker_entries.empty()) landmark.push_back("It has no distance markers.");
    else landmark.push_back(fmt::format("Distance markers: {}.", text::join_list(d.marker_entries)));
    d.landmark_section = text::join(landmark, " ");

    // Survey walk in the local meter frame.
    const MapDocument& m = doc;
    const LocalFrame frame = frame_for(m);
    const auto path = frame.to_local(r.path.coords);
    const Geometry lpath = Geometry::polyline(path);
    const double eps = document_epsilon(doc);
    const double local_total = planar::path_length(path);
    const double scale = local_total > 0.0 ? total / local_total : 1.0;

    for (const auto& f : doc.features) {
        const Geometry lg{f.geometry.kind, frame.to_local(f.geometry.coords)};
        const double gap = spatial::distance(lpath, lg, DistanceMode::nearest_boundary);
        if (gap > opt.corridor_m) continue;
        const TopoRelation rel = spatial::topology(lpath, lg, Crs::planar, eps);
        RouteEncounter e;
        e.feature_id = f.id;
        e.gap_m = gap;
        const std::string label = f.type_label.empty() ? f.name : fmt::format("{} ({})", f.name, f.type_label);
        if (f.geometry.kind == GeometryKind::polygon && (rel == TopoRelation::crosses || rel == TopoRelation::within)) {
            double inside = 0.0, first = std::numeric_limits<double>::infinity();
            for (const auto& pc : spatial::detail::split_and_classify(lpath, lg, eps))
                if (pc.loc == spatial::detail::Loc::interior) {
                    inside += pc.t1 - pc.t0;
                    first = std::min(first, pc.t0);
                }
            e.kind = rel == TopoRelation::within ? EncounterKind::through : EncounterKind::crossing;
            e.start_m = first * scale;
            e.length_m = inside * scale;
            e.text = e.kind == EncounterKind::through
                         ? fmt::format("From {} the route runs through {} for {}.", text::length(e.start_m), label,
                                       text::length(e.length_m))
                         : fmt::format("At {} the route crosses {} for {}.", text::length(e.start_m), label,
                                       text::length(e.length_m));
        } else if (f.geometry.kind == GeometryKind::polyline && rel == TopoRelation::crosses) {
            double first = std::numeric_limits<double>::infinity(), offset = 0.0;
            for (std::size_t i = 0; i + 1 < path.size(); ++i) {
                for (std::size_t k = 0; k + 1 < lg.coords.size(); ++k)
                    for (double t : planar::segment_cut_parameters(path[i], path[i + 1], lg.coords[k], lg.coords[k + 1]))
                        first = std::min(first, offset + t * planar::dist(path[i], path[i + 1]));
                offset += planar::dist(path[i], path[i + 1]);
            }
            e.kind = EncounterKind::crossing;
            e.start_m = first * scale;
            e.text = fmt::format("At {} the route crosses {}.", text::length(e.start_m), label);
        } else {
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            for (Coord c : lg.coords) {
                const double t = describe_detail::along(path, c);
                lo = std::min(lo, t);
                hi = std::max(hi, t);
            }
            Coord foot{}, dir{};
            const Coord c = spatial::centroid(lg);
            describe_detail::along(path, c, &foot, &dir);
            e.left = planar::cross(dir, c - foot) > 0.0;
            e.start_m = lo * scale;
            e.length_m = (hi - lo) * scale;
            const char* side = e.left ? "left" : "right";
            if (e.length_m > 0.0) {
                e.kind = EncounterKind::alongside;
                e.text = fmt::format("From {} the route runs along {} on the {} for {}, {} away.",
                                     text::length(e.start_m), label, side, text::length(e.length_m),
                                     text::length(e.gap_m));
            } else {
                e.kind = EncounterKind::passes;
                e.text = fmt::format("At {} the route passes {} on the {}, {} away.", text::length(e.start_m), label,
                                     side, text::length(e.gap_m));
            }
        }
        d.encounters.push_back(std::move(e));
    }
    std::stable_sort(d.encounters.begin(), d.encounters.end(),
                     [](const RouteEncounter& x, const RouteEncounter& y) { return x.start_m < y.start_m; });

    std::vector<std::string> survey;
    survey.push_back(sentence(fmt::format("The route starts at {} and ends at {}", r.origin_label, r.destination_label)));
    for (const auto& e : d.encounters) survey.push_back(e.text);
    if (!d.encounters.empty())
        survey.push_back(sentence(fmt::format("It ends at {} after {}", r.destination_label, text::length(total))));
    d.survey_section = text::join(survey, " ");
    return d;
}

}  // namespace mapverba
