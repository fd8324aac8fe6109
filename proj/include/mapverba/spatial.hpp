#pragma once

// Geometric quantities behind every spatial statement a text map makes:
// distance, direction, clock and compass quantization, topology, shape
// class, size, orientation, centroids and graticule offsets.
//
// Conventions: bearings are degrees clockwise from north in [0, 360);
// 12 o'clock is north. Distances are meters. Geographic geometry is moved
// into a local equirectangular frame for everything except point-to-point
// distance (haversine) and bearing (initial great-circle bearing).

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "mapverba/error.hpp"
#include "mapverba/geodesy.hpp"
#include "mapverba/map_model.hpp"
#include "mapverba/planar.hpp"

namespace mapverba {

struct Bearing {
    double degrees = 0.0;
    friend bool operator==(const Bearing&, const Bearing&) = default;
};

enum class ClockResolution { hour, half_hour };

struct ClockPhrase {
    int hour = 12;      // 1..12
    bool half = false;  // renders "H:30 o'clock"
    std::string text() const { return half ? fmt::format("{}:30 o'clock", hour) : fmt::format("{} o'clock", hour); }
    friend bool operator==(const ClockPhrase&, const ClockPhrase&) = default;
};

enum class Cardinal { north, northeast, east, southeast, south, southwest, west, northwest };

inline constexpr std::array<Cardinal, 8> all_cardinals = {Cardinal::north, Cardinal::northeast, Cardinal::east,
                                                          Cardinal::southeast, Cardinal::south, Cardinal::southwest,
                                                          Cardinal::west, Cardinal::northwest};

inline const char* to_string(Cardinal c) {
    static constexpr std::array<const char*, 8> names = {"north", "northeast", "east", "southeast",
                                                         "south", "southwest", "west", "northwest"};
    return names[static_cast<int>(c)];
}

/// Short navigation token: n, ne, e, se, s, sw, w, nw.
inline const char* token(Cardinal c) {
    static constexpr std::array<const char*, 8> names = {"n", "ne", "e", "se", "s", "sw", "w", "nw"};
    return names[static_cast<int>(c)];
}

inline Cardinal opposite(Cardinal c) { return static_cast<Cardinal>((static_cast<int>(c) + 4) % 8); }

inline std::optional<Cardinal> cardinal_from_string(std::string_view s) {
    for (Cardinal c : all_cardinals)
        if (s == to_string(c) || s == token(c)) return c;
    return std::nullopt;
}

enum class TopoRelation { disjoint, touches, overlaps, contains, within, crosses, equals };

inline const char* to_string(TopoRelation r) {
    switch (r) {
        case TopoRelation::disjoint: return "disjoint";
        case TopoRelation::touches: return "touches";
        case TopoRelation::overlaps: return "overlaps";
        case TopoRelation::contains: return "contains";
        case TopoRelation::within: return "within";
        case TopoRelation::crosses: return "crosses";
        case TopoRelation::equals: return "equals";
    }
    return "?";
}

inline TopoRelation converse(TopoRelation r) {
    if (r == TopoRelation::contains) return TopoRelation::within;
    if (r == TopoRelation::within) return TopoRelation::contains;
    return r;
}

enum class ShapeKind { point, segment, triangle, rectangle, square, regular_polygon, circle_like, irregular };

inline const char* to_string(ShapeKind k) {
    switch (k) {
        case ShapeKind::point: return "point";
        case ShapeKind::segment: return "segment";
        case ShapeKind::triangle: return "triangle";
        case ShapeKind::rectangle: return "rectangle";
        case ShapeKind::square: return "square";
        case ShapeKind::regular_polygon: return "regular-polygon";
        case ShapeKind::circle_like: return "circle-like";
        case ShapeKind::irregular: return "irregular";
    }
    return "?";
}

struct ShapeClass {
    ShapeKind kind = ShapeKind::point;
    std::size_t vertex_count = 0;      // after dropping collinear vertices
    std::vector<double> edge_lengths;  // meters, of the reduced outline
    double aspect_ratio = 1.0;         // long / short side of the minimum-area bounding rectangle
};

struct SizeMetrics {
    double perimeter = 0.0;
    double area = 0.0;
    std::vector<double> edge_lengths;
    double bbox_width = 0.0;
    double bbox_height = 0.0;
    double path_length = 0.0;
};

struct OrientationInfo {
    Bearing principal;              // long axis, [0, 180)
    std::optional<Bearing> facing;  // triangles: centroid -> apex
};

enum class DistanceMode { centroid, nearest_boundary };

struct GraticuleOffset {
    std::string label;
    double offset_m = 0.0;
    Cardinal side = Cardinal::east;  // which side of the graticule the point lies on
};

/// Shape tolerances. All relative, so classification is invariant under
/// rigid motion and uniform scaling.
struct ShapeTolerances {
    double right_angle_deg = 10.0;
    double square_side_ratio = 1.05;
    double regular_variation = 0.05;
    double circle_radial_deviation = 0.05;
};

namespace spatial {

namespace detail {

// Bearings are snapped to a 2^-40 degree grid so that adding or removing
// 180 degrees is exact in double precision.
inline double snap_degrees(double deg) {
    constexpr double grid = 1099511627776.0;  // 2^40
    return std::round(deg * grid) / grid;
}

inline double planar_bearing_deg(double dx, double dy) {
    // Evaluate atan2 on a canonical half-plane so the reverse direction is
    // exactly +180.
    const bool canonical = dx > 0.0 || (dx == 0.0 && dy > 0.0);
    double deg = canonical ? geodesy::to_deg(std::atan2(dx, dy)) : geodesy::to_deg(std::atan2(-dx, -dy));
    deg = snap_degrees(deg);
    if (!canonical) deg += 180.0;
    return deg >= 360.0 ? deg - 360.0 : deg;
}

inline Box box_of(std::span<const Coord> cs) {
    Box b = Box::of(cs.front());
    for (Coord c : cs) b.expand(c);
    return b;
}

inline LocalFrame frame_for(const Geometry& a, Crs crs) { return LocalFrame(crs, box_of(a.coords).center()); }

inline LocalFrame frame_for(const Geometry& a, const Geometry& b, Crs crs) {
    Box box = box_of(a.coords);
    for (Coord c : b.coords) box.expand(c);
    return LocalFrame(crs, box.center());
}

inline Geometry to_local(const Geometry& g, const LocalFrame& f) {
    return {g.kind, f.to_local(g.coords)};
}

inline std::vector<std::pair<Coord, Coord>> segments_of(const Geometry& g) {
    std::vector<std::pair<Coord, Coord>> segs;
    for (std::size_t i = 0; i + 1 < g.coords.size(); ++i) segs.emplace_back(g.coords[i], g.coords[i + 1]);
    return segs;
}

inline double min_boundary_distance(const Geometry& a, const Geometry& b) {
    const auto sa = segments_of(a);
    const auto sb = segments_of(b);
    double best = std::numeric_limits<double>::infinity();
    if (sa.empty() && sb.empty()) return planar::dist(a.coords[0], b.coords[0]);
    if (sa.empty()) return planar::point_path_distance(a.coords[0], b.coords);
    if (sb.empty()) return planar::point_path_distance(b.coords[0], a.coords);
    for (const auto& [p, q] : sa)
        for (const auto& [r, s] : sb) best = std::min(best, planar::segment_segment_distance(p, q, r, s));
    return best;
}

enum class Loc { interior, boundary, exterior };

/// Where p lies relative to g (planar, local frame).
inline Loc locate(Coord p, const Geometry& g, double eps) {
    switch (g.kind) {
        case GeometryKind::point:
            return planar::dist(p, g.coords[0]) <= eps ? Loc::interior : Loc::exterior;
        case GeometryKind::polyline: {
            if (planar::point_path_distance(p, g.coords) > eps) return Loc::exterior;
            const bool closed = g.coords.front() == g.coords.back();
            if (!closed && (planar::dist(p, g.coords.front()) <= eps || planar::dist(p, g.coords.back()) <= eps))
                return Loc::boundary;
            return Loc::interior;
        }
        case GeometryKind::polygon:
            if (planar::point_path_distance(p, g.coords) <= eps) return Loc::boundary;
            return planar::ray_cast_inside(p, g.coords) ? Loc::interior : Loc::exterior;
    }
    return Loc::exterior;
}

/// A piece of a path after splitting it where it meets another geometry.
struct Piece {
    Coord a, b;
    double t0 = 0.0, t1 = 0.0;  // along-path distance at the ends
    Loc loc = Loc::exterior;    // location of the piece midpoint
};

/// Splits the segments of `path` at every point where they meet the edges
/// of `other`, and classifies each piece by its midpoint.
inline std::vector<Piece> split_and_classify(const Geometry& path, const Geometry& other, double eps) {
    std::vector<Piece> pieces;
    const auto cutters = segments_of(other);
    double offset = 0.0;
    for (std::size_t i = 0; i + 1 < path.coords.size(); ++i) {
        const Coord a = path.coords[i], b = path.coords[i + 1];
        const double len = planar::dist(a, b);
        std::vector<double> ts = {0.0, 1.0};
        for (const auto& [c, d] : cutters)
            for (double t : planar::segment_cut_parameters(a, b, c, d)) ts.push_back(t);
        if (other.kind == GeometryKind::point) {
            const Coord p = other.coords[0];
            const Coord ab = b - a;
            const double l2 = planar::dot(ab, ab);
            if (l2 > 0.0) ts.push_back(std::clamp(planar::dot(p - a, ab) / l2, 0.0, 1.0));
        }
        std::sort(ts.begin(), ts.end());
        for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
            const double u0 = ts[k], u1 = ts[k + 1];
            if ((u1 - u0) * len <= 1e-12 * std::max(1.0, len)) continue;
            Piece pc;
            pc.a = a + (b - a) * u0;
            pc.b = a + (b - a) * u1;
            pc.t0 = offset + u0 * len;
            pc.t1 = offset + u1 * len;
            pc.loc = locate(pc.a + (pc.b - pc.a) * 0.5, other, eps);
            pieces.push_back(pc);
        }
        offset += len;
    }
    return pieces;
}

struct PieceSummary {
    bool interior = false, boundary = false, exterior = false;
};

inline PieceSummary summarize(const std::vector<Piece>& ps) {
    PieceSummary s;
    for (const auto& p : ps) {
        if (p.loc == Loc::interior) s.interior = true;
        else if (p.loc == Loc::boundary) s.boundary = true;
        else s.exterior = true;
    }
    return s;
}

inline int rank(GeometryKind k) { return static_cast<int>(k); }

inline bool line_endpoint_near(Coord p, const Geometry& line, double eps) {
    if (line.coords.front() == line.coords.back()) return false;
    return planar::dist(p, line.coords.front()) <= eps || planar::dist(p, line.coords.back()) <= eps;
}

// a.kind <= b.kind, both in the local frame.
inline TopoRelation topology_ordered(const Geometry& a, const Geometry& b, double eps) {
    using K = GeometryKind;
    if (a.kind == K::point) {
        const Coord p = a.coords[0];
        if (b.kind == K::point) return planar::dist(p, b.coords[0]) <= eps ? TopoRelation::equals : TopoRelation::disjoint;
        switch (locate(p, b, eps)) {
            case Loc::interior: return TopoRelation::within;
            case Loc::boundary: return TopoRelation::touches;
            case Loc::exterior: return TopoRelation::disjoint;
        }
    }
    if (a.kind == K::polyline && b.kind == K::polyline) {
        const auto pa = split_and_classify(a, b, eps);
        const auto pb = split_and_classify(b, a, eps);
        const bool a_on = std::all_of(pa.begin(), pa.end(), [](const Piece& p) { return p.loc != Loc::exterior; });
        const bool b_on = std::all_of(pb.begin(), pb.end(), [](const Piece& p) { return p.loc != Loc::exterior; });
        const bool shared = std::any_of(pa.begin(), pa.end(), [](const Piece& p) { return p.loc != Loc::exterior; });
        if (a_on && b_on) return TopoRelation::equals;
        if (a_on) return TopoRelation::within;
        if (b_on) return TopoRelation::contains;
        if (shared) return TopoRelation::overlaps;
        bool any_meet = false;
        for (const auto& [p, q] : segments_of(a))
            for (const auto& [r, s] : segments_of(b))
                for (double t : planar::segment_cut_parameters(p, q, r, s)) {
                    any_meet = true;
                    const Coord x = p + (q - p) * t;
                    if (!line_endpoint_near(x, a, eps) && !line_endpoint_near(x, b, eps)) return TopoRelation::crosses;
                }
        if (any_meet || min_boundary_distance(a, b) <= eps) return TopoRelation::touches;
        return TopoRelation::disjoint;
    }
    if (a.kind == K::polyline) {  // b is a polygon
        const auto s = summarize(split_and_classify(a, b, eps));
        if (s.interior && s.exterior) return TopoRelation::crosses;
        if (s.interior) return TopoRelation::within;
        if (s.boundary || min_boundary_distance(a, b) <= eps) return TopoRelation::touches;
        return TopoRelation::disjoint;
    }
    // polygon / polygon
    const auto sa = summarize(split_and_classify(a, b, eps));
    const auto sb = summarize(split_and_classify(b, a, eps));
    if (!sa.exterior && !sb.exterior) return TopoRelation::equals;
    if (!sb.exterior) return TopoRelation::contains;
    if (!sa.exterior) return TopoRelation::within;
    if (sa.interior || sb.interior) return TopoRelation::overlaps;
    if (min_boundary_distance(a, b) <= eps) return TopoRelation::touches;
    return TopoRelation::disjoint;
}

inline Coord polygon_centroid(std::span<const Coord> ring_in) {
    const auto ring = planar::open_ring(ring_in);
    // Shift to the first vertex for numerical stability.
    const Coord o = ring[0];
    double a2 = 0.0, cx = 0.0, cy = 0.0;
    for (std::size_t i = 0; i < ring.size(); ++i) {
        const Coord p = ring[i] - o;
        const Coord q = ring[(i + 1) % ring.size()] - o;
        const double w = planar::cross(p, q);
        a2 += w;
        cx += (p.x + q.x) * w;
        cy += (p.y + q.y) * w;
    }
    if (a2 == 0.0) {
        Coord s{};
        for (Coord c : ring) s = s + c;
        return s * (1.0 / static_cast<double>(ring.size()));
    }
    return {o.x + cx / (3.0 * a2), o.y + cy / (3.0 * a2)};
}

inline Coord polyline_centroid(std::span<const Coord> path) {
    double total = 0.0;
    Coord acc{};
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const double len = planar::dist(path[i], path[i + 1]);
        acc = acc + (path[i] + path[i + 1]) * (0.5 * len);
        total += len;
    }
    if (total == 0.0) return path.front();
    return acc * (1.0 / total);
}

/// Drops vertices where the outline does not turn.
inline std::vector<Coord> drop_collinear(std::vector<Coord> ring) {
    bool changed = true;
    while (changed && ring.size() > 3) {
        changed = false;
        for (std::size_t i = 0; i < ring.size(); ++i) {
            const Coord prev = ring[(i + ring.size() - 1) % ring.size()];
            const Coord cur = ring[i];
            const Coord next = ring[(i + 1) % ring.size()];
            const Coord u = cur - prev, v = next - cur;
            const double scale = planar::norm(u) * planar::norm(v);
            if (scale == 0.0 || (std::abs(planar::cross(u, v)) <= 1e-9 * scale && planar::dot(u, v) > 0.0)) {
                ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
        }
    }
    return ring;
}

inline std::vector<Coord> convex_hull(std::vector<Coord> pts) {
    std::sort(pts.begin(), pts.end(), [](Coord a, Coord b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Coord> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && planar::orient(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
        while (k >= t && planar::orient(hull[k - 2], hull[k - 1], pts[i - 1]) <= 0) --k;
        hull[k++] = pts[i - 1];
    }
    hull.resize(k - 1);
    return hull;
}

struct MinRect {
    Coord long_axis{0, 1};
    double long_side = 0.0;
    double short_side = 0.0;
};

/// Minimum-area bounding rectangle by checking every hull edge direction.
inline MinRect min_area_rect(const std::vector<Coord>& pts) {
    const auto hull = convex_hull(pts);
    MinRect best;
    if (hull.size() < 2) return best;
    double best_area = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Coord e = hull[(i + 1) % hull.size()] - hull[i];
        const double len = planar::norm(e);
        if (len == 0.0) continue;
        const Coord u = e * (1.0 / len);
        const Coord v{-u.y, u.x};
        double umin = std::numeric_limits<double>::infinity(), umax = -umin, vmin = umin, vmax = -umin;
        for (Coord p : hull) {
            umin = std::min(umin, planar::dot(p, u));
            umax = std::max(umax, planar::dot(p, u));
            vmin = std::min(vmin, planar::dot(p, v));
            vmax = std::max(vmax, planar::dot(p, v));
        }
        const double area = (umax - umin) * (vmax - vmin);
        if (area < best_area * (1.0 - 1e-12)) {
            best_area = area;
            const double du = umax - umin, dv = vmax - vmin;
            best.long_axis = du >= dv ? u : v;
            best.long_side = std::max(du, dv);
            best.short_side = std::min(du, dv);
        }
    }
    return best;
}

inline std::vector<double> interior_angles_deg(const std::vector<Coord>& ring) {
    std::vector<double> out;
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Coord prev = ring[(i + n - 1) % n], cur = ring[i], next = ring[(i + 1) % n];
        const Coord u = prev - cur, v = next - cur;
        double ang = geodesy::to_deg(std::atan2(std::abs(planar::cross(u, v)), planar::dot(u, v)));
        // CCW ring: a right turn at this vertex means a reflex interior angle.
        if (planar::cross(cur - prev, next - cur) < 0.0) ang = 360.0 - ang;
        out.push_back(ang);
    }
    return out;
}

inline double relative_variation(const std::vector<double>& xs) {
    const auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    return mean == 0.0 ? 0.0 : (*mx - *mn) / mean;
}

}  // namespace detail

/// Point = the coordinate; polyline = length-weighted centroid of its
/// segments; polygon = area centroid.
inline Coord centroid(const Geometry& g, Crs crs = Crs::planar) {
    if (g.kind == GeometryKind::point) return g.coords.at(0);
    const LocalFrame f = detail::frame_for(g, crs);
    const auto local = f.to_local(g.coords);
    const Coord c = g.kind == GeometryKind::polygon ? detail::polygon_centroid(local) : detail::polyline_centroid(local);
    return f.to_crs(c);
}

/// Bearing from one point to another. Throws DomainError for coincident points.
inline Bearing bearing(Coord from, Coord to, Crs crs = Crs::planar) {
    if (from == to) throw DomainError("bearing between coincident points");
    if (crs == Crs::geographic) {
        if (geodesy::haversine(from, to) == 0.0) throw DomainError("bearing between coincident points");
        const double deg = detail::snap_degrees(geodesy::initial_bearing(from, to));
        return {deg >= 360.0 ? 0.0 : deg};
    }
    return {detail::planar_bearing_deg(to.x - from.x, to.y - from.y)};
}

/// Nearest hour (30 degree sectors) or half hour (15 degree sectors); ties
/// round clockwise, 0 degrees is 12 o'clock.
inline ClockPhrase quantize_clock(Bearing b, ClockResolution res) {
    if (res == ClockResolution::hour) {
        const int k = static_cast<int>(std::floor((b.degrees + 15.0) / 30.0)) % 12;
        return {k == 0 ? 12 : k, false};
    }
    const int k = static_cast<int>(std::floor((b.degrees + 7.5) / 15.0)) % 24;
    const int hour = k / 2;
    return {hour == 0 ? 12 : hour, k % 2 == 1};
}

/// Eight 45 degree sectors centered on the compass points; ties round clockwise.
inline Cardinal quantize_cardinal(Bearing b) {
    const int k = static_cast<int>(std::floor((b.degrees + 22.5) / 45.0)) % 8;
    return static_cast<Cardinal>(k);
}

/// Coincidence tolerance: 1e-6 of the diagonal of the combined extent.
inline double coincidence_epsilon(const Box& local_extent) {
    return 1e-6 * std::hypot(local_extent.width(), local_extent.height());
}

/// One relation per pair, by precedence equals > contains/within > crosses >
/// overlaps > touches > disjoint. `eps` overrides the touch tolerance (meters).
inline TopoRelation topology(const Geometry& a, const Geometry& b, Crs crs = Crs::planar,
                             std::optional<double> eps = std::nullopt) {
    const LocalFrame f = detail::frame_for(a, b, crs);
    const Geometry la = detail::to_local(a, f);
    const Geometry lb = detail::to_local(b, f);
    double e = 0.0;
    if (eps) {
        e = *eps;
    } else {
        Box box = detail::box_of(la.coords);
        for (Coord c : lb.coords) box.expand(c);
        e = coincidence_epsilon(box);
    }
    if (detail::rank(la.kind) <= detail::rank(lb.kind)) return detail::topology_ordered(la, lb, e);
    return converse(detail::topology_ordered(lb, la, e));
}

/// Centroid distance, or the minimum boundary distance (0 when the
/// geometries intersect or one contains the other).
inline double distance(const Geometry& a, const Geometry& b, DistanceMode mode, Crs crs = Crs::planar) {
    if (mode == DistanceMode::centroid) return geodesy::crs_distance(centroid(a, crs), centroid(b, crs), crs);
    const LocalFrame f = detail::frame_for(a, b, crs);
    const Geometry la = detail::to_local(a, f);
    const Geometry lb = detail::to_local(b, f);
    const double d = detail::min_boundary_distance(la, lb);
    if (d == 0.0) return 0.0;
    auto inside = [](const Geometry& pts, const Geometry& poly) {
        if (poly.kind != GeometryKind::polygon) return false;
        return std::any_of(pts.coords.begin(), pts.coords.end(),
                           [&](Coord c) { return planar::ray_cast_inside(c, poly.coords); });
    };
    if (inside(la, lb) || inside(lb, la)) return 0.0;
    return d;
}

inline SizeMetrics size_metrics(const Geometry& g, Crs crs = Crs::planar) {
    SizeMetrics m;
    if (g.kind == GeometryKind::point) return m;
    for (std::size_t i = 0; i + 1 < g.coords.size(); ++i)
        m.edge_lengths.push_back(geodesy::crs_distance(g.coords[i], g.coords[i + 1], crs));
    double total = 0.0;
    for (double e : m.edge_lengths) total += e;
    const Box box = detail::box_of(g.coords);
    if (crs == Crs::geographic) {
        const Coord c = box.center();
        m.bbox_width = geodesy::haversine({box.min_x, c.y}, {box.max_x, c.y});
        m.bbox_height = geodesy::haversine({c.x, box.min_y}, {c.x, box.max_y});
    } else {
        m.bbox_width = box.width();
        m.bbox_height = box.height();
    }
    if (g.kind == GeometryKind::polyline) {
        m.path_length = total;
    } else {
        m.perimeter = total;
        m.area = crs == Crs::geographic ? geodesy::spherical_ring_area(g.coords)
                                        : std::abs(planar::signed_area(g.coords));
    }
    return m;
}

inline ShapeClass classify_shape(const Geometry& g, Crs crs = Crs::planar, const ShapeTolerances& tol = {}) {
    ShapeClass sc;
    if (g.kind == GeometryKind::point) {
        sc.kind = ShapeKind::point;
        sc.vertex_count = 1;
        return sc;
    }
    const LocalFrame f = detail::frame_for(g, crs);
    const auto local = f.to_local(g.vertices());
    const auto rect = detail::min_area_rect(local);
    sc.aspect_ratio = rect.short_side > 0.0 ? rect.long_side / rect.short_side
                                            : std::numeric_limits<double>::infinity();
    if (g.kind == GeometryKind::polyline) {
        // A polyline is a segment when every vertex lies on its chord.
        const double len = planar::dist(local.front(), local.back());
        double dev = 0.0;
        for (Coord c : local) dev = std::max(dev, planar::point_segment_distance(c, local.front(), local.back()));
        sc.vertex_count = local.size();
        for (std::size_t i = 0; i + 1 < local.size(); ++i) sc.edge_lengths.push_back(planar::dist(local[i], local[i + 1]));
        sc.kind = (len > 0.0 && dev <= 1e-9 * len) ? ShapeKind::segment : ShapeKind::irregular;
        return sc;
    }
    const auto ring = detail::drop_collinear(local);
    const std::size_t n = ring.size();
    sc.vertex_count = n;
    for (std::size_t i = 0; i < n; ++i) sc.edge_lengths.push_back(planar::dist(ring[i], ring[(i + 1) % n]));
    const auto angles = detail::interior_angles_deg(ring);
    if (n == 3) {
        sc.kind = ShapeKind::triangle;
        return sc;
    }
    if (n == 4 && std::all_of(angles.begin(), angles.end(),
                              [&](double a) { return std::abs(a - 90.0) <= tol.right_angle_deg; })) {
        const auto [mn, mx] = std::minmax_element(sc.edge_lengths.begin(), sc.edge_lengths.end());
        sc.kind = (*mn > 0.0 && *mx / *mn <= tol.square_side_ratio) ? ShapeKind::square : ShapeKind::rectangle;
        return sc;
    }
    if (n >= 5 && n <= 8 && detail::relative_variation(sc.edge_lengths) <= tol.regular_variation &&
        detail::relative_variation(angles) <= tol.regular_variation) {
        sc.kind = ShapeKind::regular_polygon;
        return sc;
    }
    if (n >= 9) {
        const Coord c = detail::polygon_centroid(ring);
        std::vector<double> radii;
        double mean = 0.0;
        for (Coord p : ring) {
            radii.push_back(planar::dist(p, c));
            mean += radii.back();
        }
        mean /= static_cast<double>(n);
        double dev = 0.0;
        for (double r : radii) dev = std::max(dev, std::abs(r - mean));
        if (mean > 0.0 && dev <= tol.circle_radial_deviation * mean) {
            sc.kind = ShapeKind::circle_like;
            return sc;
        }
    }
    sc.kind = ShapeKind::irregular;
    return sc;
}

/// Long axis of the minimum-area bounding rectangle; triangles also report
/// which way the apex (vertex opposite the longest edge) faces.
inline OrientationInfo orientation(const Geometry& g, Crs crs = Crs::planar) {
    if (g.kind == GeometryKind::point) throw DomainError("a point has no orientation");
    const LocalFrame f = detail::frame_for(g, crs);
    const auto local = f.to_local(g.vertices());
    const auto rect = detail::min_area_rect(local);
    OrientationInfo info;
    double deg = detail::planar_bearing_deg(rect.long_axis.x, rect.long_axis.y);
    if (deg >= 180.0) deg -= 180.0;
    info.principal = {deg};
    if (g.kind == GeometryKind::polygon) {
        const auto ring = detail::drop_collinear(local);
        if (ring.size() == 3) {
            std::size_t longest = 0;
            double best = -1.0;
            for (std::size_t i = 0; i < 3; ++i) {
                const double len = planar::dist(ring[i], ring[(i + 1) % 3]);
                if (len > best) {
                    best = len;
                    longest = i;
                }
            }
            const Coord apex = ring[(longest + 2) % 3];
            const Coord c = detail::polygon_centroid(ring);
            if (apex != c) info.facing = Bearing{detail::planar_bearing_deg(apex.x - c.x, apex.y - c.y)};
        }
    }
    return info;
}

/// Offset from each graticule line to p, in meters, with the side of the
/// line that p lies on. Order follows the input.
inline std::vector<GraticuleOffset> graticule_offsets(Coord p, std::span<const Graticule> graticules,
                                                      Crs crs = Crs::planar) {
    if (graticules.empty()) throw DomainError("no graticules to measure against");
    std::vector<GraticuleOffset> out;
    for (const auto& g : graticules) {
        GraticuleOffset o;
        o.label = g.label;
        if (g.kind == GraticuleKind::meridian) {
            double d = p.x - g.value;
            if (crs == Crs::geographic) {
                d = std::remainder(d, 360.0);
                o.offset_m = geodesy::earth_radius_m *
                             std::asin(std::abs(std::sin(geodesy::to_rad(d))) * std::cos(geodesy::to_rad(p.y)));
            } else {
                o.offset_m = std::abs(d);
            }
            o.side = d < 0.0 ? Cardinal::west : Cardinal::east;
        } else {
            const double d = p.y - g.value;
            o.offset_m = crs == Crs::geographic ? geodesy::earth_radius_m * std::abs(geodesy::to_rad(d)) : std::abs(d);
            o.side = d < 0.0 ? Cardinal::south : Cardinal::north;
        }
        out.push_back(std::move(o));
    }
    return out;
}

}  // namespace spatial
}  // namespace mapverba
