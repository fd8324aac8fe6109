#pragma once

// Low-level planar primitives shared by the map model and the spatial engine.
// Everything here works on raw coordinates; callers are responsible for
// putting geographic input into a local metric frame first.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace mapverba {

struct Coord {
    double x{};
    double y{};
    friend bool operator==(const Coord&, const Coord&) = default;
};

inline Coord operator+(Coord a, Coord b) { return {a.x + b.x, a.y + b.y}; }
inline Coord operator-(Coord a, Coord b) { return {a.x - b.x, a.y - b.y}; }
inline Coord operator*(Coord a, double s) { return {a.x * s, a.y * s}; }

namespace planar {

inline double dot(Coord a, Coord b) { return a.x * b.x + a.y * b.y; }
inline double cross(Coord a, Coord b) { return a.x * b.y - a.y * b.x; }
inline double norm(Coord a) { return std::hypot(a.x, a.y); }
inline double dist(Coord a, Coord b) { return norm(b - a); }

/// Twice the signed area of triangle (a, b, c); positive when counter-clockwise.
inline double orient(Coord a, Coord b, Coord c) { return cross(b - a, c - a); }

/// Signed shoelace area of a ring. The ring may or may not repeat its first
/// vertex at the end. Positive for counter-clockwise rings.
inline double signed_area(std::span<const Coord> ring) {
    const std::size_t n = ring.size();
    if (n < 3) return 0.0;
    double twice = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Coord& p = ring[i];
        const Coord& q = ring[(i + 1) % n];
        twice += p.x * q.y - q.x * p.y;
    }
    return 0.5 * twice;
}

/// Ring vertices without the closing duplicate.
inline std::vector<Coord> open_ring(std::span<const Coord> ring) {
    std::vector<Coord> out(ring.begin(), ring.end());
    if (out.size() > 1 && out.front() == out.back()) out.pop_back();
    return out;
}

inline Coord closest_on_segment(Coord p, Coord a, Coord b) {
    const Coord ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) return a;
    const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return a + ab * t;
}

inline double point_segment_distance(Coord p, Coord a, Coord b) {
    return dist(p, closest_on_segment(p, a, b));
}

inline bool on_segment_collinear(Coord p, Coord a, Coord b) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

/// Closed-segment intersection test (touching endpoints count).
inline bool segments_intersect(Coord a, Coord b, Coord c, Coord d) {
    const double d1 = orient(c, d, a);
    const double d2 = orient(c, d, b);
    const double d3 = orient(a, b, c);
    const double d4 = orient(a, b, d);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
        ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    if (d1 == 0 && on_segment_collinear(a, c, d)) return true;
    if (d2 == 0 && on_segment_collinear(b, c, d)) return true;
    if (d3 == 0 && on_segment_collinear(c, a, b)) return true;
    if (d4 == 0 && on_segment_collinear(d, a, b)) return true;
    return false;
}

inline double segment_segment_distance(Coord a, Coord b, Coord c, Coord d) {
    if (segments_intersect(a, b, c, d)) return 0.0;
    return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                     point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
}

/// Parameters t along ab where segment cd meets it (0, 1 or 2 values for the
/// collinear-overlap case). Used to split paths at boundary crossings.
inline std::vector<double> segment_cut_parameters(Coord a, Coord b, Coord c, Coord d) {
    std::vector<double> ts;
    const Coord r = b - a;
    const Coord s = d - c;
    const double denom = cross(r, s);
    const double rr = dot(r, r);
    if (rr == 0.0) return ts;
    if (denom != 0.0) {
        const double t = cross(c - a, s) / denom;
        const double u = cross(c - a, r) / denom;
        if (t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0) ts.push_back(t);
        return ts;
    }
    if (cross(c - a, r) != 0.0) return ts;  // parallel, not collinear
    for (Coord p : {c, d}) {
        const double t = dot(p - a, r) / rr;
        if (t >= 0.0 && t <= 1.0) ts.push_back(t);
    }
    return ts;
}

/// Even-odd ray casting. Boundary points give an arbitrary answer; callers
/// that care test the boundary distance first.
inline bool ray_cast_inside(Coord p, std::span<const Coord> ring) {
    const auto pts = open_ring(ring);
    bool inside = false;
    const std::size_t n = pts.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Coord& a = pts[i];
        const Coord& b = pts[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x_at = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
            if (p.x < x_at) inside = !inside;
        }
    }
    return inside;
}

/// Distance from p to the nearest edge of a path. `closed` adds the edge from
/// the last vertex back to the first.
inline double point_path_distance(Coord p, std::span<const Coord> path, bool closed = false) {
    if (path.empty()) return 0.0;
    if (path.size() == 1) return dist(p, path[0]);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
        best = std::min(best, point_segment_distance(p, path[i], path[i + 1]));
    if (closed && path.front() != path.back())
        best = std::min(best, point_segment_distance(p, path.back(), path.front()));
    return best;
}

inline double path_length(std::span<const Coord> path) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) total += dist(path[i], path[i + 1]);
    return total;
}

/// True when a closed ring (first == last) has no two non-adjacent edges that
/// meet and no adjacent edges that fold back over each other.
inline bool ring_is_simple(std::span<const Coord> ring) {
    const auto pts = open_ring(ring);
    const std::size_t n = pts.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Coord a = pts[i], b = pts[(i + 1) % n];
        for (std::size_t j = i + 1; j < n; ++j) {
            const Coord c = pts[j], d = pts[(j + 1) % n];
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (!adjacent) {
                if (segments_intersect(a, b, c, d)) return false;
                continue;
            }
            // Adjacent edges share one vertex; they must not overlap collinearly.
            const Coord shared = (j == i + 1) ? b : a;
            const Coord other1 = (j == i + 1) ? a : b;
            const Coord other2 = (j == i + 1) ? d : c;
            if (orient(other1, shared, other2) == 0.0 &&
                dot(other1 - shared, other2 - shared) > 0.0)
                return false;
        }
    }
    return true;
}

}  // namespace planar
}  // namespace mapverba
