#pragma once

// Spherical-earth helpers. Geographic coordinates are stored as
// Coord{x = longitude, y = latitude} in degrees.

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "mapverba/planar.hpp"

namespace mapverba {

enum class Crs { planar, geographic };

namespace geodesy {

inline constexpr double earth_radius_m = 6371000.0;

inline double to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

// a = sin²(Δφ/2) + cos φ1 · cos φ2 · sin²(Δλ/2),  d = 2R · atan2(√a, √(1−a))
inline double haversine(Coord a, Coord b) {
    const double phi1 = to_rad(a.y), phi2 = to_rad(b.y);
    const double dphi = phi2 - phi1;
    const double dlambda = to_rad(b.x - a.x);
    const double s1 = std::sin(dphi / 2.0), s2 = std::sin(dlambda / 2.0);
    const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
    return 2.0 * earth_radius_m * std::atan2(std::sqrt(h), std::sqrt(1.0 - h));
}

/// Initial great-circle bearing in degrees clockwise from north, [0, 360).
inline double initial_bearing(Coord from, Coord to) {
    const double phi1 = to_rad(from.y), phi2 = to_rad(to.y);
    const double dlambda = to_rad(to.x - from.x);
    const double y = std::sin(dlambda) * std::cos(phi2);
    const double x = std::cos(phi1) * std::sin(phi2) - std::sin(phi1) * std::cos(phi2) * std::cos(dlambda);
    double deg = to_deg(std::atan2(y, x));
    deg = std::fmod(deg + 360.0, 360.0);
    return deg >= 360.0 ? 0.0 : deg;
}

/// Distance in meters between two coordinates in the given CRS.
inline double crs_distance(Coord a, Coord b, Crs crs) {
    return crs == Crs::geographic ? haversine(a, b) : planar::dist(a, b);
}

inline double crs_path_length(std::span<const Coord> path, Crs crs) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) total += crs_distance(path[i], path[i + 1], crs);
    return total;
}

/// Polygon area on the sphere via the spherical-excess approximation
/// A = R²/2 · |Σ (λ2 − λ1)(2 + sin φ1 + sin φ2)|.
inline double spherical_ring_area(std::span<const Coord> ring) {
    const auto pts = planar::open_ring(ring);
    const std::size_t n = pts.size();
    if (n < 3) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Coord& p = pts[i];
        const Coord& q = pts[(i + 1) % n];
        sum += to_rad(q.x - p.x) * (2.0 + std::sin(to_rad(p.y)) + std::sin(to_rad(q.y)));
    }
    return std::abs(sum) * earth_radius_m * earth_radius_m / 2.0;
}

}  // namespace geodesy

/// Maps CRS coordinates into a local metric plane. Planar documents pass
/// through unchanged; geographic ones use an equirectangular projection
/// about a reference point, which is accurate at the scales maps describe.
class LocalFrame {
public:
    LocalFrame() = default;
    LocalFrame(Crs crs, Coord origin) : crs_(crs), origin_(origin) {
        if (crs_ == Crs::geographic) coslat_ = std::cos(geodesy::to_rad(origin.y));
    }

    Crs crs() const { return crs_; }
    Coord origin() const { return origin_; }

    Coord to_local(Coord c) const {
        if (crs_ == Crs::planar) return c;
        const double k = geodesy::earth_radius_m;
        return {geodesy::to_rad(c.x - origin_.x) * k * coslat_, geodesy::to_rad(c.y - origin_.y) * k};
    }

    Coord to_crs(Coord m) const {
        if (crs_ == Crs::planar) return m;
        const double k = geodesy::earth_radius_m;
        return {origin_.x + geodesy::to_deg(m.x / (k * coslat_)), origin_.y + geodesy::to_deg(m.y / k)};
    }

    std::vector<Coord> to_local(std::span<const Coord> cs) const {
        std::vector<Coord> out;
        out.reserve(cs.size());
        for (Coord c : cs) out.push_back(to_local(c));
        return out;
    }

private:
    Crs crs_ = Crs::planar;
    Coord origin_{};
    double coslat_ = 1.0;
};

}  // namespace mapverba
