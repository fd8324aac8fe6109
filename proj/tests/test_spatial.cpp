#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mapverba/map_io.hpp"
#include "mapverba/spatial.hpp"
#include "oracles.hpp"

using namespace mapverba;
using namespace mapverba::spatial;

namespace {

const std::string kFixtures = MAPVERBA_FIXTURE_DIR;

Geometry square(double x0, double y0, double side) {
    return Geometry::polygon({{x0, y0}, {x0 + side, y0}, {x0 + side, y0 + side}, {x0, y0 + side}});
}

Geometry rotated_about_origin(const Geometry& g, double clockwise_deg) {
    const double r = oracle::deg2rad(clockwise_deg);
    Geometry out = g;
    for (auto& c : out.coords) c = {c.x * std::cos(r) + c.y * std::sin(r), -c.x * std::sin(r) + c.y * std::cos(r)};
    return out;
}

std::vector<oracle::P> to_oracle(const std::vector<Coord>& cs) {
    std::vector<oracle::P> out;
    for (Coord c : cs) out.push_back({c.x, c.y});
    return out;
}

}  // namespace

TEST(Distance, ThreeFourFive) {
    const auto a = Geometry::point({0, 0}), b = Geometry::point({3, 4});
    EXPECT_DOUBLE_EQ(distance(a, b, DistanceMode::centroid), 5.0);
    EXPECT_DOUBLE_EQ(distance(a, b, DistanceMode::nearest_boundary), 5.0);
}

TEST(Distance, IdenticalGeometriesAreZero) {
    const auto sq = square(0, 0, 1);
    EXPECT_EQ(distance(sq, sq, DistanceMode::centroid), 0.0);
    EXPECT_EQ(distance(sq, sq, DistanceMode::nearest_boundary), 0.0);
}

TEST(Distance, OneDegreeOfLongitudeAtTheEquator) {
    const auto a = Geometry::point({0, 0}), b = Geometry::point({1, 0});
    const double oracle = oracle::law_of_cosines(0, 0, 1, 0);
    EXPECT_NEAR(oracle, 111194.9, 0.1);
    EXPECT_NEAR(distance(a, b, DistanceMode::centroid, Crs::geographic), 111194.9, 0.1);
    EXPECT_NEAR(distance(a, b, DistanceMode::centroid, Crs::geographic), oracle, 1e-3);
}

TEST(Distance, FourRoomsRedToGreen) {
    const MapDocument doc = parse_map(oracle::read_file(kFixtures + "/four_rooms.geojson"));
    const auto& red = doc.find_feature("red")->geometry;
    const auto& green = doc.find_feature("green")->geometry;
    EXPECT_NEAR(distance(red, green, DistanceMode::centroid), 23.0, 1e-12);
    EXPECT_NEAR(distance(red, green, DistanceMode::nearest_boundary), 13.0, 1e-12);
}

TEST(Distance, NearestIsZeroWhenContained) {
    EXPECT_EQ(distance(square(0, 0, 10), square(4, 4, 1), DistanceMode::nearest_boundary), 0.0);
    EXPECT_EQ(distance(square(0, 0, 10), Geometry::point({5, 5}), DistanceMode::nearest_boundary), 0.0);
}

TEST(Bearing, CompassPoints) {
    EXPECT_EQ(bearing({0, 0}, {0, 1}).degrees, 0.0);
    EXPECT_EQ(bearing({0, 0}, {1, 0}).degrees, 90.0);
    EXPECT_NEAR(bearing({0, 0}, {1, -1}).degrees, 135.0, 1e-9);
    EXPECT_NEAR(bearing({0, 0}, {-1, 0}).degrees, 270.0, 1e-9);
    EXPECT_THROW(bearing({2, 2}, {2, 2}), DomainError);
}

TEST(Bearing, NearlyDueSouthStaysSouth) {
    const double tiny = 1e-17;
    EXPECT_EQ(bearing({0, 0}, {tiny, -12.2}).degrees, 180.0);
    EXPECT_EQ(bearing({tiny, -12.2}, {0, 0}).degrees, 0.0);
    EXPECT_EQ(bearing({0, 0}, {-tiny, -12.2}).degrees, 180.0);
    EXPECT_EQ(bearing({-tiny, -12.2}, {0, 0}).degrees, 0.0);
    const auto b = bearing({0, 0}, {-tiny, 12.2}).degrees;
    EXPECT_TRUE(b == 0.0 || b > 359.0);
    EXPECT_LT(b, 360.0);
}

TEST(Bearing, GeographicInitialBearing) {
    EXPECT_NEAR(bearing({0, 0}, {1, 0}, Crs::geographic).degrees, 90.0, 1e-9);
    EXPECT_NEAR(bearing({0, 0}, {0, 1}, Crs::geographic).degrees, 0.0, 1e-9);
    EXPECT_NEAR(bearing({0, 1}, {0, 0}, Crs::geographic).degrees, 180.0, 1e-9);
}

TEST(Quantize, ClockExamples) {
    using R = ClockResolution;
    EXPECT_EQ(quantize_clock({0}, R::hour).text(), "12 o'clock");
    EXPECT_EQ(quantize_clock({90}, R::hour).text(), "3 o'clock");
    EXPECT_EQ(quantize_clock({165}, R::half_hour).text(), "5:30 o'clock");
    EXPECT_EQ(quantize_clock({104}, R::hour).text(), "3 o'clock");
    EXPECT_EQ(quantize_clock({106}, R::hour).text(), "4 o'clock");
    EXPECT_EQ(quantize_clock({105}, R::hour).text(), "4 o'clock");
    EXPECT_EQ(quantize_clock({345}, R::hour).text(), "12 o'clock");
    EXPECT_EQ(quantize_clock({352.5}, R::half_hour).text(), "12 o'clock");
    EXPECT_EQ(quantize_clock({352.4}, R::half_hour).text(), "11:30 o'clock");
}

TEST(Quantize, HourSectorsAreHalfOpen) {
    // Exactly 12 distinct phrases, each owning a contiguous [30k-15, 30k+15) range.
    for (int k = 0; k < 12; ++k) {
        const int hour = k == 0 ? 12 : k;
        const double lo = std::fmod(30.0 * k - 15.0 + 360.0, 360.0);
        EXPECT_EQ(quantize_clock({lo}, ClockResolution::hour).hour, hour) << k;
        EXPECT_EQ(quantize_clock({std::fmod(lo + 29.999, 360.0)}, ClockResolution::hour).hour, hour) << k;
    }
}

TEST(Quantize, Cardinals) {
    EXPECT_EQ(quantize_cardinal({0}), Cardinal::north);
    EXPECT_EQ(quantize_cardinal({270}), Cardinal::west);
    EXPECT_EQ(quantize_cardinal({22.5}), Cardinal::northeast);
    EXPECT_EQ(quantize_cardinal({22.4}), Cardinal::north);
    EXPECT_EQ(quantize_cardinal({337.5}), Cardinal::north);
    EXPECT_EQ(quantize_cardinal({180}), Cardinal::south);
    for (Cardinal c : all_cardinals) {
        EXPECT_EQ(opposite(opposite(c)), c);
        EXPECT_NE(opposite(c), c);
        EXPECT_EQ(cardinal_from_string(token(c)), c);
        EXPECT_EQ(cardinal_from_string(to_string(c)), c);
    }
}

TEST(Topology, Basics) {
    const auto unit = square(0, 0, 1);
    EXPECT_EQ(topology(unit, unit), TopoRelation::equals);
    EXPECT_EQ(topology(unit, Geometry::point({0.5, 0.5})), TopoRelation::contains);
    EXPECT_EQ(topology(Geometry::point({0.5, 0.5}), unit), TopoRelation::within);
    EXPECT_EQ(topology(unit, square(5, 5, 1)), TopoRelation::disjoint);
    EXPECT_EQ(topology(unit, square(0.5, 0.5, 1)), TopoRelation::overlaps);
    EXPECT_EQ(topology(unit, square(1, 1, 1)), TopoRelation::touches);  // corner contact
    EXPECT_EQ(topology(Geometry::point({1, 0.5}), unit), TopoRelation::touches);
}

TEST(Topology, SharedEdgeTouches) {
    const auto a = square(0, 0, 1);
    const auto b = Geometry::polygon({{1, 0}, {2, 0}, {2, 1}, {1, 1}});
    EXPECT_EQ(oracle::grid_overlap_area(to_oracle(a.vertices()), to_oracle(b.vertices()), -1, -1, 3, 3), 0.0);
    EXPECT_EQ(topology(a, b), TopoRelation::touches);
    EXPECT_EQ(topology(b, a), TopoRelation::touches);
}

TEST(Topology, LineThroughSquareCrosses) {
    const auto line = Geometry::polyline({{-1, 0.5}, {2, 0.5}});
    EXPECT_DOUBLE_EQ(oracle::clip_length({-1, 0.5}, {2, 0.5}, 0, 0, 1, 1), 1.0);
    EXPECT_EQ(topology(line, square(0, 0, 1)), TopoRelation::crosses);
    EXPECT_EQ(topology(square(0, 0, 1), line), TopoRelation::crosses);
}

TEST(Topology, LineCases) {
    const auto unit = square(0, 0, 1);
    EXPECT_EQ(topology(Geometry::polyline({{0.2, 0.2}, {0.8, 0.8}}), unit), TopoRelation::within);
    EXPECT_EQ(topology(Geometry::polyline({{0, 0}, {1, 0}}), unit), TopoRelation::touches);
    EXPECT_EQ(topology(Geometry::polyline({{0, 0}, {2, 2}}), Geometry::polyline({{0, 2}, {2, 0}})),
              TopoRelation::crosses);
    EXPECT_EQ(topology(Geometry::polyline({{0, 0}, {1, 1}}), Geometry::polyline({{1, 1}, {2, 0}})),
              TopoRelation::touches);
    EXPECT_EQ(topology(Geometry::polyline({{0, 0}, {2, 0}}), Geometry::polyline({{1, 0}, {3, 0}})),
              TopoRelation::overlaps);
    EXPECT_EQ(topology(Geometry::polyline({{0, 0}, {3, 0}}), Geometry::polyline({{1, 0}, {2, 0}})),
              TopoRelation::contains);
}

TEST(Topology, PacificNorthwestStatesTouch) {
    const MapDocument doc = parse_map(oracle::read_file(kFixtures + "/pacific_northwest.geojson"));
    const auto& wa = doc.find_feature("wa")->geometry;
    const auto& ore = doc.find_feature("or")->geometry;
    const auto& id = doc.find_feature("id")->geometry;
    EXPECT_EQ(topology(wa, ore, Crs::geographic), TopoRelation::touches);
    EXPECT_EQ(topology(wa, id, Crs::geographic), TopoRelation::touches);
    EXPECT_EQ(topology(ore, id, Crs::geographic), TopoRelation::touches);
}

TEST(Topology, ConsistencyOnRandomSquares) {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> pos(0, 6), size(1, 4);
    for (int trial = 0; trial < 300; ++trial) {
        const auto a = square(pos(rng), pos(rng), size(rng));
        const auto b = square(pos(rng), pos(rng), size(rng));
        const auto ab = topology(a, b), ba = topology(b, a);
        EXPECT_EQ(ab, converse(ba));
        EXPECT_EQ(topology(a, a), TopoRelation::equals);
        const double gap = distance(a, b, DistanceMode::nearest_boundary);
        EXPECT_EQ(ab == TopoRelation::disjoint, gap > 1e-6 * 20) << trial;
        if (ab == TopoRelation::touches) {
            const auto va = to_oracle(a.vertices()), vb = to_oracle(b.vertices());
            EXPECT_EQ(oracle::grid_overlap_area(va, vb, -1, -1, 11, 11, 120), 0.0);
        }
    }
}

TEST(Shape, Classes) {
    const auto sq = classify_shape(square(0, 0, 10));
    EXPECT_EQ(sq.kind, ShapeKind::square);
    EXPECT_EQ(sq.edge_lengths, (std::vector<double>{10, 10, 10, 10}));
    EXPECT_EQ(classify_shape(Geometry::polygon({{0, 0}, {4, 0}, {1, 3}})).kind, ShapeKind::triangle);
    EXPECT_EQ(classify_shape(Geometry::polygon({{0, 0}, {10, 0}, {10, 2}, {0, 2}})).kind, ShapeKind::rectangle);
    EXPECT_EQ(classify_shape(Geometry::point({1, 1})).kind, ShapeKind::point);
    EXPECT_EQ(classify_shape(Geometry::polyline({{0, 0}, {1, 1}, {2, 2}})).kind, ShapeKind::segment);
    EXPECT_EQ(classify_shape(Geometry::polyline({{0, 0}, {1, 1}, {2, 0}})).kind, ShapeKind::irregular);
    // Extra collinear vertex on an edge does not change the class.
    EXPECT_EQ(classify_shape(Geometry::polygon({{0, 0}, {5, 0}, {10, 0}, {10, 10}, {0, 10}})).kind, ShapeKind::square);
}

TEST(Shape, RegularAndCircleLike) {
    auto ngon = [](int n, double r) {
        std::vector<Coord> pts;
        for (int i = 0; i < n; ++i) {
            const double t = 2 * std::numbers::pi * i / n;
            pts.push_back({r * std::cos(t), r * std::sin(t)});
        }
        return Geometry::polygon(pts);
    };
    EXPECT_EQ(classify_shape(ngon(6, 3)).kind, ShapeKind::regular_polygon);
    EXPECT_EQ(classify_shape(ngon(24, 5)).kind, ShapeKind::circle_like);
    EXPECT_EQ(classify_shape(ngon(24, 5)).vertex_count, 24u);
}

TEST(Shape, IdahoIsIrregular) {
    const MapDocument doc = parse_map(oracle::read_file(kFixtures + "/pacific_northwest.geojson"));
    EXPECT_EQ(classify_shape(doc.find_feature("id")->geometry, Crs::geographic).kind, ShapeKind::irregular);
}

TEST(Shape, InvariantUnderRigidMotionAndScale) {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> ang(0, 360), off(-100, 100), scale(0.01, 100);
    const std::vector<Geometry> shapes = {
        square(0, 0, 3), Geometry::polygon({{0, 0}, {8, 0}, {8, 3}, {0, 3}}), Geometry::polygon({{0, 0}, {4, 0}, {1, 3}}),
        Geometry::polygon({{0, 0}, {4, 0}, {4, 1}, {1, 1}, {1, 3}, {0, 3}})};
    for (const auto& g : shapes) {
        const auto kind = classify_shape(g).kind;
        for (int t = 0; t < 20; ++t) {
            Geometry m = rotated_about_origin(g, ang(rng));
            const double s = scale(rng), dx = off(rng), dy = off(rng);
            for (auto& c : m.coords) c = {c.x * s + dx, c.y * s + dy};
            EXPECT_EQ(classify_shape(m).kind, kind);
        }
    }
}

TEST(Size, UnitSquareAndPoint) {
    const auto m = size_metrics(square(0, 0, 1));
    EXPECT_DOUBLE_EQ(m.perimeter, 4.0);
    EXPECT_DOUBLE_EQ(m.area, 1.0);
    const auto p = size_metrics(Geometry::point({3, 3}));
    EXPECT_EQ(p.perimeter, 0.0);
    EXPECT_EQ(p.area, 0.0);
    EXPECT_TRUE(p.edge_lengths.empty());
}

TEST(Size, FiftyFiftyTwentyTriangle) {
    // Isosceles: base 20, apex above the base midpoint at height sqrt(50^2 - 10^2).
    const double h = std::sqrt(50.0 * 50.0 - 10.0 * 10.0);
    const auto m = size_metrics(Geometry::polygon({{0, 0}, {20, 0}, {10, h}}));
    auto edges = m.edge_lengths;
    std::sort(edges.begin(), edges.end());
    ASSERT_EQ(edges.size(), 3u);
    EXPECT_NEAR(edges[0], 20.0, 1e-12);
    EXPECT_NEAR(edges[1], 50.0, 1e-12);
    EXPECT_NEAR(edges[2], 50.0, 1e-12);
    EXPECT_NEAR(m.perimeter, 120.0, 1e-12);
}

TEST(Size, AreaInvariants) {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> ang(0, 360), off(-1e4, 1e4);
    const auto L = Geometry::polygon({{0, 0}, {4, 0}, {4, 1}, {1, 1}, {1, 3}, {0, 3}});
    const double area = size_metrics(L).area;
    EXPECT_DOUBLE_EQ(area, 6.0);
    EXPECT_GT(planar::signed_area(L.coords), 0.0);
    for (int t = 0; t < 50; ++t) {
        auto v = L.vertices();
        std::rotate(v.begin(), v.begin() + t % v.size(), v.end());
        Geometry m = rotated_about_origin(Geometry::polygon(v), ang(rng));
        const double dx = off(rng), dy = off(rng);
        for (auto& c : m.coords) c = {c.x + dx, c.y + dy};
        EXPECT_NEAR(size_metrics(m).area, area, 1e-9 * area * 1e4);
    }
}

TEST(Size, GeographicAreaIsPlausible) {
    // A 1 x 1 degree cell at the equator is about 111.2 km on a side.
    const auto cell = Geometry::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    const double side = oracle::law_of_cosines(0, 0, 1, 0);
    EXPECT_NEAR(size_metrics(cell, Crs::geographic).area / (side * side), 1.0, 1e-3);
}

TEST(Orientation, RectangleAxes) {
    const auto rect = Geometry::polygon({{-5, -1}, {5, -1}, {5, 1}, {-5, 1}});
    EXPECT_NEAR(orientation(rect).principal.degrees, 90.0, 1e-9);
    EXPECT_NEAR(orientation(rotated_about_origin(rect, 30)).principal.degrees, 120.0, 1e-9);
    EXPECT_NEAR(orientation(rotated_about_origin(rect, 90)).principal.degrees, 0.0, 1e-9);
    EXPECT_FALSE(orientation(rect).facing.has_value());
    EXPECT_THROW(orientation(Geometry::point({0, 0})), DomainError);
}

TEST(Orientation, TriangleFacingNorthwest) {
    // Base of length 10 perpendicular to the 330 degree direction, apex 4 m out.
    const double r = oracle::deg2rad(330);
    const Coord u{std::sin(r), std::cos(r)}, n{u.y, -u.x};
    const auto tri = Geometry::polygon({{n.x * 5, n.y * 5}, {-n.x * 5, -n.y * 5}, {u.x * 4, u.y * 4}});
    const auto info = orientation(tri);
    ASSERT_TRUE(info.facing.has_value());
    EXPECT_NEAR(info.facing->degrees, 330.0, 1e-9);
    EXPECT_EQ(quantize_clock(*info.facing, ClockResolution::hour).text(), "11 o'clock");
    EXPECT_EQ(quantize_cardinal(*info.facing), Cardinal::northwest);
}

TEST(Centroid, Basics) {
    EXPECT_EQ(centroid(square(0, 0, 1)), (Coord{0.5, 0.5}));
    EXPECT_EQ(centroid(Geometry::polyline({{0, 0}, {2, 0}})), (Coord{1, 0}));
    EXPECT_EQ(centroid(Geometry::point({7, 8})), (Coord{7, 8}));
}

TEST(Centroid, LShapeMatchesDecomposition) {
    // [0,4]x[0,1] (area 4) plus [0,1]x[1,3] (area 2).
    const double cx = (4 * 2.0 + 2 * 0.5) / 6, cy = (4 * 0.5 + 2 * 2.0) / 6;
    const Coord c = centroid(Geometry::polygon({{0, 0}, {4, 0}, {4, 1}, {1, 1}, {1, 3}, {0, 3}}));
    EXPECT_NEAR(c.x, cx, 1e-12);
    EXPECT_NEAR(c.y, cy, 1e-12);
}

TEST(Graticules, Offsets) {
    const std::vector<Graticule> gs = {{GraticuleKind::meridian, 0, "9 degrees E"},
                                       {GraticuleKind::parallel, -150, "45 degrees N"}};
    const auto on = graticule_offsets({0, 5}, std::span(gs).first(1));
    EXPECT_EQ(on[0].offset_m, 0.0);
    const auto o = graticule_offsets({-10, 0}, gs);
    ASSERT_EQ(o.size(), 2u);
    EXPECT_EQ(o[0].label, "9 degrees E");
    EXPECT_DOUBLE_EQ(o[0].offset_m, 10.0);
    EXPECT_EQ(o[0].side, Cardinal::west);
    EXPECT_EQ(o[1].label, "45 degrees N");
    EXPECT_DOUBLE_EQ(o[1].offset_m, 150.0);
    EXPECT_EQ(o[1].side, Cardinal::north);
    EXPECT_THROW(graticule_offsets({0, 0}, std::span<const Graticule>{}), DomainError);
}

TEST(Graticules, GeographicParallelOffset) {
    const std::vector<Graticule> gs = {{GraticuleKind::parallel, 45, "45 degrees N"},
                                       {GraticuleKind::meridian, 9, "9 degrees E"}};
    const auto o = graticule_offsets({9, 46}, gs, Crs::geographic);
    EXPECT_NEAR(o[0].offset_m, oracle::law_of_cosines(9, 45, 9, 46), 1e-6);
    EXPECT_NEAR(o[1].offset_m, 0.0, 1e-9);
}

TEST(Oracle, RandomPointPairs) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1e4, 1e4);
    for (int i = 0; i < 1000; ++i) {
        const Coord a{u(rng), u(rng)}, b{u(rng), u(rng)};
        const double expect = oracle::euclid({a.x, a.y}, {b.x, b.y});
        const auto ga = Geometry::point(a), gb = Geometry::point(b);
        const double d = distance(ga, gb, DistanceMode::centroid);
        EXPECT_LE(std::abs(d - expect), 1e-9 * expect);
        EXPECT_EQ(d, distance(gb, ga, DistanceMode::centroid));
        EXPECT_EQ(bearing(a, b).degrees, std::fmod(bearing(b, a).degrees + 180.0, 360.0));
        const double ba = bearing(a, b).degrees;
        EXPECT_GE(ba, 0.0);
        EXPECT_LT(ba, 360.0);
    }
}

TEST(Oracle, TriangleInequalityForCentroidDistance) {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(-100, 100);
    for (int i = 0; i < 500; ++i) {
        const auto a = Geometry::point({u(rng), u(rng)}), b = Geometry::point({u(rng), u(rng)}),
                   c = Geometry::point({u(rng), u(rng)});
        const double ab = distance(a, b, DistanceMode::centroid), bc = distance(b, c, DistanceMode::centroid),
                     ac = distance(a, c, DistanceMode::centroid);
        EXPECT_LE(ac, ab + bc + 1e-12);
    }
}

TEST(Oracle, RayCastMatchesWindingNumber) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi), rad(1, 10), u(-12, 12);
    std::uniform_int_distribution<int> count(3, 12);
    for (int i = 0; i < 1000; ++i) {
        std::vector<double> angles(count(rng));
        for (auto& a : angles) a = ang(rng);
        std::sort(angles.begin(), angles.end());
        const double r = rad(rng);
        std::vector<Coord> ring;
        for (double a : angles) ring.push_back({r * std::cos(a), r * std::sin(a)});
        ring.push_back(ring.front());
        const Coord p{u(rng), u(rng)};
        std::vector<oracle::P> poly;
        for (std::size_t k = 0; k + 1 < ring.size(); ++k) poly.push_back({ring[k].x, ring[k].y});
        EXPECT_EQ(planar::ray_cast_inside(p, ring), oracle::winding_number({p.x, p.y}, poly) != 0) << i;
    }
}
