// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "mapverba/cli.hpp"
#include "mapverba/map_io.hpp"
#include "oracles.hpp"
#include "properties.hpp"

using namespace mapverba;
using namespace mapverba::spatial;
namespace fs = std::filesystem;

namespace {

const std::string kFixtures = MAPVERBA_FIXTURE_DIR;

using props::Check;

MapDocument fixture(const std::string& name) { return parse_map(oracle::read_file(kFixtures + "/" + name)); }

Check passing_methods() {
    Check c;
    const fs::path out = fs::temp_directory_path() / "mapverba-acceptance";
    fs::remove_all(out);
    for (const char* map : {"four_rooms", "pacific_northwest", "campus"}) {
        const auto start = std::chrono::steady_clock::now();
        for (const char* kind : {"audio-description", "mud-map", "alt-grid"}) {
            ++c.cases;
            std::ostringstream sink;
            cli::CompileConfig cc;
            cc.input = kFixtures + "/" + map + ".geojson";
            cc.kind = kind;
            cc.out = out.string();
            if (cli::cmd_compile(cc, sink) != 0) {
                c.fail(fmt::format("{} {}: compile failed", map, kind));
                continue;
            }
            cli::EvaluateConfig ec;
            ec.baseline = cc.input;
            ec.manifest = (out / fmt::format("{}.{}.manifest.json", map, kind)).string();
            std::ostringstream report;
            const int code = cli::cmd_evaluate(ec, report);
            const std::string text = report.str();
            const auto eq = text.find("Total Equivalent Items Passed: ");
            const bool full = text.find("Total Purpose Items Passed: 3/3 Items Passed (100.00%)") != std::string::npos &&
                              eq != std::string::npos &&
                              text.substr(eq, text.find('\n', eq) - eq).ends_with("(100.00%)");
            const auto r = evaluate(fixture(std::string(map) + ".geojson"),
                                    cli::detail::load_manifest(ec.manifest));
            if (code != 0 || !full || r.purpose_pct != 100 || r.equivalency_pct != 100)
                c.fail(fmt::format("{} {}: exit {}, purpose {}%, equivalency {}%", map, kind, code, r.purpose_pct,
                                   r.equivalency_pct));
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs >= 5.0) c.fail(fmt::format("{}: {:.2f} s", map, secs));
    }
    fs::remove_all(out);
    return c;
}

Check legacy_methods() {
    Check c;
    auto eval = [](const std::string& map, RepresentationKind kind) {
        const auto doc = fixture(map + ".geojson");
        return evaluate(doc, compile(doc, kind).manifest);
    };
    const auto table = eval("pacific_northwest", RepresentationKind::table);
    const auto survey = fraction_of(table.items, {CriterionGroup::survey});
    ++c.cases;
    if (table.purpose.passed != 1 || table.purpose.applicable != 3 || table.purpose_pct != 33)
        c.fail(fmt::format("table purpose {}/{}", table.purpose.passed, table.purpose.applicable));
    if (survey.passed != 0 || survey.applicable != 5)
        c.fail(fmt::format("table survey {}/{}", survey.passed, survey.applicable));

    for (auto kind : {RepresentationKind::short_alt, RepresentationKind::nearby_search}) {
        ++c.cases;
        const auto r = eval("campus", kind);
        if (r.purpose.passed != 0 || r.purpose.applicable != 3)
            c.fail(fmt::format("{} purpose {}/{}", to_string(kind), r.purpose.passed, r.purpose.applicable));
    }

    ++c.cases;
    const auto tbt = eval("campus", RepresentationKind::turn_by_turn);
    if (tbt.verdict(Criterion::p_generalized) != Verdict::fail) c.fail("turn-by-turn passes P-generalized");
    for (auto k : all_criteria) {
        const auto g = group_of(k);
        if (g == CriterionGroup::route && tbt.verdict(k) != Verdict::pass)
            c.fail(fmt::format("turn-by-turn {} is {}", to_string(k), to_string(tbt.verdict(k))));
        if (g == CriterionGroup::survey && tbt.verdict(k) == Verdict::pass)
            c.fail(fmt::format("turn-by-turn {} is {}", to_string(k), to_string(tbt.verdict(k))));
    }
    const auto tbt_survey = fraction_of(tbt.items, {CriterionGroup::survey});
    if (tbt_survey.passed != 0 || tbt_survey.applicable < 4)
        c.fail(fmt::format("turn-by-turn survey {}/{}", tbt_survey.passed, tbt_survey.applicable));
    return c;
}

Check geometry_oracles() {
    Check c;
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> u(-1e5, 1e5);
    for (int i = 0; i < 1000; ++i, ++c.cases) {
        const Coord a{u(rng), u(rng)}, b{u(rng), u(rng)};
        const double expect = oracle::euclid({a.x, a.y}, {b.x, b.y});
        const double d = distance(Geometry::point(a), Geometry::point(b), DistanceMode::centroid);
        if (std::abs(d - expect) > 1e-9 * expect) c.fail(fmt::format("pair {}: distance {} vs {}", i, d, expect));
        const double ab = bearing(a, b).degrees, ba = bearing(b, a).degrees;
        if (std::fmod(ba + 180.0, 360.0) != ab) c.fail(fmt::format("pair {}: bearings {} and {}", i, ab, ba));
    }

    std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi), rad(1, 50), off(-60, 60);
    std::uniform_int_distribution<int> count(3, 16);
    for (int i = 0; i < 1000; ++i, ++c.cases) {
        std::vector<double> angles(count(rng));
        for (auto& t : angles) t = ang(rng);
        std::sort(angles.begin(), angles.end());
        const double r = rad(rng);
        std::vector<Coord> ring;
        std::vector<oracle::P> poly;
        for (double t : angles) {
            ring.push_back({r * std::cos(t), r * std::sin(t)});
            poly.push_back({ring.back().x, ring.back().y});
        }
        ring.push_back(ring.front());
        const Coord p{off(rng), off(rng)};
        if (planar::ray_cast_inside(p, ring) != (oracle::winding_number({p.x, p.y}, poly) != 0))
            c.fail(fmt::format("polygon case {} disagrees", i));
    }

    ++c.cases;
    const double geo = distance(Geometry::point({0, 0}), Geometry::point({1, 0}), DistanceMode::centroid, Crs::geographic);
    const double cosines = oracle::law_of_cosines(0, 0, 1, 0);
    if (std::abs(geo - 111194.9) > 0.1 || std::abs(geo - cosines) > 1e-3)
        c.fail(fmt::format("one degree of longitude: {:.4f} m, law of cosines {:.4f} m", geo, cosines));
    return c;
}

Check quantization_table() {
    Check c;
    const std::vector<std::string> half_hour = {
        "12 o'clock", "12:30 o'clock", "1 o'clock", "1:30 o'clock", "2 o'clock",  "2:30 o'clock",
        "3 o'clock",  "3:30 o'clock",  "4 o'clock", "4:30 o'clock", "5 o'clock",  "5:30 o'clock",
        "6 o'clock",  "6:30 o'clock",  "7 o'clock", "7:30 o'clock", "8 o'clock",  "8:30 o'clock",
        "9 o'clock",  "9:30 o'clock",  "10 o'clock", "10:30 o'clock", "11 o'clock", "11:30 o'clock"};
    const std::vector<std::string> hour = {
        "12 o'clock", "1 o'clock",  "1 o'clock",  "2 o'clock",  "2 o'clock",  "3 o'clock",
        "3 o'clock",  "4 o'clock",  "4 o'clock",  "5 o'clock",  "5 o'clock",  "6 o'clock",
        "6 o'clock",  "7 o'clock",  "7 o'clock",  "8 o'clock",  "8 o'clock",  "9 o'clock",
        "9 o'clock",  "10 o'clock", "10 o'clock", "11 o'clock", "11 o'clock", "12 o'clock"};
    for (int k = 0; k < 24; ++k, ++c.cases) {
        const double deg = 15.0 * k;
        const double t = deg * std::numbers::pi / 180.0;
        const Bearing b = bearing({0, 0}, {100.0 * std::sin(t), 100.0 * std::cos(t)});
        if (b.degrees != deg) c.fail(fmt::format("{} degrees measured as {}", deg, b.degrees));
        const auto hh = quantize_clock(b, ClockResolution::half_hour).text();
        const auto h = quantize_clock(b, ClockResolution::hour).text();
        if (hh != half_hour[k]) c.fail(fmt::format("{} degrees: '{}' at half-hour resolution", deg, hh));
        if (h != hour[k]) c.fail(fmt::format("{} degrees: '{}' at hour resolution", deg, h));
    }
    return c;
}

Check evaluator_properties() {
    Check c;
    for (const Check& part : {props::monotonicity(200), props::na_soundness(50), props::missing_feature_propagation(50),
                              props::self_consistency(50)}) {
        c.cases += part.cases;
        if (!part.ok) c.fail(part.detail);
    }
    return c;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Check()>>> criteria = {
        {"passing methods score 100% on every fixture", passing_methods},
        {"legacy methods fail in the expected direction", legacy_methods},
        {"geometry oracle suite", geometry_oracles},
        {"clock quantization table", quantization_table},
        {"evaluator property suite", evaluator_properties},
        {"MUD graph suite", [] { return props::mud_graph_suite(50); }},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check c;
        try {
            c = criteria[i].second();
        } catch (const std::exception& e) {
            c.fail(fmt::format("exception: {}", e.what()));
        }
        failures += !c.ok;
        std::cout << fmt::format("{} {} {} ({} cases){}", c.ok ? "PASS" : "FAIL", i + 1, criteria[i].first, c.cases,
                                 c.ok ? "" : ": " + c.detail)
                  << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
