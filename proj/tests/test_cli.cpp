#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mapverba/cli.hpp"
#include "mapverba/map_io.hpp"
#include "oracles.hpp"

using namespace mapverba;
namespace fs = std::filesystem;

namespace {

const std::string kFixtures = MAPVERBA_FIXTURE_DIR;

std::string fixture_path(const std::string& name) { return kFixtures + "/" + name; }

struct Outcome {
    int code;
    std::string out, err;
};

Outcome run(const std::vector<std::string>& args, cli::Terminal term = {}) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err, term);
    return {code, out.str(), err.str()};
}

/// Fresh scratch directory named after the running test.
fs::path scratch() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    const fs::path p = fs::temp_directory_path() / "mapverba-tests" / (std::string(info->test_suite_name()) + "." + info->name());
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::vector<std::string> listing(const fs::path& dir) {
    std::vector<std::string> names;
    if (!fs::exists(dir)) return names;
    for (const auto& e : fs::directory_iterator(dir)) names.push_back(e.path().filename().string());
    std::sort(names.begin(), names.end());
    return names;
}

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

}  // namespace

TEST(Compile, WritesArtifactAndManifest) {
    const fs::path dir = scratch();
    const auto r = run({"compile", "--input", fixture_path("campus.geojson"), "--kind", "mud-map", "--out", dir.string(),
                        "--label", "Campus rooms"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(listing(dir), (std::vector<std::string>{"campus.mud-map.json", "campus.mud-map.manifest.json"}));
    const auto m = manifest_from_json(nlohmann::ordered_json::parse(oracle::read_file((dir / "campus.mud-map.manifest.json").string())));
    EXPECT_EQ(m.kind, RepresentationKind::mud_map);
    EXPECT_EQ(m.source, "campus.mud-map.json");
    EXPECT_EQ(m.label, "Campus rooms");
    EXPECT_EQ(fs::weakly_canonical(dir / m.baseline), fs::weakly_canonical(fixture_path("campus.geojson")));
    EXPECT_NE(r.out.find("campus.mud-map.manifest.json"), std::string::npos);
}

TEST(Compile, ExtensionIsOptionalOnInput) {
    const fs::path dir = scratch();
    const auto r = run({"compile", "--input", kFixtures + "/four_rooms", "--kind", "table", "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(dir / "four_rooms.table.txt"));
}

TEST(Compile, Deterministic) {
    const fs::path dir = scratch();
    for (const char* kind : {"audio-description", "mud-map", "alt-grid"}) {
        for (const char* sub : {"a", "b"})
            ASSERT_EQ(run({"compile", "--input", fixture_path("pacific_northwest.geojson"), "--kind", kind, "--out", (dir / sub).string()}).code, 0);
        for (const auto& name : listing(dir / "a"))
            EXPECT_EQ(oracle::read_file((dir / "a" / name).string()), oracle::read_file((dir / "b" / name).string())) << name;
    }
    EXPECT_EQ(listing(dir / "a"), listing(dir / "b"));
    EXPECT_EQ(listing(dir / "a").size(), 6u);
}

TEST(Compile, FailureLeavesNoFiles) {
    const fs::path dir = scratch();
    const auto r = run({"compile", "--input", fixture_path("four_rooms.geojson"), "--kind", "turn-by-turn", "--out", dir.string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("at least one route"), std::string::npos) << r.err;
    EXPECT_TRUE(listing(dir).empty());
}

TEST(Compile, InvalidMapIsAnInputError) {
    const fs::path dir = scratch();
    write(dir / "broken.geojson", R"({"type": "FeatureCollection", "features": [)");
    const auto r = run({"compile", "--input", (dir / "broken.geojson").string(), "--kind", "table", "--out", (dir / "out").string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(r.err.rfind("error: ", 0), 0u) << r.err;
    EXPECT_TRUE(listing(dir / "out").empty());

    const auto missing = run({"compile", "--input", (dir / "nowhere.geojson").string(), "--kind", "table"});
    EXPECT_EQ(missing.code, 1);
}

TEST(Usage, BadFlagsExitTwo) {
    const std::string campus = fixture_path("campus.geojson");
    const std::vector<std::vector<std::string>> cases = {
        {},
        {"frobnicate"},
        {"compile", "--input", campus, "--kind", "poem"},
        {"compile", "--kind", "table"},
        {"compile", "--input", campus, "--kind", "table", "--shiny"},
        {"compile", "--input", campus, "--kind", "alt-grid", "--grid-divisions", "0"},
        {"compile", "--input", campus, "--kind", "table", "--clock", "quarter"},
        {"evaluate", "--baseline", campus},
        {"evaluate", "--baseline", campus, "--manifest", "m.json", "--format", "xml"},
        {"report"},
        {"export-viewer", "--input", campus},
    };
    for (const auto& args : cases) {
        const auto r = run(args);
        EXPECT_EQ(r.code, 2) << ::testing::PrintToString(args);
        EXPECT_FALSE(r.err.empty());
    }
}

TEST(Usage, HelpExitsZero) {
    const auto r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("compile"), std::string::npos);
}

TEST(Evaluate, ExitCodes) {
    const fs::path dir = scratch();
    const std::string pnw = fixture_path("pacific_northwest.geojson");
    ASSERT_EQ(run({"compile", "--input", pnw, "--kind", "mud-map", "--out", dir.string()}).code, 0);
    ASSERT_EQ(run({"compile", "--input", pnw, "--kind", "table", "--out", dir.string()}).code, 0);

    const auto good = run({"evaluate", "--baseline", pnw, "--manifest", (dir / "pacific_northwest.mud-map.manifest.json").string()});
    EXPECT_EQ(good.code, 0) << good.err;
    EXPECT_NE(good.out.find("Total Purpose Items Passed: 3/3 Items Passed (100.00%)"), std::string::npos) << good.out;

    const auto weak = run({"evaluate", "--baseline", pnw, "--manifest", (dir / "pacific_northwest.table.manifest.json").string()});
    EXPECT_EQ(weak.code, 3);
    EXPECT_NE(weak.out.find("Total Purpose Items Passed: 1/3 Items Passed (33.00%)"), std::string::npos) << weak.out;

    const auto wrong = run({"evaluate", "--baseline", fixture_path("four_rooms.geojson"), "--manifest",
                            (dir / "pacific_northwest.mud-map.manifest.json").string()});
    EXPECT_EQ(wrong.code, 1);
    EXPECT_NE(wrong.err.find("not in the baseline map"), std::string::npos) << wrong.err;

    write(dir / "garbage.manifest.json", "{not json");
    EXPECT_EQ(run({"evaluate", "--baseline", pnw, "--manifest", (dir / "garbage.manifest.json").string()}).code, 1);
}

TEST(Evaluate, Formats) {
    const fs::path dir = scratch();
    const std::string campus = fixture_path("campus.geojson");
    ASSERT_EQ(run({"compile", "--input", campus, "--kind", "alt-grid", "--out", dir.string()}).code, 0);
    const std::string manifest = (dir / "campus.alt-grid.manifest.json").string();

    const auto csv = run({"evaluate", "--baseline", campus, "--manifest", manifest, "--format", "csv"});
    EXPECT_EQ(csv.code, 0);
    EXPECT_EQ(line_count(csv.out), 20u);
    EXPECT_EQ(csv.out.rfind("criterion,group,verdict,justification\n", 0), 0u);

    const auto js = run({"evaluate", "--baseline", campus, "--manifest", manifest, "--format", "json-like"});
    EXPECT_EQ(js.code, 0);
    const auto j = nlohmann::json::parse(js.out);
    EXPECT_EQ(j["items"].size(), 19u);
    EXPECT_TRUE(j["conforms"].get<bool>());

    const fs::path report = dir / "reports" / "grid.md";
    fs::create_directories(report.parent_path());
    const auto to_file = run({"evaluate", "--baseline", campus, "--manifest", manifest, "--output", report.string()});
    EXPECT_EQ(to_file.code, 0);
    EXPECT_TRUE(to_file.out.empty());
    EXPECT_NE(oracle::read_file(report.string()).find("Total Purpose Items Passed: 3/3 Items Passed (100.00%)"), std::string::npos);
}

TEST(Evaluate, ColourOnlyWhenEnabled) {
    const fs::path dir = scratch();
    const std::string campus = fixture_path("campus.geojson");
    ASSERT_EQ(run({"compile", "--input", campus, "--kind", "short-alt", "--out", dir.string()}).code, 0);
    const std::vector<std::string> args = {"evaluate", "--baseline", campus, "--manifest", (dir / "campus.short-alt.manifest.json").string()};
    const auto plain = run(args);
    const auto coloured = run(args, cli::Terminal{true});
    EXPECT_EQ(plain.out.find('\x1b'), std::string::npos);
    EXPECT_NE(coloured.out.find("\x1b[31mNo\x1b[0m"), std::string::npos);
    EXPECT_EQ(plain.code, coloured.code);
}

TEST(Terminal, ColourTruthTable) {
    EXPECT_TRUE(cli::color_allowed(true, nullptr));
    EXPECT_TRUE(cli::color_allowed(true, ""));
    EXPECT_FALSE(cli::color_allowed(true, "1"));
    EXPECT_FALSE(cli::color_allowed(false, nullptr));
    EXPECT_FALSE(cli::color_allowed(false, ""));
    EXPECT_FALSE(cli::color_allowed(false, "1"));
}

TEST(Report, MixedDirectory) {
    const fs::path dir = scratch();
    const fs::path maps = dir / "maps";
    fs::create_directories(maps);
    fs::copy_file(fixture_path("four_rooms.geojson"), maps / "four_rooms.geojson");
    const fs::path batch = dir / "batch";
    ASSERT_EQ(run({"compile", "--input", (maps / "four_rooms.geojson").string(), "--kind", "mud-map", "--out", batch.string(), "--label", "Rooms"}).code, 0);
    ASSERT_EQ(run({"compile", "--input", (maps / "four_rooms.geojson").string(), "--kind", "short-alt", "--out", batch.string()}).code, 0);
    write(batch / "c-garbage.manifest.json", "[]");
    write(batch / "d-orphan.manifest.json", R"({"kind": "table", "source": "x", "baseline": "../maps/gone.geojson"})");
    write(batch / "notes.txt", "not a manifest");

    const fs::path chart = dir / "chart.csv";
    const auto r = run({"report", "--dir", batch.string(), "--chart-data", chart.string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("| Rooms | 100.00% | 100.00% |"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("| short-alt | 0.00% |"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("## Errors"), std::string::npos);
    EXPECT_NE(r.out.find("- c-garbage.manifest.json: "), std::string::npos);
    EXPECT_NE(r.out.find("- d-orphan.manifest.json: "), std::string::npos);
    EXPECT_EQ(r.out.find("notes.txt"), std::string::npos);

    const std::string csv = oracle::read_file(chart.string());
    EXPECT_EQ(csv.rfind("label,purpose_pct,equivalency_pct\n", 0), 0u);
    EXPECT_EQ(line_count(csv), 3u);
    EXPECT_NE(csv.find("Rooms,100,100\n"), std::string::npos);
}

TEST(Report, EmptyOrMissingDirectory) {
    const fs::path dir = scratch();
    const auto empty = run({"report", "--dir", dir.string()});
    EXPECT_EQ(empty.code, 1);
    EXPECT_NE(empty.err.find("no *.manifest.json"), std::string::npos) << empty.err;
    EXPECT_EQ(run({"report", "--dir", (dir / "absent").string()}).code, 1);
}

TEST(Report, BatchFixtureTable) {
    const auto b = cli::evaluate_directory(kFixtures + "/table2");
    ASSERT_TRUE(b.errors.empty()) << b.errors.front().first << ": " << b.errors.front().second;
    const std::vector<std::string> labels = {"Turn-by-Turn Directions", "Table",
                                             "Nearby Address Search",   "Short Text Alternative",
                                             "Google Maps Alt Text",    "Audiom Map Alt Text",
                                             "MUD Map Alt Text",        "Audio Description"};
    ASSERT_EQ(b.rows.size(), labels.size());
    int perfect = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        EXPECT_EQ(b.rows[i].first, labels[i]);
        const auto& r = b.rows[i].second;
        const bool full = r.purpose_pct == 100 && r.equivalency_pct == 100;
        perfect += full;
        EXPECT_EQ(full, i >= 5) << labels[i];
    }
    EXPECT_EQ(perfect, 3);
    EXPECT_EQ(b.rows[1].second.purpose_pct, 33);
}

TEST(Report, BatchFixturesMatchTheCompiler) {
    for (const auto& e : fs::directory_iterator(kFixtures + "/table2")) {
        const std::string text = oracle::read_file(e.path().string());
        const auto stored = manifest_from_json(nlohmann::ordered_json::parse(text));
        if (stored.source == "hand-encoded") continue;
        const auto doc = parse_map(oracle::read_file((e.path().parent_path() / stored.baseline).string()));
        auto regenerated = compile(doc, stored.kind).manifest;
        regenerated.source = stored.source;
        regenerated.baseline = stored.baseline;
        regenerated.label = stored.label;
        EXPECT_EQ(serialize_manifest(regenerated), text) << e.path().filename();
    }
}

TEST(ExportViewer, BundleShape) {
    const fs::path dir = scratch();
    const fs::path target = dir / "viewer" / "bundle.json";
    const std::string rooms = fixture_path("four_rooms.geojson");
    const auto r = run({"export-viewer", "--input", rooms, "--out", target.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string text = oracle::read_file(target.string());
    const auto j = nlohmann::json::parse(text);
    EXPECT_EQ(j["schema"], cli::bundle_schema);
    EXPECT_EQ(j["schema_version"], cli::bundle_schema_version);
    EXPECT_EQ(j["mud"]["rooms"].size(), 5u);
    EXPECT_EQ(j["pairs"].size(), 6u);
    EXPECT_EQ(j["features"].size(), 4u);
    for (const char* kind : {"audio-description", "mud-map", "alt-grid"}) EXPECT_TRUE(j["manifests"].contains(kind)) << kind;

    const auto doc = parse_map(oracle::read_file(rooms));
    const auto mud = build_mud_map(doc);
    ASSERT_EQ(mud.graph.rooms.size(), j["mud"]["rooms"].size());
    for (std::size_t i = 0; i < mud.graph.rooms.size(); ++i) {
        EXPECT_EQ(j["mud"]["rooms"][i]["id"], mud.graph.rooms[i].id);
        EXPECT_EQ(j["mud"]["rooms"][i]["description"], mud.graph.rooms[i].description);
    }
    EXPECT_EQ(j["mud"]["start"], mud.graph.start);
    EXPECT_EQ(j["audio_description"], render_text(build_audio_description(doc).tree));

    ASSERT_EQ(run({"export-viewer", "--input", rooms, "--out", target.string()}).code, 0);
    EXPECT_EQ(oracle::read_file(target.string()), text);
    EXPECT_EQ(listing(target.parent_path()), std::vector<std::string>{"bundle.json"});
}

TEST(ExportViewer, BundledManifestsEvaluateClean) {
    for (const char* name : {"four_rooms.geojson", "campus.geojson", "pacific_northwest.geojson"}) {
        const auto doc = parse_map(oracle::read_file(fixture_path(name)));
        const auto j = nlohmann::ordered_json::parse(cli::export_bundle(doc));
        for (const auto& [kind, m] : j["manifests"].items())
            EXPECT_TRUE(evaluate(doc, manifest_from_json(m)).conforms()) << name << " " << kind;
    }
}
