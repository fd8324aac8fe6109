#pragma once

// Command-line front end: compile, evaluate, report and export-viewer.
// run() takes its arguments and streams explicitly so it can be driven from
// tests; tools/main.cpp only wires it to the process.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "mapverba/evaluate.hpp"
#include "mapverba/manifest.hpp"
#include "mapverba/map_io.hpp"
#include "mapverba/representations.hpp"

namespace mapverba::cli {

namespace fs = std::filesystem;

enum ExitCode : int { ok = 0, failure = 1, usage = 2, nonconforming = 3 };

struct Terminal {
    bool color = false;
};

/// Colour is used only on a terminal and never when MAPVERBA_NO_COLOR is set.
inline bool color_allowed(bool is_tty, const char* no_color_env) {
    return is_tty && (no_color_env == nullptr || *no_color_env == '\0');
}

inline constexpr const char* bundle_schema = "mapverba.bundle";
inline constexpr int bundle_schema_version = 1;

namespace detail {

inline std::string style(const Terminal& t, std::string_view code, std::string_view s) {
    if (!t.color) return std::string(s);
    return fmt::format("\x1b[{}m{}\x1b[0m", code, s);
}

/// Colours the verdict column of a markdown report.
inline std::string color_verdicts(const Terminal& t, std::string text) {
    if (!t.color) return text;
    for (auto [word, code] : {std::pair{"Yes", "32"}, {"No", "31"}, {"N/A", "2"}}) {
        const std::string plain = fmt::format("| {} |", word);
        const std::string styled = fmt::format("| {} |", style(t, code, word));
        for (std::size_t pos = 0; (pos = text.find(plain, pos)) != std::string::npos; pos += styled.size())
            text.replace(pos, plain.size(), styled);
    }
    return text;
}

inline std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(fmt::format("cannot read {}", p.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Writes through a sibling temporary file and renames it into place, so a
/// failed run never leaves a partial file behind.
inline void write_atomic(const fs::path& p, std::string_view content) {
    const fs::path tmp = p.string() + ".partial";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(fmt::format("cannot write {}", p.string()));
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            out.close();
            fs::remove(tmp);
            throw Error(fmt::format("cannot write {}", p.string()));
        }
    }
    fs::rename(tmp, p);
}

/// Accepts the path as given or with ".geojson" appended.
inline fs::path resolve_map_path(const fs::path& p) {
    if (fs::exists(p) || p.has_extension()) return p;
    fs::path alt = p;
    alt += ".geojson";
    return fs::exists(alt) ? alt : p;
}

inline MapDocument load_map(const fs::path& path) {
    const fs::path p = resolve_map_path(path);
    MapDocument doc;
    try {
        doc = parse_map(read_file(p));
    } catch (const Error& e) {
        throw Error(fmt::format("{}: {}", p.string(), e.what()));
    }
    const auto v = validate(doc);
    if (!v.empty()) {
        std::string msg = fmt::format("{}: map fails validation", p.string());
        for (const auto& x : v) msg += fmt::format("\n  {} [{}]: {}", x.path, x.code, x.message);
        throw Error(msg);
    }
    return doc;
}

inline RepresentationManifest load_manifest(const fs::path& p) {
    try {
        return parse_manifest(read_file(p));
    } catch (const Error& e) {
        throw Error(fmt::format("{}: {}", p.string(), e.what()));
    }
}

inline std::string stem_of(const fs::path& p) {
    std::string s = p.filename().string();
    const auto dot = s.find('.');
    return dot == std::string::npos || dot == 0 ? s : s.substr(0, dot);
}

inline std::string generic_relative(const fs::path& target, const fs::path& base) {
    return fs::relative(fs::absolute(target), fs::absolute(base)).generic_string();
}

}  // namespace detail

struct CompileConfig {
    std::string input;
    std::string kind;
    std::string out = ".";
    std::string label;
    int grid_divisions = 32;
    std::string clock = "hour";
    double corridor_m = 15.0;
};

inline BuildOptions build_options(const CompileConfig& c) {
    BuildOptions o;
    o.grid_divisions = c.grid_divisions;
    o.describe.pair_clock = c.clock == "half-hour" ? ClockResolution::half_hour : ClockResolution::hour;
    o.describe.corridor_m = c.corridor_m;
    return o;
}

inline int cmd_compile(const CompileConfig& c, std::ostream& out) {
    const auto kind = representation_kind_from_string(c.kind);
    const fs::path input = detail::resolve_map_path(c.input);
    const MapDocument doc = detail::load_map(input);
    Compiled compiled = compile(doc, *kind, build_options(c));
    const fs::path dir(c.out);
    fs::create_directories(dir);
    const std::string base = detail::stem_of(input) + "." + c.kind;
    const fs::path artifact = dir / (base + "." + compiled.extension);
    const fs::path manifest = dir / (base + ".manifest.json");
    compiled.manifest.source = artifact.filename().generic_string();
    compiled.manifest.baseline = detail::generic_relative(input, dir);
    compiled.manifest.label = c.label;
    detail::write_atomic(artifact, compiled.artifact);
    detail::write_atomic(manifest, serialize_manifest(compiled.manifest));
    out << artifact.generic_string() << "\n" << manifest.generic_string() << "\n";
    return ok;
}

struct EvaluateConfig {
    std::string baseline;
    std::string manifest;
    std::string format = "md";
    std::string output;
};

inline int cmd_evaluate(const EvaluateConfig& c, std::ostream& out, const Terminal& term = {}) {
    const MapDocument doc = detail::load_map(c.baseline);
    const RepresentationManifest m = detail::load_manifest(c.manifest);
    EvaluationReport r;
    try {
        r = evaluate(doc, m);
    } catch (const Error& e) {
        throw Error(fmt::format("{}: {}", c.manifest, e.what()));
    }
    const auto fmt_kind = *report_format_from_string(c.format);
    std::string text = render_report(r, fmt_kind, m.display_label());
    if (!c.output.empty()) {
        detail::write_atomic(c.output, text);
    } else {
        if (fmt_kind == ReportFormat::markdown) text = detail::color_verdicts(term, text);
        out << text;
    }
    return r.conforms() ? ok : nonconforming;
}

struct ReportConfig {
    std::string dir;
    std::string chart_data;
};

struct BatchResult {
    std::vector<std::pair<std::string, EvaluationReport>> rows;
    std::vector<std::pair<std::string, std::string>> errors;  // member file, message
};

/// Evaluates every *.manifest.json in a directory, in file-name order. Each
/// manifest's baseline path is taken relative to the directory.
inline BatchResult evaluate_directory(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw Error(fmt::format("{} is not a directory", dir.string()));
    std::vector<fs::path> members;
    for (const auto& e : fs::directory_iterator(dir)) {
        const std::string name = e.path().filename().string();
        if (e.is_regular_file() && name.size() > 14 && name.ends_with(".manifest.json")) members.push_back(e.path());
    }
    std::sort(members.begin(), members.end());
    if (members.empty()) throw Error(fmt::format("{} contains no *.manifest.json files", dir.string()));
    BatchResult out;
    for (const auto& p : members) {
        try {
            const RepresentationManifest m = detail::load_manifest(p);
            if (m.baseline.empty()) throw Error("manifest names no baseline map");
            const MapDocument doc = detail::load_map(dir / m.baseline);
            out.rows.emplace_back(m.display_label(), evaluate(doc, m));
        } catch (const Error& e) {
            out.errors.emplace_back(p.filename().string(), e.what());
        }
    }
    return out;
}

inline std::string chart_data_csv(const BatchResult& b) {
    std::string s = "label,purpose_pct,equivalency_pct\n";
    for (const auto& [label, r] : b.rows)
        s += fmt::format("{},{},{}\n", eval_detail::csv_field(label), r.purpose_pct, r.equivalency_pct);
    return s;
}

inline int cmd_report(const ReportConfig& c, std::ostream& out) {
    const BatchResult b = evaluate_directory(c.dir);
    out << "# Text Map Purpose Equivalency\n\n";
    if (!b.rows.empty()) out << batch_table(b.rows);
    if (!b.errors.empty()) {
        out << "\n## Errors\n\n";
        for (const auto& [file, msg] : b.errors) out << "- " << file << ": " << msg << "\n";
    }
    if (!c.chart_data.empty()) detail::write_atomic(c.chart_data, chart_data_csv(b));
    return b.errors.empty() ? ok : failure;
}

/// Self-contained navigator bundle: map metadata, every text, the room graph,
/// the grid and the manifests of the three full representations.
inline std::string export_bundle(const MapDocument& doc, const BuildOptions& opt = {}) {
    using ojson = nlohmann::ordered_json;
    const MudMap mud = build_mud_map(doc, opt);
    const AltGridMap grid = build_alt_grid(doc, opt);
    const AudioDescription audio = build_audio_description(doc, opt);
    const MapTexts& t = grid.texts;
    const LocalFrame frame = frame_for(doc);
    const Box ext = repr_detail::local_extent(doc, frame);

    ojson j = ojson::object();
    j["schema"] = bundle_schema;
    j["schema_version"] = bundle_schema_version;
    j["map"] = {{"title", doc.title},
                {"crs", to_string(doc.crs)},
                {"width_m", ext.width()},
                {"height_m", ext.height()},
                {"capabilities",
                 {{"shows_coordinates", doc.capabilities.shows_coordinates},
                  {"shows_temporal", doc.capabilities.shows_temporal},
                  {"shows_overlaid", doc.capabilities.shows_overlaid},
                  {"has_routes", doc.capabilities.has_routes},
                  {"shows_legend", doc.capabilities.shows_legend}}}};
    j["overview"] = t.overview;
    j["features"] = feature_texts_json(doc, t);
    j["pairs"] = pair_texts_json(doc, t, opt.describe);
    j["routes"] = route_texts_json(t);
    j["mud"] = room_graph_to_json(mud.graph);
    j["grid"] = alt_grid_to_json(grid.grid);
    j["audio_description"] = render_text(audio.tree);
    j["manifests"] = {{to_string(RepresentationKind::audio_description), manifest_to_json(audio.manifest)},
                      {to_string(RepresentationKind::mud_map), manifest_to_json(mud.manifest)},
                      {to_string(RepresentationKind::alt_grid), manifest_to_json(grid.manifest)}};
    return j.dump(2) + "\n";
}

struct ExportConfig {
    std::string input;
    std::string out;
};

inline int cmd_export_viewer(const ExportConfig& c, std::ostream& out) {
    const MapDocument doc = detail::load_map(c.input);
    const std::string bundle = export_bundle(doc);
    const fs::path target(c.out);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    detail::write_atomic(target, bundle);
    out << target.generic_string() << "\n";
    return ok;
}

/// Parses `args` (without the program name) and runs one command.
/// Exit codes: 0 success, 1 input or processing error, 2 bad flags,
/// 3 evaluation completed but an applicable item failed.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, Terminal term = {}) {
    CLI::App app{"Text-map builder and equivalency evaluator", "mapverba"};
    app.require_subcommand(1);

    std::vector<std::string> kinds;
    for (auto k : all_representation_kinds) kinds.push_back(to_string(k));

    CompileConfig cc;
    auto* compile_cmd = app.add_subcommand("compile", "Build a text representation and its manifest");
    compile_cmd->add_option("--input", cc.input, "Baseline map (GeoJSON)")->required();
    compile_cmd->add_option("--kind", cc.kind, "Representation kind")->required()->check(CLI::IsMember(kinds));
    compile_cmd->add_option("--out", cc.out, "Output directory");
    compile_cmd->add_option("--label", cc.label, "Display label stored in the manifest");
    compile_cmd->add_option("--grid-divisions", cc.grid_divisions, "Alt-grid cells along the extent diagonal")
        ->check(CLI::Range(1, 4096));
    compile_cmd->add_option("--clock", cc.clock, "Clock resolution for pair directions")
        ->check(CLI::IsMember({"hour", "half-hour"}));
    compile_cmd->add_option("--corridor", cc.corridor_m, "Route corridor half-width in meters")
        ->check(CLI::NonNegativeNumber);

    EvaluateConfig ec;
    auto* eval_cmd = app.add_subcommand("evaluate", "Score a manifest against its baseline map");
    eval_cmd->add_option("--baseline", ec.baseline, "Baseline map")->required();
    eval_cmd->add_option("--manifest", ec.manifest, "Representation manifest")->required();
    eval_cmd->add_option("--format", ec.format, "md, json-like or csv")->check(CLI::IsMember({"md", "json-like", "csv"}));
    eval_cmd->add_option("--output", ec.output, "Write the report to a file");

    ReportConfig rc;
    auto* report_cmd = app.add_subcommand("report", "Batch table over a directory of manifests");
    report_cmd->add_option("--dir", rc.dir, "Directory of *.manifest.json files")->required();
    report_cmd->add_option("--chart-data", rc.chart_data, "Write label,purpose,equivalency rows for plotting");

    ExportConfig xc;
    auto* export_cmd = app.add_subcommand("export-viewer", "Write the navigator bundle");
    export_cmd->add_option("--input", xc.input, "Baseline map")->required();
    export_cmd->add_option("--out", xc.out, "Bundle file")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << detail::style(term, "31", "error") << ": " << e.what() << "\n";
        return usage;
    }

    try {
        if (compile_cmd->parsed()) return cmd_compile(cc, out);
        if (eval_cmd->parsed()) return cmd_evaluate(ec, out, term);
        if (report_cmd->parsed()) return cmd_report(rc, out);
        if (export_cmd->parsed()) return cmd_export_viewer(xc, out);
    } catch (const std::exception& e) {
        err << detail::style(term, "31", "error") << ": " << e.what() << "\n";
        return failure;
    }
    return usage;
}

}  // namespace mapverba::cli
