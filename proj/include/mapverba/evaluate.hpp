#pragma once

// Scores a representation manifest against its baseline map: three purpose
// items and sixteen equivalency items, each pass, fail or not applicable.

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "mapverba/error.hpp"
#include "mapverba/format.hpp"
#include "mapverba/manifest.hpp"
#include "mapverba/map_model.hpp"

namespace mapverba {

enum class CriterionGroup { purpose, landmark, route, survey };

inline const char* to_string(CriterionGroup g) {
    static constexpr std::array<const char*, 4> names = {"purpose", "landmark", "route", "survey"};
    return names[static_cast<int>(g)];
}

inline const char* group_title(CriterionGroup g) {
    static constexpr std::array<const char*, 4> names = {"Purpose", "Landmark", "Route", "Survey"};
    return names[static_cast<int>(g)];
}

enum class Criterion {
    p_generalized,
    p_spatial_info,
    p_spatial_rel,
    l_sensory,
    l_name,
    l_type,
    l_shape,
    l_orientation,
    l_size,
    l_temporal,
    l_overlaid,
    r_landmark,
    r_survey,
    r_prominence,
    s_distance,
    s_direction,
    s_topology,
    s_relative_location,
    s_absolute_location,
};

inline constexpr std::size_t criterion_count = 19;

inline constexpr std::array<Criterion, criterion_count> all_criteria = {
    Criterion::p_generalized,   Criterion::p_spatial_info, Criterion::p_spatial_rel,
    Criterion::l_sensory,       Criterion::l_name,         Criterion::l_type,
    Criterion::l_shape,         Criterion::l_orientation,  Criterion::l_size,
    Criterion::l_temporal,      Criterion::l_overlaid,     Criterion::r_landmark,
    Criterion::r_survey,        Criterion::r_prominence,   Criterion::s_distance,
    Criterion::s_direction,     Criterion::s_topology,     Criterion::s_relative_location,
    Criterion::s_absolute_location};

inline const char* to_string(Criterion c) {
    static constexpr std::array<const char*, criterion_count> ids = {
        "P-generalized", "P-spatial-info", "P-spatial-rel", "L-sensory",   "L-name",
        "L-type",        "L-shape",        "L-orientation", "L-size",      "L-temporal",
        "L-overlaid",    "R-landmark",     "R-survey",      "R-prominence", "S-distance",
        "S-direction",   "S-topology",     "S-relative-location", "S-absolute-location"};
    return ids[static_cast<int>(c)];
}

/// Row label used in the human-readable report.
inline const char* criterion_title(Criterion c) {
    static constexpr std::array<const char*, criterion_count> titles = {
        "Generalized",         "Spatial information", "Spatial relationships", "Sensory characteristics",
        "Name",                "Type",                "Shape",                 "Orientation",
        "Size",                "Temporal data",       "Overlaid data",         "Route landmark knowledge",
        "Route survey knowledge", "Route prominence", "Distance",              "Direction",
        "Topology",            "Relative location",   "Absolute location"};
    return titles[static_cast<int>(c)];
}

inline CriterionGroup group_of(Criterion c) {
    const int i = static_cast<int>(c);
    if (i < 3) return CriterionGroup::purpose;
    if (i < 11) return CriterionGroup::landmark;
    if (i < 14) return CriterionGroup::route;
    return CriterionGroup::survey;
}

inline std::optional<Criterion> criterion_from_string(std::string_view s) {
    for (auto c : all_criteria)
        if (s == to_string(c)) return c;
    return std::nullopt;
}

enum class Verdict { pass, fail, na };

inline const char* to_string(Verdict v) { return v == Verdict::pass ? "pass" : v == Verdict::fail ? "fail" : "na"; }
inline const char* verdict_word(Verdict v) { return v == Verdict::pass ? "Yes" : v == Verdict::fail ? "No" : "N/A"; }

struct ItemResult {
    Criterion criterion = Criterion::p_generalized;
    Verdict verdict = Verdict::na;
    std::string justification;
    std::vector<std::string> evidence;  // feature ids, "a/b" pairs, route ids or flag names
    friend bool operator==(const ItemResult&, const ItemResult&) = default;
};

struct Fraction {
    int passed = 0;
    int applicable = 0;
    friend bool operator==(const Fraction&, const Fraction&) = default;
};

/// Whole-number percentage, half up; 0 when nothing is applicable.
inline int percent(Fraction f) {
    if (f.applicable <= 0) return 0;
    return (200 * f.passed + f.applicable) / (2 * f.applicable);
}

inline std::string percent_text(int pct) { return fmt::format("{}.00%", pct); }

struct EvaluationReport {
    std::vector<ItemResult> items;  // one per criterion, in criterion order
    Fraction purpose;
    Fraction equivalency;
    int purpose_pct = 0;
    int equivalency_pct = 0;

    const ItemResult& item(Criterion c) const { return items.at(static_cast<std::size_t>(c)); }
    Verdict verdict(Criterion c) const { return item(c).verdict; }
    /// True when every applicable item passes.
    bool conforms() const {
        return std::none_of(items.begin(), items.end(), [](const ItemResult& r) { return r.verdict == Verdict::fail; });
    }
};

inline Fraction fraction_of(const std::vector<ItemResult>& items, std::initializer_list<CriterionGroup> groups) {
    Fraction f;
    for (const auto& r : items) {
        if (r.verdict == Verdict::na) continue;
        if (std::find(groups.begin(), groups.end(), group_of(r.criterion)) == groups.end()) continue;
        ++f.applicable;
        if (r.verdict == Verdict::pass) ++f.passed;
    }
    return f;
}

/// Fractions and percentages from a complete item list. Throws when any
/// criterion is missing, duplicated or out of order.
inline EvaluationReport score(std::vector<ItemResult> items) {
    if (items.size() != criterion_count)
        throw SemanticError(fmt::format("score needs {} items, got {}", criterion_count, items.size()));
    for (std::size_t i = 0; i < criterion_count; ++i)
        if (items[i].criterion != all_criteria[i])
            throw SemanticError(fmt::format("item {} is {}, expected {}", i, to_string(items[i].criterion),
                                            to_string(all_criteria[i])));
    EvaluationReport r;
    r.items = std::move(items);
    r.purpose = fraction_of(r.items, {CriterionGroup::purpose});
    r.equivalency = fraction_of(r.items, {CriterionGroup::landmark, CriterionGroup::route, CriterionGroup::survey});
    r.purpose_pct = percent(r.purpose);
    r.equivalency_pct = percent(r.equivalency);
    return r;
}

/// Features exempt from a geometric field: points have no shape, size or
/// orientation and polylines have no orientation.
struct Exemptions {
    bool points_exempt = true;
    bool polylines_exempt_from_orientation = true;
};

namespace eval_detail {

inline std::string pair_key(std::string_view a, std::string_view b) {
    return a < b ? fmt::format("{}/{}", a, b) : fmt::format("{}/{}", b, a);
}

inline std::string summarize(const std::vector<std::string>& ids, std::size_t limit = 5) {
    if (ids.size() <= limit) return text::join(ids, ", ");
    std::vector<std::string> head(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(limit));
    return fmt::format("{} and {} more", text::join(head, ", "), ids.size() - limit);
}

struct Context {
    const MapDocument& doc;
    const RepresentationManifest& m;
    Exemptions ex;
    std::vector<const Feature*> present;
    std::vector<std::string> missing;
    std::map<std::string, const PairRecord*> pairs;

    Context(const MapDocument& d, const RepresentationManifest& man, Exemptions e) : doc(d), m(man), ex(e) {
        for (const auto& f : doc.features) {
            if (m.find_feature(f.id)) present.push_back(&f);
            else missing.push_back(f.id);
        }
        for (const auto& p : m.pairs) pairs[pair_key(p.a, p.b)] = &p;
    }

    bool exempt(const Feature& f, LandmarkField field) const {
        const auto k = f.geometry.kind;
        if (k == GeometryKind::point && ex.points_exempt &&
            (field == LandmarkField::shape || field == LandmarkField::size || field == LandmarkField::orientation))
            return true;
        return k == GeometryKind::polyline && ex.polylines_exempt_from_orientation && field == LandmarkField::orientation;
    }
};

/// Field coverage over the features present in the manifest.
inline ItemResult landmark_item(const Context& cx, Criterion c, std::initializer_list<LandmarkField> fields,
                                std::optional<CapabilityFlag> flag = std::nullopt) {
    ItemResult r{c, Verdict::fail, {}, {}};
    if (cx.present.empty()) {
        r.justification = "no baseline feature appears in the text map";
        return r;
    }
    if (flag && cx.m.has(*flag)) {
        r.verdict = Verdict::pass;
        r.justification = fmt::format("covered for every feature by the {} capability", to_string(*flag));
        r.evidence.push_back(to_string(*flag));
        return r;
    }
    std::vector<std::string> lacking, covered;
    std::size_t applicable = 0;
    for (const Feature* f : cx.present) {
        const FeatureRecord* rec = cx.m.find_feature(f->id);
        bool needed = false, ok = true;
        for (LandmarkField field : fields) {
            if (cx.exempt(*f, field)) continue;
            needed = true;
            if (!rec->has(field)) ok = false;
        }
        if (!needed) continue;
        ++applicable;
        (ok ? covered : lacking).push_back(f->id);
    }
    std::vector<std::string> names;
    for (auto fl : fields) names.push_back(to_string(fl));
    const std::string what = text::join(names, ", ");
    if (applicable == 0) {
        r.verdict = Verdict::pass;
        r.justification = fmt::format("every present feature is exempt from {}", what);
        return r;
    }
    if (lacking.empty()) {
        r.verdict = Verdict::pass;
        r.justification = fmt::format("{} claimed for all {} applicable features", what, applicable);
        r.evidence = std::move(covered);
    } else if (covered.empty()) {
        r.justification = fmt::format("{} not claimed for any feature", what);
        r.evidence = std::move(lacking);
    } else {
        r.justification = fmt::format("partial pass counts as a fail: {} claimed for {} of {} features ({}); missing for {}",
                                      what, covered.size(), applicable, summarize(covered), summarize(lacking));
        r.evidence = std::move(lacking);
    }
    return r;
}

/// Pair coverage: every unordered pair of `features` has each field through a
/// claim or the matching capability flag.
inline std::vector<std::string> uncovered_pairs(const Context& cx, const std::vector<const Feature*>& features,
                                                std::initializer_list<std::pair<PairField, CapabilityFlag>> needs) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < features.size(); ++i)
        for (std::size_t j = i + 1; j < features.size(); ++j) {
            const std::string key = pair_key(features[i]->id, features[j]->id);
            auto it = cx.pairs.find(key);
            for (const auto& [field, flag] : needs) {
                if (cx.m.has(flag)) continue;
                if (it == cx.pairs.end() || !it->second->has(field)) {
                    out.push_back(key);
                    break;
                }
            }
        }
    return out;
}

inline ItemResult pair_item(const Context& cx, Criterion c, PairField field, CapabilityFlag flag) {
    ItemResult r{c, Verdict::fail, {}, {}};
    if (!cx.missing.empty()) {
        r.justification = fmt::format("features missing from the text map ({}), so survey knowledge fails",
                                      summarize(cx.missing));
        r.evidence = cx.missing;
        return r;
    }
    const auto bad = uncovered_pairs(cx, cx.present, {{field, flag}});
    const std::size_t n = cx.present.size(), total = n * (n - 1) / 2;
    if (bad.empty()) {
        r.verdict = Verdict::pass;
        if (cx.m.has(flag)) {
            r.justification = fmt::format("every pair can be queried through the {} capability", to_string(flag));
            r.evidence.push_back(to_string(flag));
        } else {
            r.justification = fmt::format("{} stated for all {} pairs", to_string(field), total);
        }
    } else if (bad.size() == total) {
        r.justification = fmt::format("{} not stated for any of the {} pairs", to_string(field), total);
        r.evidence = bad;
    } else {
        r.justification = fmt::format("partial pass counts as a fail: {} stated for {} of {} pairs; missing for {}",
                                      to_string(field), total - bad.size(), total, summarize(bad));
        r.evidence = bad;
    }
    return r;
}

inline ItemResult route_item(const Context& cx, Criterion c, RouteField field) {
    ItemResult r{c, Verdict::na, {}, {}};
    if (!cx.doc.capabilities.has_routes) {
        r.justification = "the baseline map has no routes";
        return r;
    }
    std::vector<std::string> ok, bad;
    for (const auto& route : cx.doc.routes) {
        const RouteRecord* rec = cx.m.find_route(route.id);
        (rec && rec->has(field) ? ok : bad).push_back(route.id);
    }
    if (bad.empty()) {
        r.verdict = Verdict::pass;
        r.justification = fmt::format("route {} described for all {} routes", to_string(field), ok.size());
        r.evidence = ok;
    } else {
        r.verdict = Verdict::fail;
        r.justification = ok.empty() ? fmt::format("route {} not described for {}", to_string(field), summarize(bad))
                                     : fmt::format("partial pass counts as a fail: route {} described for {} but not {}",
                                                   to_string(field), summarize(ok), summarize(bad));
        r.evidence = bad;
    }
    return r;
}

inline ItemResult na_item(Criterion c, std::string why) { return {c, Verdict::na, std::move(why), {}}; }

}  // namespace eval_detail

/// Throws SemanticError when the manifest names features or pairs the
/// baseline does not have (feature records marked as additions are allowed).
inline void check_references(const MapDocument& doc, const RepresentationManifest& m) {
    std::vector<std::string> unknown;
    for (const auto& f : m.features)
        if (!f.addition && !doc.find_feature(f.id)) unknown.push_back(f.id);
    for (const auto& p : m.pairs)
        for (const auto* id : {&p.a, &p.b})
            if (!doc.find_feature(*id) && std::find(unknown.begin(), unknown.end(), *id) == unknown.end())
                unknown.push_back(*id);
    if (!unknown.empty())
        throw SemanticError(fmt::format("manifest references feature ids not in the baseline map: {}",
                                        text::join(unknown, ", ")));
}

inline EvaluationReport evaluate(const MapDocument& doc, const RepresentationManifest& m, Exemptions ex = {}) {
    using namespace eval_detail;
    check_references(doc, m);
    const Context cx(doc, m, ex);
    const auto& caps = doc.capabilities;
    std::vector<ItemResult> items;

    {
        ItemResult r{Criterion::p_generalized, Verdict::fail, {}, {}};
        if (cx.missing.empty()) {
            r.verdict = Verdict::pass;
            r.justification = fmt::format("all {} baseline features are present", doc.features.size());
        } else {
            r.justification = fmt::format("{} of {} baseline features are missing: {}", cx.missing.size(),
                                          doc.features.size(), summarize(cx.missing));
            r.evidence = cx.missing;
        }
        items.push_back(std::move(r));
    }
    items.push_back(landmark_item(cx, Criterion::p_spatial_info,
                                  {LandmarkField::shape, LandmarkField::size, LandmarkField::orientation}));
    {
        ItemResult r{Criterion::p_spatial_rel, Verdict::fail, {}, {}};
        const auto bad = uncovered_pairs(cx, cx.present,
                                         {{PairField::distance, CapabilityFlag::pairwise_distance},
                                          {PairField::direction, CapabilityFlag::pairwise_direction}});
        const std::size_t n = cx.present.size(), total = n * (n - 1) / 2;
        if (cx.present.empty()) {
            r.justification = "no baseline feature appears in the text map";
        } else if (bad.empty()) {
            r.verdict = Verdict::pass;
            r.justification = fmt::format("distance and direction available for all {} pairs of present features", total);
        } else {
            r.justification =
                bad.size() == total
                    ? fmt::format("distance and direction missing for all {} pairs", total)
                    : fmt::format("partial pass counts as a fail: distance and direction available for {} of {} pairs; "
                                  "missing for {}",
                                  total - bad.size(), total, summarize(bad));
            r.evidence = bad;
        }
        items.push_back(std::move(r));
    }

    items.push_back(caps.shows_legend ? landmark_item(cx, Criterion::l_sensory, {LandmarkField::sensory})
                                      : na_item(Criterion::l_sensory, "the baseline map has no legend"));
    items.push_back(landmark_item(cx, Criterion::l_name, {LandmarkField::name}));
    items.push_back(landmark_item(cx, Criterion::l_type, {LandmarkField::type}));
    items.push_back(landmark_item(cx, Criterion::l_shape, {LandmarkField::shape}));
    items.push_back(landmark_item(cx, Criterion::l_orientation, {LandmarkField::orientation}));
    items.push_back(landmark_item(cx, Criterion::l_size, {LandmarkField::size}));
    items.push_back(caps.shows_temporal ? landmark_item(cx, Criterion::l_temporal, {LandmarkField::temporal},
                                                        CapabilityFlag::temporal_playback)
                                        : na_item(Criterion::l_temporal, "the baseline map has no temporal data"));
    items.push_back(caps.shows_overlaid ? landmark_item(cx, Criterion::l_overlaid, {LandmarkField::overlaid})
                                        : na_item(Criterion::l_overlaid, "the baseline map has no overlaid data"));

    items.push_back(route_item(cx, Criterion::r_landmark, RouteField::landmark));
    items.push_back(route_item(cx, Criterion::r_survey, RouteField::survey));
    items.push_back(route_item(cx, Criterion::r_prominence, RouteField::prominence));

    items.push_back(pair_item(cx, Criterion::s_distance, PairField::distance, CapabilityFlag::pairwise_distance));
    items.push_back(pair_item(cx, Criterion::s_direction, PairField::direction, CapabilityFlag::pairwise_direction));
    items.push_back(pair_item(cx, Criterion::s_topology, PairField::topology, CapabilityFlag::pairwise_topology));
    {
        const bool d = items[static_cast<int>(Criterion::s_distance)].verdict == Verdict::pass;
        const bool dir = items[static_cast<int>(Criterion::s_direction)].verdict == Verdict::pass;
        ItemResult r{Criterion::s_relative_location, d && dir ? Verdict::pass : Verdict::fail, {}, {}};
        if (d && dir) r.justification = "every pair is located through distance and direction";
        else if (!cx.missing.empty()) r.justification = "features are missing, so relative location fails";
        else if (d || dir)
            r.justification = fmt::format("partial pass counts as a fail: {} passes but {} fails", d ? "distance" : "direction",
                                          d ? "direction" : "distance");
        else r.justification = "neither distance nor direction covers every pair";
        items.push_back(std::move(r));
    }
    if (!caps.shows_coordinates) {
        items.push_back(na_item(Criterion::s_absolute_location, "the baseline map shows no coordinates"));
    } else if (!cx.missing.empty()) {
        items.push_back({Criterion::s_absolute_location, Verdict::fail,
                         fmt::format("features missing from the text map ({}), so survey knowledge fails",
                                     summarize(cx.missing)),
                         cx.missing});
    } else {
        items.push_back(landmark_item(cx, Criterion::s_absolute_location, {LandmarkField::coordinates},
                                      CapabilityFlag::absolute_location));
    }
    return score(std::move(items));
}

// --------------------------------------------------------------- rendering

inline std::string group_row(const EvaluationReport& r, CriterionGroup g) {
    const Fraction f = fraction_of(r.items, {g});
    if (f.applicable == 0) return fmt::format("{}: N/A", group_title(g));
    return fmt::format("{}: {}/{} Items Passed", group_title(g), f.passed, f.applicable);
}

/// Markdown table in criterion order with a fraction per group.
inline std::string render_markdown(const EvaluationReport& r, std::string_view label = {}) {
    std::string out;
    if (!label.empty()) out += fmt::format("# {}\n\n", label);
    out += fmt::format("Total Purpose Items Passed: {}/{} Items Passed ({})\n", r.purpose.passed, r.purpose.applicable,
                       percent_text(r.purpose_pct));
    out += fmt::format("Total Equivalent Items Passed: {}/{} Items Passed ({})\n", r.equivalency.passed,
                       r.equivalency.applicable, percent_text(r.equivalency_pct));
    for (CriterionGroup g : {CriterionGroup::purpose, CriterionGroup::landmark, CriterionGroup::route,
                             CriterionGroup::survey}) {
        out += fmt::format("\n## {}\n\n| Item | Criterion | Passed | Justification |\n| --- | --- | --- | --- |\n",
                           group_row(r, g));
        for (const auto& it : r.items) {
            if (group_of(it.criterion) != g) continue;
            std::string just = it.justification;
            std::replace(just.begin(), just.end(), '|', '/');
            out += fmt::format("| {} | {} | {} | {} |\n", criterion_title(it.criterion), to_string(it.criterion),
                               verdict_word(it.verdict), just);
        }
    }
    return out;
}

inline nlohmann::ordered_json report_to_json(const EvaluationReport& r) {
    using ojson = nlohmann::ordered_json;
    ojson items = ojson::array();
    for (const auto& it : r.items)
        items.push_back({{"criterion", to_string(it.criterion)},
                         {"group", to_string(group_of(it.criterion))},
                         {"verdict", to_string(it.verdict)},
                         {"justification", it.justification},
                         {"evidence", it.evidence}});
    return {{"purpose", {{"passed", r.purpose.passed}, {"applicable", r.purpose.applicable}, {"percent", r.purpose_pct}}},
            {"equivalency",
             {{"passed", r.equivalency.passed}, {"applicable", r.equivalency.applicable}, {"percent", r.equivalency_pct}}},
            {"conforms", r.conforms()},
            {"items", std::move(items)}};
}

inline std::string render_json(const EvaluationReport& r) { return report_to_json(r).dump(2) + "\n"; }

namespace eval_detail {

inline std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace eval_detail

inline std::string render_csv(const EvaluationReport& r) {
    std::string out = "criterion,group,verdict,justification\n";
    for (const auto& it : r.items)
        out += fmt::format("{},{},{},{}\n", to_string(it.criterion), to_string(group_of(it.criterion)),
                           to_string(it.verdict), eval_detail::csv_field(it.justification));
    return out;
}

enum class ReportFormat { markdown, json, csv };

inline std::optional<ReportFormat> report_format_from_string(std::string_view s) {
    if (s == "md") return ReportFormat::markdown;
    if (s == "json-like") return ReportFormat::json;
    if (s == "csv") return ReportFormat::csv;
    return std::nullopt;
}

inline std::string render_report(const EvaluationReport& r, ReportFormat f, std::string_view label = {}) {
    switch (f) {
        case ReportFormat::markdown: return render_markdown(r, label);
        case ReportFormat::json: return render_json(r);
        case ReportFormat::csv: return render_csv(r);
    }
    return {};
}

/// One row per labeled report, in input order.
inline std::string batch_table(const std::vector<std::pair<std::string, EvaluationReport>>& reports) {
    if (reports.empty()) throw DomainError("batch table needs at least one report");
    std::string out = "| Text Map | Purpose | Equivalency |\n| --- | --- | --- |\n";
    for (const auto& [label, r] : reports)
        out += fmt::format("| {} | {} | {} |\n", label, percent_text(r.purpose_pct), percent_text(r.equivalency_pct));
    return out;
}

}  // namespace mapverba
