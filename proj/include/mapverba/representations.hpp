#pragma once

// Text-map builders. The audio description, MUD map and alt-text grid carry
// every landmark, route and survey fact; the legacy builders reproduce the
// narrower information classes of tables, directions, short alt text and
// nearby search. Every builder also returns the manifest of its claims.

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "mapverba/describe.hpp"
#include "mapverba/manifest.hpp"
#include "mapverba/map_model.hpp"

namespace mapverba {

struct BuildOptions {
    DescribeOptions describe;
    int grid_divisions = 32;       // alt-grid cell = extent diagonal / divisions
    std::size_t nearby_results = 3;
};

/// Every description a full representation needs, computed once.
struct MapTexts {
    std::vector<LandmarkDescription> landmarks;
    std::vector<std::optional<std::string>> absolute;
    std::vector<PairStatement> pairs;  // i < j, stating feature j relative to feature i
    std::vector<RouteDescription> routes;
    std::string overview;
    std::optional<std::string> legend;
    std::optional<std::string> thematic;
    std::optional<std::string> temporal;

    const PairStatement* pair(std::string_view a, std::string_view b) const {
        for (const auto& p : pairs)
            if ((p.a_id == a && p.b_id == b) || (p.a_id == b && p.b_id == a)) return &p;
        return nullptr;
    }
};

namespace repr_detail {

inline std::string plural(std::size_t n, std::string_view one, std::string_view many) {
    return fmt::format("{} {}", n, n == 1 ? one : many);
}

/// Extent of the document in its local meter frame.
inline Box local_extent(const MapDocument& doc, const LocalFrame& frame) {
    std::optional<Box> box;
    auto add = [&](const Geometry& g) {
        for (Coord c : g.coords) {
            const Coord l = frame.to_local(c);
            if (!box) box = Box::of(l);
            else box->expand(l);
        }
    };
    for (const auto& f : doc.features) add(f.geometry);
    for (const auto& r : doc.routes) add(r.path);
    return box.value_or(Box{});
}

inline void check_valid(const MapDocument& doc) {
    const auto v = validate(doc);
    if (!v.empty())
        throw SemanticError(fmt::format("invalid map ({} problem{}); first: {}: {}", v.size(), v.size() == 1 ? "" : "s",
                                        v[0].path, v[0].message));
}

}  // namespace repr_detail

inline MapTexts compose_texts(const MapDocument& doc, const DescribeOptions& opt = {}) {
    MapTexts t;
    for (const auto& f : doc.features) {
        t.landmarks.push_back(describe_landmark(f, doc, opt));
        t.absolute.push_back(doc.capabilities.shows_coordinates ? std::optional(describe_absolute(f, doc))
                                                                : std::nullopt);
    }
    for (std::size_t i = 0; i < doc.features.size(); ++i)
        for (std::size_t j = i + 1; j < doc.features.size(); ++j)
            t.pairs.push_back(describe_pair(doc.features[j], doc.features[i], doc, opt));
    for (std::size_t i = 0; i < doc.routes.size(); ++i) t.routes.push_back(describe_route(doc.routes[i], doc, i + 1, opt));

    const Box b = repr_detail::local_extent(doc, frame_for(doc));
    std::size_t counts[3] = {0, 0, 0};
    for (const auto& f : doc.features) ++counts[static_cast<int>(f.geometry.kind)];
    std::vector<std::string> kinds;
    if (counts[2]) kinds.push_back(repr_detail::plural(counts[2], "polygon", "polygons"));
    if (counts[1]) kinds.push_back(repr_detail::plural(counts[1], "line", "lines"));
    if (counts[0]) kinds.push_back(repr_detail::plural(counts[0], "point", "points"));
    t.overview = fmt::format("{} shows {} ({}) in an area {} wide and {} tall. North is up.",
                             doc.title.empty() ? std::string("This map") : "The map " + doc.title,
                             repr_detail::plural(doc.features.size(), "feature", "features"), text::join_list(kinds),
                             text::length(b.width()), text::length(b.height()));
    if (!doc.routes.empty()) t.overview += fmt::format(" It has {}.", repr_detail::plural(doc.routes.size(), "route", "routes"));

    if (doc.capabilities.shows_legend) {
        std::vector<std::string> entries;
        for (const auto& s : doc.legend) {
            std::string e = s.color_name;
            if (!e.empty() && e[0] >= 'a' && e[0] <= 'z') e[0] = static_cast<char>(e[0] - 'a' + 'A');
            if (s.pattern) e += " with " + *s.pattern;
            if (s.notes) e += " (" + *s.notes + ")";
            std::vector<std::string> users;
            for (const auto& f : doc.features)
                if (f.sensory == s.id) users.push_back(f.name);
            for (const auto& r : doc.routes)
                if (r.sensory == s.id) users.push_back(r.name);
            e += users.empty() ? " is not used" : " marks " + text::join_list(users);
            entries.push_back(describe_detail::sentence(e));
        }
        t.legend = entries.empty() ? std::string("The legend is empty.") : "Legend: " + text::join(entries, " ");
    }
    if (doc.capabilities.shows_overlaid) {
        std::vector<std::string> vars;
        for (const auto& f : doc.features)
            for (const auto& [k, v] : f.overlaid)
                if (std::find(vars.begin(), vars.end(), k) == vars.end()) vars.push_back(k);
        t.thematic = fmt::format("Each feature carries overlaid data: {}.", text::join_list(vars));
    }
    if (doc.capabilities.shows_temporal && doc.temporal_domain && !doc.temporal_domain->empty()) {
        const auto& d = *doc.temporal_domain;
        t.temporal = fmt::format("Values change over time across {}, from {} to {}.",
                                 repr_detail::plural(d.size(), "date", "dates"), text::date(d.front()),
                                 text::date(d.back()));
    }
    return t;
}

// ---------------------------------------------------------------- claims

inline std::map<LandmarkField, std::string> landmark_claims(const LandmarkDescription& d,
                                                            const std::optional<std::string>& absolute) {
    std::map<LandmarkField, std::string> c;
    if (d.sensory_text) c[LandmarkField::sensory] = *d.sensory_text;
    c[LandmarkField::name] = d.name_text;
    c[LandmarkField::type] = d.type_text;
    c[LandmarkField::shape] = d.shape_text;
    if (d.orientation_text) c[LandmarkField::orientation] = *d.orientation_text;
    if (d.size_text) c[LandmarkField::size] = *d.size_text;
    if (d.temporal_text) c[LandmarkField::temporal] = *d.temporal_text;
    if (d.overlaid_text) c[LandmarkField::overlaid] = *d.overlaid_text;
    if (absolute) c[LandmarkField::coordinates] = *absolute;
    return c;
}

inline PairRecord pair_claims(const PairStatement& p, const MapDocument& doc) {
    PairRecord r;
    r.a = p.b_id;
    r.b = p.a_id;
    const Feature* a = doc.find_feature(p.a_id);
    r.claims[PairField::distance] = fmt::format("{} is {}", a ? a->name : p.a_id, text::length(p.distance_m));
    r.claims[PairField::direction] = p.relation_text;
    r.claims[PairField::topology] = p.text;
    r.claims[PairField::relative_location] = p.text;
    return r;
}

inline RouteRecord route_claims(const RouteDescription& d) {
    RouteRecord r;
    r.id = d.route_id;
    r.claims[RouteField::landmark] = d.landmark_section;
    r.claims[RouteField::survey] = d.survey_section;
    r.claims[RouteField::prominence] = d.prominence_heading;
    return r;
}

/// The claims of a complete description: every landmark field, every pair
/// and every route.
inline RepresentationManifest full_manifest(const MapDocument& doc, const MapTexts& t, RepresentationKind kind) {
    RepresentationManifest m;
    m.kind = kind;
    for (std::size_t i = 0; i < doc.features.size(); ++i)
        m.features.push_back({doc.features[i].id, landmark_claims(t.landmarks[i], t.absolute[i]), false});
    for (const auto& p : t.pairs) m.pairs.push_back(pair_claims(p, doc));
    for (const auto& r : t.routes) m.routes.push_back(route_claims(r));
    return m;
}

// ------------------------------------------------------ audio description

struct Section {
    int level = 1;
    std::string title;
    std::vector<std::string> paragraphs;
    friend bool operator==(const Section&, const Section&) = default;
};

/// Headings and paragraphs in document order. Levels start at 1 and never
/// grow by more than one from one section to the next.
struct DocumentTree {
    std::vector<Section> sections;
};

inline bool well_nested(const DocumentTree& t) {
    int prev = 0;
    for (const auto& s : t.sections) {
        if (s.level < 1 || s.level > prev + 1) return false;
        prev = s.level;
    }
    return true;
}

/// Heading-marked plain text: "#" per level, blank line between blocks.
inline std::string render_text(const DocumentTree& t) {
    std::string out;
    for (const auto& s : t.sections) {
        out += std::string(static_cast<std::size_t>(s.level), '#') + " " + s.title + "\n\n";
        for (const auto& p : s.paragraphs) out += p + "\n\n";
    }
    return out;
}

struct AudioDescription {
    DocumentTree tree;
    RepresentationManifest manifest;
};

inline constexpr const char* routes_heading = "Routes:";

inline AudioDescription build_audio_description(const MapDocument& doc, const BuildOptions& opt = {}) {
    repr_detail::check_valid(doc);
    const MapTexts t = compose_texts(doc, opt.describe);
    AudioDescription out;
    auto& s = out.tree.sections;
    s.push_back({1, doc.title.empty() ? "Map" : doc.title, {}});
    s.push_back({2, "Overview", {t.overview}});
    if (t.legend) s.push_back({2, "Legend", {*t.legend}});
    if (t.thematic) s.push_back({2, "Thematic data", {*t.thematic}});
    if (t.temporal) s.push_back({2, "Time series", {*t.temporal}});
    s.push_back({2, "Landmarks", {}});
    for (std::size_t i = 0; i < doc.features.size(); ++i) {
        Section sec{3, doc.features[i].name, {t.landmarks[i].paragraph()}};
        if (t.absolute[i]) sec.paragraphs.push_back(*t.absolute[i]);
        s.push_back(std::move(sec));
    }
    Section survey{2, "Spatial relationships", {}};
    for (const auto& p : t.pairs) survey.paragraphs.push_back(p.text);
    if (survey.paragraphs.empty()) survey.paragraphs.push_back("There is only one feature, so there are no pairs to relate.");
    s.push_back(std::move(survey));
    if (!t.routes.empty()) {
        s.push_back({2, routes_heading, {}});
        for (const auto& r : t.routes) s.push_back({3, r.prominence_heading, {r.landmark_section, r.survey_section}});
    }
    out.manifest = full_manifest(doc, t, RepresentationKind::audio_description);
    return out;
}

// ---------------------------------------------------------------- MUD map

struct Room {
    std::string id;
    std::string title;
    std::string description;
    std::vector<std::string> feature_ids;
    friend bool operator==(const Room&, const Room&) = default;
};

struct Exit {
    std::string from;
    Cardinal direction = Cardinal::north;
    std::string to;
    friend bool operator==(const Exit&, const Exit&) = default;
};

struct RoomGraph {
    std::vector<Room> rooms;
    std::vector<Exit> exits;
    std::string start;

    const Room* find(std::string_view id) const {
        for (const auto& r : rooms)
            if (r.id == id) return &r;
        return nullptr;
    }
    std::vector<Exit> exits_from(std::string_view id) const {
        std::vector<Exit> out;
        for (const auto& e : exits)
            if (e.from == id) out.push_back(e);
        std::sort(out.begin(), out.end(), [](const Exit& a, const Exit& b) { return a.direction < b.direction; });
        return out;
    }
    friend bool operator==(const RoomGraph&, const RoomGraph&) = default;
};

inline constexpr const char* overview_room_id = "overview";
inline std::string room_id_for(std::string_view feature_id) { return "room-" + std::string(feature_id); }

namespace repr_detail {

struct DisjointSets {
    std::vector<std::size_t> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[std::max(a, b)] = std::min(a, b);
        return true;
    }
};

/// Index of the northernmost centroid; ties go to the westernmost, then the first.
inline std::size_t northernmost(const std::vector<Coord>& c) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < c.size(); ++i)
        if (c[i].y > c[best].y || (c[i].y == c[best].y && c[i].x < c[best].x)) best = i;
    return best;
}

}  // namespace repr_detail

/// Feature-to-feature exits. A feature links to the nearest feature in each
/// compass sector when that feature's nearest in the opposite sector is the
/// first one; components left over are then joined pairwise, closest first.
/// The north sector of `reserved_north` stays free for the overview room.
inline std::vector<std::array<std::optional<std::size_t>, 8>> mud_exits(const std::vector<Coord>& centroids, Crs crs,
                                                                       std::size_t reserved_north) {
    const std::size_t n = centroids.size();
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    std::vector<std::vector<std::optional<Cardinal>>> sector(n, std::vector<std::optional<Cardinal>>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            dist[i][j] = dist[j][i] = geodesy::crs_distance(centroids[i], centroids[j], crs);
            if (dist[i][j] > 0.0 && !(centroids[i] == centroids[j])) {
                const Cardinal s = spatial::quantize_cardinal(spatial::bearing(centroids[i], centroids[j], crs));
                sector[i][j] = s;
                sector[j][i] = opposite(s);
            }
        }
    auto nearest_in = [&](std::size_t i, Cardinal d) -> std::optional<std::size_t> {
        std::optional<std::size_t> best;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i && sector[i][j] == d && (!best || dist[i][j] < dist[i][*best])) best = j;
        return best;
    };
    std::vector<std::array<std::optional<std::size_t>, 8>> out(n);
    auto is_free = [&](std::size_t i, Cardinal d) {
        return !out[i][static_cast<int>(d)] && !(i == reserved_north && d == Cardinal::north);
    };
    repr_detail::DisjointSets sets(n);
    auto link = [&](std::size_t i, std::size_t j, Cardinal d) {
        out[i][static_cast<int>(d)] = j;
        out[j][static_cast<int>(opposite(d))] = i;
        sets.unite(i, j);
    };
    for (std::size_t i = 0; i < n; ++i)
        for (Cardinal d : all_cardinals) {
            const auto j = nearest_in(i, d);
            if (!j || *j < i) continue;
            if (nearest_in(*j, opposite(d)) == i && is_free(i, d) && is_free(*j, opposite(d))) link(i, *j, d);
        }

    struct Candidate {
        double d;
        std::size_t i, j;
    };
    for (;;) {
        std::vector<Candidate> cands;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (sets.find(i) != sets.find(j)) cands.push_back({dist[i][j], i, j});
        if (cands.empty()) break;
        std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.d < b.d; });
        bool linked = false;
        for (const auto& c : cands) {
            if (sector[c.i][c.j] && is_free(c.i, *sector[c.i][c.j]) && is_free(c.j, opposite(*sector[c.i][c.j]))) {
                link(c.i, c.j, *sector[c.i][c.j]);
                linked = true;
                break;
            }
        }
        if (linked) continue;
        // No natural sector is free anywhere: use the free sector closest to the natural one.
        for (const auto& c : cands) {
            const int natural = static_cast<int>(sector[c.i][c.j].value_or(Cardinal::north));
            for (int step : {0, 1, -1, 2, -2, 3, -3, 4}) {
                const auto d = static_cast<Cardinal>(((natural + step) % 8 + 8) % 8);
                if (is_free(c.i, d) && is_free(c.j, opposite(d))) {
                    link(c.i, c.j, d);
                    linked = true;
                    break;
                }
            }
            if (linked) break;
        }
        if (!linked) throw std::logic_error("cannot connect the room graph: every compass sector is taken");
    }
    return out;
}

struct MudMap {
    RoomGraph graph;
    RepresentationManifest manifest;
};

inline std::string overview_room_text(const MapDocument& doc, const MapTexts& t) {
    std::vector<std::string> parts = {t.overview};
    if (t.legend) parts.push_back(*t.legend);
    if (t.thematic) parts.push_back(*t.thematic);
    if (t.temporal) parts.push_back(*t.temporal);
    if (!t.routes.empty()) {
        parts.push_back(routes_heading);
        for (const auto& r : t.routes) {
            parts.push_back(r.prominence_heading);
            parts.push_back(r.landmark_section);
            parts.push_back(r.survey_section);
        }
    }
    (void)doc;
    return text::join(parts, "\n");
}

inline MudMap build_mud_map(const MapDocument& doc, const BuildOptions& opt = {}) {
    repr_detail::check_valid(doc);
    const MapTexts t = compose_texts(doc, opt.describe);
    MudMap out;
    RoomGraph& g = out.graph;
    const std::size_t n = doc.features.size();
    std::vector<Coord> centroids;
    for (const auto& f : doc.features) centroids.push_back(spatial::centroid(f.geometry, doc.crs));
    const std::size_t top = repr_detail::northernmost(centroids);

    g.rooms.push_back({overview_room_id, "Overview", overview_room_text(doc, t), {}});
    for (std::size_t i = 0; i < n; ++i) {
        const Feature& f = doc.features[i];
        std::vector<std::string> parts = {t.landmarks[i].paragraph()};
        if (t.absolute[i]) parts.push_back(*t.absolute[i]);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            parts.push_back(j > i ? t.pair(f.id, doc.features[j].id)->text
                                  : describe_pair(doc.features[j], f, doc, opt.describe).text);
        }
        g.rooms.push_back({room_id_for(f.id), f.name, text::join(parts, "\n"), {f.id}});
    }
    g.start = overview_room_id;
    g.exits.push_back({overview_room_id, Cardinal::south, room_id_for(doc.features[top].id)});
    g.exits.push_back({room_id_for(doc.features[top].id), Cardinal::north, overview_room_id});
    const auto links = mud_exits(centroids, doc.crs, top);
    for (std::size_t i = 0; i < n; ++i)
        for (Cardinal d : all_cardinals)
            if (const auto j = links[i][static_cast<int>(d)])
                g.exits.push_back({room_id_for(doc.features[i].id), d, room_id_for(doc.features[*j].id)});

    out.manifest = full_manifest(doc, t, RepresentationKind::mud_map);
    return out;
}

/// Plain-text rendering: one block per room with its exits.
inline std::string render_text(const RoomGraph& g) {
    std::string out;
    for (const auto& r : g.rooms) {
        out += "== " + r.title + " ==\n" + r.description + "\n";
        std::vector<std::string> ex;
        for (const auto& e : g.exits_from(r.id)) {
            const Room* to = g.find(e.to);
            ex.push_back(fmt::format("{} ({})", to_string(e.direction), to ? to->title : e.to));
        }
        out += "Exits: " + (ex.empty() ? std::string("none") : text::join(ex, ", ")) + "\n\n";
    }
    return out;
}

inline nlohmann::ordered_json room_graph_to_json(const RoomGraph& g) {
    using ojson = nlohmann::ordered_json;
    ojson rooms = ojson::array();
    for (const auto& r : g.rooms)
        rooms.push_back({{"id", r.id}, {"title", r.title}, {"description", r.description}, {"features", r.feature_ids}});
    ojson exits = ojson::array();
    for (const auto& e : g.exits)
        exits.push_back({{"from", e.from}, {"direction", token(e.direction)}, {"to", e.to}});
    return {{"start", g.start}, {"rooms", std::move(rooms)}, {"exits", std::move(exits)}};
}

// ----------------------------------------------------------- alt-text grid

struct GridCell {
    int row = 0, col = 0;
    std::vector<std::string> feature_ids;
    std::string text;
};

/// Row 0 is the northern edge; columns run west to east. Cell bounds are in
/// the document's local meter frame.
struct AltGrid {
    int rows = 1, cols = 1;
    double cell_m = 1.0;
    double min_x = 0.0, max_y = 0.0;  // north-west corner of the grid
    std::vector<GridCell> cells;      // row-major
    int cursor_row = 0, cursor_col = 0;

    const GridCell& at(int r, int c) const { return cells.at(static_cast<std::size_t>(r * cols + c)); }
    Box bounds(int r, int c) const {
        return {min_x + c * cell_m, max_y - (r + 1) * cell_m, min_x + (c + 1) * cell_m, max_y - r * cell_m};
    }
    /// Cell containing a local point, clamped to the grid.
    std::pair<int, int> locate(Coord p) const {
        const int c = std::clamp(static_cast<int>(std::floor((p.x - min_x) / cell_m)), 0, cols - 1);
        const int r = std::clamp(static_cast<int>(std::floor((max_y - p.y) / cell_m)), 0, rows - 1);
        return {r, c};
    }
};

/// Closed-box intersection for a geometry in local coordinates.
inline bool intersects_box(const Geometry& g, const Box& b) {
    auto inside = [&](Coord p) { return p.x >= b.min_x && p.x <= b.max_x && p.y >= b.min_y && p.y <= b.max_y; };
    for (Coord c : g.coords)
        if (inside(c)) return true;
    if (g.kind == GeometryKind::point) return false;
    const Coord corners[4] = {{b.min_x, b.min_y}, {b.max_x, b.min_y}, {b.max_x, b.max_y}, {b.min_x, b.max_y}};
    for (std::size_t i = 0; i + 1 < g.coords.size(); ++i)
        for (int k = 0; k < 4; ++k)
            if (planar::segments_intersect(g.coords[i], g.coords[i + 1], corners[k], corners[(k + 1) % 4])) return true;
    if (g.kind == GeometryKind::polygon)
        for (Coord c : corners)
            if (planar::ray_cast_inside(c, g.coords)) return true;
    return false;
}

/// Nearest point of a local geometry to p (p itself when inside a polygon).
inline Coord nearest_point(const Geometry& g, Coord p) {
    if (g.kind == GeometryKind::point) return g.coords[0];
    if (g.kind == GeometryKind::polygon && planar::ray_cast_inside(p, g.coords)) return p;
    Coord best = g.coords[0];
    double bd = planar::dist(p, best);
    for (std::size_t i = 0; i + 1 < g.coords.size(); ++i) {
        const Coord q = planar::closest_on_segment(p, g.coords[i], g.coords[i + 1]);
        const double d = planar::dist(p, q);
        if (d < bd) {
            bd = d;
            best = q;
        }
    }
    return best;
}

struct AltGridMap {
    AltGrid grid;
    MapTexts texts;
    RepresentationManifest manifest;
};

inline AltGridMap build_alt_grid(const MapDocument& doc, const BuildOptions& opt = {}) {
    repr_detail::check_valid(doc);
    AltGridMap out;
    out.texts = compose_texts(doc, opt.describe);
    const LocalFrame frame = frame_for(doc);
    const Box ext = repr_detail::local_extent(doc, frame);
    AltGrid& g = out.grid;
    const double diag = std::hypot(ext.width(), ext.height());
    g.cell_m = diag > 0.0 ? diag / std::max(1, opt.grid_divisions) : 1.0;
    g.cols = std::max(1, static_cast<int>(std::ceil(ext.width() / g.cell_m)));
    g.rows = std::max(1, static_cast<int>(std::ceil(ext.height() / g.cell_m)));
    g.min_x = ext.min_x;
    g.max_y = ext.max_y;

    std::vector<Geometry> local;
    for (const auto& f : doc.features) local.push_back({f.geometry.kind, frame.to_local(f.geometry.coords)});
    for (int r = 0; r < g.rows; ++r)
        for (int c = 0; c < g.cols; ++c) {
            GridCell cell{r, c, {}, {}};
            const Box b = g.bounds(r, c);
            std::vector<std::string> names;
            for (std::size_t i = 0; i < local.size(); ++i)
                if (intersects_box(local[i], b)) {
                    cell.feature_ids.push_back(doc.features[i].id);
                    names.push_back(doc.features[i].name);
                }
            const std::string where = fmt::format("Row {}, column {}", r + 1, c + 1);
            if (!names.empty()) {
                cell.text = fmt::format("{}: {}.", where, text::join_list(names));
            } else {
                const Coord center = b.center();
                std::size_t best = 0;
                double bd = std::numeric_limits<double>::infinity();
                Coord bp{};
                for (std::size_t i = 0; i < local.size(); ++i) {
                    const Coord q = nearest_point(local[i], center);
                    const double d = planar::dist(center, q);
                    if (d < bd) {
                        bd = d;
                        best = i;
                        bp = q;
                    }
                }
                const Bearing dir = spatial::bearing(center, bp);
                cell.text = fmt::format("{}: empty. Nearest is {}, {} {} ({}).", where, doc.features[best].name,
                                        text::length(bd), to_string(spatial::quantize_cardinal(dir)),
                                        spatial::quantize_clock(dir, ClockResolution::hour).text());
            }
            g.cells.push_back(std::move(cell));
        }
    std::tie(g.cursor_row, g.cursor_col) = std::pair(g.rows / 2, g.cols / 2);

    RepresentationManifest& m = out.manifest;
    m.kind = RepresentationKind::alt_grid;
    for (std::size_t i = 0; i < doc.features.size(); ++i)
        m.features.push_back({doc.features[i].id, landmark_claims(out.texts.landmarks[i], out.texts.absolute[i]), false});
    for (const auto& r : out.texts.routes) m.routes.push_back(route_claims(r));
    m.capabilities = {CapabilityFlag::pairwise_distance, CapabilityFlag::pairwise_direction,
                      CapabilityFlag::pairwise_topology};
    if (doc.capabilities.shows_coordinates) m.capabilities.insert(CapabilityFlag::absolute_location);
    if (doc.capabilities.shows_temporal) m.capabilities.insert(CapabilityFlag::temporal_playback);
    return out;
}

inline nlohmann::ordered_json alt_grid_to_json(const AltGrid& g) {
    using ojson = nlohmann::ordered_json;
    ojson cells = ojson::array();
    for (const auto& c : g.cells)
        cells.push_back({{"row", c.row}, {"col", c.col}, {"features", c.feature_ids}, {"text", c.text}});
    return {{"rows", g.rows},
            {"cols", g.cols},
            {"cell_size_m", g.cell_m},
            {"cursor", {{"row", g.cursor_row}, {"col", g.cursor_col}}},
            {"cells", std::move(cells)}};
}

// ------------------------------------------------------------ legacy kinds

struct LegacyOutput {
    std::string text;
    RepresentationManifest manifest;
};

namespace repr_detail {

inline std::string table_cell(std::string s) {
    std::string out;
    for (char ch : s) {
        if (ch == '|') out += "\\|";
        else if (ch == '\n') out += ' ';
        else out += ch;
    }
    return out;
}

inline std::string type_or_unlabeled(const Feature& f) {
    return f.type_label.empty() ? std::string("unlabeled ") + to_string(f.geometry.kind) : f.type_label;
}

inline LegacyOutput build_table(const MapDocument& doc) {
    LegacyOutput out;
    out.manifest.kind = RepresentationKind::table;
    std::vector<std::string> vars;
    for (const auto& f : doc.features)
        for (const auto& [k, v] : f.overlaid)
            if (std::find(vars.begin(), vars.end(), k) == vars.end()) vars.push_back(k);
    std::vector<std::string> header = {"Name", "Type"};
    for (const auto& v : vars) header.push_back(table_cell(v));
    out.text = (doc.title.empty() ? std::string("Map") : doc.title) + "\n\n| " + text::join(header, " | ") + " |\n|";
    for (std::size_t i = 0; i < header.size(); ++i) out.text += " --- |";
    out.text += "\n";
    for (const auto& f : doc.features) {
        std::vector<std::string> row = {table_cell(f.name), table_cell(type_or_unlabeled(f))};
        for (const auto& var : vars) {
            auto it = std::find_if(f.overlaid.begin(), f.overlaid.end(), [&](const auto& kv) { return kv.first == var; });
            if (it == f.overlaid.end()) row.push_back("");
            else if (std::holds_alternative<double>(it->second)) row.push_back(text::value(std::get<double>(it->second)));
            else row.push_back(table_cell(std::get<std::string>(it->second)));
        }
        const std::string line = "| " + text::join(row, " | ") + " |";
        out.text += line + "\n";
        FeatureRecord rec{f.id, {}, false};
        rec.claims[LandmarkField::name] = row[0];
        rec.claims[LandmarkField::type] = row[1];
        if (!f.overlaid.empty()) rec.claims[LandmarkField::overlaid] = line;
        out.manifest.features.push_back(std::move(rec));
    }
    return out;
}

inline LegacyOutput build_turn_by_turn(const MapDocument& doc, const DescribeOptions& opt) {
    if (doc.routes.empty())
        throw DomainError("turn-by-turn directions need at least one route, but the map defines no routes");
    LegacyOutput out;
    out.manifest.kind = RepresentationKind::turn_by_turn;
    out.text = std::string(routes_heading) + "\n\n";
    std::set<std::string> on_route;
    for (std::size_t i = 0; i < doc.routes.size(); ++i) {
        const RouteDescription d = describe_route(doc.routes[i], doc, i + 1, opt);
        out.text += d.prominence_heading + "\n" + d.landmark_section + "\n" + d.survey_section + "\n\n";
        out.manifest.routes.push_back(route_claims(d));
        for (const auto& e : d.encounters) on_route.insert(e.feature_id);
    }
    for (const auto& f : doc.features) {
        if (!on_route.count(f.id)) continue;
        FeatureRecord rec{f.id, {}, false};
        rec.claims[LandmarkField::name] = f.name;
        if (!f.type_label.empty()) rec.claims[LandmarkField::type] = f.type_label;
        out.manifest.features.push_back(std::move(rec));
    }
    return out;
}

inline LegacyOutput build_short_alt(const MapDocument& doc) {
    LegacyOutput out;
    out.manifest.kind = RepresentationKind::short_alt;
    std::string s = fmt::format("{}: map of {}", doc.title.empty() ? std::string("Map") : doc.title,
                                plural(doc.features.size(), "feature", "features"));
    std::vector<std::string> names;
    for (const auto& f : doc.features) names.push_back(f.name);
    const std::string full = s + " including " + text::join(names, ", ");
    if (full.size() + 1 <= 140) {
        s = full;
    } else if (s.size() + 1 > 140) {
        s = s.substr(0, 139);
        while (!s.empty() && (static_cast<unsigned char>(s.back()) & 0xC0) == 0x80) s.pop_back();
        if (!s.empty() && static_cast<unsigned char>(s.back()) >= 0xC0) s.pop_back();
    }
    out.text = s + ".";
    out.manifest.summary.push_back(out.text);
    return out;
}

inline LegacyOutput build_nearby(const MapDocument& doc, std::size_t k) {
    LegacyOutput out;
    out.manifest.kind = RepresentationKind::nearby_search;
    const Coord q = spatial::centroid(doc.features.at(0).geometry, doc.crs);
    std::vector<std::pair<double, std::size_t>> order;
    for (std::size_t i = 0; i < doc.features.size(); ++i)
        order.emplace_back(geodesy::crs_distance(q, spatial::centroid(doc.features[i].geometry, doc.crs), doc.crs), i);
    std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    order.resize(std::min(order.size(), k));
    out.text = fmt::format("Results near {}:\n", doc.features[0].name);
    int n = 0;
    for (const auto& [d, i] : order) {
        const Feature& f = doc.features[i];
        const std::string dist = text::length(d) + " away";
        out.text += fmt::format("{}. {} ({}), {}\n", ++n, f.name, type_or_unlabeled(f), dist);
        FeatureRecord rec{f.id, {}, false};
        rec.claims[LandmarkField::name] = f.name;
        rec.claims[LandmarkField::type] = type_or_unlabeled(f);
        rec.claims[LandmarkField::query_distance] = dist;
        out.manifest.features.push_back(std::move(rec));
    }
    return out;
}

}  // namespace repr_detail

inline LegacyOutput build_legacy(const MapDocument& doc, RepresentationKind kind, const BuildOptions& opt = {}) {
    repr_detail::check_valid(doc);
    switch (kind) {
        case RepresentationKind::table: return repr_detail::build_table(doc);
        case RepresentationKind::turn_by_turn: return repr_detail::build_turn_by_turn(doc, opt.describe);
        case RepresentationKind::short_alt: return repr_detail::build_short_alt(doc);
        case RepresentationKind::nearby_search: return repr_detail::build_nearby(doc, opt.nearby_results);
        default: throw DomainError(fmt::format("'{}' is not a legacy representation", to_string(kind)));
    }
}

// -------------------------------------------------------------- rendering

inline nlohmann::ordered_json feature_texts_json(const MapDocument& doc, const MapTexts& t) {
    using ojson = nlohmann::ordered_json;
    ojson fs = ojson::array();
    for (std::size_t i = 0; i < doc.features.size(); ++i) {
        ojson jf = {{"id", doc.features[i].id},
                    {"name", doc.features[i].name},
                    {"kind", to_string(doc.features[i].geometry.kind)},
                    {"description", t.landmarks[i].paragraph()}};
        if (t.absolute[i]) jf["absolute"] = *t.absolute[i];
        fs.push_back(std::move(jf));
    }
    return fs;
}

inline nlohmann::ordered_json pair_texts_json(const MapDocument& doc, const MapTexts& t, const DescribeOptions& opt) {
    using ojson = nlohmann::ordered_json;
    ojson ps = ojson::array();
    for (const auto& p : t.pairs) {
        const PairStatement rev = describe_pair(*doc.find_feature(p.b_id), *doc.find_feature(p.a_id), doc, opt);
        ps.push_back({{"a", p.b_id},
                      {"b", p.a_id},
                      {"distance_m", p.distance_m},
                      {"topology", to_string(converse(p.topo))},
                      {"b_from_a", p.relation_text},
                      {"a_from_b", rev.relation_text},
                      {"text", p.text},
                      {"reverse_text", rev.text}});
    }
    return ps;
}

inline nlohmann::ordered_json route_texts_json(const MapTexts& t) {
    using ojson = nlohmann::ordered_json;
    ojson rs = ojson::array();
    for (const auto& r : t.routes)
        rs.push_back({{"id", r.route_id},
                      {"heading", r.prominence_heading},
                      {"landmark", r.landmark_section},
                      {"survey", r.survey_section}});
    return rs;
}

/// Structured rendering of a grid map: the cells plus every text the cursor
/// interface can announce.
inline std::string render_json(const MapDocument& doc, const AltGridMap& a, const DescribeOptions& opt = {}) {
    nlohmann::ordered_json j = {{"kind", "alt-grid"}, {"title", doc.title}};
    j["grid"] = alt_grid_to_json(a.grid);
    j["features"] = feature_texts_json(doc, a.texts);
    j["pairs"] = pair_texts_json(doc, a.texts, opt);
    j["routes"] = route_texts_json(a.texts);
    return j.dump(2) + "\n";
}

inline std::string render_json(const MapDocument& doc, const MudMap& m) {
    nlohmann::ordered_json j = {{"kind", "mud-map"}, {"title", doc.title}};
    j["mud"] = room_graph_to_json(m.graph);
    return j.dump(2) + "\n";
}

/// Rendered artifact and manifest for any representation kind.
struct Compiled {
    std::string artifact;
    std::string extension;  // "txt" or "json"
    RepresentationManifest manifest;
};

inline Compiled compile(const MapDocument& doc, RepresentationKind kind, const BuildOptions& opt = {}) {
    switch (kind) {
        case RepresentationKind::audio_description: {
            auto a = build_audio_description(doc, opt);
            return {render_text(a.tree), "txt", std::move(a.manifest)};
        }
        case RepresentationKind::mud_map: {
            auto m = build_mud_map(doc, opt);
            return {render_json(doc, m), "json", std::move(m.manifest)};
        }
        case RepresentationKind::alt_grid: {
            auto g = build_alt_grid(doc, opt);
            return {render_json(doc, g, opt.describe), "json", std::move(g.manifest)};
        }
        default: {
            auto l = build_legacy(doc, kind, opt);
            return {std::move(l.text), "txt", std::move(l.manifest)};
        }
    }
}

}  // namespace mapverba
