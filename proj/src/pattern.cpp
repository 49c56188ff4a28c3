#include "qqespm/pattern.hpp"

#include "qqespm/error.hpp"
#include "qqespm/poi.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <limits>
#include <set>
#include <vector>

namespace qqespm {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw parse_error("pattern: " + where + ": " + what);
}

double require_finite_number(const json& j, const std::string& where, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) fail(where, std::string("missing \"") + key + '"');
    if (!it->is_number()) fail(where, std::string("\"") + key + "\" must be a number");
    const double v = it->get<double>();
    if (!std::isfinite(v)) fail(where, std::string("\"") + key + "\" must be finite");
    return v;
}

void check_connected(const spatial_pattern& p) {
    const std::size_t n = p.vertices.size();
    if (n <= 1) return;
    std::vector<std::vector<int>> adj(n);
    for (const pattern_edge& e : p.edges) {
        adj[e.from_vid].push_back(e.to_vid);
        adj[e.to_vid].push_back(e.from_vid);
    }
    std::vector<bool> seen(n, false);
    std::vector<int> stack = {0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : adj[v]) {
            if (!seen[w]) {
                seen[w] = true;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    if (reached != n) fail("edges", "pattern graph is not connected");
}

} // namespace

std::string_view to_string(exclusion_sign sign) {
    switch (sign) {
    case exclusion_sign::forward: return "->";
    case exclusion_sign::backward: return "<-";
    case exclusion_sign::mutual_exclusion: return "<->";
    case exclusion_sign::mutual_inclusion: return "-";
    }
    return "?";
}

std::optional<exclusion_sign> exclusion_sign_from_string(std::string_view text) {
    if (text == "->") return exclusion_sign::forward;
    if (text == "<-") return exclusion_sign::backward;
    if (text == "<->") return exclusion_sign::mutual_exclusion;
    if (text == "-") return exclusion_sign::mutual_inclusion;
    return std::nullopt;
}

void validate_pattern(const spatial_pattern& p) {
    if (p.vertices.empty()) fail("vertices", "pattern needs at least one vertex");
    for (std::size_t i = 0; i < p.vertices.size(); ++i) {
        const std::string where = "vertices[" + std::to_string(i) + ']';
        if (p.vertices[i].vid != static_cast<int>(i)) {
            fail(where, "\"id\" values must be 0..n-1 in document order");
        }
        if (p.vertices[i].keyword.empty()) fail(where, "keyword must be non-empty");
    }
    const int n = static_cast<int>(p.vertices.size());
    std::set<std::pair<int, int>> pairs;
    for (std::size_t i = 0; i < p.edges.size(); ++i) {
        const std::string where = "edges[" + std::to_string(i) + ']';
        const pattern_edge& e = p.edges[i];
        if (e.from_vid < 0 || e.from_vid >= n || e.to_vid < 0 || e.to_vid >= n) {
            fail(where, "vertex id out of range");
        }
        if (e.from_vid == e.to_vid) fail(where, "self-loops are not allowed");
        if (!e.interval && !e.relation) {
            fail(where, "edge needs a distance interval and/or a relation");
        }
        if (e.interval) {
            if (!(e.interval->lower >= 0.0)) fail(where, "lij must be >= 0");
            if (!(e.interval->lower <= e.interval->upper)) fail(where, "lij must be <= uij");
            if (!std::isfinite(e.interval->lower) || !std::isfinite(e.interval->upper)) {
                fail(where, "lij/uij must be finite");
            }
        } else if (e.sign != exclusion_sign::mutual_inclusion) {
            fail(where, "an exclusion sign requires a distance interval");
        }
        const auto key = std::minmax(e.from_vid, e.to_vid);
        if (!pairs.insert(key).second) {
            fail(where, "duplicate edge between vertices " + std::to_string(key.first) +
                            " and " + std::to_string(key.second));
        }
    }
    check_connected(p);
}

spatial_pattern parse_pattern(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& err) {
        fail("document", err.what());
    }
    if (!doc.is_object()) fail("document", "top level must be an object");
    if (!doc.contains("vertices") || !doc["vertices"].is_array()) {
        fail("document", "missing \"vertices\" array");
    }

    spatial_pattern p;
    for (std::size_t i = 0; i < doc["vertices"].size(); ++i) {
        const json& jv = doc["vertices"][i];
        const std::string where = "vertices[" + std::to_string(i) + ']';
        if (!jv.is_object()) fail(where, "must be an object");
        if (!jv.contains("id") || !jv["id"].is_number_integer()) {
            fail(where, "missing integer \"id\"");
        }
        if (!jv.contains("keyword") || !jv["keyword"].is_string()) {
            fail(where, "missing string \"keyword\"");
        }
        p.vertices.push_back(pattern_vertex{jv["id"].get<int>(),
                                            normalize_keyword(jv["keyword"].get<std::string>())});
    }

    if (doc.contains("edges")) {
        if (!doc["edges"].is_array()) fail("edges", "must be an array");
        for (std::size_t i = 0; i < doc["edges"].size(); ++i) {
            const json& je = doc["edges"][i];
            const std::string where = "edges[" + std::to_string(i) + ']';
            if (!je.is_object()) fail(where, "must be an object");
            pattern_edge e;
            if (!je.contains("from") || !je["from"].is_number_integer()) {
                fail(where, "missing integer \"from\"");
            }
            if (!je.contains("to") || !je["to"].is_number_integer()) {
                fail(where, "missing integer \"to\"");
            }
            e.from_vid = je["from"].get<int>();
            e.to_vid = je["to"].get<int>();
            const bool has_l = je.contains("lij");
            const bool has_u = je.contains("uij");
            if (has_l != has_u) fail(where, "lij and uij must be given together");
            if (has_l) {
                e.interval = distance_interval{require_finite_number(je, where, "lij"),
                                               require_finite_number(je, where, "uij")};
            }
            if (je.contains("sign")) {
                if (!je["sign"].is_string()) fail(where, "\"sign\" must be a string");
                const auto sign = exclusion_sign_from_string(je["sign"].get<std::string>());
                if (!sign) fail(where, "unknown sign \"" + je["sign"].get<std::string>() + '"');
                e.sign = *sign;
            }
            if (je.contains("relation")) {
                if (!je["relation"].is_string()) fail(where, "\"relation\" must be a string");
                const auto rel = topo_predicate_from_string(je["relation"].get<std::string>());
                if (!rel) {
                    fail(where, "unknown relation \"" + je["relation"].get<std::string>() + '"');
                }
                e.relation = *rel;
            }
            p.edges.push_back(e);
        }
    }

    validate_pattern(p);
    return p;
}

std::string serialize_pattern(const spatial_pattern& p) {
    json doc;
    doc["vertices"] = json::array();
    for (const pattern_vertex& v : p.vertices) {
        doc["vertices"].push_back({{"id", v.vid}, {"keyword", v.keyword}});
    }
    doc["edges"] = json::array();
    for (const pattern_edge& e : p.edges) {
        json je = {{"from", e.from_vid}, {"to", e.to_vid}, {"sign", to_string(e.sign)}};
        if (e.interval) {
            je["lij"] = e.interval->lower;
            je["uij"] = e.interval->upper;
        }
        if (e.relation) je["relation"] = to_string(*e.relation);
        doc["edges"].push_back(je);
    }
    return doc.dump(2);
}

distance_interval effective_interval(const pattern_edge& e) {
    if (e.interval) return *e.interval;
    return {0.0, std::numeric_limits<double>::infinity()};
}

edge_class classify_edge(const pattern_edge& e) {
    edge_class c;
    c.quantitative = e.interval.has_value();
    c.qualitative = e.relation.has_value();
    c.exclusive = c.quantitative && e.sign != exclusion_sign::mutual_inclusion;
    return c;
}

} // namespace qqespm
