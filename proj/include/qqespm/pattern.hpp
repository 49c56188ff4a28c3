#pragma once

#include "qqespm/geometry.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qqespm {

enum class exclusion_sign : std::uint8_t {
    forward,          // "->" : from-POI excludes nearby to-keyword POIs
    backward,         // "<-"
    mutual_exclusion, // "<->"
    mutual_inclusion, // "-"
};

std::string_view to_string(exclusion_sign sign);
std::optional<exclusion_sign> exclusion_sign_from_string(std::string_view text);

struct pattern_vertex {
    int vid = 0;
    std::string keyword;

    friend bool operator==(const pattern_vertex&, const pattern_vertex&) = default;
};

struct distance_interval {
    double lower = 0.0;
    double upper = 0.0;

    friend bool operator==(const distance_interval&, const distance_interval&) = default;
};

/// Directed pattern edge. At least one of interval / relation is present;
/// an edge without an interval is always mutually inclusive (there is no
/// exclusion radius to enforce).
struct pattern_edge {
    int from_vid = 0;
    int to_vid = 0;
    std::optional<distance_interval> interval;
    exclusion_sign sign = exclusion_sign::mutual_inclusion;
    std::optional<topo_predicate> relation;

    friend bool operator==(const pattern_edge&, const pattern_edge&) = default;
};

/// Connected graph of keyword vertices and constrained edges. Vertex order
/// fixes the position of each bound POI in result tuples.
struct spatial_pattern {
    std::vector<pattern_vertex> vertices;
    std::vector<pattern_edge> edges;

    const std::string& keyword_of(int vid) const { return vertices[vid].keyword; }

    friend bool operator==(const spatial_pattern&, const spatial_pattern&) = default;
};

/// Parse and validate a pattern document (JSON, see README for the schema).
/// Throws parse_error with the offending location on any violation.
spatial_pattern parse_pattern(std::string_view json_text);

std::string serialize_pattern(const spatial_pattern& p);

/// Enforce all structural invariants; throws parse_error.
void validate_pattern(const spatial_pattern& p);

/// The edge's distance constraint; (0, +inf) for qualitative-only edges.
distance_interval effective_interval(const pattern_edge& e);

struct edge_class {
    bool quantitative = false;
    bool qualitative = false;
    bool exclusive = false;
};

edge_class classify_edge(const pattern_edge& e);

} // namespace qqespm
