#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qqespm {

struct point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const point&, const point&) = default;
};

/// Axis-aligned rectangle. Degenerate extents (zero width and/or height)
/// are allowed and represent segments or points.
struct rect {
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 0.0;
    double max_y = 0.0;

    static rect from_point(point p) { return {p.x, p.y, p.x, p.y}; }

    double width() const { return max_x - min_x; }
    double height() const { return max_y - min_y; }
    bool valid() const { return min_x <= max_x && min_y <= max_y; }

    bool contains(point p) const {
        return min_x <= p.x && p.x <= max_x && min_y <= p.y && p.y <= max_y;
    }
    bool intersects(const rect& o) const {
        return !(min_x > o.max_x || o.min_x > max_x || min_y > o.max_y || o.min_y > max_y);
    }
    /// Smallest rect containing both.
    rect merged(const rect& o) const;

    friend bool operator==(const rect&, const rect&) = default;
};

using geometry = std::variant<point, rect>;

/// The six DE-9IM relations used by the engine.
enum class topo_predicate : std::uint8_t {
    equals,
    touches,
    covers,
    covered_by,
    partially_overlaps,
    disjoint,
};

inline constexpr std::array<topo_predicate, 6> all_topo_predicates = {
    topo_predicate::equals,       topo_predicate::touches,
    topo_predicate::covers,       topo_predicate::covered_by,
    topo_predicate::partially_overlaps, topo_predicate::disjoint,
};

std::string_view to_string(topo_predicate pred);
std::optional<topo_predicate> topo_predicate_from_string(std::string_view name);

/// DE-9IM intersection matrix. Rows index the parts of the first geometry
/// (interior, boundary, exterior), columns the parts of the second. Each
/// entry is the dimension of the pairwise intersection: -1 (empty), 0, 1, 2.
struct de9im_matrix {
    std::array<std::array<std::int8_t, 3>, 3> dim{};

    std::int8_t at(int part_a, int part_b) const { return dim[part_a][part_b]; }
    /// Nine characters, row-major, 'F' for empty: e.g. "FF2FF1212".
    std::string str() const;
};

/// Compute the full DE-9IM matrix between two point/rect geometries.
/// Point interiors are the point itself with an empty boundary; degenerate
/// rects use relative interiors (a segment's interior is the open segment).
/// All coordinate comparisons are exact: no epsilon is applied anywhere,
/// boundary contact must be bit-exact.
de9im_matrix relate(const geometry& a, const geometry& b);

/// True iff the named DE-9IM relation holds between a and b.
bool holds(topo_predicate pred, const geometry& a, const geometry& b);

/// Every predicate of the six that holds between a and b, in enum order.
std::vector<topo_predicate> satisfied_predicates(const geometry& a, const geometry& b);

/// Topological dimension: 0 for points, rects 0/1/2 by degenerate extents.
int geometry_dimension(const geometry& g);

double euclidean_distance(point a, point b);

/// Smallest distance between any point of a and any point of b (0 on overlap).
double min_distance(const rect& a, const rect& b);

/// Largest distance between any point of a and any point of b;
/// attained at a pair of corners.
double max_distance(const rect& a, const rect& b);

/// Tightest axis-aligned rect containing g; degenerate for a point.
rect mbr(const geometry& g);

} // namespace qqespm
