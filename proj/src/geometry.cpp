#include "qqespm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qqespm {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// One-dimensional piece of an axis decomposition: an interval with open or
// closed endpoints. Empty pieces are normalized by piece_dim() == -1.
struct axis_piece {
    double lo = 0.0;
    double hi = 0.0;
    bool lo_open = false;
    bool hi_open = false;
};

int piece_dim(const axis_piece& p) {
    if (p.lo > p.hi) return -1;
    if (p.lo == p.hi) return (p.lo_open || p.hi_open) ? -1 : 0;
    return 1;
}

axis_piece intersect(const axis_piece& a, const axis_piece& b) {
    axis_piece r;
    if (a.lo > b.lo) {
        r.lo = a.lo;
        r.lo_open = a.lo_open;
    } else if (b.lo > a.lo) {
        r.lo = b.lo;
        r.lo_open = b.lo_open;
    } else {
        r.lo = a.lo;
        r.lo_open = a.lo_open || b.lo_open;
    }
    if (a.hi < b.hi) {
        r.hi = a.hi;
        r.hi_open = a.hi_open;
    } else if (b.hi < a.hi) {
        r.hi = b.hi;
        r.hi_open = b.hi_open;
    } else {
        r.hi = a.hi;
        r.hi_open = a.hi_open || b.hi_open;
    }
    return r;
}

// A product of two axis pieces; dim = dim_x + dim_y when both non-empty.
struct box {
    axis_piece x;
    axis_piece y;
};

int box_dim(const box& b) {
    const int dx = piece_dim(b.x);
    const int dy = piece_dim(b.y);
    if (dx < 0 || dy < 0) return -1;
    return dx + dy;
}

// Interior / boundary / exterior of a geometry as finite unions of boxes.
// Built from the closed interval pair [x1,x2] x [y1,y2]; relative interiors
// keep degenerate axes as single points so segments and point-rects get the
// standard lower-dimensional DE-9IM semantics.
struct part_boxes {
    std::array<box, 4> boxes{};
    int count = 0;

    void add(axis_piece x, axis_piece y) { boxes[count++] = box{x, y}; }
};

struct interval {
    double lo, hi; // closed, lo <= hi
};

axis_piece closure_piece(interval iv) { return {iv.lo, iv.hi, false, false}; }

axis_piece relint_piece(interval iv) {
    if (iv.lo == iv.hi) return {iv.lo, iv.hi, false, false};
    return {iv.lo, iv.hi, true, true};
}

part_boxes interior_of(interval x, interval y) {
    part_boxes p;
    p.add(relint_piece(x), relint_piece(y));
    return p;
}

part_boxes boundary_of(interval x, interval y) {
    part_boxes p;
    if (x.lo < x.hi) {
        p.add({x.lo, x.lo, false, false}, closure_piece(y));
        p.add({x.hi, x.hi, false, false}, closure_piece(y));
    }
    if (y.lo < y.hi) {
        p.add(closure_piece(x), {y.lo, y.lo, false, false});
        p.add(closure_piece(x), {y.hi, y.hi, false, false});
    }
    return p;
}

part_boxes exterior_of(interval x, interval y) {
    const axis_piece full{-kInf, kInf, true, true};
    part_boxes p;
    p.add({-kInf, x.lo, true, true}, full);
    p.add({x.hi, kInf, true, true}, full);
    p.add(full, {-kInf, y.lo, true, true});
    p.add(full, {y.hi, kInf, true, true});
    return p;
}

void to_intervals(const geometry& g, interval& x, interval& y) {
    if (const point* p = std::get_if<point>(&g)) {
        x = {p->x, p->x};
        y = {p->y, p->y};
    } else {
        const rect& r = std::get<rect>(g);
        x = {r.min_x, r.max_x};
        y = {r.min_y, r.max_y};
    }
}

std::int8_t parts_intersection_dim(const part_boxes& a, const part_boxes& b) {
    int best = -1;
    for (int i = 0; i < a.count; ++i) {
        for (int j = 0; j < b.count; ++j) {
            box cut{intersect(a.boxes[i].x, b.boxes[j].x),
                    intersect(a.boxes[i].y, b.boxes[j].y)};
            best = std::max(best, box_dim(cut));
            if (best == 2) return 2;
        }
    }
    return static_cast<std::int8_t>(best);
}

} // namespace

rect rect::merged(const rect& o) const {
    return {std::min(min_x, o.min_x), std::min(min_y, o.min_y),
            std::max(max_x, o.max_x), std::max(max_y, o.max_y)};
}

std::string_view to_string(topo_predicate pred) {
    switch (pred) {
    case topo_predicate::equals: return "equals";
    case topo_predicate::touches: return "touches";
    case topo_predicate::covers: return "covers";
    case topo_predicate::covered_by: return "covered_by";
    case topo_predicate::partially_overlaps: return "partially_overlaps";
    case topo_predicate::disjoint: return "disjoint";
    }
    return "?";
}

std::optional<topo_predicate> topo_predicate_from_string(std::string_view name) {
    for (topo_predicate p : all_topo_predicates) {
        if (to_string(p) == name) return p;
    }
    return std::nullopt;
}

std::string de9im_matrix::str() const {
    std::string s;
    s.reserve(9);
    for (const auto& row : dim) {
        for (std::int8_t d : row) s.push_back(d < 0 ? 'F' : static_cast<char>('0' + d));
    }
    return s;
}

de9im_matrix relate(const geometry& a, const geometry& b) {
    interval ax, ay, bx, by;
    to_intervals(a, ax, ay);
    to_intervals(b, bx, by);

    const std::array<part_boxes, 3> pa = {interior_of(ax, ay), boundary_of(ax, ay),
                                          exterior_of(ax, ay)};
    const std::array<part_boxes, 3> pb = {interior_of(bx, by), boundary_of(bx, by),
                                          exterior_of(bx, by)};

    de9im_matrix m;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            m.dim[i][j] = parts_intersection_dim(pa[i], pb[j]);
        }
    }
    return m;
}

int geometry_dimension(const geometry& g) {
    if (std::holds_alternative<point>(g)) return 0;
    const rect& r = std::get<rect>(g);
    return (r.min_x < r.max_x ? 1 : 0) + (r.min_y < r.max_y ? 1 : 0);
}

namespace {

// Dimension of relint([a1,a2]) ∩ relint([b1,b2]): -1 empty, 0 point, 1
// interval. Degenerate intervals keep their point as relative interior.
int relint_overlap_dim(double a1, double a2, double b1, double b2) {
    if (a1 == a2) {
        if (b1 == b2) return a1 == b1 ? 0 : -1;
        return (b1 < a1 && a1 < b2) ? 0 : -1;
    }
    if (b1 == b2) return (a1 < b1 && b1 < a2) ? 0 : -1;
    const double lo = std::max(a1, b1);
    const double hi = std::min(a2, b2);
    return lo < hi ? 1 : -1;
}

bool rect_contains_rect(const rect& a, const rect& b) {
    return a.min_x <= b.min_x && b.max_x <= a.max_x && a.min_y <= b.min_y &&
           b.max_y <= a.max_y;
}

} // namespace

// Closed-form case analysis on the interval pairs; equivalent to masking
// relate()'s matrix but without building it (the engine evaluates this per
// candidate POI pair).
bool holds(topo_predicate pred, const geometry& a, const geometry& b) {
    const rect ra = mbr(a);
    const rect rb = mbr(b);
    switch (pred) {
    case topo_predicate::equals:
        return ra == rb;
    case topo_predicate::disjoint:
        return !ra.intersects(rb);
    case topo_predicate::touches: {
        if (!ra.intersects(rb)) return false;
        const int ix = relint_overlap_dim(ra.min_x, ra.max_x, rb.min_x, rb.max_x);
        const int iy = relint_overlap_dim(ra.min_y, ra.max_y, rb.min_y, rb.max_y);
        return ix < 0 || iy < 0; // interiors never meet
    }
    case topo_predicate::covers:
        return rect_contains_rect(ra, rb);
    case topo_predicate::covered_by:
        return rect_contains_rect(rb, ra);
    case topo_predicate::partially_overlaps: {
        const int d = geometry_dimension(a);
        if (geometry_dimension(b) != d) return false;
        const int ix = relint_overlap_dim(ra.min_x, ra.max_x, rb.min_x, rb.max_x);
        const int iy = relint_overlap_dim(ra.min_y, ra.max_y, rb.min_y, rb.max_y);
        if (ix < 0 || iy < 0 || ix + iy != d) return false;
        return !rect_contains_rect(ra, rb) && !rect_contains_rect(rb, ra);
    }
    }
    return false;
}

std::vector<topo_predicate> satisfied_predicates(const geometry& a, const geometry& b) {
    std::vector<topo_predicate> out;
    for (topo_predicate p : all_topo_predicates) {
        if (holds(p, a, b)) out.push_back(p);
    }
    return out;
}

double euclidean_distance(point a, point b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

double min_distance(const rect& a, const rect& b) {
    const double dx = std::max({0.0, b.min_x - a.max_x, a.min_x - b.max_x});
    const double dy = std::max({0.0, b.min_y - a.max_y, a.min_y - b.max_y});
    return std::hypot(dx, dy);
}

double max_distance(const rect& a, const rect& b) {
    const double dx = std::max(a.max_x - b.min_x, b.max_x - a.min_x);
    const double dy = std::max(a.max_y - b.min_y, b.max_y - a.min_y);
    return std::hypot(dx, dy);
}

rect mbr(const geometry& g) {
    if (const point* p = std::get_if<point>(&g)) return rect::from_point(*p);
    return std::get<rect>(g);
}

} // namespace qqespm
