#include "qqespm/geometry.hpp"

#include "qqespm/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace qqespm;

namespace {

bool has(const std::vector<topo_predicate>& preds, topo_predicate p) {
    return std::find(preds.begin(), preds.end(), p) != preds.end();
}

geometry random_geometry(split_rng& rng) {
    const double x = std::floor(rng.uniform(-3.0, 4.0));
    const double y = std::floor(rng.uniform(-3.0, 4.0));
    if (rng.chance(0.3)) return point{x, y};
    const double w = std::floor(rng.uniform(0.0, 4.0));
    const double h = std::floor(rng.uniform(0.0, 4.0));
    return rect{x, y, x + w, y + h};
}

rect random_rect(split_rng& rng, double span) {
    const double x1 = rng.uniform(-span, span);
    const double y1 = rng.uniform(-span, span);
    return rect{x1, y1, x1 + rng.uniform(0.0, span), y1 + rng.uniform(0.0, span)};
}

// 16-corner brute force for max_distance; dense boundary/interior samples
// bound min_distance from above.
double corner_max_distance(const rect& a, const rect& b) {
    const point ca[4] = {{a.min_x, a.min_y}, {a.min_x, a.max_y},
                         {a.max_x, a.min_y}, {a.max_x, a.max_y}};
    const point cb[4] = {{b.min_x, b.min_y}, {b.min_x, b.max_y},
                         {b.max_x, b.min_y}, {b.max_x, b.max_y}};
    double best = 0.0;
    for (const point& p : ca) {
        for (const point& q : cb) best = std::max(best, euclidean_distance(p, q));
    }
    return best;
}

} // namespace

TEST_CASE("holds: spec examples") {
    const geometry unit{rect{0, 0, 2, 2}};
    CHECK(holds(topo_predicate::equals, rect{0, 0, 2, 2}, rect{0, 0, 2, 2}));
    CHECK(holds(topo_predicate::touches, rect{0, 0, 1, 1}, rect{1, 0, 2, 1}));
    CHECK(holds(topo_predicate::covers, rect{0, 0, 4, 4}, rect{1, 1, 2, 2}));
    CHECK(holds(topo_predicate::covered_by, rect{1, 1, 2, 2}, rect{0, 0, 4, 4}));
    CHECK(holds(topo_predicate::partially_overlaps, rect{0, 0, 2, 2}, rect{1, 1, 3, 3}));
    CHECK(holds(topo_predicate::disjoint, point{0, 0}, rect{2, 2, 3, 3}));

    // point on a rect boundary: touches and covered-by hold simultaneously
    CHECK(holds(topo_predicate::touches, point{1, 0}, unit));
    CHECK(holds(topo_predicate::covers, unit, point{1, 0}));
}

TEST_CASE("holds: point conventions") {
    // topological equality between a point and the degenerate rect at it
    CHECK(holds(topo_predicate::equals, point{2, 3}, rect{2, 3, 2, 3}));
    CHECK(holds(topo_predicate::equals, rect{2, 3, 2, 3}, point{2, 3}));
    // interior point is covered but does not touch
    CHECK(holds(topo_predicate::covers, rect{0, 0, 2, 2}, point{1, 1}));
    CHECK_FALSE(holds(topo_predicate::touches, point{1, 1}, rect{0, 0, 2, 2}));
    // mixed dimensions never partially overlap
    CHECK_FALSE(holds(topo_predicate::partially_overlaps, point{1, 1}, rect{0, 0, 2, 2}));
    CHECK_FALSE(holds(topo_predicate::partially_overlaps, rect{0, 0, 0, 2}, rect{0, 0, 2, 2}));
    // equal points: interiors meet, so not touches
    CHECK_FALSE(holds(topo_predicate::touches, point{1, 1}, point{1, 1}));
    CHECK(holds(topo_predicate::equals, point{1, 1}, point{1, 1}));
}

TEST_CASE("holds: degenerate rects as segments") {
    const rect seg_a{0, 0, 0, 2}; // vertical segment
    const rect seg_b{0, 1, 0, 3}; // collinear, overlapping
    const rect seg_c{0, 2, 0, 4}; // abutting at (0,2)
    CHECK(holds(topo_predicate::partially_overlaps, seg_a, seg_b));
    CHECK(holds(topo_predicate::touches, seg_a, seg_c));
    CHECK_FALSE(holds(topo_predicate::partially_overlaps, seg_a, seg_c));
    CHECK(holds(topo_predicate::covers, rect{0, 0, 0, 5}, seg_a));
}

TEST_CASE("satisfied_predicates: spec examples") {
    CHECK(satisfied_predicates(rect{0, 0, 1, 1}, rect{5, 5, 6, 6}) ==
          std::vector{topo_predicate::disjoint});

    const auto self = satisfied_predicates(rect{0, 0, 2, 2}, rect{0, 0, 2, 2});
    CHECK(has(self, topo_predicate::equals));
    CHECK(has(self, topo_predicate::covers));
    CHECK(has(self, topo_predicate::covered_by));

    const auto adjacent = satisfied_predicates(rect{0, 0, 1, 1}, rect{1, 0, 2, 1});
    CHECK(has(adjacent, topo_predicate::touches));
    CHECK_FALSE(has(adjacent, topo_predicate::partially_overlaps));
}

TEST_CASE("distances: spec examples") {
    CHECK(euclidean_distance({0, 0}, {3, 4}) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(euclidean_distance({1, 1}, {1, 1}) == 0.0);
    CHECK(euclidean_distance({0, 0}, {0.005, 0}) == doctest::Approx(0.005));

    CHECK(min_distance({0, 0, 1, 1}, {0.5, 0.5, 2, 2}) == 0.0);
    CHECK(min_distance({0, 0, 1, 1}, {3, 1, 4, 2}) == doctest::Approx(2.0));
    CHECK(min_distance({0, 0, 1, 1}, {2, 2, 3, 3}) == doctest::Approx(std::sqrt(2.0)));

    CHECK(max_distance({0, 0, 1, 1}, {0, 0, 1, 1}) == doctest::Approx(std::sqrt(2.0)));
    CHECK(max_distance({0, 0, 1, 1}, {3, 1, 4, 2}) == doctest::Approx(std::sqrt(20.0)));
    CHECK(max_distance({0, 0, 0, 0}, {3, 4, 3, 4}) == doctest::Approx(5.0));
}

TEST_CASE("mbr") {
    CHECK(mbr(point{2, 3}) == rect{2, 3, 2, 3});
    CHECK(mbr(rect{0, 0, 1, 1}) == rect{0, 0, 1, 1});
    split_rng rng(7);
    for (int i = 0; i < 50; ++i) {
        const geometry g = random_geometry(rng);
        CHECK(mbr(geometry(mbr(g))) == mbr(g));
    }
}

TEST_CASE("predicate properties over random small geometries") {
    split_rng rng(42);
    int empty_sets = 0;
    for (int i = 0; i < 4000; ++i) {
        const geometry a = random_geometry(rng);
        const geometry b = random_geometry(rng);
        const auto preds = satisfied_predicates(a, b);

        // partition: disjoint XOR closures intersect
        const bool closures_meet = mbr(a).intersects(mbr(b));
        CHECK(holds(topo_predicate::disjoint, a, b) != closures_meet);

        // symmetry
        for (topo_predicate p : {topo_predicate::equals, topo_predicate::touches,
                                 topo_predicate::partially_overlaps, topo_predicate::disjoint}) {
            CHECK(holds(p, a, b) == holds(p, b, a));
        }
        CHECK(holds(topo_predicate::covers, a, b) == holds(topo_predicate::covered_by, b, a));

        // implications
        if (holds(topo_predicate::equals, a, b)) {
            CHECK(holds(topo_predicate::covers, a, b));
            CHECK(holds(topo_predicate::covered_by, a, b));
        }
        if (holds(topo_predicate::partially_overlaps, a, b)) {
            CHECK_FALSE(holds(topo_predicate::covers, a, b));
            CHECK_FALSE(holds(topo_predicate::covered_by, a, b));
            CHECK_FALSE(holds(topo_predicate::touches, a, b));
        }

        // the six predicates cover every pair except crossing
        // configurations (a lower-dimensional geometry passing through
        // another's interior), which none of the six describes
        if (preds.empty()) {
            ++empty_sets;
            const de9im_matrix m = relate(a, b);
            CHECK(m.at(0, 0) >= 0);
            CHECK(m.at(0, 2) >= 0);
            CHECK(m.at(2, 0) >= 0);
            const bool same_dim = geometry_dimension(a) == geometry_dimension(b);
            CHECK((!same_dim || m.at(0, 0) < geometry_dimension(a)));
        }
    }
    // crossing pairs exist in the corpus but are rare
    CHECK(empty_sets < 400);
}

TEST_CASE("distance bounds on random rect pairs") {
    split_rng rng(99);
    for (int i = 0; i < 500; ++i) {
        const rect a = random_rect(rng, 5.0);
        const rect b = random_rect(rng, 5.0);
        CHECK(min_distance(a, b) == min_distance(b, a));
        CHECK(max_distance(a, b) == max_distance(b, a));
        CHECK(min_distance(a, a) == 0.0);
        CHECK(max_distance(a, b) == doctest::Approx(corner_max_distance(a, b)));
        for (int s = 0; s < 20; ++s) {
            const point p{rng.uniform(a.min_x, a.max_x), rng.uniform(a.min_y, a.max_y)};
            const point q{rng.uniform(b.min_x, b.max_x), rng.uniform(b.min_y, b.max_y)};
            const double d = euclidean_distance(p, q);
            CHECK(d >= min_distance(a, b) - 1e-12);
            CHECK(d <= max_distance(a, b) + 1e-12);
        }
    }
}

TEST_CASE("holds agrees with mask evaluation of the relate() matrix") {
    // the OGC masks, written out here as a second route through the kernel
    const auto via_matrix = [](topo_predicate pred, const geometry& a, const geometry& b) {
        const de9im_matrix m = relate(a, b);
        const bool meets =
            m.at(0, 0) >= 0 || m.at(0, 1) >= 0 || m.at(1, 0) >= 0 || m.at(1, 1) >= 0;
        switch (pred) {
        case topo_predicate::equals:
            return m.at(0, 0) >= 0 && m.at(0, 2) < 0 && m.at(1, 2) < 0 &&
                   m.at(2, 0) < 0 && m.at(2, 1) < 0;
        case topo_predicate::disjoint: return !meets;
        case topo_predicate::touches: return m.at(0, 0) < 0 && meets;
        case topo_predicate::covers: return m.at(2, 0) < 0 && m.at(2, 1) < 0 && meets;
        case topo_predicate::covered_by:
            return m.at(0, 2) < 0 && m.at(1, 2) < 0 && meets;
        case topo_predicate::partially_overlaps: {
            const int d = geometry_dimension(a);
            return geometry_dimension(b) == d && m.at(0, 0) == d && m.at(0, 2) >= 0 &&
                   m.at(2, 0) >= 0;
        }
        }
        return false;
    };
    split_rng rng(2718);
    for (int i = 0; i < 3000; ++i) {
        const geometry a = random_geometry(rng);
        const geometry b = random_geometry(rng);
        for (topo_predicate pred : all_topo_predicates) {
            CHECK(holds(pred, a, b) == via_matrix(pred, a, b));
        }
    }
}

TEST_CASE("de9im matrix strings for reference cases") {
    // identical rects: interiors meet in dim 2, boundaries in dim 1
    CHECK(relate(rect{0, 0, 2, 2}, rect{0, 0, 2, 2}).str() == "2FFF1FFF2");
    // distinct points
    CHECK(relate(point{0, 0}, point{1, 1}).str() == "FF0FFF0F2");
}
