#include "qqespm/pattern.hpp"

#include "qqespm/error.hpp"
#include "qqespm/rng.hpp"
#include "qqespm/workload.hpp"

#include <doctest.h>

#include <cmath>
#include <string>

using namespace qqespm;

namespace {

// Fig 1(A): apartment within 2km of a school, 200m..1km from a hospital
// which must keep its distance both ways (coordinate units, not km).
const char* kFig1A = R"({
  "vertices": [
    {"id": 0, "keyword": "apartment"},
    {"id": 1, "keyword": "school"},
    {"id": 2, "keyword": "hospital"}
  ],
  "edges": [
    {"from": 0, "to": 1, "lij": 0.0, "uij": 0.02, "sign": "-"},
    {"from": 0, "to": 2, "lij": 0.002, "uij": 0.01, "sign": "<->"}
  ]
})";

} // namespace

TEST_CASE("parse_pattern: Fig 1(A) style document") {
    const spatial_pattern p = parse_pattern(kFig1A);
    REQUIRE(p.vertices.size() == 3);
    REQUIRE(p.edges.size() == 2);
    CHECK(p.vertices[0].keyword == "apartment");
    CHECK(p.vertices[1].keyword == "school");
    CHECK(p.vertices[2].keyword == "hospital");
    CHECK(p.edges[0].interval == distance_interval{0.0, 0.02});
    CHECK(p.edges[0].sign == exclusion_sign::mutual_inclusion);
    CHECK(p.edges[1].sign == exclusion_sign::mutual_exclusion);
    CHECK_FALSE(p.edges[0].relation.has_value());
}

TEST_CASE("parse_pattern: single vertex, no edges") {
    const spatial_pattern p = parse_pattern(R"({"vertices":[{"id":0,"keyword":"Cafe"}]})");
    CHECK(p.vertices.size() == 1);
    CHECK(p.vertices[0].keyword == "cafe"); // normalized
    CHECK(p.edges.empty());
}

TEST_CASE("parse_pattern: qualitative-only edge defaults") {
    const spatial_pattern p = parse_pattern(R"({
      "vertices": [{"id":0,"keyword":"a"},{"id":1,"keyword":"b"}],
      "edges": [{"from":0,"to":1,"relation":"touches"}]})");
    const pattern_edge& e = p.edges[0];
    CHECK(e.sign == exclusion_sign::mutual_inclusion);
    CHECK_FALSE(e.interval.has_value());
    CHECK(e.relation == topo_predicate::touches);

    const edge_class c = classify_edge(e);
    CHECK(c.qualitative);
    CHECK_FALSE(c.quantitative);
    CHECK_FALSE(c.exclusive);

    const distance_interval iv = effective_interval(e);
    CHECK(iv.lower == 0.0);
    CHECK(std::isinf(iv.upper));
}

TEST_CASE("parse_pattern: rejections name the offending location") {
    const auto expect_error = [](const char* doc, const char* needle) {
        try {
            parse_pattern(doc);
            FAIL_CHECK("expected parse_error for: " << doc);
        } catch (const parse_error& e) {
            CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos,
                          e.what() << " should mention " << needle);
        }
    };
    expect_error("{", "document");
    expect_error(R"({"vertices":[]})", "at least one vertex");
    expect_error(R"({"vertices":[{"id":1,"keyword":"a"}]})", "0..n-1");
    expect_error(R"({"vertices":[{"id":0,"keyword":"a"},{"id":1,"keyword":"b"}],
                    "edges":[{"from":0,"to":1,"relation":"meets"}]})", "edges[0]");
    expect_error(R"({"vertices":[{"id":0,"keyword":"a"},{"id":1,"keyword":"b"}],
                    "edges":[{"from":0,"to":1,"lij":2.0,"uij":1.0}]})", "lij");
    expect_error(R"({"vertices":[{"id":0,"keyword":"a"},{"id":1,"keyword":"b"}],
                    "edges":[{"from":0,"to":1}]})", "edges[0]");
    expect_error(R"({"vertices":[{"id":0,"keyword":"a"},{"id":1,"keyword":"b"}]})",
                 "not connected");
    expect_error(R"({"vertices":[{"id":0,"keyword":"a"},{"id":1,"keyword":"b"}],
                    "edges":[{"from":0,"to":0,"lij":0,"uij":1}]})", "self-loop");
    expect_error(R"({"vertices":[{"id":0,"keyword":"a"},{"id":1,"keyword":"b"}],
                    "edges":[{"from":0,"to":1,"lij":0,"uij":1},
                             {"from":1,"to":0,"lij":0,"uij":1}]})", "duplicate");
    expect_error(R"({"vertices":[{"id":0,"keyword":"a"},{"id":1,"keyword":"b"}],
                    "edges":[{"from":0,"to":1,"relation":"touches","sign":"->"}]})",
                 "requires a distance interval");
    expect_error(R"({"vertices":[{"id":0,"keyword":"a"},{"id":1,"keyword":"b"}],
                    "edges":[{"from":0,"to":1,"lij":0.1}]})", "together");
}

TEST_CASE("classify_edge: all three descriptions") {
    pattern_edge e;
    e.from_vid = 0;
    e.to_vid = 1;
    e.interval = distance_interval{0.001, 0.02};
    e.sign = exclusion_sign::forward;
    e.relation = topo_predicate::covers;
    edge_class c = classify_edge(e);
    CHECK(c.quantitative);
    CHECK(c.qualitative);
    CHECK(c.exclusive);

    e.sign = exclusion_sign::mutual_inclusion;
    e.relation.reset();
    c = classify_edge(e);
    CHECK(c.quantitative);
    CHECK_FALSE(c.qualitative);
    CHECK_FALSE(c.exclusive);
}

TEST_CASE("effective_interval examples") {
    pattern_edge e;
    e.interval = distance_interval{0.001, 0.02};
    CHECK(effective_interval(e) == distance_interval{0.001, 0.02});
    e.interval = distance_interval{0.0, 0.0};
    CHECK(effective_interval(e) == distance_interval{0.0, 0.0});
}

TEST_CASE("round trip: parse(serialize(p)) == p") {
    workload_config cfg;
    cfg.keyword_pool = {"a", "b", "c", "d", "e", "f"};
    cfg.seed = 11;
    for (const generated_pattern& gp : generate_patterns(cfg)) {
        CHECK(parse_pattern(serialize_pattern(gp.pattern)) == gp.pattern);
    }
    CHECK(parse_pattern(serialize_pattern(parse_pattern(kFig1A))) == parse_pattern(kFig1A));
}

TEST_CASE("stripping relations from a fully quantitative pattern keeps it valid") {
    workload_config cfg;
    cfg.keyword_pool = {"a", "b", "c", "d", "e", "f", "g"};
    cfg.seed = 23;
    for (const generated_pattern& gp : generate_patterns(cfg)) {
        spatial_pattern stripped = gp.pattern;
        for (pattern_edge& e : stripped.edges) e.relation.reset();
        CHECK_NOTHROW(validate_pattern(stripped));
    }
}

TEST_CASE("fuzz: mangled documents error but never crash") {
    split_rng rng(321);
    const std::string base = kFig1A;
    int parsed = 0;
    for (int i = 0; i < 1500; ++i) {
        std::string doc = base;
        const int edits = 1 + static_cast<int>(rng.below(6));
        for (int k = 0; k < edits; ++k) {
            const std::size_t pos = rng.below(doc.size());
            switch (rng.below(3)) {
            case 0: doc[pos] = static_cast<char>(32 + rng.below(95)); break;
            case 1: doc.erase(pos, 1); break;
            default: doc.insert(pos, 1, static_cast<char>(32 + rng.below(95))); break;
            }
        }
        try {
            parse_pattern(doc);
            ++parsed;
        } catch (const parse_error&) {
            // expected for most mutations
        }
    }
    CHECK(parsed < 1500);
}
