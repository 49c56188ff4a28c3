#include "qqespm/workload.hpp"

#include "qqespm/error.hpp"
#include "qqespm/poi.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>

namespace qqespm {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) {
    throw parse_error("workload config: " + what);
}

std::pair<double, double> read_range(const json& j, const char* key,
                                     std::pair<double, double> fallback) {
    if (!j.contains(key)) return fallback;
    const json& r = j[key];
    if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number()) {
        fail(std::string("\"") + key + "\" must be a [lo, hi] number pair");
    }
    const auto lo = r[0].get<double>();
    const auto hi = r[1].get<double>();
    if (!(lo >= 0.0) || !(lo <= hi)) {
        fail(std::string("\"") + key + "\" must satisfy 0 <= lo <= hi");
    }
    return {lo, hi};
}

// The fixed structure family, 3..6 vertices: Fig 3's twelve architectures
// are not enumerated in the text, so the workload spans the same vertex
// counts with paths, cycles, and stars.
struct structure_spec {
    structure_kind kind;
    int n;
};

constexpr structure_spec kStructures[12] = {
    {structure_kind::path, 3},  {structure_kind::cycle, 3}, {structure_kind::star, 3},
    {structure_kind::path, 4},  {structure_kind::cycle, 4}, {structure_kind::star, 4},
    {structure_kind::path, 5},  {structure_kind::cycle, 5}, {structure_kind::star, 5},
    {structure_kind::path, 6},  {structure_kind::cycle, 6}, {structure_kind::star, 6},
};

constexpr exclusion_sign kSigns[4] = {
    exclusion_sign::forward,
    exclusion_sign::backward,
    exclusion_sign::mutual_exclusion,
    exclusion_sign::mutual_inclusion,
};

} // namespace

std::string_view to_string(structure_kind kind) {
    switch (kind) {
    case structure_kind::path: return "path";
    case structure_kind::cycle: return "cycle";
    case structure_kind::star: return "star";
    }
    return "?";
}

workload_config load_workload_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open workload config '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& err) {
        fail(err.what());
    }
    if (!doc.is_object()) fail("top level must be an object");

    workload_config cfg;
    if (doc.contains("n_structures")) cfg.n_structures = doc["n_structures"].get<int>();
    if (doc.contains("patterns_per_structure")) {
        cfg.patterns_per_structure = doc["patterns_per_structure"].get<int>();
    }
    cfg.l_range = read_range(doc, "l_range", cfg.l_range);
    cfg.u_offset_range = read_range(doc, "u_offset_range", cfg.u_offset_range);
    if (doc.contains("qualitative_edge_probability")) {
        cfg.qualitative_edge_probability = doc["qualitative_edge_probability"].get<double>();
    }
    if (doc.contains("keyword_pool")) {
        if (!doc["keyword_pool"].is_array()) fail("\"keyword_pool\" must be an array");
        for (const json& kw : doc["keyword_pool"]) {
            if (!kw.is_string()) fail("\"keyword_pool\" entries must be strings");
            cfg.keyword_pool.push_back(normalize_keyword(kw.get<std::string>()));
        }
    }
    if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("fractions")) {
        cfg.fractions.clear();
        for (const json& f : doc["fractions"]) cfg.fractions.push_back(f.get<int>());
    }
    if (doc.contains("repeats")) cfg.repeats = doc["repeats"].get<int>();
    if (doc.contains("algorithms")) {
        cfg.algorithms.clear();
        for (const json& a : doc["algorithms"]) cfg.algorithms.push_back(a.get<std::string>());
    }
    if (doc.contains("capacity")) cfg.capacity = doc["capacity"].get<int>();
    if (doc.contains("max_depth")) cfg.max_depth = doc["max_depth"].get<int>();

    if (cfg.n_structures < 1 || cfg.n_structures > 12) {
        fail("\"n_structures\" must be in 1..12");
    }
    if (cfg.patterns_per_structure < 1) fail("\"patterns_per_structure\" must be >= 1");
    if (cfg.qualitative_edge_probability < 0.0 || cfg.qualitative_edge_probability > 1.0) {
        fail("\"qualitative_edge_probability\" must be in [0, 1]");
    }
    if (cfg.repeats < 1) fail("\"repeats\" must be >= 1");
    if (!std::is_sorted(cfg.fractions.begin(), cfg.fractions.end())) {
        fail("\"fractions\" must be ascending");
    }
    for (int f : cfg.fractions) {
        if (f < 1 || f > 100) fail("fractions must be percentages in 1..100");
    }
    return cfg;
}

std::vector<std::pair<int, int>> structure_edges(structure_kind kind, int n_vertices) {
    std::vector<std::pair<int, int>> edges;
    switch (kind) {
    case structure_kind::path:
        for (int i = 0; i + 1 < n_vertices; ++i) edges.emplace_back(i, i + 1);
        break;
    case structure_kind::cycle:
        for (int i = 0; i + 1 < n_vertices; ++i) edges.emplace_back(i, i + 1);
        edges.emplace_back(n_vertices - 1, 0);
        break;
    case structure_kind::star:
        for (int i = 1; i < n_vertices; ++i) edges.emplace_back(0, i);
        break;
    }
    return edges;
}

spatial_pattern random_pattern(split_rng& rng, structure_kind kind, int n_vertices,
                               const std::vector<std::string>& keyword_pool,
                               const workload_config& cfg) {
    if (static_cast<int>(keyword_pool.size()) < n_vertices) {
        throw data_error("keyword pool smaller than the pattern vertex count");
    }
    std::vector<std::size_t> pool_idx(keyword_pool.size());
    std::iota(pool_idx.begin(), pool_idx.end(), 0);
    rng.shuffle(pool_idx);

    spatial_pattern p;
    for (int v = 0; v < n_vertices; ++v) {
        p.vertices.push_back(pattern_vertex{v, keyword_pool[pool_idx[v]]});
    }
    for (const auto& [from, to] : structure_edges(kind, n_vertices)) {
        pattern_edge e;
        e.from_vid = from;
        e.to_vid = to;
        const double l = rng.uniform(cfg.l_range.first, cfg.l_range.second);
        const double u =
            l + rng.uniform(cfg.u_offset_range.first, cfg.u_offset_range.second);
        e.interval = distance_interval{l, u};
        e.sign = kSigns[rng.below(4)];
        if (rng.chance(cfg.qualitative_edge_probability)) {
            e.relation = all_topo_predicates[rng.below(all_topo_predicates.size())];
        }
        p.edges.push_back(e);
    }
    validate_pattern(p);
    return p;
}

std::vector<generated_pattern> generate_patterns(const workload_config& cfg) {
    if (cfg.n_structures < 1 || cfg.n_structures > 12) {
        throw data_error("generate_patterns: n_structures must be in 1..12");
    }
    int max_vertices = 0;
    for (int s = 0; s < cfg.n_structures; ++s) {
        max_vertices = std::max(max_vertices, kStructures[s].n);
    }
    if (static_cast<int>(cfg.keyword_pool.size()) < max_vertices) {
        throw data_error("generate_patterns: keyword pool must hold at least " +
                         std::to_string(max_vertices) + " keywords");
    }

    split_rng rng(cfg.seed);
    std::vector<generated_pattern> out;
    for (int s = 0; s < cfg.n_structures; ++s) {
        const structure_spec& spec = kStructures[s];
        const std::string structure =
            std::string(to_string(spec.kind)) + std::to_string(spec.n);
        for (int k = 0; k < cfg.patterns_per_structure; ++k) {
            generated_pattern gp;
            gp.structure = structure;
            gp.id = structure + '_' + std::to_string(k);
            gp.pattern = random_pattern(rng, spec.kind, spec.n, cfg.keyword_pool, cfg);
            out.push_back(std::move(gp));
        }
    }
    return out;
}

} // namespace qqespm
