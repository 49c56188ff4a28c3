#pragma once

#include "qqespm/pattern.hpp"
#include "qqespm/rng.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace qqespm {

/// Random-pattern generation and benchmark protocol parameters. Defaults
/// reproduce the paper's workload: 12 graph structures x 5 patterns, l in
/// [0, 0.005], u = l + [0, 0.02], 50% qualitative edges, five dataset
/// fractions, five repetitions.
struct workload_config {
    int n_structures = 12;
    int patterns_per_structure = 5;
    std::pair<double, double> l_range{0.0, 0.005};
    std::pair<double, double> u_offset_range{0.0, 0.02};
    double qualitative_edge_probability = 0.5;
    std::vector<std::string> keyword_pool;
    std::uint64_t seed = 0;

    // benchmark protocol
    std::vector<int> fractions{20, 40, 60, 80, 100};
    int repeats = 5;
    std::vector<std::string> algorithms{"qqespm", "qqsimple"};
    int capacity = 64;
    int max_depth = 16;
};

workload_config load_workload_config(const std::filesystem::path& path);

enum class structure_kind : std::uint8_t { path, cycle, star };

std::string_view to_string(structure_kind kind);

struct generated_pattern {
    std::string id;        // e.g. "path3_0"
    std::string structure; // e.g. "path3"
    spatial_pattern pattern;
};

/// Vertices/edges of one structure; edge (i,j) directed i -> j.
std::vector<std::pair<int, int>> structure_edges(structure_kind kind, int n_vertices);

/// One random pattern over the given structure: keywords sampled without
/// replacement, every edge quantitative with l ~ U(l_range) and
/// u = l + U(u_offset_range), a uniform sign, and a uniform relation with
/// qualitative_edge_probability.
spatial_pattern random_pattern(split_rng& rng, structure_kind kind, int n_vertices,
                               const std::vector<std::string>& keyword_pool,
                               const workload_config& cfg);

/// The full workload: n_structures from the fixed family
/// {path, cycle, star} x {3,4,5,6}, patterns_per_structure patterns each.
/// Deterministic under cfg.seed.
std::vector<generated_pattern> generate_patterns(const workload_config& cfg);

} // namespace qqespm
