#pragma once

#include "qqespm/ilqtree.hpp"
#include "qqespm/pattern.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <unordered_set>
#include <vector>

namespace qqespm {

/// Node pair that cannot be ruled out as containing a qq-e-match for its
/// edge at the current level.
struct qq_n_match {
    const pattern_edge* edge = nullptr;
    const quad_node* node_from = nullptr;
    const quad_node* node_to = nullptr;
};

/// POI pair satisfying all of one edge's constraints.
struct qq_e_match {
    const pattern_edge* edge = nullptr;
    const poi* poi_from = nullptr;
    const poi* poi_to = nullptr;
};

/// Solution tuple; pois[i] binds pattern vertex i. All POIs are distinct.
struct match_tuple {
    std::vector<const poi*> pois;
};

/// Per-level bookkeeping: surviving node pairs per edge plus the full node
/// frontier per keyword tree (all non-empty nodes at the level, independent
/// of pruning — exclusion constraints range over the whole dataset).
struct level_state {
    int level = 0;
    std::vector<std::vector<qq_n_match>> edge_matches; // indexed by edge position
    std::map<std::string, std::vector<const quad_node*>, std::less<>> frontiers;
};

enum class skip_mode : std::uint8_t {
    greedy,     // identify_skip_edges
    none,       // compute qq-e-matches for every edge
    randomized, // any valid skip set (for robustness tests)
};

struct query_trace {
    std::vector<level_state> levels; // level 0 .. L
    std::vector<std::string> notes;
    std::set<std::size_t> skip_edges;
    std::vector<std::size_t> qq_e_counts; // per edge; skip edges stay 0
};

struct query_options {
    bool reorder_edges = true;
    skip_mode skips = skip_mode::greedy;
    /// When set, edge processing order is shuffled instead of cost-ordered
    /// (and skip_mode::randomized draws from this seed).
    std::optional<std::uint64_t> shuffle_seed;
    query_trace* trace = nullptr;
};

using poi_id_set = std::unordered_set<std::string_view>;

/// Level-wise node-pair test. frontier_* must hold the content MBRs of ALL
/// non-empty same-level nodes of the respective keyword trees, not only the
/// surviving ones.
bool node_pair_qualifies(const pattern_edge& e, const rect& b_from, const rect& b_to,
                         std::span<const rect> frontier_from,
                         std::span<const rect> frontier_to);

/// Expand the previous level's qq-n-matches one level down and keep the
/// qualifying pairs. prev must be the edge's matches at level-1 (the root
/// pair for level 1). The pattern resolves the edge's vertex keywords.
std::vector<qq_n_match> compute_level_qqn(const spatial_pattern& p, const pattern_edge& e,
                                          std::span<const qq_n_match> prev, int level,
                                          const il_quadtree& ilq);

/// POI pairs from the final-level qq-n-matches that satisfy the edge's
/// distance, relation, and exclusion constraints. Candidate sets, when
/// present, restrict the POIs considered on each side (pre-joining).
std::vector<qq_e_match> compute_qqe_matches(const spatial_pattern& p, const pattern_edge& e,
                                            std::span<const qq_n_match> final_qqn,
                                            const std::optional<poi_id_set>& candidates_from,
                                            const std::optional<poi_id_set>& candidates_to,
                                            const il_quadtree& ilq);

/// Mutually inclusive edges whose constraints can be deferred to the join:
/// the remaining edges still span every vertex and keep the pattern
/// connected. edge_costs orders the greedy selection (descending); edge
/// indices are used when empty.
std::set<std::size_t> identify_skip_edges(const spatial_pattern& p,
                                          std::span<const std::size_t> edge_costs = {});

/// Join per-edge qq-e-matches into full tuples. Skip edges are verified
/// during the join (distance + relation on the bound POIs).
std::vector<match_tuple> join_qq_e_matches(
    const std::map<std::size_t, std::vector<qq_e_match>>& per_edge,
    const std::set<std::size_t>& skips, const spatial_pattern& p);

/// Answer a QQ-SPM query: all tuples matching the pattern, in no
/// particular order. Missing pattern keywords yield an empty result (with
/// a trace note), not an error.
std::vector<match_tuple> qqespm_query(const il_quadtree& ilq, const spatial_pattern& p,
                                      const query_options& options = {});

/// id tuples of the matches, each tuple vertex-ordered, the list sorted —
/// canonical form for cross-checking result sets.
std::vector<std::vector<std::string>> match_ids(std::span<const match_tuple> matches);

} // namespace qqespm
