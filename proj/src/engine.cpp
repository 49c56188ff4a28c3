#include "qqespm/engine.hpp"

#include "qqespm/rng.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cstdint>
#include <limits>
#include <numeric>
#include <unordered_map>

namespace qqespm {
namespace {

struct pointer_pair_hash {
    std::size_t operator()(const std::pair<const void*, const void*>& p) const {
        std::uint64_t x = reinterpret_cast<std::uintptr_t>(p.first);
        const std::uint64_t y = reinterpret_cast<std::uintptr_t>(p.second);
        x ^= y + 0x9e3779b97f4a7c15ULL + (x << 6) + (x >> 2);
        return static_cast<std::size_t>(x);
    }
};

using pointer_pair_set =
    std::unordered_set<std::pair<const void*, const void*>, pointer_pair_hash>;

template <typename F>
void for_each_child_or_self(const quad_node& n, F&& f) {
    if (n.is_leaf()) {
        f(&n);
        return;
    }
    for (const auto& child : n.children) {
        if (child) f(child.get());
    }
}

// Resolved per-edge constraint data; trees are null only when the keyword
// is absent from the index (the query then short-circuits to empty).
struct edge_ctx {
    const pattern_edge* e = nullptr;
    const linear_quadtree* tree_from = nullptr;
    const linear_quadtree* tree_to = nullptr;
    double l = 0.0;
    double u = 0.0;
    bool needs_mbr_intersection = false; // Def 4 (d)
    bool excl_fwd = false;               // Def 4 (a)
    bool excl_bwd = false;               // Def 4 (b)
};

edge_ctx make_edge_ctx(const spatial_pattern& p, const pattern_edge& e,
                       const il_quadtree& ilq) {
    edge_ctx ctx;
    ctx.e = &e;
    ctx.tree_from = ilq.tree(p.keyword_of(e.from_vid));
    ctx.tree_to = ilq.tree(p.keyword_of(e.to_vid));
    const distance_interval iv = effective_interval(e);
    ctx.l = iv.lower;
    ctx.u = iv.upper;
    ctx.needs_mbr_intersection = e.relation && *e.relation != topo_predicate::disjoint;
    ctx.excl_fwd = e.interval && (e.sign == exclusion_sign::forward ||
                                  e.sign == exclusion_sign::mutual_exclusion);
    ctx.excl_bwd = e.interval && (e.sign == exclusion_sign::backward ||
                                  e.sign == exclusion_sign::mutual_exclusion);
    return ctx;
}

// Frontier nodes of the excluded keyword that lie entirely within the open
// exclusion disk of an anchor node's MBR. Two is enough: any second vetoing
// node disqualifies every pair regardless of which node is the partner.
//
// A frontier node consisting of exactly one POI that also lies inside the
// anchor's subtree does not count: object-level exclusion ignores the POI
// itself (a place carrying both keywords would otherwise always exclude
// its own matches), so a singleton node of that same POI must not veto the
// pair at node level either.
struct veto_entry {
    const quad_node* first = nullptr;
    int count = 0;
};

class veto_cache {
public:
    veto_entry lookup(const quad_node* anchor, const linear_quadtree& anchor_tree,
                      std::span<const quad_node* const> scan_frontier, double l) {
        auto [it, inserted] = cache_.try_emplace(anchor);
        if (!inserted) return it->second;
        veto_entry entry;
        for (const quad_node* n : scan_frontier) {
            if (max_distance(anchor->content_mbr, n->content_mbr) >= l) continue;
            if (n->sole_poi && subtree_contains(anchor_tree, *anchor, n->sole_poi)) continue;
            if (entry.count == 0) entry.first = n;
            if (++entry.count == 2) break;
        }
        it->second = entry;
        return entry;
    }

private:
    std::unordered_map<const quad_node*, veto_entry> cache_;
};

bool vetoed(const veto_entry& v, const quad_node* partner) {
    return v.count >= 2 || (v.count == 1 && v.first != partner);
}

struct level_frontiers {
    std::unordered_map<std::string_view, std::vector<const quad_node*>> by_keyword;

    const std::vector<const quad_node*>& of(std::string_view kw) const {
        return by_keyword.at(kw);
    }
};

level_frontiers frontiers_at(const il_quadtree& ilq, const spatial_pattern& p, int level) {
    level_frontiers f;
    for (const pattern_vertex& v : p.vertices) {
        if (f.by_keyword.contains(v.keyword)) continue;
        if (const linear_quadtree* t = ilq.tree(v.keyword)) {
            f.by_keyword.emplace(std::string_view(t->keyword()), nodes_at_level(*t, level));
        }
    }
    return f;
}

bool pair_qualifies_internal(const edge_ctx& ctx, const quad_node* nf, const quad_node* nt,
                             std::span<const quad_node* const> frontier_from,
                             std::span<const quad_node* const> frontier_to,
                             veto_cache& fwd_cache, veto_cache& bwd_cache) {
    const rect& bf = nf->content_mbr;
    const rect& bt = nt->content_mbr;
    if (min_distance(bf, bt) > ctx.u) return false;
    if (max_distance(bf, bt) < ctx.l) return false;
    if (ctx.needs_mbr_intersection && !bf.intersects(bt)) return false;
    if (ctx.l > 0.0) {
        if (ctx.excl_fwd &&
            vetoed(fwd_cache.lookup(nf, *ctx.tree_from, frontier_to, ctx.l), nt)) {
            return false;
        }
        if (ctx.excl_bwd &&
            vetoed(bwd_cache.lookup(nt, *ctx.tree_to, frontier_from, ctx.l), nf)) {
            return false;
        }
    }
    return true;
}

std::vector<qq_n_match> expand_level(const edge_ctx& ctx, std::span<const qq_n_match> prev,
                                     std::span<const quad_node* const> frontier_from,
                                     std::span<const quad_node* const> frontier_to) {
    std::vector<qq_n_match> out;
    pointer_pair_set seen;
    veto_cache fwd_cache;
    veto_cache bwd_cache;
    for (const qq_n_match& m : prev) {
        for_each_child_or_self(*m.node_from, [&](const quad_node* cf) {
            for_each_child_or_self(*m.node_to, [&](const quad_node* ct) {
                if (!seen.insert({cf, ct}).second) return;
                if (pair_qualifies_internal(ctx, cf, ct, frontier_from, frontier_to,
                                            fwd_cache, bwd_cache)) {
                    out.push_back(qq_n_match{ctx.e, cf, ct});
                }
            });
        });
    }
    return out;
}

std::vector<qq_e_match> qqe_internal(const edge_ctx& ctx, std::span<const qq_n_match> final_qqn,
                                     const std::optional<poi_id_set>& candidates_from,
                                     const std::optional<poi_id_set>& candidates_to) {
    std::vector<qq_e_match> out;
    pointer_pair_set seen_pairs;
    std::unordered_map<const poi*, bool> fwd_ok;
    std::unordered_map<const poi*, bool> bwd_ok;
    std::unordered_map<const quad_node*, std::vector<const poi*>> bucket_cache;

    const auto pois_of = [&](const quad_node* n) -> const std::vector<const poi*>& {
        auto [it, inserted] = bucket_cache.try_emplace(n);
        if (inserted) it->second = pois_in_node(*n);
        return it->second;
    };
    const auto passes_exclusion = [&](std::unordered_map<const poi*, bool>& memo,
                                      const poi* anchor, const linear_quadtree& tree) {
        auto [it, inserted] = memo.try_emplace(anchor);
        if (inserted) {
            const std::array<std::string_view, 1> ignore = {anchor->id};
            it->second = is_open_disk_empty(tree, anchor->location, ctx.l, ignore);
        }
        return it->second;
    };

    for (const qq_n_match& m : final_qqn) {
        for (const poi* p : pois_of(m.node_from)) {
            if (candidates_from && !candidates_from->contains(p->id)) continue;
            if (ctx.excl_fwd && ctx.l > 0.0 && !passes_exclusion(fwd_ok, p, *ctx.tree_to)) {
                continue;
            }
            for (const poi* q : pois_of(m.node_to)) {
                if (candidates_to && !candidates_to->contains(q->id)) continue;
                if (p == q) continue;
                const double d = euclidean_distance(p->location, q->location);
                if (d < ctx.l || d > ctx.u) continue;
                if (ctx.e->relation && !holds(*ctx.e->relation, p->geom, q->geom)) continue;
                if (ctx.excl_bwd && ctx.l > 0.0 &&
                    !passes_exclusion(bwd_ok, q, *ctx.tree_from)) {
                    continue;
                }
                if (seen_pairs.insert({p, q}).second) {
                    out.push_back(qq_e_match{ctx.e, p, q});
                }
            }
        }
    }
    return out;
}

bool spanning_connected_without(const spatial_pattern& p, const std::set<std::size_t>& skips) {
    const std::size_t n = p.vertices.size();
    if (n <= 1) return true;
    std::vector<std::vector<int>> adj(n);
    for (std::size_t i = 0; i < p.edges.size(); ++i) {
        if (skips.contains(i)) continue;
        adj[p.edges[i].from_vid].push_back(p.edges[i].to_vid);
        adj[p.edges[i].to_vid].push_back(p.edges[i].from_vid);
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
    return reached == n;
}

std::vector<std::size_t> skip_candidates(const spatial_pattern& p) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < p.edges.size(); ++i) {
        const edge_class c = classify_edge(p.edges[i]);
        if (c.quantitative && !c.exclusive && !c.qualitative) out.push_back(i);
    }
    return out;
}

bool skip_edge_binding_ok(const pattern_edge& e, std::span<const poi* const> binding) {
    const poi* a = binding[e.from_vid];
    const poi* b = binding[e.to_vid];
    const distance_interval iv = effective_interval(e);
    const double d = euclidean_distance(a->location, b->location);
    if (d < iv.lower || d > iv.upper) return false;
    if (e.relation && !holds(*e.relation, a->geom, b->geom)) return false;
    return true;
}

} // namespace

bool node_pair_qualifies(const pattern_edge& e, const rect& b_from, const rect& b_to,
                         std::span<const rect> frontier_from,
                         std::span<const rect> frontier_to) {
    const distance_interval iv = effective_interval(e);
    if (min_distance(b_from, b_to) > iv.upper) return false;
    if (max_distance(b_from, b_to) < iv.lower) return false;
    if (e.relation && *e.relation != topo_predicate::disjoint &&
        !b_from.intersects(b_to)) {
        return false;
    }
    if (e.interval && iv.lower > 0.0) {
        const bool fwd = e.sign == exclusion_sign::forward ||
                         e.sign == exclusion_sign::mutual_exclusion;
        const bool bwd = e.sign == exclusion_sign::backward ||
                         e.sign == exclusion_sign::mutual_exclusion;
        if (fwd) {
            for (const rect& candidate : frontier_to) {
                if (candidate != b_to && max_distance(b_from, candidate) < iv.lower) {
                    return false;
                }
            }
        }
        if (bwd) {
            for (const rect& candidate : frontier_from) {
                if (candidate != b_from && max_distance(candidate, b_to) < iv.lower) {
                    return false;
                }
            }
        }
    }
    return true;
}

std::vector<qq_n_match> compute_level_qqn(const spatial_pattern& p, const pattern_edge& e,
                                          std::span<const qq_n_match> prev, int level,
                                          const il_quadtree& ilq) {
    const edge_ctx ctx = make_edge_ctx(p, e, ilq);
    if (!ctx.tree_from || !ctx.tree_to) return {};
    const std::vector<const quad_node*> frontier_from = nodes_at_level(*ctx.tree_from, level);
    const std::vector<const quad_node*> frontier_to = nodes_at_level(*ctx.tree_to, level);
    return expand_level(ctx, prev, frontier_from, frontier_to);
}

std::vector<qq_e_match> compute_qqe_matches(const spatial_pattern& p, const pattern_edge& e,
                                            std::span<const qq_n_match> final_qqn,
                                            const std::optional<poi_id_set>& candidates_from,
                                            const std::optional<poi_id_set>& candidates_to,
                                            const il_quadtree& ilq) {
    const edge_ctx ctx = make_edge_ctx(p, e, ilq);
    if (!ctx.tree_from || !ctx.tree_to) return {};
    return qqe_internal(ctx, final_qqn, candidates_from, candidates_to);
}

std::set<std::size_t> identify_skip_edges(const spatial_pattern& p,
                                          std::span<const std::size_t> edge_costs) {
    std::vector<std::size_t> candidates = skip_candidates(p);
    const auto cost = [&](std::size_t i) {
        return edge_costs.empty() ? i : edge_costs[i];
    };
    std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
        if (cost(a) != cost(b)) return cost(a) > cost(b);
        return a < b;
    });
    std::set<std::size_t> skips;
    for (std::size_t i : candidates) {
        skips.insert(i);
        if (!spanning_connected_without(p, skips)) skips.erase(i);
    }
    return skips;
}

std::vector<match_tuple> join_qq_e_matches(
    const std::map<std::size_t, std::vector<qq_e_match>>& per_edge,
    const std::set<std::size_t>& skips, const spatial_pattern& p) {
    const std::size_t n = p.vertices.size();
    if (per_edge.empty()) return {};

    // Join order: cheapest edge list first, then cheapest among the edges
    // touching an already-bound vertex.
    std::vector<std::size_t> remaining;
    for (const auto& [idx, matches] : per_edge) remaining.push_back(idx);
    std::vector<bool> bound(n, false);
    std::vector<std::size_t> order;
    while (!remaining.empty()) {
        const bool started = !order.empty();
        std::size_t best_pos = remaining.size();
        for (std::size_t r = 0; r < remaining.size(); ++r) {
            const pattern_edge& e = p.edges[remaining[r]];
            const bool adjacent = bound[e.from_vid] || bound[e.to_vid];
            const bool best_adjacent =
                best_pos < remaining.size() &&
                (bound[p.edges[remaining[best_pos]].from_vid] ||
                 bound[p.edges[remaining[best_pos]].to_vid]);
            bool better = false;
            if (best_pos == remaining.size()) {
                better = true;
            } else if (started && adjacent != best_adjacent) {
                better = adjacent;
            } else {
                const auto key = std::pair(per_edge.at(remaining[r]).size(), remaining[r]);
                const auto best_key =
                    std::pair(per_edge.at(remaining[best_pos]).size(), remaining[best_pos]);
                better = key < best_key;
            }
            if (better) best_pos = r;
        }
        const std::size_t edge_idx = remaining[best_pos];
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best_pos));
        order.push_back(edge_idx);
        bound[p.edges[edge_idx].from_vid] = true;
        bound[p.edges[edge_idx].to_vid] = true;
    }

    std::vector<std::vector<const poi*>> partials;
    std::fill(bound.begin(), bound.end(), false);
    std::set<std::size_t> checked_skips;
    bool first_edge = true;

    for (std::size_t edge_idx : order) {
        const pattern_edge& e = p.edges[edge_idx];
        const std::vector<qq_e_match>& matches = per_edge.at(edge_idx);
        std::vector<std::vector<const poi*>> next;
        if (first_edge) {
            for (const qq_e_match& m : matches) {
                std::vector<const poi*> t(n, nullptr);
                t[e.from_vid] = m.poi_from;
                t[e.to_vid] = m.poi_to;
                next.push_back(std::move(t));
            }
            first_edge = false;
        } else {
            for (const std::vector<const poi*>& partial : partials) {
                for (const qq_e_match& m : matches) {
                    const poi* cur_from = partial[e.from_vid];
                    const poi* cur_to = partial[e.to_vid];
                    if (cur_from && cur_from != m.poi_from) continue;
                    if (cur_to && cur_to != m.poi_to) continue;
                    bool distinct = true;
                    for (std::size_t v = 0; v < n && distinct; ++v) {
                        if (!partial[v]) continue;
                        if (v != static_cast<std::size_t>(e.from_vid) &&
                            partial[v] == m.poi_from) {
                            distinct = false;
                        }
                        if (v != static_cast<std::size_t>(e.to_vid) &&
                            partial[v] == m.poi_to) {
                            distinct = false;
                        }
                    }
                    if (!distinct) continue;
                    std::vector<const poi*> t = partial;
                    t[e.from_vid] = m.poi_from;
                    t[e.to_vid] = m.poi_to;
                    next.push_back(std::move(t));
                }
            }
        }
        partials = std::move(next);
        bound[e.from_vid] = true;
        bound[e.to_vid] = true;

        for (std::size_t s : skips) {
            if (checked_skips.contains(s)) continue;
            const pattern_edge& se = p.edges[s];
            if (!bound[se.from_vid] || !bound[se.to_vid]) continue;
            std::erase_if(partials, [&](const std::vector<const poi*>& t) {
                return !skip_edge_binding_ok(se, t);
            });
            checked_skips.insert(s);
        }
        if (partials.empty()) return {};
    }

    std::vector<match_tuple> out;
    out.reserve(partials.size());
    for (std::vector<const poi*>& t : partials) {
        assert(std::none_of(t.begin(), t.end(), [](const poi* q) { return q == nullptr; }));
        out.push_back(match_tuple{std::move(t)});
    }
    return out;
}

std::vector<match_tuple> qqespm_query(const il_quadtree& ilq, const spatial_pattern& p,
                                      const query_options& options) {
    query_trace* trace = options.trace;
    const auto note = [&](std::string text) {
        if (trace) trace->notes.push_back(std::move(text));
    };

    // Single-vertex pattern: one tuple per POI carrying the keyword.
    if (p.vertices.size() == 1) {
        const linear_quadtree* tree = ilq.tree(p.vertices[0].keyword);
        if (!tree) {
            note("keyword '" + p.vertices[0].keyword + "' not in index; empty result");
            return {};
        }
        std::vector<match_tuple> out;
        for (const poi* q : pois_in_node(tree->root())) {
            out.push_back(match_tuple{{q}});
        }
        return out;
    }

    std::vector<edge_ctx> ctx;
    ctx.reserve(p.edges.size());
    int max_level = 0;
    for (const pattern_vertex& v : p.vertices) {
        const linear_quadtree* tree = ilq.tree(v.keyword);
        if (!tree) {
            note("keyword '" + v.keyword + "' not in index; empty result");
            return {};
        }
        max_level = std::max(max_level, tree->depth());
    }
    for (const pattern_edge& e : p.edges) ctx.push_back(make_edge_ctx(p, e, ilq));

    const std::size_t m = p.edges.size();
    std::optional<split_rng> rng;
    if (options.shuffle_seed) rng.emplace(*options.shuffle_seed);

    const auto record_level = [&](int level, const std::vector<std::vector<qq_n_match>>& cur) {
        if (!trace) return;
        level_state state;
        state.level = level;
        state.edge_matches = cur;
        const level_frontiers f = frontiers_at(ilq, p, level);
        for (const auto& [kw, nodes] : f.by_keyword) {
            state.frontiers.emplace(std::string(kw), nodes);
        }
        trace->levels.push_back(std::move(state));
    };

    // Level 0: the root pair is the sole qq-n-match of every edge.
    std::vector<std::vector<qq_n_match>> cur(m);
    for (std::size_t i = 0; i < m; ++i) {
        cur[i].push_back(qq_n_match{ctx[i].e, &ctx[i].tree_from->root(),
                                    &ctx[i].tree_to->root()});
    }
    record_level(0, cur);

    for (int level = 1; level <= max_level; ++level) {
        const level_frontiers frontiers = frontiers_at(ilq, p, level);
        std::vector<std::size_t> edge_order(m);
        std::iota(edge_order.begin(), edge_order.end(), 0);
        if (rng) {
            rng->shuffle(edge_order);
        } else if (options.reorder_edges) {
            std::stable_sort(edge_order.begin(), edge_order.end(),
                             [&](std::size_t a, std::size_t b) {
                                 if (cur[a].size() != cur[b].size()) {
                                     return cur[a].size() < cur[b].size();
                                 }
                                 return a < b;
                             });
        }
        std::vector<bool> computed(m, false);
        for (std::size_t i : edge_order) {
            const std::vector<const quad_node*>& ff =
                frontiers.of(p.keyword_of(ctx[i].e->from_vid));
            const std::vector<const quad_node*>& ft =
                frontiers.of(p.keyword_of(ctx[i].e->to_vid));
            cur[i] = expand_level(ctx[i], cur[i], ff, ft);
            computed[i] = true;
            if (cur[i].empty()) {
                note("edge " + std::to_string(i) + " has no qq-n-matches at level " +
                     std::to_string(level) + "; empty result");
                // record only the matches actually computed at this level;
                // later edges in the order never reached it
                std::vector<std::vector<qq_n_match>> partial = cur;
                for (std::size_t j = 0; j < m; ++j) {
                    if (!computed[j]) partial[j].clear();
                }
                record_level(level, partial);
                return {};
            }
        }
        record_level(level, cur);
    }

    // Skip-edge selection over the final-level costs.
    std::vector<std::size_t> final_costs(m);
    for (std::size_t i = 0; i < m; ++i) final_costs[i] = cur[i].size();
    std::set<std::size_t> skips;
    switch (options.skips) {
    case skip_mode::greedy:
        skips = identify_skip_edges(p, final_costs);
        break;
    case skip_mode::none:
        break;
    case skip_mode::randomized: {
        split_rng skip_rng = rng ? rng->fork(0x51) : split_rng(0x51);
        std::vector<std::size_t> candidates = skip_candidates(p);
        skip_rng.shuffle(candidates);
        for (std::size_t i : candidates) {
            if (!skip_rng.chance(0.5)) continue;
            skips.insert(i);
            if (!spanning_connected_without(p, skips)) skips.erase(i);
        }
        break;
    }
    }
    if (trace) trace->skip_edges = skips;

    // qq-e-matches for the non-skip edges, cheapest final level first, with
    // pre-joining candidate restriction through shared vertices.
    std::vector<std::size_t> qqe_order;
    for (std::size_t i = 0; i < m; ++i) {
        if (!skips.contains(i)) qqe_order.push_back(i);
    }
    if (rng) {
        rng->shuffle(qqe_order);
    } else {
        std::stable_sort(qqe_order.begin(), qqe_order.end(), [&](std::size_t a, std::size_t b) {
            if (final_costs[a] != final_costs[b]) return final_costs[a] < final_costs[b];
            return a < b;
        });
    }

    if (trace) trace->qq_e_counts.assign(m, 0);
    std::vector<std::optional<poi_id_set>> vertex_candidates(p.vertices.size());
    std::map<std::size_t, std::vector<qq_e_match>> per_edge;
    for (std::size_t i : qqe_order) {
        const pattern_edge& e = *ctx[i].e;
        std::vector<qq_e_match> matches =
            qqe_internal(ctx[i], cur[i], vertex_candidates[e.from_vid],
                         vertex_candidates[e.to_vid]);
        if (trace) trace->qq_e_counts[i] = matches.size();
        if (matches.empty()) {
            note("edge " + std::to_string(i) + " has no qq-e-matches; empty result");
            return {};
        }
        poi_id_set from_ids;
        poi_id_set to_ids;
        for (const qq_e_match& qe : matches) {
            from_ids.insert(qe.poi_from->id);
            to_ids.insert(qe.poi_to->id);
        }
        vertex_candidates[e.from_vid] = std::move(from_ids);
        vertex_candidates[e.to_vid] = std::move(to_ids);
        per_edge.emplace(i, std::move(matches));
    }

    return join_qq_e_matches(per_edge, skips, p);
}

std::vector<std::vector<std::string>> match_ids(std::span<const match_tuple> matches) {
    std::vector<std::vector<std::string>> out;
    out.reserve(matches.size());
    for (const match_tuple& t : matches) {
        std::vector<std::string> ids;
        ids.reserve(t.pois.size());
        for (const poi* q : t.pois) ids.push_back(q->id);
        out.push_back(std::move(ids));
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace qqespm
