#include "qqespm/baseline.hpp"

#include "qqespm/error.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>

namespace qqespm {
namespace {

spatial_pattern strip_relations(const spatial_pattern& p) {
    spatial_pattern stripped = p;
    for (pattern_edge& e : stripped.edges) e.relation.reset();
    return stripped;
}

// One vertex assignment step of the oracle's backtracking enumeration.
// Edges are checked as soon as both endpoints are bound; exclusion verdicts
// depend only on (edge, anchor POI) and are memoized.
class brute_force_search {
public:
    brute_force_search(std::span<const poi> pois, const spatial_pattern& p)
        : pois_(pois), pattern_(p) {
        for (const poi& q : pois_) {
            for (const std::string& kw : q.keywords) {
                by_keyword_[normalize_keyword(kw)].push_back(&q);
            }
        }
        for (const pattern_vertex& v : pattern_.vertices) {
            const auto it = by_keyword_.find(v.keyword);
            candidates_.push_back(it == by_keyword_.end() ? empty_ : it->second);
        }
    }

    std::size_t candidate_product() const {
        std::size_t product = 1;
        for (const auto& c : candidates_) {
            if (c.empty()) return 0;
            if (product > std::numeric_limits<std::size_t>::max() / c.size()) {
                return std::numeric_limits<std::size_t>::max();
            }
            product *= c.size();
        }
        return product;
    }

    std::vector<match_tuple> run() {
        binding_.assign(pattern_.vertices.size(), nullptr);
        out_.clear();
        assign(0);
        return std::move(out_);
    }

private:
    void assign(std::size_t vid) {
        if (vid == pattern_.vertices.size()) {
            out_.push_back(match_tuple{binding_});
            return;
        }
        for (const poi* candidate : candidates_[vid]) {
            bool distinct = true;
            for (std::size_t v = 0; v < vid; ++v) {
                if (binding_[v]->id == candidate->id) {
                    distinct = false;
                    break;
                }
            }
            if (!distinct) continue;
            binding_[vid] = candidate;
            if (edges_ok_up_to(vid)) assign(vid + 1);
            binding_[vid] = nullptr;
        }
    }

    bool edges_ok_up_to(std::size_t vid) {
        for (std::size_t i = 0; i < pattern_.edges.size(); ++i) {
            const pattern_edge& e = pattern_.edges[i];
            const auto hi = static_cast<std::size_t>(std::max(e.from_vid, e.to_vid));
            if (hi != vid) continue; // checked earlier or not yet bound
            if (!edge_holds(i, binding_[e.from_vid], binding_[e.to_vid])) return false;
        }
        return true;
    }

    bool edge_holds(std::size_t edge_idx, const poi* a, const poi* b) {
        const pattern_edge& e = pattern_.edges[edge_idx];
        const distance_interval iv = effective_interval(e);
        const double d = euclidean_distance(a->location, b->location);
        if (d < iv.lower || d > iv.upper) return false;
        if (e.relation && !holds(*e.relation, a->geom, b->geom)) return false;
        if (e.interval && iv.lower > 0.0) {
            if ((e.sign == exclusion_sign::forward ||
                 e.sign == exclusion_sign::mutual_exclusion) &&
                !exclusion_ok(edge_idx, false, a)) {
                return false;
            }
            if ((e.sign == exclusion_sign::backward ||
                 e.sign == exclusion_sign::mutual_exclusion) &&
                !exclusion_ok(edge_idx, true, b)) {
                return false;
            }
        }
        return true;
    }

    // No POI of the excluded keyword, other than the anchor itself, strictly
    // within the edge's lower bound of the anchor.
    bool exclusion_ok(std::size_t edge_idx, bool backward, const poi* anchor) {
        const auto key = std::pair(edge_idx * 2 + (backward ? 1 : 0), anchor);
        const auto [it, inserted] = exclusion_memo_.try_emplace(key);
        if (!inserted) return it->second;
        const pattern_edge& e = pattern_.edges[edge_idx];
        const std::string& kw =
            pattern_.keyword_of(backward ? e.from_vid : e.to_vid);
        const double radius = e.interval->lower;
        bool ok = true;
        const auto scan = by_keyword_.find(kw);
        if (scan != by_keyword_.end()) {
            for (const poi* q : scan->second) {
                if (q->id == anchor->id) continue;
                if (euclidean_distance(q->location, anchor->location) < radius) {
                    ok = false;
                    break;
                }
            }
        }
        it->second = ok;
        return ok;
    }

    struct memo_hash {
        std::size_t operator()(const std::pair<std::size_t, const poi*>& k) const {
            return k.first * 0x9e3779b97f4a7c15ULL ^
                   reinterpret_cast<std::uintptr_t>(k.second);
        }
    };

    std::span<const poi> pois_;
    const spatial_pattern& pattern_;
    std::map<std::string, std::vector<const poi*>, std::less<>> by_keyword_;
    std::vector<std::vector<const poi*>> candidates_;
    std::vector<const poi*> empty_;
    std::vector<const poi*> binding_;
    std::vector<match_tuple> out_;
    std::unordered_map<std::pair<std::size_t, const poi*>, bool, memo_hash> exclusion_memo_;
};

} // namespace

std::vector<match_tuple> qq_simple_query(const il_quadtree& ilq, const spatial_pattern& p,
                                         const query_options& options) {
    const spatial_pattern stripped = strip_relations(p);
    std::vector<match_tuple> spm_matches = qqespm_query(ilq, stripped, options);
    std::vector<match_tuple> out;
    out.reserve(spm_matches.size());
    for (match_tuple& t : spm_matches) {
        bool keep = true;
        for (const pattern_edge& e : p.edges) {
            if (!e.relation) continue;
            if (!holds(*e.relation, t.pois[e.from_vid]->geom, t.pois[e.to_vid]->geom)) {
                keep = false;
                break;
            }
        }
        if (keep) out.push_back(std::move(t));
    }
    return out;
}

std::vector<match_tuple> brute_force_query(std::span<const poi> pois,
                                           const spatial_pattern& p,
                                           std::size_t product_limit) {
    brute_force_search search(pois, p);
    const std::size_t product = search.candidate_product();
    if (product > product_limit) {
        std::ostringstream msg;
        msg << "brute_force_query: candidate product " << product << " exceeds limit "
            << product_limit;
        throw data_error(msg.str());
    }
    return search.run();
}

} // namespace qqespm
