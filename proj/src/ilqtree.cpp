#include "qqespm/ilqtree.hpp"

#include "qqespm/error.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace qqespm {
namespace {

// Quadrant index for a location: bit 1 = north, bit 0 = east. Locations on
// a split line go east/north, so every point maps to exactly one child.
int child_index(const rect& region, point p) {
    const double mid_x = (region.min_x + region.max_x) / 2.0;
    const double mid_y = (region.min_y + region.max_y) / 2.0;
    return (p.y >= mid_y ? 2 : 0) + (p.x >= mid_x ? 1 : 0);
}

rect child_region(const rect& region, int idx) {
    const double mid_x = (region.min_x + region.max_x) / 2.0;
    const double mid_y = (region.min_y + region.max_y) / 2.0;
    const bool east = idx & 1;
    const bool north = idx & 2;
    return {east ? mid_x : region.min_x, north ? mid_y : region.min_y,
            east ? region.max_x : mid_x, north ? region.max_y : mid_y};
}

constexpr const char* kQuadCodes[4] = {"00", "01", "10", "11"};

quad_node& descend_to_leaf(quad_node& node, point p) {
    quad_node* cur = &node;
    while (!cur->is_leaf()) {
        const int idx = child_index(cur->region, p);
        std::unique_ptr<quad_node>& slot = cur->children[idx];
        if (!slot) {
            slot = std::make_unique<quad_node>();
            slot->code = cur->code + kQuadCodes[idx];
            slot->region = child_region(cur->region, idx);
            slot->depth = cur->depth + 1;
            slot->parent = cur;
        }
        cur = slot.get();
    }
    return *cur;
}

void split_leaf(quad_node& leaf, int capacity, int max_depth) {
    if (static_cast<int>(leaf.pois.size()) <= capacity || leaf.depth >= max_depth) return;
    leaf.split_ = true;
    std::vector<const poi*> bucket = std::move(leaf.pois);
    leaf.pois.clear();
    for (const poi* p : bucket) {
        quad_node& child = descend_to_leaf(leaf, p->location);
        child.pois.push_back(p);
    }
    for (auto& child : leaf.children) {
        if (child) split_leaf(*child, capacity, max_depth);
    }
}

// content_mbr, subtree_size, sole_poi, and the tree depth, bottom-up.
int finalize(quad_node& node) {
    if (node.is_leaf()) {
        node.subtree_size = node.pois.size();
        node.sole_poi = node.subtree_size == 1 ? node.pois.front() : nullptr;
        bool first = true;
        for (const poi* p : node.pois) {
            const rect r = mbr(p->geom);
            node.content_mbr = first ? r : node.content_mbr.merged(r);
            first = false;
        }
        return node.depth;
    }
    int deepest = node.depth;
    bool first = true;
    node.subtree_size = 0;
    for (auto& child : node.children) {
        if (!child) continue;
        deepest = std::max(deepest, finalize(*child));
        node.subtree_size += child->subtree_size;
        node.content_mbr = first ? child->content_mbr : node.content_mbr.merged(child->content_mbr);
        first = false;
    }
    node.sole_poi = nullptr;
    if (node.subtree_size == 1) {
        for (auto& child : node.children) {
            if (child && child->subtree_size == 1) node.sole_poi = child->sole_poi;
        }
    }
    return deepest;
}

void collect_level(const quad_node& node, int level, std::vector<const quad_node*>& out) {
    if (node.depth == level || (node.is_leaf() && node.depth < level)) {
        out.push_back(&node);
        return;
    }
    if (node.depth > level) return;
    for (const auto& child : node.children) {
        if (child) collect_level(*child, level, out);
    }
}

bool disk_empty_rec(const quad_node& node, point center, double radius,
                    std::span<const std::string_view> ignore) {
    if (min_distance(node.content_mbr, rect::from_point(center)) >= radius) return true;
    if (node.is_leaf()) {
        for (const poi* p : node.pois) {
            if (euclidean_distance(p->location, center) >= radius) continue;
            if (std::find(ignore.begin(), ignore.end(), p->id) != ignore.end()) continue;
            return false;
        }
        return true;
    }
    for (const auto& child : node.children) {
        if (child && !disk_empty_rec(*child, center, radius, ignore)) return false;
    }
    return true;
}

void collect_pois(const quad_node& node, std::vector<const poi*>& out) {
    if (node.is_leaf()) {
        out.insert(out.end(), node.pois.begin(), node.pois.end());
        return;
    }
    for (const auto& child : node.children) {
        if (child) collect_pois(*child, out);
    }
}

} // namespace

std::string normalize_keyword(std::string_view raw) {
    std::size_t begin = 0;
    std::size_t end = raw.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(raw[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(raw[end - 1]))) --end;
    std::string out(raw.substr(begin, end - begin));
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

il_quadtree il_quadtree::build(std::vector<poi> pois, const rect& root_region,
                               int capacity, int max_depth) {
    if (capacity < 1) throw data_error("il_quadtree: capacity must be >= 1");
    if (max_depth < 1) throw data_error("il_quadtree: max_depth must be >= 1");
    if (!root_region.valid()) throw data_error("il_quadtree: invalid root region");

    il_quadtree ilq;
    ilq.root_region_ = root_region;
    ilq.capacity_ = capacity;
    ilq.max_depth_ = max_depth;
    ilq.pois_ = std::move(pois);

    for (poi& p : ilq.pois_) {
        for (std::string& kw : p.keywords) kw = normalize_keyword(kw);
        std::sort(p.keywords.begin(), p.keywords.end());
        p.keywords.erase(std::unique(p.keywords.begin(), p.keywords.end()),
                         p.keywords.end());
        if (!p.keywords.empty() && p.keywords.front().empty()) {
            throw data_error("il_quadtree: POI '" + p.id + "' has an empty keyword");
        }
        if (p.keywords.empty()) {
            throw data_error("il_quadtree: POI '" + p.id + "' has no keywords");
        }
    }

    std::vector<std::string> outside;
    std::set<std::string_view> seen_ids;
    for (const poi& p : ilq.pois_) {
        if (!root_region.contains(p.location)) outside.push_back(p.id);
        if (!seen_ids.insert(p.id).second) {
            throw data_error("il_quadtree: duplicate POI id '" + p.id + "'");
        }
        // content-MBR pruning relies on locations being inside geometry MBRs
        if (!mbr(p.geom).valid() || !mbr(p.geom).contains(p.location)) {
            throw data_error("il_quadtree: POI '" + p.id +
                             "' location lies outside its geometry MBR");
        }
    }
    if (!outside.empty()) {
        std::ostringstream msg;
        msg << "il_quadtree: POI locations outside the root region:";
        for (const std::string& id : outside) msg << ' ' << id;
        throw data_error(msg.str());
    }

    for (const poi& p : ilq.pois_) {
        for (const std::string& kw : p.keywords) {
            linear_quadtree& tree = ilq.trees_[kw];
            if (!tree.root_) {
                tree.keyword_ = kw;
                tree.root_ = std::make_unique<quad_node>();
                tree.root_->region = root_region;
            }
            quad_node& leaf = descend_to_leaf(*tree.root_, p.location);
            leaf.pois.push_back(&p);
            split_leaf(leaf, capacity, max_depth);
        }
    }
    for (auto& [kw, tree] : ilq.trees_) {
        tree.depth_ = finalize(*tree.root_);
    }
    return ilq;
}

const linear_quadtree* il_quadtree::tree(std::string_view keyword) const {
    const auto it = trees_.find(keyword);
    return it == trees_.end() ? nullptr : &it->second;
}

il_quadtree build_ilq(std::vector<poi> pois, const rect& root_region, int capacity,
                      int max_depth) {
    return il_quadtree::build(std::move(pois), root_region, capacity, max_depth);
}

std::vector<const quad_node*> nodes_at_level(const linear_quadtree& tree, int level) {
    std::vector<const quad_node*> out;
    collect_level(tree.root(), level, out);
    return out;
}

std::vector<const quad_node*> children_or_self(const quad_node& node) {
    if (node.is_leaf()) return {&node};
    std::vector<const quad_node*> out;
    for (const auto& child : node.children) {
        if (child) out.push_back(child.get());
    }
    return out;
}

bool is_open_disk_empty(const linear_quadtree& tree, point center, double radius,
                        std::span<const std::string_view> ignore) {
    if (radius <= 0.0) return true;
    return disk_empty_rec(tree.root(), center, radius, ignore);
}

std::vector<const poi*> pois_in_node(const quad_node& node) {
    std::vector<const poi*> out;
    out.reserve(node.subtree_size);
    collect_pois(node, out);
    return out;
}

bool subtree_contains(const linear_quadtree& tree, const quad_node& node, const poi* p) {
    if (!p->has_keyword(tree.keyword())) return false;
    const quad_node* cur = &tree.root();
    bool on_path = cur == &node;
    while (!cur->is_leaf()) {
        cur = cur->children[child_index(cur->region, p->location)].get();
        if (!cur) return false;
        on_path = on_path || cur == &node;
    }
    if (!on_path) return false;
    return std::find(cur->pois.begin(), cur->pois.end(), p) != cur->pois.end();
}

rect default_root_region(std::span<const poi> pois) {
    if (pois.empty()) return {0.0, 0.0, 1.0, 1.0};
    rect box = rect::from_point(pois.front().location);
    for (const poi& p : pois) box = box.merged(rect::from_point(p.location));
    const double pad_x = box.width() > 0 ? 0.01 * box.width() : 0.5;
    const double pad_y = box.height() > 0 ? 0.01 * box.height() : 0.5;
    return {box.min_x - pad_x, box.min_y - pad_y, box.max_x + pad_x, box.max_y + pad_y};
}

} // namespace qqespm
