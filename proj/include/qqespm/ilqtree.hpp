#pragma once

#include "qqespm/geometry.hpp"
#include "qqespm/poi.hpp"

#include <array>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qqespm {

/// Node of one keyword's linear quadtree. Directional codes per level:
/// 00=SW, 01=SE, 10=NW, 11=NE, concatenated along the path from the root.
struct quad_node {
    std::string code;          // length == 2 * depth
    rect region;               // this node's quadrant of the root region
    rect content_mbr;          // tight MBR over contained POI geometries
    int depth = 0;
    const quad_node* parent = nullptr;
    std::vector<const poi*> pois;                       // leaf bucket only
    std::array<std::unique_ptr<quad_node>, 4> children; // empty quadrants stay null
    std::size_t subtree_size = 0;
    const poi* sole_poi = nullptr; // set iff subtree_size == 1

    bool is_leaf() const { return !split_; }

    // true once the node has been split; a split node holds no direct POIs
    bool split_ = false;
};

/// Quadtree over the POIs carrying one keyword. POIs are assigned to
/// quadrants by representative point; geometry extents only widen the
/// content MBRs (which may therefore spill outside a node's region).
class linear_quadtree {
public:
    linear_quadtree() = default;
    linear_quadtree(const linear_quadtree&) = delete;
    linear_quadtree& operator=(const linear_quadtree&) = delete;
    linear_quadtree(linear_quadtree&&) = default;
    linear_quadtree& operator=(linear_quadtree&&) = default;

    const std::string& keyword() const { return keyword_; }
    const quad_node& root() const { return *root_; }
    int depth() const { return depth_; }              // maximum leaf depth
    std::size_t size() const { return root_->subtree_size; }

private:
    std::string keyword_;
    std::unique_ptr<quad_node> root_;
    int depth_ = 0;

    friend class il_quadtree;
};

/// Inverted Linear Quadtree: one linear quadtree per distinct keyword,
/// all sharing the root region and split threshold. Immutable after build.
class il_quadtree {
public:
    il_quadtree() = default;
    il_quadtree(const il_quadtree&) = delete;
    il_quadtree& operator=(const il_quadtree&) = delete;
    il_quadtree(il_quadtree&&) = default;
    il_quadtree& operator=(il_quadtree&&) = default;

    static il_quadtree build(std::vector<poi> pois, const rect& root_region,
                             int capacity, int max_depth);

    const rect& root_region() const { return root_region_; }
    int capacity() const { return capacity_; }
    int max_depth() const { return max_depth_; }
    std::span<const poi> pois() const { return pois_; }

    const std::map<std::string, linear_quadtree, std::less<>>& trees() const { return trees_; }
    /// nullptr when the keyword never occurs in the dataset.
    const linear_quadtree* tree(std::string_view keyword) const;

private:
    rect root_region_;
    int capacity_ = 0;
    int max_depth_ = 0;
    std::vector<poi> pois_;
    std::map<std::string, linear_quadtree, std::less<>> trees_;
};

/// Build the index. Throws data_error when a POI's location falls outside
/// root_region (offending ids reported) or ids collide.
il_quadtree build_ilq(std::vector<poi> pois, const rect& root_region,
                      int capacity = 64, int max_depth = 16);

/// Non-empty nodes occupying `level`: nodes at that exact depth plus every
/// shallower leaf, which persists at all deeper levels. This keeps trees of
/// different depths aligned under the engine's level-wise loop.
std::vector<const quad_node*> nodes_at_level(const linear_quadtree& tree, int level);

/// The node's non-empty children, or the node itself when it is a leaf.
std::vector<const quad_node*> children_or_self(const quad_node& node);

/// True iff no POI of the tree, other than the ignored ids, has its
/// location strictly within `radius` of `center`. Subtrees are pruned via
/// min_distance against their content MBRs.
bool is_open_disk_empty(const linear_quadtree& tree, point center, double radius,
                        std::span<const std::string_view> ignore = {});

/// All POIs in the node's subtree.
std::vector<const poi*> pois_in_node(const quad_node& node);

/// True iff p lies in node's subtree. p must be a pointer into the owning
/// il_quadtree's POI storage.
bool subtree_contains(const linear_quadtree& tree, const quad_node& node, const poi* p);

/// MBR of all POI locations expanded by 1% per axis (0.5 absolute units for
/// a degenerate extent), so boundary locations never sit on the root edge.
rect default_root_region(std::span<const poi> pois);

} // namespace qqespm
