#pragma once

#include "qqespm/engine.hpp"

#include <span>

namespace qqespm {

/// SPM search with all relations stripped (Def 4 without the intersection
/// condition, Def 2 without the relation check), followed by a final filter
/// keeping tuples whose qualitative edges hold on the bound geometries.
/// Returns the same match set as qqespm_query.
std::vector<match_tuple> qq_simple_query(const il_quadtree& ilq, const spatial_pattern& p,
                                         const query_options& options = {});

/// Ground-truth oracle: enumerate every keyword-consistent, pairwise-
/// distinct assignment and check every edge constraint directly (distances
/// on locations, relations on geometries, exclusions by linear scan over
/// all POIs of the excluded keyword). Refuses candidate products above
/// product_limit with a size diagnostic. Result tuples point into `pois`.
std::vector<match_tuple> brute_force_query(std::span<const poi> pois,
                                           const spatial_pattern& p,
                                           std::size_t product_limit = 10'000'000);

} // namespace qqespm
