#pragma once

#include "qqespm/geometry.hpp"

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

namespace qqespm {

/// Trim whitespace and lowercase. Applied to every keyword at ingestion,
/// index build, and pattern parse so lookups agree.
std::string normalize_keyword(std::string_view raw);

/// A keyword-tagged spatial object: representative point plus a geometry
/// (the point itself, or an axis-aligned rect approximating its footprint).
struct poi {
    std::string id;
    std::string name;                   // may be empty
    std::vector<std::string> keywords;  // normalized, sorted, unique, non-empty
    point location;
    geometry geom = point{};

    bool has_keyword(std::string_view kw) const {
        return std::binary_search(keywords.begin(), keywords.end(), kw);
    }
};

} // namespace qqespm
