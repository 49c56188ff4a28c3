#pragma once

#include "qqespm/poi.hpp"

#include <filesystem>
#include <span>
#include <vector>

namespace qqespm {

/// Load POIs from a CSV with the exact header
///   id,keywords,lon,lat,min_lon,min_lat,max_lon,max_lat
/// Keywords are ';'-separated. The four MBR columns are either all empty
/// (point POI) or all present (rect POI whose MBR must contain the
/// location). Throws data_error naming the offending line and column.
std::vector<poi> load_pois_csv(const std::filesystem::path& path);

/// Inverse of load_pois_csv, used to materialize synthetic datasets.
void write_pois_csv(const std::filesystem::path& path, std::span<const poi> pois);

} // namespace qqespm
