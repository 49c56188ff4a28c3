#include "qqespm/csv.hpp"

#include "qqespm/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

namespace qqespm {
namespace {

constexpr const char* kHeader = "id,keywords,lon,lat,min_lon,min_lat,max_lon,max_lat";
constexpr const char* kColumns[8] = {"id",      "keywords", "lon",     "lat",
                                     "min_lon", "min_lat",  "max_lon", "max_lat"};

[[noreturn]] void fail(const std::filesystem::path& path, std::size_t line,
                       const std::string& what) {
    std::ostringstream msg;
    msg << path.string() << ":" << line << ": " << what;
    throw data_error(msg.str());
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

double parse_coord(const std::filesystem::path& path, std::size_t line,
                   const std::string& field, const char* column) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        fail(path, line, std::string("column '") + column + "': non-numeric coordinate '" +
                             field + "'");
    }
    return value;
}

std::string format_coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::vector<poi> load_pois_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open '" + path.string() + "'");

    std::string line;
    std::size_t line_no = 0;
    std::vector<poi> out;
    std::set<std::string> seen_ids;

    if (!std::getline(in, line)) fail(path, 1, "empty file, expected header");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kHeader) {
        fail(path, 1, std::string("header must be exactly '") + kHeader + "'");
    }

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split(line, ',');
        if (fields.size() != 8) {
            fail(path, line_no,
                 "expected 8 fields, got " + std::to_string(fields.size()));
        }

        poi p;
        p.id = fields[0];
        if (p.id.empty()) fail(path, line_no, "column 'id': must be non-empty");
        if (!seen_ids.insert(p.id).second) {
            fail(path, line_no, "column 'id': duplicate id '" + p.id + "'");
        }

        for (const std::string& kw : split(fields[1], ';')) {
            const std::string norm = normalize_keyword(kw);
            if (norm.empty()) {
                fail(path, line_no, "column 'keywords': empty keyword");
            }
            p.keywords.push_back(norm);
        }
        std::sort(p.keywords.begin(), p.keywords.end());
        p.keywords.erase(std::unique(p.keywords.begin(), p.keywords.end()),
                         p.keywords.end());

        p.location.x = parse_coord(path, line_no, fields[2], kColumns[2]);
        p.location.y = parse_coord(path, line_no, fields[3], kColumns[3]);

        const bool mbr_fields[4] = {!fields[4].empty(), !fields[5].empty(),
                                    !fields[6].empty(), !fields[7].empty()};
        const int mbr_count = mbr_fields[0] + mbr_fields[1] + mbr_fields[2] + mbr_fields[3];
        if (mbr_count == 0) {
            p.geom = p.location;
        } else if (mbr_count == 4) {
            rect r;
            r.min_x = parse_coord(path, line_no, fields[4], kColumns[4]);
            r.min_y = parse_coord(path, line_no, fields[5], kColumns[5]);
            r.max_x = parse_coord(path, line_no, fields[6], kColumns[6]);
            r.max_y = parse_coord(path, line_no, fields[7], kColumns[7]);
            if (!r.valid()) {
                fail(path, line_no, "MBR columns: min > max");
            }
            if (!r.contains(p.location)) {
                fail(path, line_no, "location (lon,lat) must lie within the MBR columns");
            }
            p.geom = r;
        } else {
            for (int c = 4; c < 8; ++c) {
                if (!mbr_fields[c - 4]) {
                    fail(path, line_no,
                         std::string("column '") + kColumns[c] +
                             "': missing (MBR columns must be all empty or all present)");
                }
            }
        }
        out.push_back(std::move(p));
    }
    return out;
}

void write_pois_csv(const std::filesystem::path& path, std::span<const poi> pois) {
    std::ofstream out(path);
    if (!out) throw data_error("cannot write '" + path.string() + "'");
    out << kHeader << '\n';
    for (const poi& p : pois) {
        out << p.id << ',';
        for (std::size_t i = 0; i < p.keywords.size(); ++i) {
            if (i) out << ';';
            out << p.keywords[i];
        }
        out << ',' << format_coord(p.location.x) << ',' << format_coord(p.location.y);
        if (const rect* r = std::get_if<rect>(&p.geom)) {
            out << ',' << format_coord(r->min_x) << ',' << format_coord(r->min_y) << ','
                << format_coord(r->max_x) << ',' << format_coord(r->max_y);
        } else {
            out << ",,,,";
        }
        out << '\n';
    }
    if (!out.good()) throw data_error("write failed for '" + path.string() + "'");
}

} // namespace qqespm
