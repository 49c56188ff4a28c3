#pragma once

#include <stdexcept>
#include <string>

namespace qqespm {

/// Malformed input documents: pattern JSON, workload config, CLI usage.
struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad data: CSV rows, POIs outside the root region, oracle size limits.
struct data_error : std::runtime_error {
    explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

/// Result-set disagreement between algorithms during a benchmark run.
struct cross_check_error : std::runtime_error {
    explicit cross_check_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qqespm
