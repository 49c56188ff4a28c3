#pragma once

#include "qqespm/poi.hpp"
#include "qqespm/workload.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace qqespm {

struct bench_record {
    std::string algorithm; // qqespm | qqsimple
    std::string pattern_id;
    std::string structure;
    int n_vertices = 0;
    int dataset_fraction = 0; // percent
    int repetition = 0;
    double elapsed_seconds = 0.0;
    std::uint64_t peak_alloc_bytes = 0; // best-effort
    std::uint64_t n_matches = 0;
    std::uint64_t seed = 0;
};

/// The dataset order used by run_bench: one seeded shuffle. Fraction
/// slices are prefixes of it, so every slice nests inside the larger ones.
std::vector<poi> shuffled_dataset(std::span<const poi> data, std::uint64_t seed);

/// Number of POIs in a percentage slice (round-half-up).
std::size_t slice_size(std::size_t total, int fraction);

/// Run the benchmark protocol: shuffle the dataset once under the workload
/// seed, slice it by ascending fractions (prefix slices, so smaller slices
/// nest inside larger ones), build a fresh index per slice (excluded from
/// timing), and time every (fraction, pattern, algorithm, repetition)
/// query. Result sets are cross-checked for equality across algorithms per
/// (fraction, pattern); a mismatch throws cross_check_error. `progress`,
/// when set, receives one line per fraction.
std::vector<bench_record> run_bench(std::span<const poi> data,
                                    std::span<const generated_pattern> patterns,
                                    const workload_config& cfg,
                                    void (*progress)(const std::string&) = nullptr);

/// Write records.csv, summary_by_fraction.csv, summary_by_vertices.csv
/// (mean, sample stddev, 95% CI per algorithm group) and ztest.txt (the
/// two-sided Z test over the largest fraction's per-query times).
void emit_results(std::span<const bench_record> records,
                  const std::filesystem::path& out_dir);

/// Allocation tracking behind the global new/delete hooks. Disabled by
/// default; enable() around a region of interest, then read peak() deltas.
namespace memtrack {

void enable();
void disable();
bool enabled();
std::uint64_t current_bytes();
std::uint64_t peak_bytes();
void reset_peak();

} // namespace memtrack

} // namespace qqespm
