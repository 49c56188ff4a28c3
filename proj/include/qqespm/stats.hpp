#pragma once

#include <cstddef>
#include <span>

namespace qqespm {

struct summary_stats {
    std::size_t n = 0;
    double mean = 0.0;
    double stddev = 0.0; // sample standard deviation (n-1)
    double ci95_low = 0.0;
    double ci95_high = 0.0;
};

summary_stats summarize(std::span<const double> values);

struct z_test_result {
    double z = 0.0;
    double p_value = 1.0; // two-sided
    std::size_t n_a = 0;
    std::size_t n_b = 0;
    bool small_sample_warning = false; // either sample below 30
};

/// Two-sample Z test on means with sample standard deviations. Throws
/// std::invalid_argument on an empty sample; samples below 30 are computed
/// anyway but flagged.
z_test_result z_test_means(std::span<const double> sample_a, std::span<const double> sample_b);

} // namespace qqespm
