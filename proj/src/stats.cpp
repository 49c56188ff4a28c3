#include "qqespm/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace qqespm {
namespace {

double mean_of(std::span<const double> values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

double sample_stddev(std::span<const double> values, double mean) {
    if (values.size() < 2) return 0.0;
    double sum = 0.0;
    for (double v : values) sum += (v - mean) * (v - mean);
    return std::sqrt(sum / static_cast<double>(values.size() - 1));
}

} // namespace

summary_stats summarize(std::span<const double> values) {
    summary_stats s;
    s.n = values.size();
    if (values.empty()) return s;
    s.mean = mean_of(values);
    s.stddev = sample_stddev(values, s.mean);
    const double half = 1.959963984540054 * s.stddev / std::sqrt(static_cast<double>(s.n));
    s.ci95_low = s.mean - half;
    s.ci95_high = s.mean + half;
    return s;
}

z_test_result z_test_means(std::span<const double> sample_a,
                           std::span<const double> sample_b) {
    if (sample_a.empty() || sample_b.empty()) {
        throw std::invalid_argument("z_test_means: empty sample");
    }
    z_test_result r;
    r.n_a = sample_a.size();
    r.n_b = sample_b.size();
    r.small_sample_warning = r.n_a < 30 || r.n_b < 30;

    const double mean_a = mean_of(sample_a);
    const double mean_b = mean_of(sample_b);
    const double sd_a = sample_stddev(sample_a, mean_a);
    const double sd_b = sample_stddev(sample_b, mean_b);
    const double variance = sd_a * sd_a / static_cast<double>(r.n_a) +
                            sd_b * sd_b / static_cast<double>(r.n_b);
    const double diff = mean_a - mean_b;
    if (diff == 0.0) {
        r.z = 0.0;
    } else if (variance == 0.0) {
        r.z = diff > 0 ? std::numeric_limits<double>::infinity()
                       : -std::numeric_limits<double>::infinity();
    } else {
        r.z = diff / std::sqrt(variance);
    }
    r.p_value = std::isinf(r.z) ? 0.0 : std::erfc(std::fabs(r.z) / std::sqrt(2.0));
    return r;
}

} // namespace qqespm
