#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace qqespm {

/// Seeded RNG with hand-rolled draws. std::uniform_real_distribution is
/// implementation-defined, so benchmark workloads would not reproduce
/// across standard libraries; these draws are pinned to mt19937_64 output.
class split_rng {
public:
    explicit split_rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() / n * n;
        std::uint64_t x = engine_();
        while (x >= limit) x = engine_();
        return x % n;
    }

    bool chance(double probability) { return uniform01() < probability; }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::swap(items[i - 1], items[below(i)]);
        }
    }

    /// Independent stream for a sub-task, decorrelated from this one.
    split_rng fork(std::uint64_t salt) {
        return split_rng(engine_() ^ (salt * 0x9e3779b97f4a7c15ULL));
    }

private:
    std::mt19937_64 engine_;
};

} // namespace qqespm
