#include "qqespm/bench.hpp"

#include <atomic>
#include <cstdlib>
#include <new>

#if __has_include(<malloc.h>)
#include <malloc.h>
#define QQESPM_HAVE_MALLOC_USABLE_SIZE 1
#endif

// Global allocation accounting for the benchmark's best-effort peak-memory
// figures. Counting is off unless memtrack::enable() was called; the hooks
// then track the live byte delta via malloc_usable_size. Without that
// glibc call the counters stay at zero and peak_alloc_bytes reports 0.

namespace qqespm::memtrack {
namespace {

std::atomic<bool> g_enabled{false};
std::atomic<std::int64_t> g_current{0};
std::atomic<std::int64_t> g_peak{0};

inline void account(std::int64_t delta) {
    const std::int64_t now = g_current.fetch_add(delta, std::memory_order_relaxed) + delta;
    if (delta > 0) {
        std::int64_t peak = g_peak.load(std::memory_order_relaxed);
        while (now > peak &&
               !g_peak.compare_exchange_weak(peak, now, std::memory_order_relaxed)) {
        }
    }
}

inline std::size_t usable(void* p) {
#ifdef QQESPM_HAVE_MALLOC_USABLE_SIZE
    return p ? malloc_usable_size(p) : 0;
#else
    (void)p;
    return 0;
#endif
}

} // namespace

void enable() {
    g_enabled.store(true, std::memory_order_relaxed);
}

void disable() {
    g_enabled.store(false, std::memory_order_relaxed);
}

bool enabled() {
    return g_enabled.load(std::memory_order_relaxed);
}

std::uint64_t current_bytes() {
    const std::int64_t v = g_current.load(std::memory_order_relaxed);
    return v > 0 ? static_cast<std::uint64_t>(v) : 0;
}

std::uint64_t peak_bytes() {
    const std::int64_t v = g_peak.load(std::memory_order_relaxed);
    return v > 0 ? static_cast<std::uint64_t>(v) : 0;
}

void reset_peak() {
    g_peak.store(g_current.load(std::memory_order_relaxed), std::memory_order_relaxed);
}

} // namespace qqespm::memtrack

namespace {

void* tracked_alloc(std::size_t size) {
    void* p = std::malloc(size ? size : 1);
    if (!p) throw std::bad_alloc();
    if (qqespm::memtrack::enabled()) {
        qqespm::memtrack::account(static_cast<std::int64_t>(qqespm::memtrack::usable(p)));
    }
    return p;
}

void* tracked_alloc_aligned(std::size_t size, std::size_t alignment) {
    void* p = nullptr;
    if (posix_memalign(&p, alignment, size ? size : alignment) != 0) throw std::bad_alloc();
    if (qqespm::memtrack::enabled()) {
        qqespm::memtrack::account(static_cast<std::int64_t>(qqespm::memtrack::usable(p)));
    }
    return p;
}

void tracked_free(void* p) noexcept {
    if (!p) return;
    if (qqespm::memtrack::enabled()) {
        qqespm::memtrack::account(-static_cast<std::int64_t>(qqespm::memtrack::usable(p)));
    }
    std::free(p);
}

} // namespace

void* operator new(std::size_t size) { return tracked_alloc(size); }
void* operator new[](std::size_t size) { return tracked_alloc(size); }
void* operator new(std::size_t size, std::align_val_t al) {
    return tracked_alloc_aligned(size, static_cast<std::size_t>(al));
}
void* operator new[](std::size_t size, std::align_val_t al) {
    return tracked_alloc_aligned(size, static_cast<std::size_t>(al));
}

void operator delete(void* p) noexcept { tracked_free(p); }
void operator delete[](void* p) noexcept { tracked_free(p); }
void operator delete(void* p, std::size_t) noexcept { tracked_free(p); }
void operator delete[](void* p, std::size_t) noexcept { tracked_free(p); }
void operator delete(void* p, std::align_val_t) noexcept { tracked_free(p); }
void operator delete[](void* p, std::align_val_t) noexcept { tracked_free(p); }
void operator delete(void* p, std::size_t, std::align_val_t) noexcept { tracked_free(p); }
void operator delete[](void* p, std::size_t, std::align_val_t) noexcept { tracked_free(p); }
