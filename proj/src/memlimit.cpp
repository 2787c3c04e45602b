#include "fglab/memlimit.hpp"

#include <cstdlib>

#include "fglab/errors.hpp"

namespace fglab::memlimit {

namespace {

// Rough cost of one sparse term (exponent key + GMP rational).
constexpr std::size_t kBytesPerTerm = 96;

std::atomic<std::size_t> g_terms{0};

std::size_t read_limit() {
    const char* env = std::getenv("FGLAB_MAX_MEMORY_MB");
    if (!env) return 0;
    long mb = std::strtol(env, nullptr, 10);
    if (mb <= 0) return 0;
    return static_cast<std::size_t>(mb) * 1024 * 1024;
}

}  // namespace

void charge_terms(std::ptrdiff_t delta) {
    std::size_t now;
    if (delta >= 0)
        now = g_terms.fetch_add(static_cast<std::size_t>(delta)) + static_cast<std::size_t>(delta);
    else
        now = g_terms.fetch_sub(static_cast<std::size_t>(-delta)) - static_cast<std::size_t>(-delta);
    static const std::size_t limit = read_limit();
    if (limit != 0 && now * kBytesPerTerm > limit)
        throw cap_error("series storage exceeded FGLAB_MAX_MEMORY_MB");
}

std::size_t used_bytes() { return g_terms.load() * kBytesPerTerm; }

std::size_t limit_bytes() {
    static const std::size_t limit = read_limit();
    return limit;
}

}  // namespace fglab::memlimit
