#pragma once

#include <atomic>
#include <cstddef>

namespace fglab::memlimit {

// Coarse accounting of stored series terms, gated by FGLAB_MAX_MEMORY_MB.
// Breach raises cap_error so callers can report cap insufficiency cleanly.

void charge_terms(std::ptrdiff_t delta);
std::size_t used_bytes();
std::size_t limit_bytes();  // 0 = unlimited

}  // namespace fglab::memlimit
