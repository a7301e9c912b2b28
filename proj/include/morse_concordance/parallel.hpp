#pragma once

#include <cstddef>
#include <functional>

namespace morse_concordance {

/// Worker cap from MORSE_CONCORDANCE_THREADS: 0 means sequential; unset or
/// unparsable falls back to the hardware concurrency.
unsigned thread_count();

/// Calls body(i) for i in [0, count) on up to thread_count() threads. Every
/// index runs exactly once; callers write results into per-index slots so the
/// outcome does not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace morse_concordance
