#pragma once

#include <cstdint>
#include <iosfwd>

#include <json.hpp>

namespace morse_concordance::cli {

/// Runs one morsec invocation. Returns the process exit code: 0 on success or
/// a computed verdict, 1 on a validation or verdict-level failure, 2 on a
/// parse or usage error. JSON mode writes exactly one document to out.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct FuzzSummary {
  std::int64_t samples = 0;
  std::int64_t violations = 0;
  nlohmann::json document;
};

/// Property suite over random diagrams of dimension n, deterministic in
/// (n, samples, seed, budget) whatever the thread count.
FuzzSummary fuzz_diagrams(int n, std::int64_t samples, std::uint64_t seed, int budget);

}  // namespace morse_concordance::cli
