#pragma once

#include <cstdint>
#include <vector>

#include "elb/core.hpp"
#include "elb/stream.hpp"

namespace elb {

struct OracleReport {
    std::vector<std::int64_t> matches; // 1-based window start timestamps, ascending
    std::uint64_t element_touches = 0;
};

/**
 * Brute-force sequential scan: verifies every sliding window with
 * exact_match and no pruning of any kind. The correctness baseline every
 * matcher result is compared against.
 */
OracleReport sequential_scan(const Pattern& pattern, StreamSource source, LpOrder p);

/// In-memory fast path; same loop and results as the source overload.
OracleReport sequential_scan(const Pattern& pattern, std::span<const double> stream,
                             LpOrder p);

} // namespace elb
