#include "elb/oracle.hpp"

#include <cmath>

namespace elb {

namespace {

template <class NextFn>
OracleReport scan_impl(const Pattern& pattern, NextFn&& next, LpOrder p) {
    ensure_valid(pattern);
    const std::size_t n = pattern.length();

    OracleReport report;
    SlidingBuffer buffer(n);
    std::uint64_t pos = 0;
    while (auto x = next()) {
        if (!std::isfinite(*x)) {
            throw DataError("non-finite stream element at timestamp " +
                            std::to_string(pos + 1));
        }
        buffer.push(*x);
        ++pos;
        if (pos >= n) {
            const std::uint64_t start = pos - n;
            if (exact_match(pattern, buffer.window(start, n), p, &report.element_touches)) {
                report.matches.push_back(static_cast<std::int64_t>(start) + 1);
            }
        }
    }
    return report;
}

} // namespace

OracleReport sequential_scan(const Pattern& pattern, StreamSource source, LpOrder p) {
    return scan_impl(pattern, [&source] { return source(); }, p);
}

OracleReport sequential_scan(const Pattern& pattern, std::span<const double> stream,
                             LpOrder p) {
    const double* it = stream.data();
    const double* const end = it + stream.size();
    return scan_impl(
        pattern,
        [&]() -> std::optional<double> {
            if (it == end) return std::nullopt;
            return *it++;
        },
        p);
}

} // namespace elb
