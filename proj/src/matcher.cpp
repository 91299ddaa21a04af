#include "elb/matcher.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace elb {

double feature_ele(std::span<const double> block_values, std::size_t w) {
    if (block_values.size() != w || w == 0) {
        throw UsageError("feature_ele expects exactly " + std::to_string(w) +
                         " values, got " + std::to_string(block_values.size()));
    }
    return block_values.back();
}

double feature_seq(std::span<const double> block_values, std::size_t w) {
    if (block_values.size() != w || w == 0) {
        throw UsageError("feature_seq expects exactly " + std::to_string(w) +
                         " values, got " + std::to_string(block_values.size()));
    }
    // Left-to-right summation, matching the matcher's incremental path bit for bit.
    double sum = 0.0;
    for (double v : block_values) sum += v;
    return sum / static_cast<double>(w);
}

namespace {

template <class FeatureAt>
PruneOutcome prune_group_impl(FeatureAt&& feature_at, const BlockBounds& bounds) {
    PruneOutcome outcome;
    const std::size_t num_blocks = bounds.block_count();
    for (std::size_t j = bounds.first_active; j < num_blocks; ++j) {
        const double f = feature_at(j);
        ++outcome.checks;
        if (f < bounds.lower[j] || f > bounds.upper[j]) {
            outcome.failing_block = j;
            break;
        }
    }
    return outcome;
}

} // namespace

PruneOutcome prune_group(std::span<const double> features, const BlockBounds& bounds) {
    if (features.size() != bounds.block_count()) {
        throw UsageError("feature count " + std::to_string(features.size()) +
                         " != block count " + std::to_string(bounds.block_count()));
    }
    return prune_group_impl([&](std::size_t j) { return features[j]; }, bounds);
}

PruneOutcome prune_group(const FeatureQueue& features, std::uint64_t anchor_block,
                         const BlockBounds& bounds) {
    return prune_group_impl([&](std::size_t j) { return features.at(anchor_block + j); },
                            bounds);
}

Matcher::Matcher(MatcherConfig config) : config_(std::move(config)) {
    ensure_valid(config_.pattern);
    const std::size_t n = config_.pattern.length();
    if (config_.block_width < 1 || config_.block_width > n) {
        throw UsageError("block width " + std::to_string(config_.block_width) +
                         " out of range [1, " + std::to_string(n) + "]");
    }
    const Envelope envelope =
        config_.variant == ElbVariant::ele
            ? build_envelope_ele(config_.pattern)
            : build_envelope_seq(config_.pattern, config_.block_width, config_.p);
    bounds_ = block_bounds(envelope, config_.block_width, n);
}

template <class NextFn>
MatchReport Matcher::process_impl(NextFn&& next) const {
    const std::size_t n = config_.pattern.length();
    const std::size_t w = config_.block_width;
    const bool seq = config_.variant == ElbVariant::seq;
    const double dw = static_cast<double>(w);

    MatchReport report;
    SlidingBuffer buffer(n + w - 1);
    FeatureQueue features(bounds_.block_count() + 2);
    double block_sum = 0.0;  // seq: partial sum of the block being filled
    double block_last = 0.0; // ele: last value seen in the block being filled
    std::size_t in_block = 0;
    std::uint64_t pos = 0;    // elements consumed
    std::uint64_t anchor = 0; // absolute 0-based start of the next group

    auto handle_group = [&]() {
        // Windows of this group whose full n elements exist.
        const std::size_t fitting =
            static_cast<std::size_t>(std::min<std::uint64_t>(w, pos - n - anchor + 1));
        const PruneOutcome outcome = prune_group(features, anchor / w, bounds_);
        report.stats.block_checks += outcome.checks;
        if (outcome.failing_block) {
            report.stats.windows_pruned += fitting;
        } else {
            const auto t0 = std::chrono::steady_clock::now();
            for (std::size_t i = 0; i < fitting; ++i) {
                const std::uint64_t start = anchor + i;
                ++report.stats.candidates_verified;
                if (exact_match(config_.pattern, buffer.window(start, n), config_.p,
                                &report.stats.element_touches_verify)) {
                    report.matches.push_back(static_cast<std::int64_t>(start) + 1);
                }
            }
            report.verify_time_ns += static_cast<std::uint64_t>(
                std::chrono::duration_cast<std::chrono::nanoseconds>(
                    std::chrono::steady_clock::now() - t0)
                    .count());
        }
        anchor += w;
    };

    while (auto x = next()) {
        const double value = *x;
        if (!std::isfinite(value)) {
            throw DataError("non-finite stream element at timestamp " +
                            std::to_string(pos + 1));
        }
        buffer.push(value);
        if (seq) {
            block_sum += value;
            ++report.stats.element_touches_pruning;
        } else {
            block_last = value;
        }
        if (++in_block == w) {
            if (seq) {
                features.push(block_sum / dw);
                block_sum = 0.0;
            } else {
                features.push(block_last);
                ++report.stats.element_touches_pruning;
            }
            in_block = 0;
        }
        ++pos;
        // All data for the pending group (its w windows) is now buffered.
        if (pos >= anchor + n + w - 1) handle_group();
    }
    // Stream ended: remaining groups whose anchor window still fits.
    while (anchor + n <= pos) handle_group();

    report.stats.windows_total = pos >= n ? pos - n + 1 : 0;
    return report;
}

MatchReport Matcher::process(StreamSource source) const {
    return process_impl([&source] { return source(); });
}

MatchReport Matcher::process(std::span<const double> stream) const {
    const double* it = stream.data();
    const double* const end = it + stream.size();
    return process_impl([&]() -> std::optional<double> {
        if (it == end) return std::nullopt;
        return *it++;
    });
}

std::optional<double> pruning_power(const MatchReport& report) {
    if (report.stats.windows_total == 0) return std::nullopt;
    return static_cast<double>(report.stats.windows_pruned) /
           static_cast<double>(report.stats.windows_total);
}

} // namespace elb
