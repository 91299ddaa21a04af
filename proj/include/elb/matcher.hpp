#pragma once

#include <cassert>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "elb/core.hpp"
#include "elb/envelope.hpp"
#include "elb/stream.hpp"

namespace elb {

struct MatcherConfig {
    Pattern pattern;
    LpOrder p = LpOrder::finite(2);
    ElbVariant variant = ElbVariant::seq;
    std::size_t block_width = 1;
};

/**
 * Ring of the most recent block features, addressed by global block id.
 * Block g covers stream positions [g*w, (g+1)*w); because group anchors
 * advance in steps of exactly w, block j of anchor t is block j+1 of
 * anchor t-w and the stored feature is reused as-is.
 */
class FeatureQueue {
public:
    explicit FeatureQueue(std::size_t capacity) : ring_(capacity) { assert(capacity > 0); }

    /// Appends the feature of block id next_block_id(), evicting the oldest.
    void push(double feature) {
        ring_[static_cast<std::size_t>(next_id_ % ring_.size())] = feature;
        ++next_id_;
    }

    double at(std::uint64_t block_id) const {
        assert(block_id < next_id_);
        assert(block_id + ring_.size() >= next_id_);
        return ring_[static_cast<std::size_t>(block_id % ring_.size())];
    }

    std::uint64_t next_block_id() const { return next_id_; }
    std::size_t capacity() const { return ring_.size(); }

private:
    std::vector<double> ring_;
    std::uint64_t next_id_ = 0;
};

struct MatchStats {
    std::uint64_t windows_total = 0;
    std::uint64_t windows_pruned = 0;
    std::uint64_t candidates_verified = 0;
    std::uint64_t block_checks = 0;
    std::uint64_t element_touches_pruning = 0;
    std::uint64_t element_touches_verify = 0;
};

struct MatchReport {
    std::vector<std::int64_t> matches; // 1-based window start timestamps, ascending
    MatchStats stats;
    std::uint64_t verify_time_ns = 0; // time spent in exact verification (informational)
};

/// Block feature for the element variant: the block's last value.
double feature_ele(std::span<const double> block_values, std::size_t w);

/// Block feature for the subsequence variant: the block's mean.
double feature_seq(std::span<const double> block_values, std::size_t w);

struct PruneOutcome {
    std::optional<std::size_t> failing_block; // 0-based; nullopt means the group passes
    std::uint32_t checks = 0;
};

/**
 * Checks the group's block features against the pattern block bounds in
 * ascending block order, stopping at the first active block whose feature
 * falls outside its interval. A failure licenses skipping the whole group
 * of w consecutive windows.
 */
PruneOutcome prune_group(std::span<const double> features, const BlockBounds& bounds);

/// Same check reading features from the queue; block j uses id anchor_block + j.
PruneOutcome prune_group(const FeatureQueue& features, std::uint64_t anchor_block,
                         const BlockBounds& bounds);

/**
 * Streaming matcher: builds the pattern block bounds once, then processes a
 * stream in groups of w windows, verifying only groups that survive the
 * block-bound check. Memory stays O(n + N) regardless of stream length.
 * Matches and counters are identical to a sequential scan of every window.
 */
class Matcher {
public:
    explicit Matcher(MatcherConfig config);

    /// Single-threaded over one stream; safe to call from any one thread at a time.
    MatchReport process(StreamSource source) const;

    /// In-memory fast path; same loop and results as the source overload.
    MatchReport process(std::span<const double> stream) const;

    const BlockBounds& bounds() const { return bounds_; }
    const MatcherConfig& config() const { return config_; }

private:
    template <class NextFn>
    MatchReport process_impl(NextFn&& next) const;

    MatcherConfig config_;
    BlockBounds bounds_;
};

inline MatchReport process_stream(MatcherConfig config, StreamSource source) {
    return Matcher(std::move(config)).process(std::move(source));
}

/// windows_pruned / windows_total; nullopt when no window ever fit the stream.
std::optional<double> pruning_power(const MatchReport& report);

} // namespace elb
