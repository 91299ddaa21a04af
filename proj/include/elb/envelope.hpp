#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "elb/core.hpp"

namespace elb {

/// Which equal-length-block bound construction is in use.
enum class ElbVariant { ele, seq };

std::string to_string(ElbVariant variant);

/**
 * Per-position envelope of a pattern: lower[i] <= upper[i] wherever defined.
 * Positions are 0-based; entries before `first_valid` are NaN (the seq
 * envelope is only defined once a full block width of pattern values exists).
 */
struct Envelope {
    std::vector<double> upper;
    std::vector<double> lower;
    std::size_t first_valid = 0;
    ElbVariant variant = ElbVariant::ele;
    std::optional<std::size_t> block_width; // set for seq
};

/**
 * Per-block interval bounds derived from an envelope. Block j (0-based)
 * covers pattern positions [j*w, (j+1)*w); the trailing n mod w positions
 * belong to no block. Blocks before `first_active` never prune (the seq
 * envelope has no valid indices inside block 0) and hold NaN bounds.
 */
struct BlockBounds {
    std::vector<double> upper;
    std::vector<double> lower;
    std::size_t block_width = 0;
    std::size_t first_active = 0;
    ElbVariant variant = ElbVariant::ele;

    std::size_t block_count() const { return upper.size(); }
};

/// O(1) range sums/means over a fixed sequence.
class PrefixMeans {
public:
    explicit PrefixMeans(std::span<const double> values);

    /// prefix(i) = sum of the first i values; prefix(0) = 0.
    double prefix(std::size_t i) const { return prefix_[i]; }

    /// Sum over 0-based half-open range [first, last).
    double sum(std::size_t first, std::size_t last) const {
        return prefix_[last] - prefix_[first];
    }

    double mean(std::size_t first, std::size_t last) const {
        return sum(first, last) / static_cast<double>(last - first);
    }

    std::size_t size() const { return prefix_.size() - 1; }

private:
    std::vector<double> prefix_;
};

/**
 * Element envelope: upper[i] = p_i + eps_k(i), lower[i] = p_i - eps_k(i).
 * A window element outside this band rules out a match for any Lp order,
 * so one envelope serves every norm.
 */
Envelope build_envelope_ele(const Pattern& pattern);

/**
 * Slack for the block-mean bound at 0-based position `last_pos`, covering
 * the w pattern values ending there. For finite p this is
 * ((1/w) * sum of eps_k^p over subpatterns overlapping the range)^(1/p);
 * for p = inf it is the mean of the per-element thresholds over the range,
 * the tightest bound the elementwise constraints give.
 */
double theta_seq(const Pattern& pattern, std::size_t last_pos, std::size_t w, LpOrder p);

/**
 * Mean envelope: upper[i] = mean(P[i-w+1 : i]) + theta, defined for
 * positions with a full w-length prefix (first_valid = w-1).
 */
Envelope build_envelope_seq(const Pattern& pattern, std::size_t w, LpOrder p);

/**
 * Block bounds from an envelope: upper bound of block j is the max of the
 * envelope's upper line over the block's positions, lower bound the min of
 * its lower line. For seq envelopes block 0 is inactive.
 */
BlockBounds block_bounds(const Envelope& envelope, std::size_t w, std::size_t n);

} // namespace elb
