#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "elb/core.hpp"

namespace elb {

/// Synthetic stream recipe. `base` is the walk's starting level R.
struct GenConfig {
    std::size_t length = 0;
    std::uint64_t seed = 0;
    double base = 0.0;
    double occurrence_probability = 0.0;
    double noise_amplitude = 0.0; // uniform noise added to embedded copies; 0 = exact copies
};

/// Where pattern copies were written. Sites are 1-based and pairwise >= n apart.
struct EmbedLog {
    std::vector<std::int64_t> sites;
};

/// Name of the pinned generator algorithm, recorded in sidecar metadata so
/// streams are reproducible independent of the standard library in use.
inline constexpr const char* kGeneratorName = "mt19937_64/53-bit";

/// Uniform draw in [0, 1) from the top 53 bits of a 64-bit state word.
inline double uniform01(std::uint64_t word) {
    return static_cast<double>(word >> 11) * 0x1.0p-53;
}

/**
 * Random walk s_i = base + sum_{j<=i} (u_j - 0.5) with u_j uniform in [0, 1).
 * Deterministic for a fixed seed.
 */
std::vector<double> random_walk(std::size_t length, std::uint64_t seed, double base);

/**
 * Walks every eligible start timestamp, embedding a copy of
 * `pattern_values` there with probability `occurrence_probability`;
 * starts that would overlap an already placed copy are rejected. With a
 * non-zero noise amplitude each copied element is shifted by an
 * independent uniform draw in [-amplitude, amplitude].
 *
 * Throws DataError when probability * pattern length > 1 (non-overlapping
 * placement is saturated) and UsageError when the pattern does not fit.
 */
EmbedLog embed_pattern(std::vector<double>& stream, std::span<const double> pattern_values,
                       double occurrence_probability, std::uint64_t seed,
                       double noise_amplitude = 0.0);

struct GenResult {
    std::vector<double> stream;
    EmbedLog log;
};

/// random_walk followed by embed_pattern; the embed draws use seed + 1 so
/// the walk is identical across different occurrence probabilities.
GenResult generate(const GenConfig& config, std::span<const double> pattern_values);

/**
 * Per-subpattern thresholds from a target ratio:
 * eps_k = |P_k|^(1/p) * threshold_ratio * value_range(P_k), with the
 * length factor taken as 1 for p = inf. A constant subpattern yields 0.
 */
std::vector<double> derive_thresholds(std::span<const double> values,
                                      std::span<const std::size_t> boundaries,
                                      double threshold_ratio, LpOrder p);

/// derive_thresholds applied to a pattern's own values and boundaries.
std::vector<double> derive_thresholds(const Pattern& pattern, double threshold_ratio,
                                      LpOrder p);

} // namespace elb
