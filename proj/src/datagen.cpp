#include "elb/datagen.hpp"

#include <cmath>
#include <random>

namespace elb {

std::vector<double> random_walk(std::size_t length, std::uint64_t seed, double base) {
    if (length < 1) throw UsageError("random_walk length must be >= 1");
    std::mt19937_64 rng(seed);
    std::vector<double> out(length);
    double level = base;
    for (std::size_t i = 0; i < length; ++i) {
        level += uniform01(rng()) - 0.5;
        out[i] = level;
    }
    return out;
}

EmbedLog embed_pattern(std::vector<double>& stream, std::span<const double> pattern_values,
                       double occurrence_probability, std::uint64_t seed,
                       double noise_amplitude) {
    const std::size_t n = pattern_values.size();
    if (n == 0 || n > stream.size()) {
        throw UsageError("pattern of length " + std::to_string(n) +
                         " does not fit in stream of length " + std::to_string(stream.size()));
    }
    if (!(occurrence_probability >= 0.0) || occurrence_probability > 1.0) {
        throw UsageError("occurrence probability must be in [0, 1]");
    }
    if (occurrence_probability * static_cast<double>(n) > 1.0) {
        throw DataError("occurrence probability " + std::to_string(occurrence_probability) +
                        " saturates non-overlapping placement for pattern length " +
                        std::to_string(n));
    }

    std::mt19937_64 rng(seed);
    EmbedLog log;
    std::size_t next_free = 0;
    for (std::size_t t = 0; t + n <= stream.size(); ++t) {
        if (uniform01(rng()) >= occurrence_probability) continue;
        if (t < next_free) continue; // would overlap the previous copy
        for (std::size_t i = 0; i < n; ++i) {
            double v = pattern_values[i];
            if (noise_amplitude != 0.0) {
                v += (2.0 * uniform01(rng()) - 1.0) * noise_amplitude;
            }
            stream[t + i] = v;
        }
        log.sites.push_back(static_cast<std::int64_t>(t) + 1);
        next_free = t + n;
    }
    return log;
}

GenResult generate(const GenConfig& config, std::span<const double> pattern_values) {
    GenResult result;
    result.stream = random_walk(config.length, config.seed, config.base);
    result.log = embed_pattern(result.stream, pattern_values,
                               config.occurrence_probability, config.seed + 1,
                               config.noise_amplitude);
    return result;
}

std::vector<double> derive_thresholds(std::span<const double> values,
                                      std::span<const std::size_t> boundaries,
                                      double threshold_ratio, LpOrder p) {
    if (!(threshold_ratio > 0.0) || !std::isfinite(threshold_ratio)) {
        throw UsageError("threshold ratio must be > 0");
    }
    std::vector<double> thresholds;
    thresholds.reserve(boundaries.size());
    std::size_t offset = 0;
    for (std::size_t len : boundaries) {
        if (len < 1 || offset + len > values.size()) {
            throw UsageError("boundaries do not partition the values");
        }
        const double range = value_range(values.subspan(offset, len));
        const double length_factor =
            p.is_inf() ? 1.0
                       : std::pow(static_cast<double>(len),
                                  1.0 / static_cast<double>(p.value()));
        thresholds.push_back(length_factor * threshold_ratio * range);
        offset += len;
    }
    if (offset != values.size()) throw UsageError("boundaries do not partition the values");
    return thresholds;
}

std::vector<double> derive_thresholds(const Pattern& pattern, double threshold_ratio,
                                      LpOrder p) {
    return derive_thresholds(pattern.values, pattern.boundaries, threshold_ratio, p);
}

} // namespace elb
