#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "elb/datagen.hpp"
#include "elb/envelope.hpp"
#include "elb/matcher.hpp"
#include "elb/stream.hpp"

namespace elb {

/// Round-trippable text form of a double.
std::string format_double(double value);

/**
 * Stream file format: UTF-8 text, one real value per line; the line number
 * is the element's 1-based timestamp. Parse errors throw DataError with
 * the line number.
 */
StreamSource open_stream_file(const std::string& path);
std::vector<double> read_stream_file(const std::string& path);
void write_stream_file(const std::string& path, std::span<const double> values);

/// Match CSV: header `match_start`, one 1-based timestamp per row.
void write_match_csv(const std::string& path, std::span<const std::int64_t> matches);

/// Stats CSV: one row with the six counters plus pruning_power ("na" if undefined).
void write_stats_csv(const std::string& path, const MatchReport& report);

/// Embed log CSV: header `embed_start`, one 1-based site per row.
void write_embed_csv(const std::string& path, const EmbedLog& log);

/// Envelope CSV: header `index,upper,lower`, 1-based indices, defined positions only.
void write_envelope_csv(const std::string& path, const Envelope& envelope);

/// Generation provenance, written next to the stream it describes.
struct SidecarInfo {
    std::uint64_t seed = 0;
    double base = 0.0;
    std::size_t length = 0;
    double occurrence_probability = 0.0;
    double noise_amplitude = 0.0;
    std::string p;
    std::optional<double> threshold_ratio;
    std::string generator = kGeneratorName;
    std::string pattern_file;
    std::size_t pattern_n = 0;
    std::size_t pattern_b = 0;
    std::uint64_t embedded_count = 0;
};

void write_sidecar_json(const std::string& path, const SidecarInfo& info);

} // namespace elb
