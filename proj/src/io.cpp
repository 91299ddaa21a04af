#include "elb/io.hpp"

#include <cstdio>
#include <fstream>
#include <memory>

#include "json.hpp"

namespace elb {

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

namespace {

bool blank(const std::string& line) {
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    return out;
}

void finish(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw DataError("write failed: " + path);
}

} // namespace

StreamSource open_stream_file(const std::string& path) {
    auto in = std::make_shared<std::ifstream>(path);
    if (!*in) throw DataError("cannot open stream file: " + path);
    auto line_no = std::make_shared<std::size_t>(0);
    return [in, line_no, path]() -> std::optional<double> {
        std::string line;
        while (std::getline(*in, line)) {
            ++*line_no;
            if (blank(line)) {
                // Tolerated only as trailing filler; a value after it would
                // shift every later timestamp.
                while (std::getline(*in, line)) {
                    ++*line_no;
                    if (!blank(line)) {
                        throw DataError(path + ":" + std::to_string(*line_no) +
                                        ": value after blank line breaks timestamping");
                    }
                }
                return std::nullopt;
            }
            std::size_t used = 0;
            double v = 0;
            try {
                v = std::stod(line, &used);
            } catch (const std::exception&) {
                throw DataError(path + ":" + std::to_string(*line_no) +
                                ": not a number: '" + line + "'");
            }
            if (line.find_first_not_of(" \t\r", used) != std::string::npos) {
                throw DataError(path + ":" + std::to_string(*line_no) +
                                ": trailing junk after value");
            }
            return v;
        }
        return std::nullopt;
    };
}

std::vector<double> read_stream_file(const std::string& path) {
    auto source = open_stream_file(path);
    std::vector<double> values;
    while (auto x = source()) values.push_back(*x);
    return values;
}

void write_stream_file(const std::string& path, std::span<const double> values) {
    auto out = open_out(path);
    char buf[40];
    for (double v : values) {
        std::snprintf(buf, sizeof buf, "%.17g\n", v);
        out << buf;
    }
    finish(out, path);
}

void write_match_csv(const std::string& path, std::span<const std::int64_t> matches) {
    auto out = open_out(path);
    out << "match_start\n";
    for (std::int64_t t : matches) out << t << '\n';
    finish(out, path);
}

void write_stats_csv(const std::string& path, const MatchReport& report) {
    auto out = open_out(path);
    out << "windows_total,windows_pruned,candidates_verified,block_checks,"
           "element_touches_pruning,element_touches_verify,pruning_power\n";
    const auto& s = report.stats;
    out << s.windows_total << ',' << s.windows_pruned << ',' << s.candidates_verified
        << ',' << s.block_checks << ',' << s.element_touches_pruning << ','
        << s.element_touches_verify << ',';
    if (const auto power = pruning_power(report)) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.9g", *power);
        out << buf;
    } else {
        out << "na";
    }
    out << '\n';
    finish(out, path);
}

void write_embed_csv(const std::string& path, const EmbedLog& log) {
    auto out = open_out(path);
    out << "embed_start\n";
    for (std::int64_t t : log.sites) out << t << '\n';
    finish(out, path);
}

void write_envelope_csv(const std::string& path, const Envelope& envelope) {
    auto out = open_out(path);
    out << "index,upper,lower\n";
    for (std::size_t i = envelope.first_valid; i < envelope.upper.size(); ++i) {
        out << (i + 1) << ',' << format_double(envelope.upper[i]) << ','
            << format_double(envelope.lower[i]) << '\n';
    }
    finish(out, path);
}

void write_sidecar_json(const std::string& path, const SidecarInfo& info) {
    nlohmann::json j;
    j["seed"] = info.seed;
    j["base"] = info.base;
    j["length"] = info.length;
    j["occurrence_probability"] = info.occurrence_probability;
    j["noise_amplitude"] = info.noise_amplitude;
    j["p"] = info.p;
    if (info.threshold_ratio) j["threshold_ratio"] = *info.threshold_ratio;
    j["generator"] = info.generator;
    j["pattern_file"] = info.pattern_file;
    j["pattern_n"] = info.pattern_n;
    j["pattern_b"] = info.pattern_b;
    j["embedded_count"] = info.embedded_count;
    auto out = open_out(path);
    out << j.dump(2) << '\n';
    finish(out, path);
}

} // namespace elb
