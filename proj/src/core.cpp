#include "elb/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace elb {

LpOrder LpOrder::parse(std::string_view text) {
    if (text == "inf" || text == "Inf" || text == "INF" || text == "infinity") {
        return LpOrder::inf();
    }
    int p = 0;
    bool ok = !text.empty();
    for (char c : text) {
        if (c < '0' || c > '9' || p > 1000000) { ok = false; break; }
        p = p * 10 + (c - '0');
    }
    if (!ok || p < 1) {
        throw UsageError("invalid Lp order '" + std::string(text) +
                         "' (expected a positive integer or 'inf')");
    }
    return LpOrder::finite(p);
}

std::string LpOrder::str() const {
    return is_inf() ? "inf" : std::to_string(p_);
}

SubpatternIndex SubpatternIndex::build(const Pattern& pattern) {
    SubpatternIndex idx;
    idx.pos_to_subpattern.reserve(pattern.length());
    idx.starts.reserve(pattern.subpattern_count() + 1);
    idx.starts.push_back(0);
    for (std::size_t k = 0; k < pattern.boundaries.size(); ++k) {
        for (std::size_t j = 0; j < pattern.boundaries[k]; ++j) {
            idx.pos_to_subpattern.push_back(static_cast<std::uint32_t>(k));
        }
        idx.starts.push_back(idx.starts.back() + pattern.boundaries[k]);
    }
    return idx;
}

namespace {

[[noreturn]] void throw_non_finite(std::span<const double> x, std::span<const double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
            throw UsageError("non-finite input to lp_distance at position " +
                             std::to_string(i + 1));
        }
    }
    throw UsageError("non-finite input to lp_distance");
}

} // namespace

double lp_distance(std::span<const double> x, std::span<const double> y, LpOrder p) {
    if (x.size() != y.size()) {
        throw UsageError("lp_distance length mismatch: " + std::to_string(x.size()) +
                         " vs " + std::to_string(y.size()));
    }
    if (x.empty()) throw UsageError("lp_distance requires non-empty sequences");

    const std::size_t n = x.size();
    double result;
    if (p.is_inf()) {
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = std::fabs(x[i] - y[i]);
            if (!(d <= m)) m = d; // also latches NaN
        }
        result = m;
    } else {
        double sum = 0.0;
        switch (p.value()) {
        case 1:
            for (std::size_t i = 0; i < n; ++i) sum += std::fabs(x[i] - y[i]);
            result = sum;
            break;
        case 2:
            for (std::size_t i = 0; i < n; ++i) {
                const double d = x[i] - y[i];
                sum += d * d;
            }
            result = std::sqrt(sum);
            break;
        case 3:
            for (std::size_t i = 0; i < n; ++i) {
                const double d = std::fabs(x[i] - y[i]);
                sum += d * d * d;
            }
            result = std::cbrt(sum);
            break;
        default:
            for (std::size_t i = 0; i < n; ++i) {
                sum += std::pow(std::fabs(x[i] - y[i]), static_cast<double>(p.value()));
            }
            result = std::pow(sum, 1.0 / static_cast<double>(p.value()));
            break;
        }
    }
    // A NaN here means a non-finite element slipped in; a clean overflow of
    // finite inputs legitimately returns +inf.
    if (!std::isfinite(result)) {
        if (std::isnan(result)) throw_non_finite(x, y);
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw_non_finite(x, y);
        }
    }
    return result;
}

bool exact_match(const Pattern& pattern, std::span<const double> window, LpOrder p,
                 std::uint64_t* element_touches) {
    if (window.size() != pattern.length()) {
        throw UsageError("exact_match window length " + std::to_string(window.size()) +
                         " != pattern length " + std::to_string(pattern.length()));
    }
    std::size_t offset = 0;
    for (std::size_t k = 0; k < pattern.subpattern_count(); ++k) {
        const std::size_t len = pattern.boundaries[k];
        const double dist = lp_distance({pattern.values.data() + offset, len},
                                        window.subspan(offset, len), p);
        if (element_touches) *element_touches += len;
        if (!(dist <= pattern.thresholds[k])) return false;
        offset += len;
    }
    return true;
}

double value_range(std::span<const double> segment) {
    if (segment.empty()) throw UsageError("value_range requires a non-empty segment");
    const auto [lo, hi] = std::minmax_element(segment.begin(), segment.end());
    return *hi - *lo;
}

std::vector<std::string> validate_pattern(const Pattern& pattern) {
    std::vector<std::string> errors;
    const std::size_t n = pattern.length();
    const std::size_t b = pattern.subpattern_count();

    if (b < 1) errors.push_back("pattern must have at least one subpattern");
    std::size_t sum = 0;
    for (std::size_t k = 0; k < b; ++k) {
        if (pattern.boundaries[k] < 1) {
            errors.push_back("empty subpattern at k=" + std::to_string(k + 1));
        }
        sum += pattern.boundaries[k];
    }
    if (b >= 1 && sum != n) {
        errors.push_back("boundaries sum " + std::to_string(sum) +
                         " != n=" + std::to_string(n));
    }
    if (pattern.thresholds.size() != b) {
        errors.push_back("threshold count " + std::to_string(pattern.thresholds.size()) +
                         " != subpattern count " + std::to_string(b));
    }
    for (std::size_t k = 0; k < pattern.thresholds.size(); ++k) {
        if (!std::isfinite(pattern.thresholds[k])) {
            errors.push_back("non-finite threshold at k=" + std::to_string(k + 1));
        } else if (pattern.thresholds[k] < 0) {
            errors.push_back("negative threshold at k=" + std::to_string(k + 1));
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(pattern.values[i])) {
            errors.push_back("non-finite value at position " + std::to_string(i + 1));
        }
    }
    if (n == 0) errors.push_back("pattern has no values");
    return errors;
}

void ensure_valid(const Pattern& pattern) {
    const auto errors = validate_pattern(pattern);
    if (errors.empty()) return;
    std::string joined = "invalid pattern:";
    for (const auto& e : errors) joined += "\n  " + e;
    throw UsageError(joined);
}

namespace {

[[noreturn]] void parse_fail(const std::string& source, std::size_t line,
                             const std::string& message) {
    throw DataError(source + ":" + std::to_string(line) + ": " + message);
}

double parse_double(const std::string& token, const std::string& source, std::size_t line) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(token, &used);
    } catch (const std::exception&) {
        parse_fail(source, line, "not a number: '" + token + "'");
    }
    if (used != token.size()) parse_fail(source, line, "trailing junk after number: '" + token + "'");
    return v;
}

} // namespace

Pattern parse_pattern(std::istream& in, const std::string& source_name) {
    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&](const char* what) -> std::string {
        while (std::getline(in, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r") != std::string::npos) return line;
        }
        parse_fail(source_name, line_no + 1, std::string("unexpected end of file, expected ") + what);
    };

    Pattern pattern;
    std::size_t n = 0, b = 0;
    {
        std::istringstream hdr(next_line("'n b' header"));
        if (!(hdr >> n >> b)) parse_fail(source_name, line_no, "expected 'n b' header");
        std::string extra;
        if (hdr >> extra) parse_fail(source_name, line_no, "trailing junk after header");
        if (n < 1 || b < 1) parse_fail(source_name, line_no, "n and b must be >= 1");
    }
    {
        std::istringstream lens(next_line("subpattern lengths"));
        for (std::size_t k = 0; k < b; ++k) {
            long long len = 0;
            if (!(lens >> len) || len < 1) {
                parse_fail(source_name, line_no,
                           "expected " + std::to_string(b) + " positive subpattern lengths");
            }
            pattern.boundaries.push_back(static_cast<std::size_t>(len));
        }
        std::string extra;
        if (lens >> extra) parse_fail(source_name, line_no, "trailing junk after lengths");
    }
    {
        std::istringstream ths(next_line("thresholds"));
        std::string token;
        for (std::size_t k = 0; k < b; ++k) {
            if (!(ths >> token)) {
                parse_fail(source_name, line_no, "expected " + std::to_string(b) + " thresholds");
            }
            pattern.thresholds.push_back(parse_double(token, source_name, line_no));
        }
        std::string extra;
        if (ths >> extra) parse_fail(source_name, line_no, "trailing junk after thresholds");
    }
    pattern.values.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::string value_line = next_line("pattern value");
        std::istringstream vs(value_line);
        std::string token;
        vs >> token;
        std::string extra;
        if (vs >> extra) parse_fail(source_name, line_no, "expected one value per line");
        pattern.values.push_back(parse_double(token, source_name, line_no));
    }
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") != std::string::npos) {
            parse_fail(source_name, line_no, "unexpected content after pattern values");
        }
    }

    const auto errors = validate_pattern(pattern);
    if (!errors.empty()) {
        std::string joined = source_name + ": invalid pattern:";
        for (const auto& e : errors) joined += "\n  " + e;
        throw DataError(joined);
    }
    return pattern;
}

Pattern read_pattern_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open pattern file: " + path);
    return parse_pattern(in, path);
}

void write_pattern_file(const std::string& path, const Pattern& pattern) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write pattern file: " + path);
    out << pattern.length() << ' ' << pattern.subpattern_count() << '\n';
    for (std::size_t k = 0; k < pattern.boundaries.size(); ++k) {
        out << (k ? " " : "") << pattern.boundaries[k];
    }
    out << '\n';
    char buf[40];
    for (std::size_t k = 0; k < pattern.thresholds.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", pattern.thresholds[k]);
        out << (k ? " " : "") << buf;
    }
    out << '\n';
    for (double v : pattern.values) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf << '\n';
    }
    if (!out) throw DataError("write failed: " + path);
}

} // namespace elb
