#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "elb/error.hpp"

namespace elb {

/// Norm order p: a finite integer >= 1 or infinity.
class LpOrder {
public:
    static LpOrder finite(int p) {
        if (p < 1) throw UsageError("Lp order must be >= 1, got " + std::to_string(p));
        return LpOrder(p);
    }
    static LpOrder inf() { return LpOrder(kInf); }

    bool is_inf() const { return p_ == kInf; }

    /// Finite order value. Only valid when !is_inf().
    int value() const { return p_; }

    /// Accepts a positive integer ("1", "2", ...) or "inf".
    static LpOrder parse(std::string_view text);
    std::string str() const;

    friend bool operator==(LpOrder a, LpOrder b) { return a.p_ == b.p_; }
    friend bool operator!=(LpOrder a, LpOrder b) { return a.p_ != b.p_; }

private:
    explicit LpOrder(int p) : p_(p) {}
    static constexpr int kInf = -1;
    int p_;
};

/**
 * A pattern of n values split into b consecutive subpatterns, each with its
 * own matching threshold. `boundaries[k]` is the length of subpattern k,
 * `thresholds[k]` its tolerance; boundary lengths sum to values.size().
 */
struct Pattern {
    std::vector<double> values;
    std::vector<std::size_t> boundaries;
    std::vector<double> thresholds;

    std::size_t length() const { return values.size(); }
    std::size_t subpattern_count() const { return boundaries.size(); }
};

/// A sliding window over the stream: 1-based start timestamp plus its n elements.
struct WindowView {
    std::int64_t start = 0;
    std::span<const double> values;
};

/// Precomputed alignment of pattern positions to subpatterns (all 0-based).
struct SubpatternIndex {
    std::vector<std::uint32_t> pos_to_subpattern; // size n
    std::vector<std::size_t> starts;              // size b+1, subpattern k spans [starts[k], starts[k+1])

    static SubpatternIndex build(const Pattern& pattern);

    std::size_t subpattern_length(std::size_t k) const { return starts[k + 1] - starts[k]; }
};

/**
 * Lp distance between two equal-length sequences: (sum |x_i-y_i|^p)^(1/p)
 * for finite p, max |x_i-y_i| for p = inf.
 *
 * Returns +inf if the accumulation overflows double range for finite inputs.
 * Throws UsageError on length mismatch, empty input, or non-finite input.
 */
double lp_distance(std::span<const double> x, std::span<const double> y, LpOrder p);

/**
 * True iff every subpattern of `pattern` is within its threshold of the
 * aligned window slice. Subpatterns are checked left to right with early
 * exit on the first violation; the result is the same either way.
 *
 * If `element_touches` is non-null, it is incremented by the number of
 * element pairs compared.
 */
bool exact_match(const Pattern& pattern, std::span<const double> window, LpOrder p,
                 std::uint64_t* element_touches = nullptr);

inline bool exact_match(const Pattern& pattern, const WindowView& window, LpOrder p) {
    return exact_match(pattern, window.values, p);
}

/// max - min of a non-empty segment.
double value_range(std::span<const double> segment);

/// All invariant violations of `pattern`, each with index context. Empty means valid.
std::vector<std::string> validate_pattern(const Pattern& pattern);

/// Throws UsageError listing every violation; no-op for a valid pattern.
void ensure_valid(const Pattern& pattern);

/**
 * Pattern file format (UTF-8 text):
 *   line 1:      n b
 *   line 2:      b space-separated subpattern lengths
 *   line 3:      b space-separated thresholds
 *   line 4..n+3: one pattern value per line
 * Parse errors throw DataError with the offending line number.
 */
Pattern parse_pattern(std::istream& in, const std::string& source_name = "<pattern>");
Pattern read_pattern_file(const std::string& path);
void write_pattern_file(const std::string& path, const Pattern& pattern);

} // namespace elb
