#include "elb/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace elb {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double root_p(double x, int p) {
    switch (p) {
    case 1: return x;
    case 2: return std::sqrt(x);
    case 3: return std::cbrt(x);
    default: return std::pow(x, 1.0 / static_cast<double>(p));
    }
}

double pow_p(double x, int p) {
    switch (p) {
    case 1: return x;
    case 2: return x * x;
    case 3: return x * x * x;
    default: return std::pow(x, static_cast<double>(p));
    }
}

void check_block_width(std::size_t w, std::size_t n) {
    if (w < 1 || w > n) {
        throw UsageError("block width " + std::to_string(w) +
                         " out of range [1, " + std::to_string(n) + "]");
    }
}

} // namespace

std::string to_string(ElbVariant variant) {
    return variant == ElbVariant::ele ? "ele" : "seq";
}

PrefixMeans::PrefixMeans(std::span<const double> values) {
    prefix_.resize(values.size() + 1);
    prefix_[0] = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        prefix_[i + 1] = prefix_[i] + values[i];
    }
}

Envelope build_envelope_ele(const Pattern& pattern) {
    ensure_valid(pattern);
    const auto idx = SubpatternIndex::build(pattern);
    const std::size_t n = pattern.length();

    Envelope env;
    env.variant = ElbVariant::ele;
    env.first_valid = 0;
    env.upper.resize(n);
    env.lower.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double eps = pattern.thresholds[idx.pos_to_subpattern[i]];
        env.upper[i] = pattern.values[i] + eps;
        env.lower[i] = pattern.values[i] - eps;
    }
    return env;
}

double theta_seq(const Pattern& pattern, std::size_t last_pos, std::size_t w, LpOrder p) {
    ensure_valid(pattern);
    check_block_width(w, pattern.length());
    if (last_pos + 1 < w || last_pos >= pattern.length()) {
        throw UsageError("theta_seq position " + std::to_string(last_pos) +
                         " has no full block-width prefix");
    }
    const auto idx = SubpatternIndex::build(pattern);
    const std::size_t first = last_pos + 1 - w;
    if (p.is_inf()) {
        double sum = 0.0;
        for (std::size_t j = first; j <= last_pos; ++j) {
            sum += pattern.thresholds[idx.pos_to_subpattern[j]];
        }
        return sum / static_cast<double>(w);
    }
    const std::size_t k_first = idx.pos_to_subpattern[first];
    const std::size_t k_last = idx.pos_to_subpattern[last_pos];
    double sum = 0.0;
    for (std::size_t k = k_first; k <= k_last; ++k) {
        sum += pow_p(pattern.thresholds[k], p.value());
    }
    return root_p(sum / static_cast<double>(w), p.value());
}

Envelope build_envelope_seq(const Pattern& pattern, std::size_t w, LpOrder p) {
    ensure_valid(pattern);
    const std::size_t n = pattern.length();
    check_block_width(w, n);
    const auto idx = SubpatternIndex::build(pattern);

    // Prefix sums over subpattern thresholds (finite p) and per-element
    // thresholds (p = inf) make each theta an O(1) lookup.
    const std::size_t b = pattern.subpattern_count();
    std::vector<double> eps_prefix;
    if (p.is_inf()) {
        eps_prefix.resize(n + 1, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            eps_prefix[i + 1] = eps_prefix[i] + pattern.thresholds[idx.pos_to_subpattern[i]];
        }
    } else {
        eps_prefix.resize(b + 1, 0.0);
        for (std::size_t k = 0; k < b; ++k) {
            eps_prefix[k + 1] = eps_prefix[k] + pow_p(pattern.thresholds[k], p.value());
        }
    }

    Envelope env;
    env.variant = ElbVariant::seq;
    env.block_width = w;
    env.first_valid = w - 1;
    env.upper.assign(n, kNaN);
    env.lower.assign(n, kNaN);
    const double dw = static_cast<double>(w);
    for (std::size_t i = w - 1; i < n; ++i) {
        const std::size_t first = i + 1 - w;
        // Left-to-right summation, the same operation order the block-mean
        // feature uses. When a zero threshold forces exact element equality,
        // the feature then reproduces this mean bit for bit, so the envelope
        // still contains it. A shared prefix-sum shortcut would round
        // differently and can push such a feature out by one ulp.
        double sum = 0.0;
        for (std::size_t j = first; j <= i; ++j) sum += pattern.values[j];
        const double mu = sum / dw;
        double theta;
        if (p.is_inf()) {
            theta = (eps_prefix[i + 1] - eps_prefix[first]) / dw;
        } else {
            const std::size_t k_first = idx.pos_to_subpattern[first];
            const std::size_t k_last = idx.pos_to_subpattern[i];
            theta = root_p((eps_prefix[k_last + 1] - eps_prefix[k_first]) / dw, p.value());
        }
        env.upper[i] = mu + theta;
        env.lower[i] = mu - theta;
    }
    return env;
}

BlockBounds block_bounds(const Envelope& envelope, std::size_t w, std::size_t n) {
    if (envelope.upper.size() != n) {
        throw UsageError("envelope length " + std::to_string(envelope.upper.size()) +
                         " != n=" + std::to_string(n));
    }
    check_block_width(w, n);
    if (envelope.variant == ElbVariant::seq &&
        (!envelope.block_width || *envelope.block_width != w)) {
        throw UsageError("block width " + std::to_string(w) +
                         " does not match the seq envelope's width");
    }

    const std::size_t num_blocks = n / w;
    BlockBounds bounds;
    bounds.variant = envelope.variant;
    bounds.block_width = w;
    bounds.first_active = envelope.variant == ElbVariant::seq ? 1 : 0;
    bounds.upper.assign(num_blocks, kNaN);
    bounds.lower.assign(num_blocks, kNaN);
    for (std::size_t j = bounds.first_active; j < num_blocks; ++j) {
        double hi = -std::numeric_limits<double>::infinity();
        double lo = std::numeric_limits<double>::infinity();
        for (std::size_t i = j * w; i < (j + 1) * w; ++i) {
            hi = std::max(hi, envelope.upper[i]);
            lo = std::min(lo, envelope.lower[i]);
        }
        bounds.upper[j] = hi;
        bounds.lower[j] = lo;
    }
    return bounds;
}

} // namespace elb
