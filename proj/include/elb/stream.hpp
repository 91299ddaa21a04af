#pragma once

#include <cassert>
#include <cstdint>
#include <cstring>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace elb {

/// Pull-based element source. Returns std::nullopt at end of stream.
using StreamSource = std::function<std::optional<double>()>;

/// Source over an in-memory sequence. The data must outlive the source.
inline StreamSource make_vector_source(std::span<const double> data) {
    std::size_t next = 0;
    return [data, next]() mutable -> std::optional<double> {
        if (next >= data.size()) return std::nullopt;
        return data[next++];
    };
}

/**
 * Keeps the most recent `capacity` stream elements addressable by absolute
 * 0-based position, with every retained window available as a contiguous span.
 *
 * Storage is 2x capacity; when it fills, the newest `capacity` elements are
 * moved to the front. Amortized O(1) per push.
 */
class SlidingBuffer {
public:
    explicit SlidingBuffer(std::size_t capacity)
        : capacity_(capacity), data_(2 * capacity) {
        assert(capacity > 0);
    }

    void push(double value) {
        if (len_ == data_.size()) {
            std::memmove(data_.data(), data_.data() + capacity_,
                         capacity_ * sizeof(double));
            first_abs_ += static_cast<std::uint64_t>(capacity_);
            len_ = capacity_;
        }
        data_[len_++] = value;
        ++total_;
    }

    /// Total number of elements pushed so far.
    std::uint64_t total() const { return total_; }

    /// Absolute position of the oldest retained element.
    std::uint64_t first_retained() const { return first_abs_; }

    /// Contiguous view of `count` elements starting at absolute position `abs_start`.
    std::span<const double> window(std::uint64_t abs_start, std::size_t count) const {
        assert(abs_start >= first_abs_);
        const std::size_t offset = static_cast<std::size_t>(abs_start - first_abs_);
        assert(offset + count <= len_);
        return {data_.data() + offset, count};
    }

private:
    std::size_t capacity_;
    std::vector<double> data_;
    std::size_t len_ = 0;
    std::uint64_t first_abs_ = 0;
    std::uint64_t total_ = 0;
};

} // namespace elb
