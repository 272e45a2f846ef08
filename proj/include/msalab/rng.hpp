#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).  Output depends
// only on (counter, key), so a value can be regenerated for any site without
// replaying a stream.

#include <array>
#include <cstdint>
#include <limits>

namespace msalab {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

constexpr PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key) noexcept {
    constexpr std::uint32_t kM0 = 0xD2511F53u;
    constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    constexpr std::uint32_t kW0 = 0x9E3779B9u;
    constexpr std::uint32_t kW1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kW0;
            key[1] += kW1;
        }
        const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

constexpr PhiloxKey philox_key(std::uint64_t seed) noexcept {
    return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

/// 53-bit uniform double in [0, 1) from two 32-bit words.
constexpr double to_unit_double(std::uint32_t hi, std::uint32_t lo) noexcept {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Sequential stream over Philox blocks: counter = (stream lo, stream hi, block lo, block hi).
/// Satisfies UniformRandomBitGenerator; used for placement and resampling where a
/// stream (rather than a site-keyed value) is the natural model.
class PhiloxStream {
public:
    using result_type = std::uint32_t;

    PhiloxStream(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_(philox_key(seed)),
          stream_lo_(static_cast<std::uint32_t>(stream)),
          stream_hi_(static_cast<std::uint32_t>(stream >> 32)) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        if (lane_ == 4) refill();
        return block_[lane_++];
    }

    double uniform() noexcept {
        const auto hi = (*this)();
        const auto lo = (*this)();
        return to_unit_double(hi, lo);
    }

    /// Uniform integer in [lo, hi] (inclusive) by rejection, platform independent.
    long long uniform_int(long long lo, long long hi) noexcept {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) return lo;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % span;
        for (;;) {
            const std::uint64_t r = (static_cast<std::uint64_t>((*this)()) << 32) | (*this)();
            if (r < limit) return lo + static_cast<long long>(r % span);
        }
    }

private:
    void refill() noexcept {
        block_ = philox4x32({stream_lo_, stream_hi_, static_cast<std::uint32_t>(block_index_),
                             static_cast<std::uint32_t>(block_index_ >> 32)},
                            key_);
        ++block_index_;
        lane_ = 0;
    }

    PhiloxKey key_;
    std::uint32_t stream_lo_;
    std::uint32_t stream_hi_;
    std::uint64_t block_index_ = 0;
    PhiloxCounter block_{};
    int lane_ = 4;
};

}  // namespace msalab
