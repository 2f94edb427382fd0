#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

// Philox4x32-10 counter-based generator. Every (seed, stream id, purpose tag)
// triple owns an independent stream, so scenario i consumes the same draws no
// matter which worker thread runs it or how many scenarios ran before.

namespace wwrcva {

enum class StreamTag : std::uint32_t {
    exposure_driver = 1,   // W^V increments
    ortho_driver = 2,      // W-perp increments
    clock_arrival = 3,     // subordinator jump inter-arrivals
    clock_size = 4,        // subordinator jump sizes
    jump_arrival = 5,      // intensity jump inter-arrivals
    jump_size = 6,         // intensity jump sizes
    aux = 7,
};

struct PhiloxBlock {
    std::array<std::uint32_t, 4> v;
};

inline PhiloxBlock philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                 std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t m0 = 0xD2511F53u;
    constexpr std::uint32_t m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u;
    constexpr std::uint32_t w1 = 0xBB67AE85u;
    std::uint32_t k0 = key[0];
    std::uint32_t k1 = key[1];
    for (int round = 0; round < 10; ++round) {
        std::uint64_t p0 = static_cast<std::uint64_t>(m0) * ctr[0];
        std::uint64_t p1 = static_cast<std::uint64_t>(m1) * ctr[2];
        std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
        std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
        std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
        std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
        k0 += w0;
        k1 += w1;
    }
    return {ctr};
}

class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint32_t stream_id, StreamTag tag)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_id_(stream_id), tag_(static_cast<std::uint32_t>(tag)) {}

    std::uint32_t next_u32() {
        if (pos_ == 4) {
            PhiloxBlock b = philox4x32_10({static_cast<std::uint32_t>(block_),
                                           static_cast<std::uint32_t>(block_ >> 32),
                                           stream_id_, tag_},
                                          key_);
            buf_ = b.v;
            ++block_;
            pos_ = 0;
        }
        return buf_[pos_++];
    }

    std::uint64_t next_u64() {
        std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    // uniform on (0, 1], safe as a log argument
    double uniform_oc() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // uniform on [0, 1)
    double uniform_co() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double r = std::sqrt(-2.0 * std::log(uniform_oc()));
        double a = 2.0 * std::numbers::pi * uniform_co();
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Exp(1); scale by 1/rate at the call site
    double exponential() { return -std::log(uniform_oc()); }

private:
    std::array<std::uint32_t, 2> key_;
    std::uint32_t stream_id_;
    std::uint32_t tag_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int pos_ = 4;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace wwrcva
