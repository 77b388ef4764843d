#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "apv/constants.hpp"

namespace apv {

/// Philox-4x32-10 counter-based generator (Salmon et al., SC'11). Output is a
/// pure function of (counter, key), so any draw can be addressed directly.
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static constexpr Counter generate(Counter ctr, Key key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }
};

/// Sequential draws from the Philox stream addressed by (seed, index, stream).
/// Each block of the counter yields two 53-bit uniforms.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t index, std::uint32_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          index_(index),
          stream_(stream) {}

    /// Uniform on the open interval (0, 1).
    double uniform() {
        if (pos_ == 2) refill();
        return buffer_[pos_++];
    }

    /// Standard normal (Box-Muller; the paired value is cached).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double phi = kTwoPi * uniform();
        spare_ = r * std::sin(phi);
        has_spare_ = true;
        return r * std::cos(phi);
    }

private:
    static double to_unit(std::uint32_t hi, std::uint32_t lo) {
        const std::uint64_t bits = ((std::uint64_t{hi} << 32) | lo) >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    void refill() {
        const Philox4x32::Counter ctr{static_cast<std::uint32_t>(index_),
                                      static_cast<std::uint32_t>(index_ >> 32), stream_, block_++};
        const auto out = Philox4x32::generate(ctr, key_);
        buffer_ = {to_unit(out[0], out[1]), to_unit(out[2], out[3])};
        pos_ = 0;
    }

    Philox4x32::Key key_;
    std::uint64_t index_;
    std::uint32_t stream_;
    std::uint32_t block_ = 0;
    std::array<double, 2> buffer_{};
    int pos_ = 2;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace apv
