#include "plap/rng.hpp"

#include <cmath>
#include <numbers>

namespace plap {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

// 53-bit uniform in (0, 1] from two words.
double to_unit_interval(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            k[0] += kWeyl0;
            k[1] += kWeyl1;
        }
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
    return c;
}

std::array<std::uint32_t, 4> NormalStream::block(std::uint32_t m, std::uint32_t j, Variate which) const {
    const std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(key_.master_seed),
                                           static_cast<std::uint32_t>(key_.master_seed >> 32)};
    return philox4x32({key_.sample_index, m, j, static_cast<std::uint32_t>(which)}, key);
}

double NormalStream::uniform(std::uint32_t m, std::uint32_t j, Variate which) const {
    const auto w = block(m, j, which);
    return to_unit_interval(w[0], w[1]);
}

double NormalStream::normal(std::uint32_t m, std::uint32_t j, Variate which) const {
    // Box-Muller, cosine branch only: one normal per counter value.
    const auto w = block(m, j, which);
    const double u1 = to_unit_interval(w[0], w[1]);
    const double u2 = to_unit_interval(w[2], w[3]);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace plap
