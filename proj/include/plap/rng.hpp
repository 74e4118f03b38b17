#pragma once

#include <array>
#include <cstdint>

namespace plap {

/// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Which of the two independent normal families a draw belongs to.
enum class Variate : std::uint32_t { Zeta = 0, Eta = 1 };

/// Identifies one Monte Carlo sample: its draws are a pure function of
/// (master_seed, sample_index, step, mode, variate).
struct SampleKey {
    std::uint64_t master_seed = 0;
    std::uint32_t sample_index = 0;
};

/// Counter-based standard normal source. No internal state: two streams with
/// the same key return bit-identical draws in any call order.
class NormalStream {
public:
    explicit NormalStream(SampleKey key) : key_(key) {}

    /// Standard normal keyed by (step m, mode j, variate).
    double normal(std::uint32_t m, std::uint32_t j, Variate which) const;
    /// Uniform on (0, 1] from the same block layout (first two words).
    double uniform(std::uint32_t m, std::uint32_t j, Variate which) const;

    SampleKey key() const { return key_; }

private:
    std::array<std::uint32_t, 4> block(std::uint32_t m, std::uint32_t j, Variate which) const;

    SampleKey key_;
};

}  // namespace plap
