#include <gtest/gtest.h>

#include <cmath>

#include "plap/rng.hpp"

using namespace plap;

TEST(Philox, KnownAnswers) {
    using Block = std::array<std::uint32_t, 4>;
    EXPECT_EQ(philox4x32({0, 0, 0, 0}, {0, 0}), (Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
              (Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
              (Block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(NormalStream, PureFunctionOfKey) {
    const NormalStream a(SampleKey{11, 3});
    const NormalStream b(SampleKey{11, 3});
    const NormalStream c(SampleKey{11, 4});
    const NormalStream d(SampleKey{12, 3});
    // query b in reverse order: no hidden state
    for (std::uint32_t m = 20; m-- > 0;) (void)b.normal(m, 0, Variate::Eta);
    for (std::uint32_t m = 0; m < 20; ++m) {
        EXPECT_EQ(a.normal(m, 1, Variate::Zeta), b.normal(m, 1, Variate::Zeta));
        EXPECT_NE(a.normal(m, 1, Variate::Zeta), c.normal(m, 1, Variate::Zeta));
        EXPECT_NE(a.normal(m, 1, Variate::Zeta), d.normal(m, 1, Variate::Zeta));
        EXPECT_NE(a.normal(m, 1, Variate::Zeta), a.normal(m, 1, Variate::Eta));
        EXPECT_NE(a.normal(m, 0, Variate::Zeta), a.normal(m, 1, Variate::Zeta));
    }
}

TEST(NormalStream, Moments) {
    const NormalStream s(SampleKey{99, 0});
    const int n = 200000;
    double sum = 0, sq = 0, quart = 0;
    double usum = 0;
    for (int i = 0; i < n; ++i) {
        const double z = s.normal(static_cast<std::uint32_t>(i), 0, Variate::Zeta);
        sum += z;
        sq += z * z;
        quart += z * z * z * z;
        const double u = s.uniform(static_cast<std::uint32_t>(i), 0, Variate::Eta);
        ASSERT_GT(u, 0.0);
        ASSERT_LE(u, 1.0);
        usum += u;
    }
    EXPECT_LT(std::abs(sum / n), 4.0 / std::sqrt(n));
    EXPECT_LT(std::abs(sq / n - 1.0), 4.0 * std::sqrt(2.0 / n));
    EXPECT_LT(std::abs(quart / n - 3.0), 4.0 * std::sqrt(96.0 / n));
    EXPECT_LT(std::abs(usum / n - 0.5), 4.0 * std::sqrt(1.0 / 12 / n));
}
