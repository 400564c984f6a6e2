#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace rbhalton;

TEST(Permutation, ValidatesBijection) {
    EXPECT_NO_THROW(Permutation({2, 0, 1}));
    EXPECT_THROW(Permutation({0, 0, 1}), Error);
    EXPECT_THROW(Permutation({0, 3, 1}), Error);
    Permutation p({2, 0, 1});
    for (int d = 0; d < 3; ++d) EXPECT_EQ(p.inverse(p(d)), d);
}

TEST(PermAt, Examples) {
    EXPECT_EQ(perm_at(PermutationSpec::identity(3), 7).table(), (std::vector<int>{0, 1, 2}));
    EXPECT_EQ(perm_at(PermutationSpec(3, {}, {Permutation::reversal(3)}), 3).table(), (std::vector<int>{2, 1, 0}));
    PermutationSpec pre(3, {Permutation::identity(3)}, {Permutation::reversal(3)});
    EXPECT_TRUE(perm_at(pre, 1).is_identity());
    EXPECT_EQ(perm_at(pre, 2), Permutation::reversal(3));
    EXPECT_THROW((void)perm_at(pre, 0), Error);
}

TEST(PermAt, PreperiodThenCyclicPeriod) {
    const Permutation a({1, 0, 2}), b({0, 2, 1}), c({2, 1, 0}), d({1, 2, 0});
    PermutationSpec spec(3, {a, b}, {c, d});
    const std::vector<Permutation> expect = {a, b, c, d, c, d, c};
    for (std::size_t r = 1; r <= expect.size(); ++r) EXPECT_EQ(spec.at(r), expect[r - 1]) << r;
}

TEST(PermAt, ProviderSpec) {
    auto spec = PermutationSpec::from_provider(2, [](std::size_t r) {
        return r % 2 ? Permutation::identity(2) : Permutation::reversal(2);
    });
    EXPECT_FALSE(spec.serializable());
    EXPECT_TRUE(spec.at(3).is_identity());
    EXPECT_EQ(spec.at(4), Permutation::reversal(2));
}

TEST(RadicalInverse, Examples) {
    const RationalBase b32(3, 2);
    EXPECT_EQ(radical_inverse_truncated(5, b32, PermutationSpec::identity(3), 4), Rational(32, 81));
    EXPECT_EQ(radical_inverse_truncated(0, b32, PermutationSpec::identity(3), 6), 0);
    EXPECT_EQ(radical_inverse_truncated(0, RationalBase(5, 2), PermutationSpec(5, {}, {Permutation({0, 3, 1, 4, 2})}), 6), 0);
    EXPECT_EQ(radical_inverse_truncated(3, RationalBase(2, 1), PermutationSpec::identity(2), 2), Rational(3, 4));
    EXPECT_EQ(radical_inverse_truncated(1, b32, PermutationSpec::reversal(3), 4), Rational(26, 81));
}

TEST(RadicalInverse, Preconditions) {
    EXPECT_THROW(radical_inverse_truncated(-1, RationalBase(2, 1), PermutationSpec::identity(2), 3), Error);
    EXPECT_THROW(radical_inverse_truncated(1, RationalBase(2, 1), PermutationSpec::identity(3), 3), Error);
}

TEST(Truncate, Examples) {
    EXPECT_EQ(truncate(DigitValue{{}, 2, 1}, 3), Rational(7, 8));
    EXPECT_EQ(truncate(DigitValue{{}, 3, 2}, 2), Rational(8, 9));
    EXPECT_EQ(truncate(DigitValue{{1, 0, 1, 2}, 3, 0}, 2), Rational(1, 3));
}

TEST(RadicalInverseProperty, RangeAndDenominator) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        auto cfg = oracle::random_config(rng, 1);
        const auto& base = cfg.bases[0];
        for (std::size_t t : {1u, 3u, 6u}) {
            const Integer ut = ipow(base.u, t);
            for (long n = 0; n < 300; ++n) {
                const Rational x = radical_inverse_truncated(n, base, cfg.specs[0], t);
                ASSERT_GE(x, 0);
                ASSERT_LE(x, 1 - Rational(Integer(1), ut));
                ASSERT_EQ(ut % x.get_den(), 0);
            }
        }
    }
}

TEST(RadicalInverseProperty, MonotoneRefinement) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        auto cfg = oracle::random_config(rng, 1);
        const auto& base = cfg.bases[0];
        for (long n = 0; n < 200; ++n) {
            for (std::size_t t = 1; t <= 5; ++t) {
                const Rational xt = radical_inverse_truncated(n, base, cfg.specs[0], t);
                const Rational step(Integer(1), ipow(base.u, t));
                for (std::size_t t2 = t; t2 <= t + 3; ++t2) {
                    const Rational x2 = radical_inverse_truncated(n, base, cfg.specs[0], t2);
                    ASSERT_TRUE(xt <= x2 && x2 < xt + step) << "n=" << n << " t=" << t << " t'=" << t2;
                }
            }
        }
    }
}

TEST(RadicalInverseProperty, IntegerBaseIdentityIsVanDerCorput) {
    for (long u : {2L, 3L, 5L}) {
        for (long n = 0; n < 1024; ++n)
            ASSERT_EQ(radical_inverse_truncated(n, RationalBase(u, 1), PermutationSpec::identity(static_cast<int>(u)), 12),
                      oracle::van_der_corput(n, u))
                << "u=" << u << " n=" << n;
    }
}

// n mod u^t -> (sigma_1(a_1), ..., sigma_t(a_t)) is a bijection.
TEST(RadicalInverseProperty, LevelwiseBijection) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 12; ++trial) {
        auto cfg = oracle::random_config(rng, 1);
        const auto& base = cfg.bases[0];
        for (std::size_t t = 1; ipow(base.u, t) <= 10000; ++t) {
            const long ut = ipow(base.u, t).get_si();
            std::set<Rational> seen;
            for (long n = 0; n < ut; ++n) seen.insert(radical_inverse_truncated(n, base, cfg.specs[0], t));
            ASSERT_EQ(static_cast<long>(seen.size()), ut) << base.str() << " t=" << t;
            for (long n = ut; n < 2 * ut; ++n)
                ASSERT_EQ(radical_inverse_truncated(n, base, cfg.specs[0], t),
                          radical_inverse_truncated(n - ut, base, cfg.specs[0], t));
        }
    }
}
