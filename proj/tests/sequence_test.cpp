#include "oracles.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace rbhalton;

namespace {
GeneratorConfig halton_2_3half() { return GeneratorConfig::with_identity({RationalBase(2, 1), RationalBase(3, 2)}); }
}  // namespace

TEST(ValidateConfig, Examples) {
    EXPECT_TRUE(validate_config(halton_2_3half()).ok());
    auto bad = validate_config(GeneratorConfig::with_identity({RationalBase(2, 1), RationalBase(4, 3)}));
    ASSERT_FALSE(bad.ok());
    EXPECT_NE(bad.message().find("gcd(u_1,u_2)=2"), std::string::npos);
    EXPECT_TRUE(validate_config(GeneratorConfig::with_identity({RationalBase(3, 2), RationalBase(4, 3), RationalBase(5, 4)})).ok());
}

TEST(ValidateConfig, NamesEveryViolatedPair) {
    auto rep = validate_config(GeneratorConfig::with_identity({RationalBase(2, 1), RationalBase(4, 1), RationalBase(6, 1)}));
    EXPECT_EQ(rep.problems.size(), 3u);
    GeneratorConfig mismatched = halton_2_3half();
    mismatched.specs[1] = PermutationSpec::identity(2);
    EXPECT_FALSE(validate_config(mismatched).ok());
    EXPECT_THROW(require_valid(mismatched), Error);
}

TEST(Point, Examples) {
    const auto cfg = halton_2_3half();
    EXPECT_EQ(point(cfg, 0, 5), (std::vector<Rational>{0, 0}));
    EXPECT_EQ(point(cfg, 5, 7), (std::vector<Rational>{Rational(5, 8), Rational(32, 81)}));
    EXPECT_EQ(point(cfg, 2, 4), (std::vector<Rational>{Rational(1, 4), Rational(5, 9)}));
}

TEST(PointSet, Examples) {
    const auto one = point_set(halton_2_3half(), 0, 1, 3);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one.points[0], (std::vector<Rational>{0, 0}));
    const auto vdc = point_set(GeneratorConfig::with_identity({RationalBase(2, 1)}), 0, 4, 3);
    std::vector<Rational> xs;
    for (const auto& p : vdc.points) xs.push_back(p[0]);
    EXPECT_EQ(xs, (std::vector<Rational>{0, Rational(1, 2), Rational(1, 4), Rational(3, 4)}));
}

TEST(PointSet, DenominatorsDivideUToTheT) {
    std::mt19937_64 rng(21);
    const auto cfg = halton_2_3half();
    for (int trial = 0; trial < 20; ++trial) {
        const long w = std::uniform_int_distribution<long>(0, 100000)(rng);
        const std::size_t k = std::uniform_int_distribution<std::size_t>(1, 40)(rng);
        const std::size_t t = std::uniform_int_distribution<std::size_t>(1, 10)(rng);
        const auto ps = point_set(cfg, w, k, t);
        EXPECT_EQ(ps.start_index, w);
        for (std::size_t q = 0; q < ps.size(); ++q) {
            EXPECT_EQ(ps.points[q], point(cfg, w + static_cast<long>(q), t));
            for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(ipow(cfg.bases[i].u, t) % ps.points[q][i].get_den(), 0);
        }
    }
}

TEST(DefaultTruncation, CeilLog) {
    EXPECT_EQ(ceil_log(1, 2), 0u);
    EXPECT_EQ(ceil_log(8, 2), 3u);
    EXPECT_EQ(ceil_log(9, 2), 4u);
    EXPECT_EQ(default_truncation(halton_2_3half(), 4096), 12u);
}

// Every block of prod u_i^{k_i} consecutive indices puts exactly one point in each digit-prefix box.
TEST(SequenceProperty, Regularity) {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 8; ++trial) {
        auto cfg = oracle::random_config(rng, 2);
        for (std::size_t k1 = 1; ipow(cfg.bases[0].u, k1) <= 100; ++k1) {
            for (std::size_t k2 = 1; ipow(cfg.bases[0].u, k1) * ipow(cfg.bases[1].u, k2) <= 2000; ++k2) {
                const Integer U1 = ipow(cfg.bases[0].u, k1), U2 = ipow(cfg.bases[1].u, k2);
                const long U = Integer(U1 * U2).get_si();
                const std::size_t t = std::max(k1, k2) + 1;
                const long start = std::uniform_int_distribution<long>(0, 5000)(rng);
                const auto ps = point_set(cfg, start, static_cast<std::size_t>(U), t);
                std::map<std::pair<Integer, Integer>, int> cells;
                for (const auto& p : ps.points) {
                    Rational a = p[0] * U1, b = p[1] * U2;
                    Integer ca = a.get_num() / a.get_den(), cb = b.get_num() / b.get_den();
                    ++cells[{ca, cb}];
                }
                ASSERT_EQ(static_cast<long>(cells.size()), U);
                for (const auto& [cell, n] : cells) ASSERT_EQ(n, 1);
            }
        }
    }
}

TEST(SequenceProperty, ReducesToClassicHalton) {
    const auto cfg = GeneratorConfig::with_identity({RationalBase(2, 1), RationalBase(3, 1), RationalBase(5, 1)});
    const HaltonGenerator gen(cfg, 14);
    for (long n = 0; n < 10000; ++n) {
        auto p = gen.point(n);
        ASSERT_EQ(p[0], oracle::van_der_corput(n, 2));
        ASSERT_EQ(p[1], oracle::van_der_corput(n, 3));
        ASSERT_EQ(p[2], oracle::van_der_corput(n, 5));
    }
}

// Coordinate i agrees at level t iff n = n' (mod u_i^t).
TEST(SequenceProperty, CoordinateAgreementIsCongruence) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 5; ++trial) {
        auto cfg = oracle::random_config(rng, 2);
        const std::size_t t = 2;
        const HaltonGenerator gen(cfg, t);
        std::vector<std::vector<Rational>> pts;
        for (long n = 0; n < 150; ++n) pts.push_back(gen.point(n));
        for (std::size_t i = 0; i < 2; ++i) {
            const long ut = ipow(cfg.bases[i].u, t).get_si();
            for (long a = 0; a < 150; ++a)
                for (long b = 0; b < 150; ++b) ASSERT_EQ(pts[a][i] == pts[b][i], (a - b) % ut == 0);
        }
    }
}
