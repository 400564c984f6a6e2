#include "rbhalton/verify.hpp"

#include <gtest/gtest.h>

using namespace rbhalton;

TEST(VerifyLemmas, DigitTableReproduced) {
    const auto t = verify::check_digit_table();
    EXPECT_EQ(t.passed, 24u);
    EXPECT_EQ(t.failed, 0u);
}

TEST(VerifyLemmas, AllOracleSuitesPass) {
    for (const auto& t : verify::run_all(1e4, 1)) {
        EXPECT_TRUE(t.ok()) << t.name << ": " << t.first_failure;
        EXPECT_GT(t.configurations, 0u) << t.name;
    }
}

TEST(VerifyLemmas, MatrixCoversBothDimensionsAndPermutationKinds) {
    const auto cases = verify::residue_matrix(1e4, 5);
    EXPECT_GE(cases.size(), 20u);
    bool one = false, two = false, reversal = false;
    for (const auto& c : cases) {
        one = one || c.config.dimension() == 1;
        two = two || c.config.dimension() == 2;
        reversal = reversal || c.label.find("reversal") != std::string::npos;
        Integer U = 1;
        for (std::size_t i = 0; i < c.config.dimension(); ++i) U *= ipow(c.config.bases[i].u, c.box.k(i));
        EXPECT_LE(U, 10000);
    }
    EXPECT_TRUE(one && two && reversal);
}

TEST(VerifyLemmas, DetectsACorruptedTable) {
    // A wrong expectation must register as a failure, not pass silently.
    verify::Tally t{"probe"};
    t.record(verify::finite_expansion(5, RationalBase(3, 2)) == std::vector<int>{1, 0, 1, 1}, "probe");
    EXPECT_FALSE(t.ok());
}
