#include "oracles.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace rbhalton;

TEST(ConfigJson, RoundTrip) {
    GeneratorConfig cfg;
    cfg.bases = {RationalBase(3, 2), RationalBase(4, 3)};
    cfg.specs = {PermutationSpec::reversal(3),
                 PermutationSpec(4, {Permutation::identity(4)}, {Permutation({3, 2, 1, 0}), Permutation({1, 2, 3, 0})})};
    const auto back = config_from_json(json::parse(to_json(cfg).dump()));
    ASSERT_EQ(back.dimension(), 2u);
    EXPECT_EQ(back.bases, cfg.bases);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t r = 1; r <= 6; ++r) EXPECT_EQ(back.specs[i].at(r), cfg.specs[i].at(r));
}

TEST(ConfigJson, OmittedPermsMeanIdentity) {
    const auto cfg = config_from_json(json::parse(R"({"bases": [{"u": 2}, {"u": 3, "v": 2}]})"));
    EXPECT_TRUE(cfg.specs[0].is_identity());
    EXPECT_TRUE(cfg.specs[1].is_identity());
    EXPECT_EQ(cfg.bases[1], RationalBase(3, 2));
}

TEST(ConfigJson, Rejections) {
    auto kind = [](const char* text) {
        try {
            (void)config_from_json(json::parse(text));
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::io;
    };
    EXPECT_EQ(kind(R"({"bases": [{"u": 2}, {"u": 4, "v": 3}]})"), ErrorKind::bad_config);
    EXPECT_EQ(kind(R"({"s": 3, "bases": [{"u": 2}, {"u": 3}]})"), ErrorKind::bad_config);
    EXPECT_EQ(kind(R"({"bases": [{"u": 3, "v": 2}], "perms": [{"u": 3, "period": [[0, 0, 1]]}]})"), ErrorKind::bad_config);
    EXPECT_EQ(kind(R"({"nothing": 1})"), ErrorKind::bad_config);
}

TEST(PointsCsv, ExactRoundTrip) {
    const auto cfg = GeneratorConfig::with_identity({RationalBase(2, 1), RationalBase(3, 2)});
    const auto ps = point_set(cfg, 3, 25, 7);
    std::stringstream buf;
    write_points_csv(buf, ps);
    EXPECT_EQ(buf.str().substr(0, 6), "x1,x2\n");
    const auto back = read_points_csv(buf);
    EXPECT_EQ(back.points, ps.points);
    EXPECT_EQ(star_discrepancy(back), star_discrepancy(ps));
}

TEST(PointsCsv, DecimalCellsAndBadInput) {
    std::stringstream ok("0.5,0.25\n1/3,0\n");
    const auto ps = read_points_csv(ok);
    EXPECT_EQ(ps.points[0], (std::vector<Rational>{Rational(1, 2), Rational(1, 4)}));
    EXPECT_EQ(ps.points[1][0], Rational(1, 3));
    std::stringstream ragged("x1,x2\n0.5,0.5\n0.5\n");
    EXPECT_THROW(read_points_csv(ragged), Error);
    std::stringstream junk("x1\nabc\n");
    EXPECT_THROW(read_points_csv(junk), Error);
    std::stringstream empty("x1\n");
    EXPECT_THROW(read_points_csv(empty), Error);
}

TEST(WitnessJson, ReportFields) {
    const auto cfg = GeneratorConfig::with_identity({RationalBase(2, 1), RationalBase(3, 2)});
    const auto report = verify_bound(derive_params(cfg, WitnessMode::manual({{2}, {2}})));
    const json j = to_json(report);
    EXPECT_EQ(j.at("ubar_m"), "36");
    EXPECT_EQ(j.at("params").at("threshold").at("status"), "symbolic-only");
    EXPECT_EQ(j.at("params").at("threshold").at("exponent"), "1296");
    EXPECT_EQ(j.at("alpha_m"), to_string(report.alpha_m));
    EXPECT_TRUE(j.at("all_passed").get<bool>());
    std::ostringstream summary;
    write_summary(summary, report);
    EXPECT_NE(summary.str().find("symbolic only"), std::string::npos);
}

TEST(GrowthCsv, Header) {
    std::ostringstream out;
    write_growth_csv(out, growth_scan(GeneratorConfig::with_identity({RationalBase(2, 1)}), 4));
    EXPECT_EQ(out.str().substr(0, 15), "N,D_star,ratio\n");
    EXPECT_NE(out.str().find("\n4,1/4,"), std::string::npos);
}
