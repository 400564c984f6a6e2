#include "rbhalton/io.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("rbhalton_cli_" + std::to_string(::getpid()) + "_" +
                                            ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    CliResult run(const std::string& args, const std::string& env = "") {
        const fs::path out = dir_ / "stdout", err = dir_ / "stderr";
        const std::string cmd = env + " " + std::string(RBHALTON_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
        const int status = std::system(cmd.c_str());
        return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
    }

    std::string config(const std::string& name) { return std::string(RBHALTON_SOURCE_DIR) + "/configs/" + name; }
    fs::path path(const std::string& name) { return dir_ / name; }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, ExpandPrintsDigitsAndTermination) {
    auto r = run("expand --z 5 --base 3/2 --digits 6");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "1,0,1,2,0,0 (terminated at 4)\n");
    r = run("expand --z -1 --base 3/2 --digits 3 --remainders");
    EXPECT_EQ(r.out, "1,1,1 (not terminated within 3)\n-1,-1,-1\n");
}

TEST_F(Cli, InvertPrintsExactAndDecimal) {
    auto r = run("invert --n 5 --base 3/2 --t 4");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.substr(0, 6), "32/81 ");
}

TEST_F(Cli, PointsThenDiscRoundTrip) {
    const auto csv = path("pts.csv");
    auto r = run("points --config " + config("halton_2_3half.json") + " --n 0..8 --t 6 --out " + csv.string());
    ASSERT_EQ(r.code, 0) << r.err;
    const auto text = slurp(csv);
    EXPECT_EQ(text.substr(0, 6), "x1,x2\n");
    EXPECT_NE(text.find("5/8,32/81"), std::string::npos);

    const auto cfg = rbhalton::load_config(config("halton_2_3half.json"));
    const auto expect = rbhalton::star_discrepancy(rbhalton::point_set(cfg, 0, 8, 6));
    r = run("disc --in " + csv.string());
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.substr(0, r.out.find(' ')), rbhalton::to_string(expect));
    r = run("disc --in " + csv.string() + " --float");
    EXPECT_EQ(r.out, rbhalton::decimal(expect) + "\n");
}

TEST_F(Cli, OutputIsDeterministic) {
    const std::string args = "points --config " + config("reversal_3half_4third.json") + " --n 10..60 --t 9";
    EXPECT_EQ(run(args).out, run(args).out);
    const std::string w = "witness --config " + config("halton_2_3half.json") + " --ks " + config("ks_2_2.json");
    EXPECT_EQ(run(w).out, run(w).out);
}

TEST_F(Cli, WitnessWritesJsonAndSummary) {
    const auto report = path("w.json");
    auto r = run("witness --config " + config("halton_2_3half.json") + " --manual 12 --out " + report.string());
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = rbhalton::json::parse(slurp(report));
    EXPECT_TRUE(j.at("all_passed").get<bool>());
    EXPECT_EQ(j.at("params").at("m"), 12);
    EXPECT_NE(r.out.find("alpha_lower_bound"), std::string::npos);
    EXPECT_NE(r.out.find("symbolic only"), std::string::npos);
}

TEST_F(Cli, WitnessDiscrepancyChain) {
    auto r = run("witness --config " + config("halton_2_3half.json") + " --ks " + config("ks_2_2.json") + " --check-disc");
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = rbhalton::json::parse(r.out);
    EXPECT_FALSE(j.at("sup_prefix_discrepancy").is_null());
}

TEST_F(Cli, GrowthCsv) {
    auto r = run("growth --config " + config("halton_2_3half.json") + " --n-max 64 --stride 8");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.substr(0, 15), "N,D_star,ratio\n");
    EXPECT_NE(r.out.find("\n64,"), std::string::npos);
}

TEST_F(Cli, VerifyLemmasPasses) {
    auto r = run("verify-lemmas --max-modulus 2000");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
    EXPECT_NE(r.out.find("PASS residue_classes"), std::string::npos);
}

TEST_F(Cli, ExitCodes) {
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("expand --base 3/2").code, 2);
    {
        std::ofstream bad(path("bad.json"));
        bad << R"({"bases": [{"u": 2}, {"u": 4, "v": 3}]})";
    }
    auto r = run("points --config " + path("bad.json").string() + " --n 0..4 --t 3");
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("error[bad_config]"), std::string::npos);
    EXPECT_NE(r.err.find("gcd(u_1,u_2)=2"), std::string::npos);
    EXPECT_EQ(run("disc --in " + path("missing.csv").string()).code, 5);
    EXPECT_EQ(run("growth --config " + config("halton_2_3half.json") + " --n-max 200", "RB_QMC_GUARDRAIL=1000").code, 4);
    EXPECT_EQ(run("--guardrail 1000 growth --config " + config("halton_2_3half.json") + " --n-max 200").code, 4);
    EXPECT_EQ(run("witness --config " + config("halton_2_3half.json") + " --manual 12 --check-disc").code, 4);
    EXPECT_EQ(run("expand --z 5 --base 4/2").code, 3);
}
