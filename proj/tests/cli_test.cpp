#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "diagon/cli.hpp"
#include "support.hpp"

using namespace diagon;
using namespace testing_support;
namespace fs = std::filesystem;

namespace {

Equation fixture(const std::string& name) { return load_equation_file(fs::path(DIAGON_FIXTURES_DIR) / (name + ".dioph")); }

void expect_round_trip(const RunReport& r) {
    const nlohmann::json j = to_json(r);
    EXPECT_EQ(report_from_json(j), r);
    EXPECT_EQ(report_from_json(nlohmann::json::parse(j.dump())), r);
}

struct CliRun {
    int code = -1;
    std::string out;
    std::string err;
};

CliRun run_cli(const std::string& args, const std::string& env = "") {
    static int counter = 0;
    const fs::path dir = fs::temp_directory_path();
    const fs::path out = dir / ("diagon_cli_out_" + std::to_string(::getpid()) + "_" + std::to_string(counter));
    const fs::path err = dir / ("diagon_cli_err_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    const std::string cmd = env + " " + std::string(DIAGON_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    CliRun r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p);
        std::stringstream s;
        s << in.rdbuf();
        return s.str();
    };
    r.out = slurp(out);
    r.err = slurp(err);
    fs::remove(out);
    fs::remove(err);
    return r;
}

std::string fx(const std::string& name) { return (fs::path(DIAGON_FIXTURES_DIR) / (name + ".dioph")).string(); }

} // namespace

TEST(Commands, Diagonalize) {
    const cli::Outcome o = cli::cmd_diagonalize(fixture("parabolic"));
    ASSERT_EQ(o.exit_code, cli::kOk);
    ASSERT_TRUE(o.report);
    EXPECT_EQ(o.report->diagonal_equation, "x1^2 - 5*x2 = 0");
    EXPECT_EQ(o.report->surface, "non-central-paraboloid");
    EXPECT_EQ(o.report->chain.size(), 3u);
    expect_round_trip(*o.report);

    const cli::Outcome ident = cli::cmd_diagonalize(fixture("diagonal_lines"));
    EXPECT_TRUE(ident.report->chain.empty());
    EXPECT_TRUE(ident.report->warnings.empty());

    const cli::Outcome half = cli::cmd_diagonalize(fixture("half_center"));
    EXPECT_EQ(half.exit_code, cli::kOk);
    ASSERT_EQ(half.report->warnings.size(), 1u);
    EXPECT_EQ(half.report->warnings[0].rfind("preservation-unverified", 0), 0u);
    expect_round_trip(*half.report);

    EXPECT_EQ(cli::cmd_diagonalize(fixture("six_vars")).exit_code, cli::kPipelineError);
}

TEST(Commands, CountFitClassify) {
    const cli::Outcome count = cli::cmd_count(fixture("crossed_lines"), {3, 6}, false);
    ASSERT_EQ(count.exit_code, cli::kOk);
    EXPECT_EQ(count.report->counts[0].count, 9u);
    EXPECT_EQ(count.report->counts[1].count, 17u);
    expect_round_trip(*count.report);

    const cli::Outcome pull = cli::cmd_count(fixture("crossed_lines"), {3}, true);
    EXPECT_EQ(pull.report->counts[0].count, 9u);
    EXPECT_EQ(pull.report->counts[0].region, "pullback-image");

    const cli::Outcome classify = cli::cmd_classify(fixture("cubic_sum"));
    ASSERT_TRUE(classify.report->prediction);
    EXPECT_EQ(classify.report->prediction->exponent, 1);
    EXPECT_EQ(classify.report->prediction->formula, "odd-thue");
    EXPECT_EQ(classify.report->surface, "central-translated");
    expect_round_trip(*classify.report);

    const cli::Outcome cone = cli::cmd_classify(fixture("ternary_cone"));
    ASSERT_TRUE(cone.report->classification);
    EXPECT_EQ(cone.report->classification->normal_form_case, 7);
    EXPECT_EQ(cone.report->classification->solvable, true);
    expect_round_trip(*cone.report);

    const cli::Outcome fit = cli::cmd_fit(fixture("ternary_cone"), {50, 100, 200});
    ASSERT_EQ(fit.exit_code, cli::kOk);
    EXPECT_EQ(fit.report->fermat_check, "consistent");
    ASSERT_TRUE(fit.report->fit);
    expect_round_trip(*fit.report);

    const cli::Outcome none = cli::cmd_fit(fixture("empty_circle"), {4, 8, 16});
    EXPECT_EQ(none.exit_code, cli::kInconclusive);
    ASSERT_TRUE(none.report);
    EXPECT_FALSE(none.report->fit);
}

TEST(Commands, VerifyAndLimits) {
    const std::vector<long> grid{32, 64, 128, 256};
    const cli::Outcome lines = cli::cmd_verify(fixture("crossed_lines"), grid, 0.15);
    EXPECT_EQ(lines.exit_code, cli::kOk);
    EXPECT_EQ(lines.report->verdict, "preserved");
    expect_round_trip(*lines.report);
    EXPECT_EQ(cli::cmd_verify(fixture("empty_circle"), grid, 0.15).exit_code, cli::kInconclusive);
    EXPECT_EQ(cli::cmd_verify(fixture("parabolic"), grid, 0.01).exit_code, cli::kDivergent);
    EXPECT_EQ(cli::cmd_count(fixture("six_vars"), {10000}, false).exit_code, cli::kResourceLimit);
}

TEST(Commands, GridAndEnvironment) {
    EXPECT_EQ(cli::parse_grid("32, 64,128"), (std::vector<long>{32, 64, 128}));
    EXPECT_THROW(cli::parse_grid("32,16,8"), DomainError);
    EXPECT_THROW(cli::parse_grid("a,b,c"), DomainError);
    ::setenv("DIAGON_CEILING", "12345", 1);
    EXPECT_EQ(cli::ceiling_from_environment(), 12345u);
    ::setenv("DIAGON_CEILING", "lots", 1);
    EXPECT_THROW(cli::ceiling_from_environment(), DomainError);
    ::unsetenv("DIAGON_CEILING");
    EXPECT_EQ(cli::ceiling_from_environment(), kDefaultCeiling);
}

TEST(Report, RejectsUnknownLabels) {
    RunReport r = *cli::cmd_diagonalize(fixture("parabolic")).report;
    nlohmann::json j = to_json(r);
    j["chain"][0]["label"] = "rotation";
    EXPECT_THROW(report_from_json(j), DomainError);
    j = to_json(r);
    j["det"] = nlohmann::json::array({1, 0});
    EXPECT_THROW(report_from_json(j), DomainError);
}

TEST(Report, BigRationalsSurvive) {
    RunReport r;
    r.command = "diagonalize";
    r.equation = "x1 = 0";
    r.det = make_rational(Integer("123456789012345678901234567891"), Integer(7));
    expect_round_trip(r);
    EXPECT_TRUE(to_json(r)["det"][0].is_string());
}

TEST(Report, StableKeys) {
    const nlohmann::json j = to_json(*cli::cmd_verify(fixture("crossed_lines"), {32, 64, 128}, 0.15).report);
    for (const char* key : {"version", "command", "equation", "transform", "chain", "diagonal_equation", "det", "unimodular",
                            "surface", "counts", "fit", "prediction", "verdict", "warnings"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_EQ(j["transform"]["matrix"][0][1], nlohmann::json::array({-1, 1}));
    EXPECT_EQ(j["chain"][0]["label"], "lagrange");
}

TEST(Binary, ExitCodesAndOutput) {
    CliRun r = run_cli("diagonalize " + fx("parabolic"));
    EXPECT_EQ(r.code, 0) << r.err;
    const nlohmann::json j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["diagonal_equation"], "x1^2 - 5*x2 = 0");
    EXPECT_TRUE(r.err.empty());

    const fs::path bad = fs::temp_directory_path() / "diagon_bad.dioph";
    std::ofstream(bad) << "12x1x2 = 0\n";
    r = run_cli("diagonalize " + bad.string());
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(r.out.empty());
    EXPECT_NE(r.err.find("1:"), std::string::npos);
    fs::remove(bad);

    EXPECT_EQ(run_cli("diagonalize " + fx("six_vars")).code, 3);
    EXPECT_EQ(run_cli("verify " + fx("crossed_lines") + " --grid 32,64,128,256").code, 0);
    EXPECT_EQ(run_cli("verify " + fx("parabolic") + " --grid 32,64,128,256 --tol 0.01").code, 4);
    EXPECT_EQ(run_cli("verify " + fx("empty_circle") + " --grid 8,16,32").code, 5);
    r = run_cli("count " + fx("six_vars") + " -N 10000");
    EXPECT_EQ(r.code, 6);
    EXPECT_NE(r.err.find("ceiling"), std::string::npos);
    EXPECT_EQ(run_cli("count " + fx("crossed_lines") + " -N 30", "DIAGON_CEILING=10").code, 6);
    EXPECT_EQ(run_cli("--ceiling 100000 count " + fx("crossed_lines") + " -N 30", "DIAGON_CEILING=10").code, 0);
    EXPECT_EQ(run_cli("verify " + fx("crossed_lines") + " --grid 3,2,1").code, 2);
}

TEST(Binary, TextOutputAndFile) {
    CliRun r = run_cli("--text count " + fx("crossed_lines") + " -N 3");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("N=3 -> 9"), std::string::npos);

    const fs::path out = fs::temp_directory_path() / "diagon_report.json";
    r = run_cli("classify " + fx("cubic_sum") + " -o " + out.string());
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(out);
    const nlohmann::json j = nlohmann::json::parse(in);
    EXPECT_EQ(j["prediction"]["exponent"], nlohmann::json::array({1, 1}));
    fs::remove(out);

    r = run_cli("corpus " + std::string(DIAGON_FIXTURES_DIR));
    EXPECT_EQ(r.code, 3); // six-vars has no known transform
    EXPECT_GE(nlohmann::json::parse(r.out).size(), 8u);
}
