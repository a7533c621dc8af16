#include <gtest/gtest.h>

#include "config.hpp"
#include "jobs.hpp"
#include "report.hpp"
#include "test_util.hpp"

using namespace padiclz::cli;

namespace {

JobReport one_check(Status s, std::optional<int> residual = std::nullopt) {
    JobReport j;
    j.echo = {{"name", "j"}, {"kind", "interp-check"}};
    Check c;
    c.name = "c";
    c.status = s;
    c.residual = residual;
    c.required = 16;
    j.checks.push_back(c);
    return j;
}

}  // namespace

TEST(Config, ParsesEveryJobKind) {
    auto rc = parse_config(R"toml(
precision = 18
[[job]]
name = "a"
kind = "exceptional-zero"
disc = -4
p = 13
chi = "kronecker(-3)"
[[job]]
name = "b"
kind = "coleman-check"
p = 5
units = [2, 3]
)toml");
    ASSERT_EQ(rc.jobs.size(), 2u);
    EXPECT_EQ(rc.jobs[0].precision, 18);
    EXPECT_EQ(rc.jobs[1].units, (std::vector<long>{2, 3}));
    EXPECT_FALSE(rc.lower_bound_is_pass);
    auto over = parse_config("[[job]]\nname = \"a\"\nkind = \"coleman-check\"\np = 5\n", 12);
    EXPECT_EQ(over.jobs[0].precision, 12);
}

TEST(Config, Rejections) {
    // Malformed TOML, unknown keys, unknown kinds and failed preconditions are all config errors.
    EXPECT_THROW(parse_config("precision = = 3"), ConfigError);
    EXPECT_THROW(parse_config("colour = 3"), ConfigError);
    EXPECT_THROW(parse_config("[[job]]\nname = \"x\"\nkind = \"mystery\"\n"), ConfigError);
    EXPECT_THROW(parse_config("[[job]]\nname = \"x\"\nkind = \"exceptional-zero\"\ndisc = -4\np = 7\nchi = \"kronecker(-3)\"\n"),
                 ConfigError);
    EXPECT_THROW(parse_config("[[job]]\nname = \"x\"\nkind = \"linv\"\ndisc = -4\np = 13\nchi = \"kronecker(-3)\"\n"
                              "class_number = 2\nclass_number_provenance = \"wrong\"\n"),
                 ConfigError);
    EXPECT_THROW(parse_config("[[job]]\nname = \"x\"\nkind = \"linv\"\ndisc = -4\np = 13\nchi = \"kronecker(-3)\"\n"
                              "class_number = 1\n"),
                 ConfigError);
}

TEST(Config, MalformedTomlReportsPosition) {
    try {
        parse_config("precision = 20\nfoo = [1, \n");
        FAIL() << "expected a config error";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("line"), std::string::npos) << e.what();
    }
}

TEST(Config, CharacterSyntax) {
    EXPECT_EQ(parse_character("kronecker(-3)").modulus(), 3);
    EXPECT_EQ(parse_character("chi{modulus=7, index=2}").modulus(), 7);
    EXPECT_ERROR_CODE(parse_character("kronecker(-12)"), "invalid-character-spec");
    EXPECT_ERROR_CODE(parse_character("chi(7)"), "invalid-character-spec");
    EXPECT_THROW(parse_config("[[job]]\nname = \"x\"\nkind = \"exceptional-zero\"\ndisc = -4\np = 13\nchi = \"chi(7)\"\n"),
                 ConfigError);
}

TEST(Report, ExitCodes) {
    EXPECT_EQ(exit_code(build_report({one_check(Status::Pass, 20)}, "default", false, false)), 0);
    EXPECT_EQ(exit_code(build_report({one_check(Status::Fail, 3)}, "default", false, false)), 1);
    EXPECT_EQ(exit_code(build_report({one_check(Status::Error)}, "default", false, false)), 1);
    EXPECT_EQ(exit_code(build_report({one_check(Status::LowerBound)}, "default", false, false)), 1);
    EXPECT_EQ(exit_code(build_report({one_check(Status::LowerBound)}, "default", true, false)), 0);
}

TEST(Report, ResidualCheckThreshold) {
    EXPECT_EQ(residual_check("x", 16, 16).status, Status::Pass);
    EXPECT_EQ(residual_check("x", 15, 16).status, Status::Fail);
}

TEST(Report, RenderShowsFailingRow) {
    const auto text = render_report(build_report({one_check(Status::Fail, 3)}, "default", false, false));
    EXPECT_NE(text.find("FAIL"), std::string::npos);
    EXPECT_NE(text.find("CHECK"), std::string::npos);
    EXPECT_NE(text.find("exit 1"), std::string::npos);
}

TEST(Report, EmptyJobRendersHeaderOnly) {
    JobReport j;
    j.echo = {{"name", "empty"}, {"kind", "interp-check"}};
    const auto text = render_report(build_report({j}, "default", false, false));
    EXPECT_NE(text.find("CHECK"), std::string::npos);
    EXPECT_EQ(text.find("PASS"), std::string::npos);
}

TEST(Report, TimingsOnlyWhenRequested) {
    const auto plain = build_report({one_check(Status::Pass, 20)}, "default", false, false);
    EXPECT_EQ(plain.dump().find("wall_ms"), std::string::npos);
    const auto timed = build_report({one_check(Status::Pass, 20)}, "default", false, true);
    EXPECT_NE(timed.dump().find("wall_ms"), std::string::npos);
}

TEST(Jobs, IndependentOfWorkerCount) {
    auto rc = parse_config(R"toml(
[[job]]
name = "ez"
kind = "exceptional-zero"
disc = -4
p = 5
chi = "kronecker(-3)"
[[job]]
name = "col"
kind = "coleman-check"
p = 5
levels = 2
units = [2]
[[job]]
name = "lat"
kind = "lattice-suite"
instances = 10
free_instances = 5
seed = 3
)toml");
    const auto a = build_report(run_jobs(rc, 1), "default", false, false).dump();
    const auto b = build_report(run_jobs(rc, 4), "default", false, false).dump();
    EXPECT_EQ(a, b);
    EXPECT_EQ(exit_code(nlohmann::json::parse(a)), 0);
}
