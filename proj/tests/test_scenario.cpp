#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include <gtest/gtest.h>

#include "qrot/report.hpp"
#include "qrot/scenario.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kMinimal = R"({
  "name": "t",
  "potential": {"family": "coulomb", "alpha": 1.0, "mass": 1.0},
  "rotation": {"omega_z": 0.5},
  "basis": {"n": 2, "l": 1, "s": "1/2"},
  "initial": {"n": 2, "m_l": 1, "rho": [[0.5, 0.5], [0.5, 0.5]]},
  "times": [0.0, 1.0, 2.0]
})";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("qrot_test_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string scenario(const std::string& name) { return std::string(QROT_SCENARIO_DIR) + "/" + name + ".json"; }

int run_cli(const std::string& args) {
  const std::string cmd = std::string(QROT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  return text.replace(pos, from.size(), to);
}

}  // namespace

TEST(Parse, MinimalScenario) {
  const auto sc = qrot::parse_scenario(kMinimal);
  qrot::validate_scenario(sc);
  EXPECT_EQ(sc.name, "t");
  EXPECT_EQ(sc.basis.s, qrot::HalfInt::from_twice(1));
  EXPECT_EQ(sc.times.size(), 3u);
  EXPECT_EQ(sc.initial.states.size(), 2u);
  EXPECT_DOUBLE_EQ(sc.tolerances.equivalence, 1e-9);
}

TEST(Parse, HalfIntegersAsNumbersOrFractions) {
  EXPECT_EQ(qrot::parse_scenario(replace(kMinimal, "\"1/2\"", "0.5")).basis.s, qrot::HalfInt::from_twice(1));
  EXPECT_EQ(qrot::parse_scenario(replace(kMinimal, "\"1/2\"", "\"3/2\"")).basis.s, qrot::HalfInt::from_twice(3));
  EXPECT_THROW(qrot::parse_scenario(replace(kMinimal, "\"1/2\"", "0.3")), qrot::ParseError);
}

TEST(Parse, DefaultTimeGridIsFivePeriods) {
  auto text = replace(kMinimal, R"(,
  "times": [0.0, 1.0, 2.0])", "");
  const auto sc = qrot::parse_scenario(text);
  ASSERT_EQ(sc.times.size(), 64u);
  EXPECT_DOUBLE_EQ(sc.times.front(), 0.0);
  EXPECT_NEAR(sc.times.back(), 5 * 2 * 3.141592653589793 / 0.5, 1e-12);
  EXPECT_THROW(qrot::parse_scenario(replace(text, "0.5}", "0.0}")), qrot::ValidationError);
}

TEST(Parse, MissingFieldIsNamed) {
  try {
    qrot::parse_scenario(replace(kMinimal, R"("potential": {"family": "coulomb", "alpha": 1.0, "mass": 1.0},)", ""));
    FAIL() << "expected a parse error";
  } catch (const qrot::ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("potential"), std::string::npos) << e.what();
  }
}

TEST(Parse, MalformedJsonReportsLine) {
  try {
    qrot::parse_scenario(replace(kMinimal, R"("omega_z": 0.5)", R"("omega_z": 0.5,,)"));
    FAIL() << "expected a parse error";
  } catch (const qrot::ParseError& e) {
    EXPECT_EQ(e.line(), 4);
  }
}

TEST(Validate, RejectsDomainViolations) {
  auto check = [](const std::string& text) {
    EXPECT_THROW(qrot::validate_scenario(qrot::parse_scenario(text)), qrot::ValidationError) << text;
  };
  check(replace(kMinimal, R"("n": 2, "l": 1)", R"("n": 1, "l": 1)"));
  check(replace(kMinimal, "[0.0, 1.0, 2.0]", "[]"));
  check(replace(kMinimal, R"("initial": {"n": 2)", R"("initial": {"n": 3)"));
  check(replace(kMinimal, R"("times")", R"("tolerances": {"equivalence": -1}, "times")"));
  check(replace(kMinimal, R"("times")", R"("fd_points": 50, "times")"));
}

TEST(Validate, BadDensityIsRejected) {
  const auto sc = qrot::parse_scenario(replace(kMinimal, "[[0.5, 0.5], [0.5, 0.5]]", "[[0.7, 0.5], [0.5, 0.5]]"));
  try {
    qrot::validate_scenario(sc);
    FAIL() << "expected a validation error";
  } catch (const qrot::ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("trace"), std::string::npos) << e.what();
  }
}

TEST(Run, BundledScenarioVerdicts) {
  const auto c = qrot::run_scenario(scenario("coulomb_equiv"));
  EXPECT_EQ(c.equivalence.verdict_criterion, qrot::Verdict::equivalent);
  EXPECT_EQ(c.equivalence.verdict_dynamical, qrot::Verdict::equivalent);
  EXPECT_TRUE(c.oracle.fd_passed);
  EXPECT_TRUE(c.oracle.evolution_passed);
  for (const auto& s : c.equivalence.samples) EXPECT_LT(s.max_abs_diff, 1e-11);

  const auto r = qrot::run_scenario(scenario("rapid_well"));
  EXPECT_EQ(r.equivalence.verdict_criterion, qrot::Verdict::not_equivalent);
  EXPECT_EQ(r.equivalence.verdict_dynamical, qrot::Verdict::not_equivalent);
  EXPECT_TRUE(r.oracle.fd_passed);
}

TEST(Run, MissingFileIsIoError) {
  EXPECT_THROW(qrot::run_scenario(std::string("/nonexistent/scenario.json")), qrot::IoError);
}

TEST(Output, HeadersAndDeterminism) {
  const auto dir = scratch("out");
  const auto b = qrot::run_scenario(scenario("coulomb_equiv"));
  const auto files = qrot::emit_outputs(b, (dir / "a").string());
  ASSERT_EQ(files.size(), 3u);
  const auto spec = slurp(dir / "a.spectrum.csv");
  const auto evo = slurp(dir / "a.evolution.csv");
  EXPECT_EQ(spec.substr(0, spec.find('\n')), "family,n,l,s,J,M,extra_index,k_z,omega,E");
  EXPECT_EQ(evo.substr(0, evo.find('\n')),
            "t,row_label,col_label,re_active,im_active,re_passive,im_passive,abs_diff,trace_distance");
  const auto report = nlohmann::json::parse(slurp(dir / "a.report.json"));
  EXPECT_EQ(report["criterion"]["verdict"], "equivalent");

  qrot::emit_outputs(qrot::run_scenario(scenario("coulomb_equiv")), (dir / "b").string());
  for (const char* ext : {".spectrum.csv", ".evolution.csv", ".report.json"}) {
    EXPECT_EQ(slurp(dir / (std::string("a") + ext)), slurp(dir / (std::string("b") + ext))) << ext;
  }
  fs::remove_all(dir);
}

TEST(Output, EnergyScaleAppliesToSpectrumCsv) {
  auto sc = qrot::load_scenario(scenario("coulomb_equiv"));
  const auto base = qrot::spectrum_csv(qrot::run_scenario(sc));
  sc.energy_scale = 27.211386245988;
  const auto scaled = qrot::spectrum_csv(qrot::run_scenario(sc));
  EXPECT_NE(base, scaled);
  EXPECT_EQ(base.substr(0, base.find('\n')), scaled.substr(0, scaled.find('\n')));
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch("cli");
  EXPECT_EQ(run_cli("compare --quiet --scenario " + scenario("coulomb_equiv") + " --out " + (dir / "c").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "c.report.json"));
  EXPECT_EQ(run_cli("criterion --quiet --scenario " + scenario("rapid_well") + " --out " + (dir / "r").string()), 0);
  EXPECT_EQ(run_cli("bogus"), 1);
  EXPECT_EQ(run_cli("compare"), 1);
  EXPECT_EQ(run_cli("compare --scenario " + (dir / "missing.json").string()), 5);

  {
    std::ofstream(dir / "broken.json") << "{\n  \"name\": \"x\",\n  oops\n}\n";
  }
  EXPECT_EQ(run_cli("compare --scenario " + (dir / "broken.json").string()), 2);

  {
    std::ofstream(dir / "empty_times.json") << replace(kMinimal, "[0.0, 1.0, 2.0]", "[]");
  }
  EXPECT_EQ(run_cli("evolve --scenario " + (dir / "empty_times.json").string() + " --out " + (dir / "e").string()), 3);
  EXPECT_FALSE(fs::exists(dir / "e.report.json"));
  EXPECT_FALSE(fs::exists(dir / "e.evolution.csv"));

  EXPECT_EQ(run_cli("compare --scenario " + scenario("coulomb_equiv") + " --tol -1 --out " + (dir / "t").string()), 3);
  EXPECT_EQ(run_cli("--version"), 0);
  fs::remove_all(dir);
}
