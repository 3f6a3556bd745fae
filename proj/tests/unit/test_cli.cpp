#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_support.hpp"
#include "selfadj/report_json.hpp"

using namespace selfadj;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  // ctest runs tests as parallel processes, so the capture file is per process.
  const fs::path out = fs::path(::testing::TempDir()) / ("cli_stdout_" + std::to_string(::getpid()) + ".txt");
  const std::string cmd = env + " " + SELFADJ_CLI_PATH + " " + args + " > " + out.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(CliSupport, Grid) {
  EXPECT_EQ(cli::parse_grid("-2:2:1"), (std::vector<double>{-2, -1, 0, 1, 2}));
  EXPECT_EQ(cli::parse_grid("0:0:1"), (std::vector<double>{0}));
  EXPECT_EQ(cli::parse_grid("0:1:0.1").size(), 11u);
  EXPECT_THROW(cli::parse_grid("0:1"), Error);
  EXPECT_THROW(cli::parse_grid("1:0:0.1"), Error);
  EXPECT_THROW(cli::parse_grid("0:1:0"), Error);
  EXPECT_THROW(cli::parse_grid("0:x:1"), Error);
}

TEST(CliSupport, Interval) {
  EXPECT_EQ(cli::parse_interval("0:inf"), Interval(0.0, kInfinity));
  EXPECT_EQ(cli::parse_interval("-inf:2"), Interval(-kInfinity, 2.0));
  EXPECT_THROW(cli::parse_interval("2:1"), Error);
}

TEST(CliSupport, ConfigInjectionPrecedence) {
  const fs::path cfg = fs::path(::testing::TempDir()) / "cfg.json";
  std::ofstream(cfg) << R"({"kappa": 0.25, "emin": "-5", "with-eigenfunctions": true, "theta": null, "mesh-per-decade": 32})";
  const auto args = cli::inject_config({"eigen", "--kappa", "0.5", "--config", cfg.string()});
  const std::vector<std::string> expect{"eigen", "--kappa", "0.5", "--config", cfg.string(), "--emin", "-5",
                                        "--with-eigenfunctions", "--mesh-per-decade", "32"};
  EXPECT_EQ(args, expect);
  std::ofstream(cfg) << R"({"kappa": [1, 2]})";
  EXPECT_THROW(cli::inject_config({"eigen", "--config", cfg.string()}), Error);
}

TEST(CliSupport, AtomicWrite) {
  const fs::path p = fs::path(::testing::TempDir()) / "atomic" / "r.json";
  cli::write_atomically(p, "one");
  cli::write_atomically(p, "two");
  EXPECT_EQ(slurp(p), "two");
  for (const auto& e : fs::directory_iterator(p.parent_path())) EXPECT_EQ(e.path().filename(), "r.json");
}

TEST(Cli, ClassifyVerdicts) {
  auto r = run("classify --potential inverse-square --kappa 0.5");
  ASSERT_EQ(r.code, 0);
  auto j = report::Json::parse(r.out);
  EXPECT_EQ(j["results"]["left"]["verdict"], "LCC");
  EXPECT_EQ(j["results"]["right"]["verdict"], "LPC");
  r = run("classify --potential inverse-square --kappa 1.0");
  j = report::Json::parse(r.out);
  EXPECT_EQ(j["results"]["left"]["verdict"], "LPC");
  EXPECT_EQ(j["results"]["right"]["verdict"], "LPC");
  EXPECT_EQ(run("classify --potential inverse-square").code, 2);
}

TEST(Cli, InconclusiveClassificationExitsThree) {
  EXPECT_EQ(run("classify --kappa 0.5 --force-numerical --endpoint left --max-windows 8 --cauchy-tol 1e-300").code, 3);
}

TEST(Cli, Eigen) {
  auto r = run("eigen --kappa 0.5 --theta 2.3561945 --emin -10 --emax -1e-8");
  ASSERT_EQ(r.code, 0);
  auto j = report::Json::parse(r.out);
  ASSERT_EQ(j["results"]["search"]["eigenvalues"].size(), 1u);
  EXPECT_NEAR(j["results"]["search"]["eigenvalues"][0]["energy"].get<double>(), -1.0, 1e-6);
  r = run("eigen --kappa 0.5 --theta 0 --emin -10 --emax -1e-8");
  EXPECT_TRUE(report::Json::parse(r.out)["results"]["search"]["eigenvalues"].empty());
  EXPECT_EQ(run("eigen --kappa 1.5 --theta 0.5 --emin -10 --emax -1e-8").code, 2);
  EXPECT_EQ(run("eigen --kappa 0.5 --theta 4").code, 2);
  EXPECT_EQ(run("eigen --kappa 0.5 --theta 1 --emax 1").code, 2);
}

TEST(Cli, AbSpectrum) {
  auto r = run("ab spectrum --flux 0.5 --tau1 const:2.3561945 --tau2 const:0 --p-grid -2:2:1");
  ASSERT_EQ(r.code, 0);
  const auto j = report::Json::parse(r.out);
  const auto& pts = j["results"]["spectrum"]["curves"][0]["points"];
  ASSERT_EQ(pts.size(), 5u);
  for (const auto& pt : pts) {
    const double p = pt["p"].get<double>();
    EXPECT_NEAR(pt["energies"][0].get<double>(), -1.0 + p * p, 1e-6);
  }
  r = run("ab spectrum --flux 2 --tau const:0 --p-grid 0:0:1 --format csv");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "m,p,E,kind\n,0,0,essential_bottom\n");
  EXPECT_EQ(run("ab spectrum --flux 0.5 --tau const:0 --p-grid 0:0:1").code, 2);
  EXPECT_EQ(run("ab spectrum --flux 0.5 --tau1 const:0 --tau2 expr:p --p-grid -1:1:1").code, 2);
}

TEST(Cli, TransformCheck) {
  auto r = run("ab transform-check --n-ang 64 --n-z 128");
  ASSERT_EQ(r.code, 0);
  auto j = report::Json::parse(r.out)["results"]["checks"];
  EXPECT_LE(j["parseval_defect"].get<double>(), 1e-3);
  EXPECT_LE(j["leakage"].get<double>(), 1e-8);
  j = report::Json::parse(run("ab transform-check --function zero").out)["results"]["checks"];
  EXPECT_EQ(j["parseval_defect"].get<double>(), 0.0);
  EXPECT_EQ(j["intertwining_defect"].get<double>(), 0.0);
  EXPECT_EQ(run("ab transform-check --r-center 0.5 --r-width 0.5").code, 2);
}

TEST(Cli, SolveIvpAndDecompose) {
  auto r = run("solve-ivp --potential constant --c 1 --x0 1 --to 3 --format csv");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, 8), "x,u,du\n1");
  r = run("decompose --kappa 0.3 --c1 1 --c2 1");
  ASSERT_EQ(r.code, 0);
  const auto d = report::Json::parse(r.out)["results"]["decomposition"];
  EXPECT_NEAR(d["theta"].get<double>(), 0.78539816339744828, 1e-14);
  r = run("decompose --mode sigma --kappa 0.5 --test cutoff --r0 0.5 --r1 1 --grid 0.1:1.5:0.1 --theta 1.5707963267948966");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(report::Json::parse(r.out)["results"]["membership"], "in-extension-only");
}

TEST(Cli, MalformedInputNeverCrashes) {
  for (const char* a : {"", "bogus", "eigen --kappa abc", "ab", "ab spectrum --flux x --tau const:0 --p-grid 0:1:1",
                        "classify --kappa 0.5 --endpoint middle", "eigen --config /nonexistent.json",
                        "solve-ivp --kappa 0.5 --x0 1", "ab spectrum --flux 1 --tau const:0 --p-grid 0:1"})
    EXPECT_EQ(run(a).code, 2) << a;
}

TEST(Cli, OutputDirectoryAndDeterminism) {
  const fs::path dir = fs::path(::testing::TempDir()) / "cli_out";
  fs::remove_all(dir);
  const std::string cmd = "ab spectrum --flux 0.5 --tau1 const:2.3561945 --tau2 const:0 --p-grid -1:1:0.5";
  ASSERT_EQ(run(cmd, "SELFADJ_OUTPUT_DIR=" + dir.string()).code, 0);
  const std::string first = slurp(dir / "ab-spectrum.json");
  ASSERT_FALSE(first.empty());
  ASSERT_EQ(run(cmd, "SELFADJ_OUTPUT_DIR=" + dir.string()).code, 0);
  EXPECT_EQ(slurp(dir / "ab-spectrum.json"), first);
}

TEST(Cli, InputsEchoReproducesReport) {
  const fs::path dir = fs::path(::testing::TempDir());
  const fs::path a = dir / "echo_a.json", b = dir / "echo_b.json", cfg = dir / "echo_cfg.json";
  ASSERT_EQ(run("eigen --kappa -0.25 --theta 2.2 -o " + a.string()).code, 0);
  const auto inputs = report::Json::parse(slurp(a))["inputs"];
  std::ofstream(cfg) << inputs.dump();
  ASSERT_EQ(run("eigen --config " + cfg.string() + " -o " + b.string()).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
}

TEST(Cli, CsvAndJsonCarrySameNumbers) {
  const std::string cmd = "eigen --kappa 0.75 --theta 2.5";
  const auto j = report::Json::parse(run(cmd).out);
  const std::string csv = run(cmd + " --format csv").out;
  const double e = j["results"]["search"]["eigenvalues"][0]["energy"].get<double>();
  EXPECT_EQ(csv, "m,p,E,kind\n,," + report::format_double(e) + ",bound\n");
}

TEST(Cli, TimingOnlyOnRequest) {
  EXPECT_FALSE(report::Json::parse(run("decompose --kappa 0.3").out).contains("timing"));
  EXPECT_TRUE(report::Json::parse(run("decompose --kappa 0.3 --with-timing").out).contains("timing"));
}
