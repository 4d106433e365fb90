#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nbmp/cli.hpp"

using namespace nbmp;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kTanhSpec =
    R"({"n":2,"m":2,"d":[3,4],"l":[2,2],"theta":0,"sigma":[240,32],"C":[[1,27],[0.4,2]]})";
const std::string kLvSpec = R"({"n":2,"m":2,"d":[3,4],"sigma":[1,1],"C":[[1,2],[3,1]]})";

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("nbmp_cli_test_" + name);
}

std::size_t count_lines(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::size_t n = 0;
  for (std::string line; std::getline(f, line);) ++n;
  return n;
}

}  // namespace

TEST(Cli, BoundsOnTanhSpec) {
  const auto r = run({"bounds", "--alpha", "0.5,0.3333333333", kTanhSpec});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["upper"].get<double>(), 254.558, 1e-3);
  EXPECT_NEAR(j["lower"].get<double>(), 1.701358, 1e-4);
  EXPECT_EQ(j["branch"], "general");
  const auto b = bounds_result_from_json(j);
  EXPECT_EQ(b.upper, j["upper"].get<double>());
}

TEST(Cli, BoundsBranchesAgree) {
  const auto g = json::parse(run({"bounds", "--alpha", "0.5,0.25", kTanhSpec}).out);
  const auto t = json::parse(run({"bounds", "--alpha", "0.5,0.25", "--branch", "two_species_m2", kTanhSpec}).out);
  EXPECT_NEAR(g["upper"].get<double>(), t["upper"].get<double>(), 1e-10);
  EXPECT_EQ(t["branch"], "two_species_m2");
  const auto z = json::parse(run({"bounds", "--alpha", "1,1", "--chi", "0", kTanhSpec}).out);
  EXPECT_EQ(z["lower"].get<double>(), 0.0);
}

TEST(Cli, ExactTanhWritesGridCsv) {
  const auto csv = temp_path("tanh.csv");
  const auto r = run({"exact", "tanh", "--d1", "3", "--d2", "4", "--c11", "1", "--c22", "2", "--grid",
                      "-10:10:0.01", "--csv", csv.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["k1"].get<double>(), 60.0);
  EXPECT_EQ(j["c21"].get<double>(), 0.4);
  EXPECT_EQ(j["rows"].get<std::size_t>(), 2001u);
  EXPECT_EQ(count_lines(csv), 2002u);
  std::ifstream f(csv);
  std::string header;
  std::getline(f, header);
  EXPECT_EQ(header, "x,u1,u2");
  std::filesystem::remove(csv);
}

TEST(Cli, ExactCosDefaultsToWorkedExample) {
  const auto r = run({"exact", "cos"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(j["sigma"][i].get<double>(), 1.0, 1e-12);
  EXPECT_EQ(cos_solution_from_json(j).k[0], 0.1);
}

TEST(Cli, ExactCosInfeasibleIsDomainError) {
  const auto r = run({"exact", "cos", "--m", "0.1,0.09,0.08"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("infeasible"), std::string::npos) << r.err;
}

TEST(Cli, ResidualPassAndFail) {
  EXPECT_EQ(run({"residual", "tanh"}).code, 0);
  EXPECT_EQ(run({"residual", "cos"}).code, 0);
  const std::string perturbed =
      R"({"n":2,"m":2,"d":[3,4],"l":[2,2],"theta":0,"sigma":[241,32],"C":[[1,27],[0.4,2]]})";
  const auto r = run({"residual", "tanh", "--spec", perturbed});
  EXPECT_EQ(r.code, 3);
  EXPECT_FALSE(json::parse(r.out)["pass"].get<bool>());
}

TEST(Cli, NonexistenceBlockedCaseOne) {
  const auto r = run({"nonexistence",
                      R"({"d":[1,1,1],"sigma":[1,1,0.05],"C":[[1,0.5,1],[0.5,1,1],[15,0.9166666666666666,1]]})"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_TRUE(j["case_i"]["blocked"].get<bool>());
  EXPECT_FALSE(j["case_ii"]["conclusive"].get<bool>());
}

TEST(Cli, VerifyHExitCodes) {
  EXPECT_EQ(run({"verify-h", kLvSpec}).code, 0);
  const auto r = run({"verify-h", kLvSpec, "--ulow", "0.6666666,1", "--ubar", "2,2"});
  EXPECT_EQ(r.code, 3);
  EXPECT_FALSE(json::parse(r.out)["lower"]["pass"].get<bool>());
  const std::string degenerate = R"({"d":[1],"sigma":[1],"C":[[1]]})";
  EXPECT_EQ(run({"verify-h", degenerate}).code, 1);
}

TEST(Cli, BarrierVerifyAndCurves) {
  const auto csv = temp_path("curves.csv");
  const auto r = run({"barrier", "--alpha", "1,2", "--d", "3,4", "--m", "2", "--hull", "0.3333333333333333,0.5",
                      "--verify", "--csv", csv.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["lambda1"].get<double>(), 2.0 / 7, 1e-12);
  EXPECT_TRUE(j["containment"]["pass"].get<bool>());
  EXPECT_EQ(count_lines(csv), 1u + 5u * 101u);
  std::filesystem::remove(csv);
  const auto u = run({"barrier", "--orientation", "upper", "--alpha", "1,2", "--d", "3,4", "--m", "2", "--hull", "1,1"});
  EXPECT_NEAR(json::parse(u.out)["lambda2"].get<double>(), 20, 1e-12);
  EXPECT_EQ(run({"barrier", "--alpha", "1,2", "--d", "3,4", "--m", "1", "--hull", "1,1"}).code, 1);
}

TEST(Cli, SimulateWithBoundsCheck) {
  // Initial data on the exact front at x = -1.
  const auto profile = tanh_profile(tanh_family(3.0, 4.0, 1.0, 2.0));
  const auto j = profile(-1.0);
  std::string u0 = format_double(j.u[0]) + "," + format_double(j.u[1]);
  std::string w0 = format_double(2 * j.u[0] * j.du[0]) + "," + format_double(2 * j.u[1] * j.du[1]);
  const auto csv = temp_path("traj.csv");
  const auto ok = run({"simulate", kTanhSpec, "--u0", u0, "--w0", w0, "--span", "-1:1", "--step", "0.001",
                       "--alpha", "0.5,0.3333333333333333", "--check-bounds", "--csv", csv.string()});
  ASSERT_EQ(ok.code, 0) << ok.err;
  const json s = json::parse(ok.out);
  EXPECT_EQ(s["points"].get<std::size_t>(), 2001u);
  EXPECT_TRUE(s["check"]["pass"].get<bool>());
  EXPECT_EQ(count_lines(csv), 2002u);
  std::ifstream f(csv);
  std::string header;
  std::getline(f, header);
  EXPECT_EQ(header, "x,u1,u2,w1,w2,p,q");
  std::filesystem::remove(csv);
  const auto bad = run({"simulate", kTanhSpec, "--u0", u0, "--w0", w0, "--span", "-1:1", "--check-bounds",
                        "--bounds", "10,20", "--alpha", "0.5,0.3333333333333333"});
  EXPECT_EQ(bad.code, 3);
  EXPECT_EQ(run({"simulate", kTanhSpec, "--u0", u0, "--w0", w0, "--span", "-1:1", "--step", "0"}).code, 2);
  EXPECT_EQ(run({"simulate", kTanhSpec, "--u0", "0,1", "--w0", w0, "--span", "-1:1"}).code, 1);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"bounds", kTanhSpec}).code, 2);  // --alpha missing
  const auto r = run({"bounds", "--alpha", "1,1", "{\"d\": [1,\n 2"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
  EXPECT_EQ(run({"bounds", "--alpha", "1,1", "/nonexistent/spec.json"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, DimensionMismatchIsDomainError) {
  const auto r = run({"bounds", "--alpha", "1,1,1", kTanhSpec});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("alpha"), std::string::npos) << r.err;
}

TEST(Cli, OutputIsDeterministic) {
  const std::vector<std::string> args{"barrier", "--alpha", "1,2", "--d", "3,4", "--m", "2", "--hull", "0.3,0.5", "--verify"};
  EXPECT_EQ(run(args).out, run(args).out);
  const std::vector<std::string> ex{"exact", "cos"};
  EXPECT_EQ(run(ex).out, run(ex).out);
}

TEST(Cli, OutFileOption) {
  const auto path = temp_path("out.json");
  const auto r = run({"--out", path.string(), "exact", "tanh"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(path);
  const json j = json::parse(f);
  EXPECT_EQ(tanh_solution_from_json(j).k2, 8.0);
  std::filesystem::remove(path);
}
