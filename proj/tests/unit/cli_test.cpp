#include "cli.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

namespace isocurv::cli {
namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream cs(line);
    std::string cell;
    while (std::getline(cs, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("isocurv_cli_test_" + name);
}

TEST(CurvatureCommand, ConstantNegativeK) {
  const Outcome r = run({"curvature", "--phi3", "f=1/y; g=z", "--domain", "1,3.14159,1,6.28318", "--grid", "8x8"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 65u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"u", "v", "x", "y", "z", "E", "F", "G", "l", "m", "n", "K", "H"}));
  for (std::size_t k = 1; k < rows.size(); ++k) {
    ASSERT_EQ(rows[k].size(), 13u);
    EXPECT_NEAR(std::stod(rows[k][11]), -1.0, 1e-10);
  }
}

TEST(CurvatureCommand, SeventeenSignificantDigits) {
  const Outcome r = run({"curvature", "--coords", "u;v;u*v", "--domain", "0,1,0,1", "--grid", "3x3", "--margin", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 10u);
  // x = u on the middle row is 0.5 exactly; the first form of a graph over the
  // (x, y) plane is Euclidean.
  EXPECT_EQ(rows[4][0], "0.5");
  EXPECT_EQ(rows[4][5], "1");
  EXPECT_EQ(rows[4][6], "0");
  EXPECT_EQ(rows[4][7], "1");
  EXPECT_EQ(rows[4][11], "-1");
}

TEST(CurvatureCommand, NonAdmissibleSurfaceExitsOne) {
  const Outcome r = run({"curvature", "--phi3", "f=1; g=1"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("NotAdmissible"), std::string::npos) << r.err;
}

TEST(CurvatureCommand, MissingSemicolonReportsOffset) {
  const Outcome r = run({"curvature", "--phi3", "f=1/y g=z"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("offset 6"), std::string::npos) << r.err;
}

TEST(CurvatureCommand, UsageErrors) {
  EXPECT_EQ(run({"curvature", "--phi3", "f=1/y; g=z", "--grid", "1x8"}).code, 2);
  EXPECT_EQ(run({"curvature", "--phi3", "f=1/y; g=z", "--domain", "2,1,1,2"}).code, 2);
  EXPECT_EQ(run({"curvature", "--phi3", "f=1/y; g=z", "--domain", "1,2,1"}).code, 2);
  EXPECT_EQ(run({"curvature", "--phi3", "f=1/y; g=q"}).code, 2);
  EXPECT_EQ(run({"curvature", "--phi3", "f=1/y; g=z", "--phi2", "f=x; g=z"}).code, 2);
  EXPECT_EQ(run({"curvature"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
}

TEST(CurvatureCommand, DomainAcceptsExpressions) {
  const Outcome a = run({"curvature", "--phi3", "f=1/y; g=z", "--domain", "1,pi,1,2*pi", "--grid", "4x4"});
  const Outcome b = run({"curvature", "--phi3", "f=1/y; g=z", "--domain", "1,3.141592653589793,1,6.283185307179586",
                     "--grid", "4x4"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(CurvatureCommand, OutputIsDeterministic) {
  const std::vector<std::string> args = {"curvature", "--phi3", "f=exp(y); g=sin(z)+2*z", "--grid", "16x16"};
  const Outcome a = run(args);
  const Outcome b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);

  const auto path = temp_file("det.csv");
  auto with_file = args;
  with_file.insert(with_file.end(), {"--output", path.string()});
  ASSERT_EQ(run(with_file).code, 0);
  std::ifstream in(path, std::ios::binary);
  std::stringstream content;
  content << in.rdbuf();
  EXPECT_EQ(content.str(), a.out);
  std::filesystem::remove(path);
}

TEST(VerifyCommand, MinimalTangentFamily) {
  const Outcome r = run({"verify", "--family", "T1_I2", "--const", "c=1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto pos = r.out.find("max_residual=");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_LE(std::stod(r.out.substr(pos + 13)), 1e-10);
  EXPECT_NE(r.out.find("pass=true"), std::string::npos);
}

TEST(VerifyCommand, PowerFamilyOnItsConstraint) {
  const Outcome r = run({"verify", "--family", "T2_I3", "--const", "c1=1,c2=0.3,c3=0.7"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("RESULT family=T2_I3"), std::string::npos);
}

TEST(VerifyCommand, InvalidConstantsExitTwo) {
  const Outcome r = run({"verify", "--family", "T2_II1", "--const", "K0=0.5"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("negative"), std::string::npos) << r.err;
  EXPECT_EQ(run({"verify", "--family", "T1_I2", "--const", "q=1"}).code, 2);
  EXPECT_EQ(run({"verify", "--family", "T9"}).code, 2);
  EXPECT_EQ(run({"verify", "--family", "T2_I1", "--g-formula", "exp(y)"}).code, 2);
}

TEST(VerifyCommand, FailureExitsOne) {
  // A tolerance below what the ODE-generated family can reach.
  const Outcome r = run({"verify", "--family", "T2_II2", "--tol", "1e-14"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("pass=false"), std::string::npos);
}

TEST(VerifyCommand, AllFamilies) {
  const Outcome r = run({"verify", "--family", "all", "--grid", "16x16"});
  EXPECT_EQ(r.code, 0) << r.out;
  std::size_t lines = 0;
  for (std::size_t p = r.out.find("RESULT "); p != std::string::npos; p = r.out.find("RESULT ", p + 1)) ++lines;
  EXPECT_EQ(lines, 9u);
}

TEST(GenerateCommand, ObjMeshCounts) {
  const Outcome r = run({"generate", "--example", "4", "--format", "obj", "--grid", "5x7"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::size_t v = 0, f = 0;
  std::string first_face;
  while (std::getline(in, line)) {
    if (line.rfind("v ", 0) == 0) ++v;
    if (line.rfind("f ", 0) == 0 && f++ == 0) first_face = line;
  }
  EXPECT_EQ(v, 35u);
  EXPECT_EQ(f, 2u * 4u * 6u);
  EXPECT_EQ(first_face, "f 1 8 9");
}

TEST(GenerateCommand, ObjVerticesLieOnTheSurface) {
  const Outcome r = run({"generate", "--example", "4", "--grid", "3x3"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string tag;
  double x, y, z;
  int count = 0;
  while (in >> tag && tag == "v" && in >> x >> y >> z) {
    EXPECT_NEAR(x, z / y, 1e-15);
    ++count;
  }
  EXPECT_EQ(count, 9);
}

TEST(GenerateCommand, CsvCornersOfCmcExample) {
  const Outcome r = run({"generate", "--example", "2", "--format", "csv", "--grid", "2x2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"u", "v", "x", "y", "z"}));
  const double two_pi = 2 * std::numbers::pi;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const double z = std::stod(rows[k][4]);
    EXPECT_TRUE(z == 0.0 || z == two_pi);
    EXPECT_EQ(std::stod(rows[k][2]), -std::sqrt(z));
  }
}

TEST(GenerateCommand, UnknownExampleExitsTwo) {
  EXPECT_EQ(run({"generate", "--example", "7"}).code, 2);
  EXPECT_EQ(run({"generate", "--example", "1", "--format", "ply"}).code, 2);
}

TEST(GenerateCommand, ExplicitSurface) {
  const Outcome r = run({"generate", "--phi2", "f=x; g=z", "--format", "csv", "--grid", "2x2", "--margin", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[4], (std::vector<std::string>{"2", "2", "2", "4", "2"}));
}

TEST(ProbeCommand, DegenerateCases) {
  Outcome r = run({"probe-ratio", "--phi3", "f=1/y; g=z"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("degenerate: H_zero"), std::string::npos) << r.out;
  r = run({"probe-ratio", "--phi3", "f=-0.25*y^2; g=1/z"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("degenerate: K_zero"), std::string::npos) << r.out;
}

TEST(ProbeCommand, PolynomialPairHasNoRatio) {
  const Outcome r = run({"probe-ratio", "--phi3", "f=y^2+2; g=z^2+z+1", "--domain", "1,2,1,2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto pos = r.out.find("min_scaled_residual ");
  ASSERT_NE(pos, std::string::npos) << r.out;
  EXPECT_GT(std::stod(r.out.substr(pos + 20)), 1e-3);
}

TEST(ProbeCommand, ErrorCodes) {
  EXPECT_EQ(run({"probe-ratio", "--phi3", "f=y; g=3"}).code, 1);
  EXPECT_EQ(run({"probe-ratio", "--phi3", "f=y+; g=z"}).code, 2);
}

TEST(ConfigFile, SuppliesOptionsAndCommandLineWins) {
  const auto path = temp_file("config.txt");
  {
    std::ofstream cfg(path);
    cfg << "# Example 4\n\nphi3 = f=1/y; g=z\ndomain=1,pi,1,2*pi\ngrid=8x8\n";
  }
  const Outcome from_file = run({"curvature", "--config", path.string()});
  const Outcome direct = run({"curvature", "--phi3", "f=1/y; g=z", "--domain", "1,pi,1,2*pi", "--grid", "8x8"});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  EXPECT_EQ(from_file.out, direct.out);

  const Outcome overridden = run({"curvature", "--config", path.string(), "--grid", "3x3"});
  ASSERT_EQ(overridden.code, 0) << overridden.err;
  EXPECT_EQ(csv_rows(overridden.out).size(), 10u);
  std::filesystem::remove(path);
}

TEST(ConfigFile, Errors) {
  EXPECT_EQ(run({"curvature", "--config", temp_file("missing.txt").string()}).code, 2);
  const auto path = temp_file("bad.txt");
  {
    std::ofstream cfg(path);
    cfg << "grid 8x8\n";
  }
  EXPECT_EQ(run({"curvature", "--config", path.string()}).code, 2);
  {
    std::ofstream cfg(path);
    cfg << "colour=blue\nphi3=f=y; g=z\n";
  }
  EXPECT_EQ(run({"curvature", "--config", path.string()}).code, 2);
  std::filesystem::remove(path);
}

TEST(Help, ExitsZero) {
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"verify", "--help"}).code, 0);
}

}  // namespace
}  // namespace isocurv::cli
