#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct Result {
  int code;
  std::string out;
};

Result run(const std::string& args, const std::string& env = {}) {
  const std::string cmd = env + (env.empty() ? "" : " ") + MSLAB_CLI_PATH + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, {}};
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "mslab_cli_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

constexpr double kPi = 3.141592653589793;
const std::string kPiArg = "--zeta-rad 3.141592653589793";

}  // namespace

TEST(Cli, NormOfDegreeOne) {
  const auto r = run("norm --inner \"blaschke:0.5\" " + kPiArg);
  EXPECT_EQ(r.code, 0);
  EXPECT_NEAR(std::stod(first_line(r.out)), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(first_line(r.out).rfind("0.333333333333333", 0), 0u);
}

TEST(Cli, NormAcceptsDegrees) {
  const auto r = run("norm --inner \"blaschke:0.5\" --zeta-deg 180");
  EXPECT_EQ(r.code, 0);
  EXPECT_NEAR(std::stod(first_line(r.out)), 1.0 / 3.0, 1e-15);
}

TEST(Cli, ClarkTableForSingularWindow) {
  const auto r = run("clark --inner \"singular:xi=0,s=1\" " + kPiArg + " --window 1");
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "index,theta,mass,u_prime_abs");
  std::vector<double> masses;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    ASSERT_EQ(cells.size(), 4u);
    masses.push_back(std::stod(cells[2]));
  }
  ASSERT_EQ(masses.size(), 3u);
  const double side = 2.0 / (1.0 + 4.0 * kPi * kPi);
  EXPECT_NEAR(masses[0], side, 1e-14);
  EXPECT_NEAR(masses[1], 2.0, 1e-14);
  EXPECT_NEAR(masses[2], side, 1e-14);
}

TEST(Cli, VerifyAllOnMonomialSquare) {
  const auto r = run("verify all --inner \"blaschke:0,0\" --zeta-rad 0");
  EXPECT_EQ(r.code, 0) << r.out;
}

TEST(Cli, VerifyJsonSchema) {
  const auto r = run("verify resolvent --inner \"blaschke:0.5,0.3-0.2i\" --zeta-rad 1 --format json --seed 11");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_TRUE(j.is_array());
  const auto& rep = j.at(0);
  for (const char* key : {"suite", "inner_spec", "zeta_theta", "params", "rows", "margins", "seed", "pass"})
    EXPECT_TRUE(rep.contains(key)) << key;
  EXPECT_EQ(rep.at("seed").get<std::uint64_t>(), 11u);
  EXPECT_EQ(rep.at("rows").size(), 20u);
}

TEST(Cli, RefusesPointsNearSpectrum) {
  const auto r = run("norm --inner \"singular:xi=0,s=1\" --zeta-rad 1e-7");
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(run("norm --inner \"singular:xi=1,s=1\" --zeta-rad 1.0000001").code, 2);
  EXPECT_EQ(run("norm --inner \"singular:xi=0,s=1\" --zeta-rad 0.5 --schedule 4,8").code, 0);
}

TEST(Cli, ParseErrorsExit64) {
  EXPECT_EQ(run("norm --inner \"blaschke:1.5\" --zeta-rad 0").code, 64);
  EXPECT_EQ(run("norm --inner \"nonsense\" --zeta-rad 0").code, 64);
  EXPECT_EQ(run("norm --inner \"blaschke:0.5\" --zeta-rad 0 --quad-nodes 1000").code, 64);
  EXPECT_EQ(run("norm --inner \"blaschke:0.5\" --zeta-rad 0 --quad-nodes 128").code, 64);
  EXPECT_EQ(run("norm --zeta-rad 0").code, 64);
  EXPECT_EQ(run("frobnicate --inner \"blaschke:0.5\"").code, 64);
  EXPECT_EQ(run("norm --inner \"blaschke:0.5\" --zeta-rad 0 --zeta-deg 0").code, 64);
  EXPECT_EQ(run("norm --inner \"blaschke:0.5\"").code, 64);
}

TEST(Cli, TruncationReportsEachWindow) {
  const auto r = run("truncation --inner \"singular:xi=0,s=1\" " + kPiArg + " --schedule 0,1,2 --format json");
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("rows").size(), 3u);
  EXPECT_NEAR(j.at("rows").at(0).at("norm_q").get<double>(), 0.25, 1e-13);
  EXPECT_EQ(r.code, j.at("pass").get<bool>() ? 0 : 1);
}

TEST(Cli, QmatrixWritesSidecar) {
  const auto path = scratch("q.csv");
  const auto r = run("qmatrix --inner \"blaschke:0,0\" --zeta-rad 0 --output " + path.string());
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(first_line(slurp(path)), "i,j,re,im");
  const auto side = nlohmann::json::parse(slurp(path.string() + ".json"));
  EXPECT_EQ(side.at("n").get<int>(), 2);
  EXPECT_EQ(side.at("ell").get<int>(), 0);
  EXPECT_EQ(side.at("basis").get<std::string>(), "clark");
  EXPECT_EQ(side.at("provenance").get<std::string>(), "lemma-analytic");
  EXPECT_EQ(side.at("zeta_theta").get<double>(), 0.0);
}

TEST(Cli, QmatrixQuadratureTM) {
  const auto r = run("qmatrix --inner \"blaschke:0,0\" --zeta-rad 0 --provenance quadrature --basis tm --format json");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("provenance").get<std::string>(), "quadrature");
  EXPECT_EQ(j.at("basis").get<std::string>(), "takenaka-malmquist");
  EXPECT_EQ(run("qmatrix --inner \"blaschke:0,0\" --zeta-rad 0 --basis tm").code, 64);
}

TEST(Cli, ByteIdenticalOutput) {
  const std::string args = "verify all --inner \"blaschke:0.5,0.3-0.2i,-0.1+0.6i\" --zeta-rad 2 --format json";
  const auto a = run(args);
  const auto b = run(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const auto c = run("scan --inner \"singular:xi=0,s=1\" --schedule 8,16 --points 6 --threads 3");
  const auto d = run("scan --inner \"singular:xi=0,s=1\" --schedule 8,16 --points 6", "MSLAB_THREADS=2");
  const auto e = run("scan --inner \"singular:xi=0,s=1\" --schedule 8,16 --points 6 --threads 1");
  EXPECT_EQ(c.out, e.out);
  EXPECT_EQ(d.out, e.out);
  EXPECT_FALSE(c.out.empty());
}

TEST(Cli, ConfigFileWithOverrides) {
  const auto cfg = scratch("config.json");
  {
    std::ofstream out(cfg);
    out << R"({"inner": "blaschke:0.5", "zeta-rad": 3.141592653589793})";
  }
  const auto r = run("norm --config " + cfg.string());
  EXPECT_EQ(r.code, 0);
  EXPECT_NEAR(std::stod(first_line(r.out)), 1.0 / 3.0, 1e-15);
  const auto o = run("norm --config " + cfg.string() + " --inner \"blaschke:0,0\" --zeta-rad 0");
  EXPECT_EQ(o.code, 0);
  EXPECT_NEAR(std::stod(first_line(o.out)), 1.0, 1e-13);
}

TEST(Cli, SpectrumSubcommand) {
  const auto r = run("spectrum --inner \"blaschke:0.5,0.3-0.2i\" --zeta-rad 1 --format json");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("rows").size(), 2u);
  EXPECT_TRUE(j.at("pass").get<bool>());
}
