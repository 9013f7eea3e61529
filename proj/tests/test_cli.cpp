#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "ifem_cli_test";

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + IFEM_EXE + "\" " + args;
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override { fs::create_directories(kWork); }
};

}  // namespace

TEST_F(Cli, UniformRunWritesTable) {
  const fs::path out = kWork / "ex51";
  ASSERT_EQ(run("run ex51 --levels 4 -q --out " + out.string() + " > " + (kWork / "stdout.txt").string()), 0);
  const auto rows = lines(slurp(out / "ex51.csv"));
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], "dof,De,De_order,Die,Die_order,Dre,Dre_order,Dpe,Dpe_order");
  EXPECT_NE(rows[1].find(",--"), std::string::npos);
  long prev = 0;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const long dof = std::stol(rows[k].substr(0, rows[k].find(',')));
    EXPECT_GT(dof, prev);
    prev = dof;
  }
  EXPECT_EQ(slurp(kWork / "stdout.txt"), slurp(out / "ex51.csv"));
  EXPECT_TRUE(fs::exists(out / "ex51_summary.txt"));
  EXPECT_GT(fs::file_size(out / "ex51_errors.svg"), 0u);
}

TEST_F(Cli, RerunIsByteIdentical) {
  const fs::path a = kWork / "rep_a", b = kWork / "rep_b";
  ASSERT_EQ(run("run ex52 --levels 3 --coarse-n 16 -q --out " + a.string() + " > /dev/null"), 0);
  ASSERT_EQ(run("run ex52 --levels 3 --coarse-n 16 -q --out " + b.string() + " > /dev/null"), 0);
  EXPECT_EQ(slurp(a / "ex52.full.csv"), slurp(b / "ex52.full.csv"));
  EXPECT_EQ(slurp(a / "ex52.csv"), slurp(b / "ex52.csv"));
}

TEST_F(Cli, AdaptiveRunFromConfig) {
  const fs::path cfg = kWork / "ad.cfg", out = kWork / "ad";
  std::ofstream(cfg) << "problem = ex53\nbeta_minus = 1000\nmax_dof = 400\ntheta = 0.3\n";
  ASSERT_EQ(run("run --config " + cfg.string() + " -q --out " + out.string() + " > /dev/null"), 0);
  const auto rows = lines(slurp(out / "ex53.csv"));
  ASSERT_GE(rows.size(), 3u);
  EXPECT_EQ(rows[0], "iter,dof,energy_err,eta,kappa");
  const std::string summary = slurp(out / "ex53_summary.txt");
  EXPECT_NE(summary.find("beta_minus = 1000"), std::string::npos);
  EXPECT_NE(summary.find("theta = 0.3"), std::string::npos);
}

TEST_F(Cli, DumpMesh) {
  const fs::path f = kWork / "m.txt";
  ASSERT_EQ(run("dump-mesh ex52 -n 8 -o " + f.string()), 0);
  EXPECT_EQ(slurp(f).rfind("ifem-mesh v1", 0), 0u);
}

TEST_F(Cli, VersionAndErrors) {
  EXPECT_EQ(run("version > /dev/null"), 0);
  EXPECT_EQ(run("run ex51 --levels 1 -q --out " + (kWork / "bad").string() + " > /dev/null 2>&1"), 2);
  EXPECT_NE(run("run nosuch > /dev/null 2>&1"), 0);
}
