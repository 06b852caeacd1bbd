#include "degenkit/io.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using degenkit::io::Json;

namespace {

class Cli : public ::testing::Test {
protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("degenkit_cli_" + std::to_string(::getpid()) + "_" +
                                       ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  // Runs the CLI in the scratch directory; returns the exit code and captures stdout.
  int run(const std::string &args) {
    std::string cmd = "cd '" + dir.string() + "' && '" DEGENKIT_CLI "' " + args + " > stdout.txt 2> stderr.txt";
    int status = std::system(cmd.c_str());
    out = read("stdout.txt");
    err = read("stderr.txt");
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const std::string &name) const {
    std::ifstream in(dir / name);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  Json json() const { return Json::parse(out); }

  fs::path dir;
  std::string out, err;
};

} // namespace

TEST_F(Cli, BuiltinThenValidate) {
  ASSERT_EQ(run("builtin --kind boxslash --pairing 3 -o bs.json"), 0);
  EXPECT_TRUE(out.empty());
  EXPECT_TRUE(fs::exists(dir / "bs.json"));
  ASSERT_EQ(run("validate bs.json"), 0);
  EXPECT_TRUE(json()["pass"].get<bool>());
  EXPECT_EQ(json()["top_orbits"], 2);
}

TEST_F(Cli, AtlasThenFiberThroughPipes) {
  ASSERT_EQ(run("builtin --kind unit --pairing 3 --m 1 | '" DEGENKIT_CLI "' atlas | '" DEGENKIT_CLI "' fiber"), 0);
  auto g = json()["dual_graph"];
  EXPECT_TRUE(g["cycle"].get<bool>());
  EXPECT_EQ(g["nodes"].size(), 3U);
  EXPECT_EQ(g["edges"].size(), 3U);
  ASSERT_EQ(run("builtin --kind box --pairing 3 --m 1 | '" DEGENKIT_CLI "' atlas | '" DEGENKIT_CLI "' fiber"), 0);
  EXPECT_EQ(json()["dual_graph"]["nodes"].size(), 1U);
  EXPECT_TRUE(json()["dual_graph"]["cycle"].get<bool>());
}

TEST_F(Cli, MapCheckWithWitnessTable) {
  ASSERT_EQ(run("builtin --kind boxslash --pairing 2 -o boxslash2.json"), 0);
  ASSERT_EQ(run("builtin --kind box --pairing 1 -o box1.json"), 0);
  ASSERT_EQ(run("mapcheck --map \"-1 1\" boxslash2.json box1.json"), 0);
  auto j = json();
  EXPECT_TRUE(j["ok"].get<bool>());
  ASSERT_EQ(j["witness"].size(), 2U);
  for (const auto &w : j["witness"]) EXPECT_FALSE(w["target"].is_null());
  EXPECT_EQ(run("mapcheck --map \"1 1\" boxslash2.json box1.json"), 1);
  EXPECT_FALSE(json()["ok"].get<bool>());
}

TEST_F(Cli, ValidateFailureCarriesWitness) {
  std::ofstream(dir / "gap.json")
      << R"({"pairing":[[2]],"period":[[1]],"cells":[{"dim":1,"vertices":[["0"],["1"]]}],"name":"gap"})";
  EXPECT_EQ(run("validate gap.json"), 1);
  EXPECT_EQ(json()["cover"]["uncovered"]["lo"], Json::parse(R"(["1"])"));
  EXPECT_EQ(run("atlas gap.json"), 1);
  EXPECT_EQ(json()["error"], "invalid decomposition");
}

TEST_F(Cli, RefineTranslateOrbits) {
  ASSERT_EQ(run("builtin --kind unit --pairing 1 -o u.json"), 0);
  ASSERT_EQ(run("translate --by 1/2 u.json -o h.json"), 0);
  ASSERT_EQ(run("refine u.json h.json"), 0);
  EXPECT_EQ(json()["cells"].size(), 2U);
  ASSERT_EQ(run("orbits u.json"), 0);
  EXPECT_EQ(json()["orbits"].size(), 2U);
}

TEST_F(Cli, FunctorAndOverlap) {
  ASSERT_EQ(run("builtin --kind unit --pairing 1 -o u.json"), 0);
  ASSERT_EQ(run("functor --map \"1;0\" --target-pairing \"1 0;0 1\" u.json"), 0);
  EXPECT_EQ(json()["period_prime"], Json::parse("[[1,0],[0,1]]"));
  ASSERT_EQ(run("builtin --kind boxslash --pairing 1 -o s.json"), 0);
  EXPECT_EQ(run("functor --map \"1 1\" --target-pairing 1 s.json"), 1);
  EXPECT_EQ(json()["error"], "overlap");
}

TEST_F(Cli, FiberPlot) {
  ASSERT_EQ(run("builtin --kind boxslash --pairing 2 -o s.json"), 0);
  ASSERT_EQ(run("fiber s.json --plot s.svg"), 0);
  EXPECT_NE(read("s.svg").find("<svg"), std::string::npos);
}

TEST_F(Cli, UsageAndParseErrors) {
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("builtin --kind nonsense --pairing 1"), 2);
  EXPECT_EQ(run("builtin --kind box"), 2);
  EXPECT_EQ(run("builtin --kind box --pairing \"1 2\""), 2);
  EXPECT_EQ(run("validate missing.json"), 2);
  std::ofstream(dir / "bad.json") << "{not json";
  EXPECT_EQ(run("validate bad.json"), 2);
  EXPECT_NE(err.find("error"), std::string::npos);
  EXPECT_EQ(run("--help"), 0);
}

TEST_F(Cli, PairingWarningsGoToStderr) {
  ASSERT_EQ(run("builtin --kind box --pairing \"1 1;0 1\""), 0);
  EXPECT_NE(err.find("not symmetric"), std::string::npos);
  EXPECT_NO_THROW(json());
}

TEST_F(Cli, DeterministicOutput) {
  ASSERT_EQ(run("builtin --kind boxast --pairing 1"), 0);
  std::string first = out;
  ASSERT_EQ(run("builtin --kind boxast --pairing 1"), 0);
  EXPECT_EQ(first, out);
  ASSERT_EQ(run("selftest --seed 3 --cones 6 --pairs 6"), 0);
  std::string a = out;
  ASSERT_EQ(run("selftest --seed 3 --cones 6 --pairs 6"), 0);
  EXPECT_EQ(a, out);
  EXPECT_TRUE(json()["pass"].get<bool>());
}
