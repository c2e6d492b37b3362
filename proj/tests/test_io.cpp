#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "minpart/io.hpp"

using namespace minpart;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int run(const std::string& args) {
  const std::string cmd = std::string(MINPART_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("minpart_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(RunConfig, MergeAndValidate) {
  RunConfig c;
  c.merge(nlohmann::json{{"k", 3}, {"h", 0.05}, {"domain", "disk:2"}, {"pole_positions", {{0.1, 0.2}}}});
  EXPECT_EQ(c.k, 3u);
  EXPECT_EQ(c.domain, "disk:2");
  ASSERT_EQ(c.pole_positions.size(), 1u);
  EXPECT_NO_THROW(c.validate());
  EXPECT_THROW(c.merge(nlohmann::json{{"bogus", 1}}), Error);
  EXPECT_THROW(c.merge(nlohmann::json{{"k", "three"}}), Error);
  c.h = -1;
  EXPECT_THROW(c.validate(), Error);
}

TEST(RunConfig, JsonRoundTripIsStable) {
  RunConfig c;
  c.subcommand = "solve";
  c.merge(nlohmann::json{{"domain", R"({"shape":"disk","radius":1.0})"}});
  const auto a = c.to_json().dump();
  RunConfig d;
  d.subcommand = "solve";
  d.merge(nlohmann::json{{"domain", "disk"}});
  EXPECT_EQ(a, d.to_json().dump());
}

TEST(AtomicWrite, ReplacesTargetWithoutLeftovers) {
  const auto dir = scratch("atomic");
  const auto target = dir / "x.json";
  write_atomic(target, "one");
  write_atomic(target, "two");
  EXPECT_EQ(slurp(target), "two");
  EXPECT_FALSE(fs::exists(dir / "x.json.tmp"));
  fs::remove_all(dir);
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch("codes");
  EXPECT_EQ(run("constants --out " + dir.string()), 0);
  EXPECT_TRUE(fs::exists(dir / "constants.json"));
  EXPECT_EQ(run("solve --h -1 --out " + dir.string()), 2);
  EXPECT_EQ(run("solve --domain blob --out " + dir.string()), 2);
  EXPECT_EQ(run("nonsense"), 2);
  EXPECT_EQ(run("search --k 2 --poles 3 --out " + dir.string()), 2);
  EXPECT_EQ(run("certify --k 2 --eps 0.5 --out " + dir.string()), 2);
  fs::remove_all(dir);
}

TEST(Cli, ConfigFileWithFlagOverride) {
  const auto dir = scratch("config");
  fs::create_directories(dir);
  const auto cfg = dir / "run.json";
  std::ofstream(cfg) << R"({"domain": "disk", "h": 0.1, "eigenpairs": 2, "out": ")" << (dir / "a").string() << "\"}";
  ASSERT_EQ(run("solve --config " + cfg.string() + " --eigenpairs 3"), 0);
  const auto doc = nlohmann::json::parse(slurp(dir / "a" / "solve.json"));
  EXPECT_EQ(doc["config"]["eigenpairs"], 3);
  EXPECT_EQ(doc["config"]["h"], 0.1);
  EXPECT_EQ(doc["result"]["spectrum"]["eigenvalues"].size(), 3u);
  EXPECT_EQ(doc["version"], kVersion);
  std::ofstream(cfg) << "{not json";
  EXPECT_EQ(run("solve --config " + cfg.string()), 2);
  fs::remove_all(dir);
}

TEST(Cli, RerunIsByteIdentical) {
  const auto a = scratch("rerun_a"), b = scratch("rerun_b");
  const std::string args = " --domain unit_square --k 3 --poles 1 --h 0.0625 --budget 12 --seed 5";
  ASSERT_EQ(run("search" + args + " --out " + a.string()), 0);
  ASSERT_EQ(run("search" + args + " --threads 2 --out " + b.string()), 0);
  // The output directory is part of the embedded config, so compare results only.
  const auto ja = nlohmann::json::parse(slurp(a / "search.json"));
  const auto jb = nlohmann::json::parse(slurp(b / "search.json"));
  EXPECT_EQ(ja["result"].dump(), jb["result"].dump());
  fs::remove_all(a);
  fs::remove_all(b);
}
