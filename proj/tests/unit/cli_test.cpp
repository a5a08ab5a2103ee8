#include <gtest/gtest.h>

#include <filesystem>
#include <set>

#include "cli.hpp"
#include "report_io.hpp"

namespace kofn::cli {
namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::current_path() / "cli-test-out" / name;
  fs::remove_all(p);
  return p;
}

json manifest_at(const fs::path& dir) { return json::parse(read_text_file(dir / "manifest.json")); }

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run(std::vector<std::string>{}), kExitUsage);
  EXPECT_EQ(run({"no-such-command"}), kExitUsage);
  EXPECT_EQ(run({"one-arm", "--samples", "many"}), kExitUsage);
  EXPECT_EQ(run({"one-arm", "--M", "0", "--out", fresh_dir("bad-m").string()}), kExitUsage);
  EXPECT_EQ(run({"logn-demo", "--n", "7", "--out", fresh_dir("odd-n").string()}), kExitUsage);
  EXPECT_EQ(run({"check-coupling", "--n", "12", "--out", fresh_dir("big-n").string()}), kExitUsage);
  EXPECT_EQ(run({"verify-osss", "--constant", "x", "--out", fresh_dir("bad-c").string()}), kExitUsage);
  EXPECT_EQ(run({"--workers", "0", "one-arm"}), kExitUsage);
  EXPECT_EQ(run({"--help"}), kExitPass);
}

TEST(Cli, CouplingExampleExitsZeroWithExactPasses) {
  const auto out = fresh_dir("coupling");
  ASSERT_EQ(run({"check-coupling", "--n", "4", "--k", "2", "--events", "20", "--trees", "3", "--seed",
                 "7", "--out", out.string()}),
            kExitPass);
  const auto m = manifest_at(out);
  EXPECT_TRUE(m.at("passed").get<bool>());
  EXPECT_TRUE(m.at("failed_assertions").empty());
  std::set<std::string> names;
  for (const auto& a : m.at("assertions")) {
    names.insert(a.at("name").get<std::string>());
    EXPECT_TRUE(a.at("passed").get<bool>());
  }
  EXPECT_TRUE(names.count("z_marginal_exact"));
  EXPECT_TRUE(names.count("decomposition_identity"));
  EXPECT_TRUE(names.count("claim_distributional_equality"));
}

TEST(Cli, VerifyOsssExampleExitsZero) {
  const auto out = fresh_dir("osss");
  EXPECT_EQ(run({"verify-osss", "--n", "10", "--k", "5", "--suite-size", "200", "--constant", "20",
                 "--out", out.string()}),
            kExitPass);
  EXPECT_TRUE(fs::exists(out / "osss.csv"));
}

TEST(Cli, FailingAssertionExitsOne) {
  // C = 1/100 is below the ratio of any dictator-like event in the suite.
  const auto out = fresh_dir("osss-zero");
  EXPECT_EQ(run({"verify-osss", "--n", "6", "--suite-size", "10", "--constant", "1/100", "--out", out.string()}),
            kExitAssertion);
  const auto m = manifest_at(out);
  EXPECT_FALSE(m.at("passed").get<bool>());
  EXPECT_EQ(m.at("failed_assertions").at(0), "osss_bound_holds");
  EXPECT_EQ(m.at("exit_code"), kExitAssertion);
}

TEST(Cli, PivotalScalingIsByteIdenticalAcrossRuns) {
  const auto a = fresh_dir("pivotal-a");
  const auto b = fresh_dir("pivotal-b");
  const std::vector<std::string> base{"pivotal-scaling", "--R", "8,16", "--samples", "1000", "--seed", "1",
                                      "--revealment-R", "8", "--revealment-samples", "200",
                                      "--osss-R", "2,8", "--osss-samples", "200"};
  auto with_out = [&](const fs::path& p) {
    auto args = base;
    args.insert(args.end(), {"--out", p.string()});
    return args;
  };
  ASSERT_EQ(run(with_out(a)), kExitPass);
  ASSERT_EQ(run(with_out(b)), kExitPass);
  for (const auto& f : manifest_at(a).at("data_files")) {
    const std::string name = f.at("path");
    EXPECT_EQ(read_text_file(a / name), read_text_file(b / name)) << name;
  }
  EXPECT_EQ(read_text_file(a / "pivotal_scaling.csv").substr(0, 35), "R,k,estimate,stderr,samples,seed\n8,");
}

TEST(Cli, WorkerCountIsPartOfTheDeterminismKey) {
  const auto a = fresh_dir("workers-a");
  const auto b = fresh_dir("workers-b");
  ASSERT_EQ(run({"--workers", "3", "one-arm", "--M", "2", "--samples", "3000", "--out", a.string()}), kExitPass);
  ASSERT_EQ(run({"one-arm", "--M", "2", "--samples", "3000", "--workers", "3", "--out", b.string()}), kExitPass);
  EXPECT_EQ(read_text_file(a / "one_arm.csv"), read_text_file(b / "one_arm.csv"));
}

TEST(Cli, ManifestReplayReproducesOutputs) {
  const auto out = fresh_dir("russo");
  ASSERT_EQ(run({"check-russo", "--events", "3", "--R", "2", "--out", out.string()}), kExitPass);
  const auto m = manifest_at(out);
  EXPECT_EQ(m.at("subcommand"), "check-russo");
  EXPECT_FALSE(m.at("version").get<std::string>().empty());
  EXPECT_EQ(m.at("data_files").size(), 1u);
  for (const auto& f : m.at("data_files")) EXPECT_TRUE(fs::exists(out / f.at("path").get<std::string>()));
  const auto replay = fresh_dir("russo-replay");
  EXPECT_EQ(run({"replay-from-manifest", "--manifest", (out / "manifest.json").string(), "--out",
                 replay.string()}),
            kExitPass);
  EXPECT_EQ(read_text_file(out / "russo.csv"), read_text_file(replay / "russo.csv"));
}

TEST(Cli, ConfigFileWithFlagsWinning) {
  const auto dir = fresh_dir("config");
  fs::create_directories(dir);
  write_text_file(dir / "run.toml", "seed = 5\n[one-arm]\nM = [2, 3]\nsamples = 500\n");
  const auto out = dir / "out";
  ASSERT_EQ(run({"--config", (dir / "run.toml").string(), "one-arm", "--samples", "700", "--out",
                 out.string()}),
            kExitPass);
  const auto m = manifest_at(out);
  EXPECT_EQ(m.at("config").at("seed"), 5);
  EXPECT_EQ(m.at("config").at("options").at("M"), "2,3");
  EXPECT_EQ(m.at("config").at("options").at("samples"), "700");
}

}  // namespace
}  // namespace kofn::cli
