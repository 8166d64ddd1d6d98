// Runs the xgr binary and checks exit codes and output.
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace {

namespace fs = std::filesystem;
const fs::path kFixtures = XGR_FIXTURES_DIR;

struct Result {
  int code;
  std::string out;
};

Result RunXgr(const std::string& args) {
  const std::string cmd = std::string(XGR_BINARY) + " " + args + " 2>/dev/null";
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  Result r{-1, {}};
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe.get())) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe.release());
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string Fixture(const char* name) { return (kFixtures / name).string(); }

TEST(CliTest, PlanRecognizeExplain) {
  auto plan = RunXgr("plan " + Fixture("grid/fig1-grid") + " --goal g2 --format json");
  ASSERT_EQ(plan.code, 0) << plan.out;
  EXPECT_EQ(nlohmann::json::parse(plan.out)["cost"], "9");

  auto rec = RunXgr("recognize " + Fixture("grid/fig1-grid") + " --format json");
  ASSERT_EQ(rec.code, 0);
  EXPECT_EQ(nlohmann::json::parse(rec.out)["steps"].size(), 9u);

  auto why_not = RunXgr("explain " + Fixture("grid/fig1-grid") + " --question why-not --goal g1");
  ASSERT_EQ(why_not.code, 0);
  EXPECT_NE(why_not.out.find("moved up from cell 23 to cell 14"), std::string::npos);

  auto all = RunXgr("explain " + Fixture("sokoban/game3"));
  EXPECT_EQ(all.code, 0);
}

TEST(CliTest, RenderAndCompile) {
  auto render = RunXgr("render " + Fixture("grid/fig1-grid") + " --explain");
  ASSERT_EQ(render.code, 0);
  EXPECT_NE(render.out.find('@'), std::string::npos);

  const fs::path out = fs::temp_directory_path() / ("xgr-cli-" + std::to_string(::getpid()));
  fs::remove_all(out);
  const fs::path map = out.string() + ".map";
  std::ofstream(map) << "type grid\nmap\n@..\n.#1\n";
  auto compile = RunXgr("compile " + map.string() + " " + out.string() +
                     " --obs move_right_1_2 move_right_2_3");
  EXPECT_EQ(compile.code, 0) << compile.out;
  EXPECT_TRUE(fs::exists(out / "obs.dat"));
  EXPECT_EQ(RunXgr("recognize " + out.string()).code, 0);
  fs::remove_all(out);
  fs::remove(map);
}

TEST(CliTest, ExitCodes) {
  EXPECT_EQ(RunXgr("").code, 1);
  EXPECT_EQ(RunXgr("frobnicate").code, 1);
  EXPECT_EQ(RunXgr("explain " + Fixture("grid/fig1-grid") + " --log-base 7").code, 1);
  EXPECT_EQ(RunXgr("explain " + Fixture("grid/fig1-grid") + " --question why --goal g1").code, 1);
  EXPECT_EQ(RunXgr("recognize " + Fixture("grid/fig1-grid") + " --priors 0.5,0.5").code, 2);
  EXPECT_EQ(RunXgr("recognize /nonexistent/bundle").code, 2);
  EXPECT_EQ(RunXgr("recognize " + Fixture("sokoban/game3") + " --budget 2 --heuristic blind").code, 3);
  EXPECT_EQ(RunXgr("eval " + Fixture("grid/open")).code, 4);
}

TEST(CliTest, EvalAndBenchCsv) {
  auto eval = RunXgr("eval " + Fixture("grid") + " --format csv");
  ASSERT_EQ(eval.code, 0);
  EXPECT_NE(eval.out.find("grid"), std::string::npos);
  auto bench = RunXgr("bench " + Fixture("grid/fig1-grid") + " --reps 1 --format csv");
  ASSERT_EQ(bench.code, 0);
  EXPECT_NE(bench.out.find("# repetitions"), std::string::npos);
}

}  // namespace
