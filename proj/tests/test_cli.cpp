#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
};

Outcome run_cli(const std::string& args) {
  const std::string cmd = std::string(FRONTPROP_CLI) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string text;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) text.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, text};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("frontprop_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "run.cfg";
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, StrictValidatePrintsDerivedConstants) {
  const fs::path dir = scratch("validate");
  const fs::path cfg = write_config(dir, "mode=strict\na=1\nL=16\n");
  const Outcome o = run_cli("validate --config " + cfg.string() + " --out " + (dir / "out").string());
  EXPECT_EQ(o.code, 0) << o.out;
  EXPECT_NE(o.out.find("M=40"), std::string::npos) << o.out;
  EXPECT_NE(o.out.find("M'=9"), std::string::npos);
  EXPECT_NE(o.out.find("required L >= 2825761"), std::string::npos);
}

TEST(Cli, ConfigErrorsExitTwo) {
  const fs::path dir = scratch("errors");
  EXPECT_EQ(run_cli("speed --config " + write_config(dir, "alpha3=1\n").string()).code, 2);
  // Randomized experiments refuse to run without a seed.
  EXPECT_EQ(run_cli("speed --config " + write_config(dir, "replicas=2\n").string()).code, 2);
  EXPECT_EQ(run_cli("nonsense").code, 2);
}

TEST(Cli, SlowdownRunsWithoutSeed) {
  const fs::path dir = scratch("slowdown");
  const fs::path cfg = write_config(dir, "profile=constant:1\n");
  const Outcome o = run_cli("slowdown --config " + cfg.string() + " --out " + (dir / "out").string());
  EXPECT_EQ(o.code, 0) << o.out;
  EXPECT_TRUE(fs::exists(dir / "out" / "slowdown" / "report.json"));
  EXPECT_TRUE(fs::exists(dir / "out" / "slowdown" / "sidecar.json"));
}

TEST(Cli, RerunsAreByteIdentical) {
  const fs::path dir = scratch("rerun");
  const fs::path cfg = write_config(dir, "seed=5\nreplicas=2000\nn_grid=1,2,4\n");
  run_cli("appendixA --config " + cfg.string() + " --out " + (dir / "a").string());
  run_cli("appendixA --config " + cfg.string() + " --out " + (dir / "b").string());
  std::size_t compared = 0;
  for (const auto& e : fs::directory_iterator(dir / "a" / "appendixA")) {
    if (e.path().filename() == "sidecar.json") continue;
    EXPECT_EQ(slurp(e.path()), slurp(dir / "b" / "appendixA" / e.path().filename())) << e.path();
    ++compared;
  }
  EXPECT_GE(compared, 2u);
}
