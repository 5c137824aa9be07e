#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

namespace fs = std::filesystem;

namespace {

struct Result {
  int status = -1;
  std::string out;
};

// Runs the CLI with `args`, capturing stdout; stderr is discarded.
Result run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + UMOT_CLI_PATH + "\" " + args + " 2>/dev/null";
  Result r;
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  if (!pipe) return r;
  char buf[512];
  while (std::fgets(buf, sizeof buf, pipe.get())) r.out += buf;
  const int raw = pclose(pipe.release());
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

double metric(const std::string& out, const std::string& name) {
  const auto pos = out.find(name + " ");
  if (pos == std::string::npos) return -1.0;
  return std::stod(out.substr(pos + name.size() + 1));
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("umot_cli_" + std::string(::testing::UnitTest::GetInstance()
                                          ->current_test_info()
                                          ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string fixture(const std::string& name) {
    return (fs::path(UMOT_FIXTURE_DIR) / name).string();
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, SimulateTrackEvaluate) {
  ASSERT_EQ(run_cli("simulate --scenario " + fixture("two_walkers.json") +
                    " --seed 4 --out-dir " + dir_.string())
                .status,
            0);
  EXPECT_TRUE(fs::exists(path("gt.txt")));
  EXPECT_TRUE(fs::exists(path("candidates.jsonl")));
  EXPECT_TRUE(fs::exists(path("gmc.txt")));

  ASSERT_EQ(run_cli("track --candidates " + path("candidates.jsonl") + " --gmc " +
                    path("gmc.txt") + " --cmc affine --out " + path("pred.txt"))
                .status,
            0);
  const auto ev = run_cli("evaluate --gt " + path("gt.txt") + " --pred " +
                          path("pred.txt") + " --metrics hota,idf1,mota");
  ASSERT_EQ(ev.status, 0);
  EXPECT_GT(metric(ev.out, "HOTA"), 50.0);
  EXPECT_GT(metric(ev.out, "IDF1"), 70.0);
  EXPECT_GT(metric(ev.out, "MOTA"), 70.0);
  EXPECT_GE(metric(ev.out, "IDSW"), 0.0);
}

TEST_F(Cli, TrackIsDeterministic) {
  ASSERT_EQ(run_cli("simulate --scenario " + fixture("two_walkers.json") +
                    " --out-dir " + dir_.string())
                .status,
            0);
  for (const char* name : {"a.txt", "b.txt"}) {
    ASSERT_EQ(run_cli("track --candidates " + path("candidates.jsonl") +
                      " --disambiguator phase --out " + path(name))
                  .status,
              0);
  }
  std::ifstream a(path("a.txt")), b(path("b.txt"));
  const std::string ta((std::istreambuf_iterator<char>(a)), {});
  const std::string tb((std::istreambuf_iterator<char>(b)), {});
  EXPECT_FALSE(ta.empty());
  EXPECT_EQ(ta, tb);
}

TEST_F(Cli, ConfigFileAndFlags) {
  ASSERT_EQ(run_cli("simulate --scenario " + fixture("two_walkers.json") +
                    " --out-dir " + dir_.string())
                .status,
            0);
  {
    std::ofstream cfg(path("tracker.cfg"));
    cfg << "# test config\nmax_age = 10\ncascade.disambiguator = size\n";
  }
  EXPECT_EQ(run_cli("track --candidates " + path("candidates.jsonl") + " --config " +
                    path("tracker.cfg") + " --measured-r false --out " +
                    path("pred.txt"))
                .status,
            0);
  {
    std::ofstream cfg(path("broken.cfg"));
    cfg << "max_age = 10\nno.such.key = 1\n";
  }
  EXPECT_EQ(run_cli("track --candidates " + path("candidates.jsonl") + " --config " +
                    path("broken.cfg") + " --out " + path("pred2.txt"))
                .status,
            1);
}

TEST_F(Cli, SweepWritesCsvAndPlot) {
  const auto r = run_cli("sweep --seeds 3 --scenario " + fixture("two_walkers.json") +
                         " --cmc affine --out-csv " + path("sweep.csv") +
                         " --plot " + path("plot.svg"));
  ASSERT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("hota"), std::string::npos);
  std::ifstream csv(path("sweep.csv"));
  int lines = 0;
  for (std::string line; std::getline(csv, line);) ++lines;
  EXPECT_EQ(lines, 4);
  EXPECT_TRUE(fs::exists(path("plot.svg")));
}

TEST_F(Cli, BadInputsFail) {
  EXPECT_NE(run_cli("").status, 0);
  EXPECT_NE(run_cli("frobnicate").status, 0);
  EXPECT_NE(run_cli("track --out " + path("x.txt")).status, 0);
  EXPECT_NE(run_cli("track --candidates " + path("missing.jsonl") + " --out " +
                    path("x.txt"))
                .status,
            0);
  EXPECT_NE(run_cli("evaluate --gt " + fixture("bad.mot") + " --pred " +
                    fixture("bad.mot"))
                .status,
            0);
  EXPECT_NE(run_cli("track --candidates x --cmc sideways --out y").status, 0);
  EXPECT_NE(run_cli("sweep --seeds 0 --scenario " + fixture("two_walkers.json")).status,
            0);
}
