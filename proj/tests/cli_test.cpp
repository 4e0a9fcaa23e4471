// Copyright 2026 The psne-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "psne/game.hpp"

namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = -1;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("psne_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  CliRun Psne(const std::string& args) const {
    const std::string out_file = Path("stdout.txt");
    const std::string cmd =
        std::string(PSNE_CLI_PATH) + " " + args + " > " + out_file + " 2>&1";
    const int status = std::system(cmd.c_str());
    CliRun r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
  }

  fs::path dir_;
};

TEST_F(Cli, Version) {
  const CliRun r = Psne("--version");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("rng=mt19937_64"), std::string::npos) << r.out;
}

TEST_F(Cli, ForcedTwoPlayerGameHasTwoEquilibria) {
  ASSERT_EQ(Psne("gen-game --n 2 --k 1 --seed 7 --out " + Path("g.json")).code, 0);
  const CliRun r = Psne("enumerate --game " + Path("g.json") + " --out " + Path("ne.json"));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("count=2"), std::string::npos) << r.out;
}

TEST_F(Cli, RecoverWithTrueGameIsEqual) {
  ASSERT_EQ(Psne("gen-game --n 8 --k 1 --seed 1 --out " + Path("g.json")).code, 0);
  const CliRun r = Psne("recover --game " + Path("g.json") + " --learned " + Path("g.json"));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("equal=true"), std::string::npos) << r.out;
}

TEST_F(Cli, SampleFitRecoverPipeline) {
  ASSERT_EQ(Psne("gen-game --n 2 --k 1 --seed 3 --out " + Path("g.json")).code, 0);
  ASSERT_EQ(Psne("sample --game " + Path("g.json") + " --q 0.9 --m 2000 --seed 4 --out " +
                 Path("d.txt")).code, 0);
  const CliRun fit = Psne("fit --data " + Path("d.txt") + " --lambda 0.01 --out " + Path("l.json"));
  ASSERT_EQ(fit.code, 0) << fit.out;
  EXPECT_EQ(psne::read_game_file(Path("l.json")).game.n(), 2);
  const CliRun rec = Psne("recover --game " + Path("g.json") + " --data " + Path("d.txt") +
                       " --lambda 0.01");
  EXPECT_EQ(rec.code, 0) << rec.out;
  EXPECT_NE(rec.out.find("equal=true"), std::string::npos) << rec.out;
}

TEST_F(Cli, DiagnosePrintsOneLinePerPlayer) {
  ASSERT_EQ(Psne("gen-game --n 4 --k 1 --seed 2 --out " + Path("g.json")).code, 0);
  const CliRun r = Psne("diagnose --game " + Path("g.json") + " --q 0.5");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 4) << r.out;
}

TEST_F(Cli, SweepWritesOutputs) {
  std::ofstream(Path("cfg.json"))
      << R"({"n": 5, "k": 1, "q": 0.2, "C_scale": 100, "c_grid": [0], "games": 3})";
  const CliRun r = Psne("sweep --quiet --config " + Path("cfg.json") + " --out-dir " + Path("out"));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(fs::exists(Path("out/results.csv")));
  EXPECT_TRUE(fs::exists(Path("out/results.json")));
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(Psne("gen-game --n 2 --k 1 --bogus 1").code, 1);
  EXPECT_EQ(Psne("no-such-command").code, 1);
  EXPECT_EQ(Psne("gen-game --n 10 --k 10 --seed 1 --out " + Path("g.json")).code, 1);
  EXPECT_EQ(Psne("recover --game " + Path("missing.json") + " --learned " + Path("missing.json"))
                .code,
            1);
  ASSERT_EQ(Psne("gen-game --n 26 --k 1 --seed 1 --out " + Path("big.json")).code, 0);
  EXPECT_EQ(Psne("enumerate --game " + Path("big.json")).code, 2);
  std::ofstream(Path("cfg.json")) << R"({"n": 5, "unknown": 1})";
  EXPECT_EQ(Psne("sweep --config " + Path("cfg.json")).code, 1);
}

}  // namespace
